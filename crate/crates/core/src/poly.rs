//! Dense univariate polynomials with integer coefficients and their
//! factorization over the rationals.
//!
//! Factorization follows the classical route: split off the content, reduce
//! to the squarefree part with a derivative gcd, factor modulo a small good
//! prime (Cantor–Zassenhaus), Hensel-lift the modular factors past a
//! Mignotte bound and recombine them by subset search. This is meant for the
//! small degrees that occur in fibers of desk-scale maps, not for
//! adversarial inputs.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Polynomial in one variable, coefficients stored from the constant term up.
/// The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ZPoly {
    coeffs: Vec<BigInt>,
}

impl ZPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        ZPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn x() -> Self {
        Self::from_i64s(&[0, 1])
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: BigInt, degree: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Nonnegative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading().is_negative() {
            c = -c;
        }
        Self::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    /// `y^d * p(x/y)` for a declared degree `d >= deg p`.
    pub fn eval_homogeneous(&self, x: &BigInt, y: &BigInt, d: usize) -> BigInt {
        debug_assert!(self.deg() <= d);
        let mut acc = BigInt::zero();
        let mut ypow = BigInt::one();
        let mut terms = Vec::with_capacity(d + 1);
        for _ in 0..=d {
            terms.push(ypow.clone());
            ypow *= y;
        }
        let mut xpow = BigInt::one();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += c * &xpow * &terms[d - i];
            }
            xpow *= x;
        }
        acc
    }

    /// Pseudo-remainder of `self` by `d`.
    pub fn pseudo_rem(&self, d: &ZPoly) -> ZPoly {
        assert!(!d.is_zero(), "pseudo-division by zero polynomial");
        let dd = d.deg();
        let lc = d.leading();
        let mut r = self.clone();
        while !r.is_zero() && r.deg() >= dd {
            let shift = r.deg() - dd;
            let lr = r.leading();
            r = &r.scale(&lc) - &shift_left(&d.scale(&lr), shift);
        }
        r
    }

    /// Quotient when `d` divides `self` exactly over the integers.
    pub fn div_exact(&self, d: &ZPoly) -> Option<ZPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.deg() < d.deg() {
            return None;
        }
        let dd = d.deg();
        let lc = d.leading();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); self.deg() - dd + 1];
        for k in (0..q.len()).rev() {
            let top = &r[k + dd];
            if top.is_zero() {
                continue;
            }
            let (qk, rem) = top.div_rem(&lc);
            if !rem.is_zero() {
                return None;
            }
            for (i, c) in d.coeffs.iter().enumerate() {
                r[k + i] -= &qk * c;
            }
            q[k] = qk;
        }
        if r.iter().all(Zero::is_zero) {
            Some(ZPoly::new(q))
        } else {
            None
        }
    }

    pub fn pow(&self, e: u32) -> ZPoly {
        let mut acc = ZPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Greatest common divisor over the integers, positive leading
    /// coefficient. `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &ZPoly) -> ZPoly {
        if self.is_zero() {
            return other.primitive_part().scale(&other.content());
        }
        if other.is_zero() {
            return self.primitive_part().scale(&self.content());
        }
        let c = self.content().gcd(&other.content());
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part().scale(&c)
    }

    /// Factorization over the rationals into primitive irreducible integer
    /// polynomials.
    pub fn factor(&self) -> Factorization {
        factor_over_q(self)
    }

    /// Resultant via the Sylvester matrix.
    pub fn resultant(&self, other: &ZPoly) -> BigInt {
        if self.is_zero() || other.is_zero() {
            return BigInt::zero();
        }
        let a: Vec<BigInt> = self.coeffs.iter().rev().cloned().collect();
        let b: Vec<BigInt> = other.coeffs.iter().rev().cloned().collect();
        sylvester_resultant(&a, &b)
    }

    /// `(-1)^(n(n-1)/2) Res(p, p') / lc(p)`.
    pub fn discriminant(&self) -> BigInt {
        let n = self.deg();
        if n == 0 {
            return BigInt::zero();
        }
        let r = self.resultant(&self.derivative());
        let d = r / self.leading();
        if (n * (n - 1) / 2) % 2 == 1 {
            -d
        } else {
            d
        }
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{abs}*{mono}"));
            }
        }
        out
    }
}

fn shift_left(p: &ZPoly, k: usize) -> ZPoly {
    if p.is_zero() {
        return ZPoly::zero();
    }
    let mut coeffs = vec![BigInt::zero(); k];
    coeffs.extend(p.coeffs.iter().cloned());
    ZPoly::new(coeffs)
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

impl fmt::Debug for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZPoly({self})")
    }
}

impl<'a> Add<&'a ZPoly> for &'a ZPoly {
    type Output = ZPoly;
    fn add(self, rhs: &ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ZPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a ZPoly> for &'a ZPoly {
    type Output = ZPoly;
    fn sub(self, rhs: &ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ZPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a ZPoly> for &'a ZPoly {
    type Output = ZPoly;
    fn mul(self, rhs: &ZPoly) -> ZPoly {
        if self.is_zero() || rhs.is_zero() {
            return ZPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ZPoly::new(out)
    }
}

impl Neg for &ZPoly {
    type Output = ZPoly;
    fn neg(self) -> ZPoly {
        ZPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Resultant of two polynomials given by coefficient lists from the top
/// degree down. The declared degrees are the list lengths minus one, so
/// vanishing leading coefficients give the homogeneous resultant of binary
/// forms.
pub fn sylvester_resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for row in 0..n {
        for (j, c) in a.iter().enumerate() {
            mat[row][row + j] = c.clone();
        }
    }
    for row in 0..m {
        for (j, c) in b.iter().enumerate() {
            mat[n + row][row + j] = c.clone();
        }
    }
    det_bareiss(mat)
}

/// Fraction-free determinant.
pub fn det_bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Factorization into an integer unit part and primitive irreducible
/// factors with positive leading coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// Signed content: the original equals `unit * prod(f^e)`.
    pub unit: BigInt,
    /// Irreducible factors sorted by degree, then coefficients.
    pub factors: Vec<(ZPoly, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> ZPoly {
        self.factors
            .iter()
            .fold(ZPoly::constant(self.unit.clone()), |acc, (f, e)| &acc * &f.pow(*e))
    }
}

fn poly_order_key(p: &ZPoly) -> (usize, Vec<BigInt>) {
    (p.deg(), p.coeffs.iter().rev().cloned().collect())
}

fn factor_over_q(f: &ZPoly) -> Factorization {
    if f.is_zero() {
        return Factorization { unit: BigInt::zero(), factors: Vec::new() };
    }
    let mut unit = f.content();
    if f.leading().is_negative() {
        unit = -unit;
    }
    let pp = f.primitive_part();
    if pp.deg() == 0 {
        return Factorization { unit, factors: Vec::new() };
    }
    let g = pp.gcd(&pp.derivative());
    let sqf = pp.div_exact(&g).expect("gcd divides").primitive_part();
    let mut irreducibles = factor_squarefree(&sqf);
    irreducibles.sort_by_key(poly_order_key);
    let mut factors = Vec::with_capacity(irreducibles.len());
    let mut rest = pp;
    for q in irreducibles {
        let mut e = 0;
        while let Some(next) = rest.div_exact(&q) {
            rest = next;
            e += 1;
        }
        debug_assert!(e >= 1);
        factors.push((q, e));
    }
    debug_assert!(rest.is_constant());
    Factorization { unit, factors }
}

/// Irreducible factors of a squarefree primitive polynomial of positive
/// degree.
fn factor_squarefree(f: &ZPoly) -> Vec<ZPoly> {
    let n = f.deg();
    if n <= 1 {
        return vec![f.clone()];
    }
    if f.coeff(0).is_zero() {
        let rest = f.div_exact(&ZPoly::x()).expect("x divides");
        let mut out = vec![ZPoly::x()];
        out.extend(factor_squarefree(&rest.primitive_part()));
        return out;
    }
    let lc = f.leading();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);

    // Among the first few good primes keep the one with the fewest modular
    // factors; recombination cost is exponential in that number.
    let mut best: Option<(u64, Vec<Vec<u64>>)> = None;
    let mut tried = 0;
    let mut p = 2u64;
    while tried < 5 {
        p = next_prime(p);
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = fp::from_z(f, p);
        let dfp = fp::derivative(&fp, p);
        if fp::degree(&fp::gcd(&fp, &dfp, p)) != Some(0) {
            continue;
        }
        tried += 1;
        let monic = fp::monic(&fp, p);
        let facs = fp::factor_squarefree(&monic, p, &mut rng);
        if facs.len() == 1 {
            return vec![f.clone()];
        }
        if best.as_ref().map_or(true, |(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
    }
    let (p, modular) = best.expect("some good prime exists");

    // Mignotte-style bound on coefficients of lc * (monic factor).
    let norm_sq: BigInt = f.coeffs.iter().map(|c| c * c).sum();
    let norm = norm_sq.sqrt() + BigInt::one();
    let bound = BigInt::from(2) * lc.abs() * (BigInt::one() << n) * norm;
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    let mut k = 1u32;
    while modulus <= bound {
        modulus *= &pb;
        k += 1;
    }

    let lifted = hensel::lift_all(f, &modular, p, k, &modulus);
    recombine(f, lifted, &modulus)
}

fn recombine(f: &ZPoly, mut locals: Vec<ZPoly>, modulus: &BigInt) -> Vec<ZPoly> {
    let mut result = Vec::new();
    let mut f = f.clone();
    let mut size = 1;
    while 2 * size <= locals.len() {
        let mut found = None;
        for subset in Combinations::new(locals.len(), size) {
            let lc = f.leading();
            let mut g = ZPoly::constant(lc.clone());
            for &i in &subset {
                g = sym_mod(&(&g * &locals[i]), modulus);
            }
            let candidate = g.primitive_part();
            if let Some(q) = f.div_exact(&candidate) {
                found = Some((subset, candidate, q));
                break;
            }
        }
        match found {
            Some((subset, candidate, q)) => {
                result.push(candidate);
                f = q;
                for &i in subset.iter().rev() {
                    locals.remove(i);
                }
            }
            None => size += 1,
        }
    }
    if f.deg() >= 1 {
        result.push(f.primitive_part());
    }
    result
}

fn sym_mod(p: &ZPoly, m: &BigInt) -> ZPoly {
    let half: BigInt = m >> 1;
    ZPoly::new(
        p.coeffs
            .iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn next_prime(mut p: u64) -> u64 {
    loop {
        p += 1;
        if crate::arith::is_prime_u64(p) {
            return p;
        }
    }
}

struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        let current = (k <= n).then(|| (0..k).collect());
        Combinations { n, current }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// Polynomials over the prime field, coefficients from the constant term up,
/// no trailing zeros. The prime must stay below 2^32.
mod fp {
    use super::*;

    pub type Poly = Vec<u64>;

    pub fn trim(mut p: Poly) -> Poly {
        while p.last() == Some(&0) {
            p.pop();
        }
        p
    }

    pub fn degree(p: &Poly) -> Option<usize> {
        p.len().checked_sub(1)
    }

    pub fn from_z(f: &ZPoly, p: u64) -> Poly {
        let pb = BigInt::from(p);
        trim(
            f.coeffs()
                .iter()
                .map(|c| c.mod_floor(&pb).to_u64().expect("reduced"))
                .collect(),
        )
    }

    pub fn to_z(f: &Poly) -> ZPoly {
        ZPoly::new(f.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn inv(a: u64, p: u64) -> u64 {
        pow(a, p - 2, p)
    }

    pub fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
        let mut r = 1;
        a %= p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * a % p;
            }
            a = a * a % p;
            e >>= 1;
        }
        r
    }

    pub fn add(a: &Poly, b: &Poly, p: u64) -> Poly {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
                .collect(),
        )
    }

    pub fn sub(a: &Poly, b: &Poly, p: u64) -> Poly {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
                .collect(),
        )
    }

    pub fn mul(a: &Poly, b: &Poly, p: u64) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(out)
    }

    pub fn divrem(a: &Poly, b: &Poly, p: u64) -> (Poly, Poly) {
        let db = degree(b).expect("division by zero polynomial");
        let inv_lc = inv(b[db], p);
        let mut r = a.clone();
        if r.len() <= db {
            return (Vec::new(), r);
        }
        let mut q = vec![0u64; r.len() - db];
        for k in (0..q.len()).rev() {
            let c = r[k + db] * inv_lc % p;
            q[k] = c;
            if c != 0 {
                for (i, &bc) in b.iter().enumerate() {
                    r[k + i] = (r[k + i] + p - c * bc % p) % p;
                }
            }
        }
        (trim(q), trim(r))
    }

    pub fn rem(a: &Poly, b: &Poly, p: u64) -> Poly {
        divrem(a, b, p).1
    }

    pub fn monic(a: &Poly, p: u64) -> Poly {
        match a.last() {
            None => Vec::new(),
            Some(&lc) => {
                let i = inv(lc, p);
                a.iter().map(|&c| c * i % p).collect()
            }
        }
    }

    pub fn derivative(a: &Poly, p: u64) -> Poly {
        trim(
            a.iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| (i as u64 % p) * c % p)
                .collect(),
        )
    }

    /// Monic gcd.
    pub fn gcd(a: &Poly, b: &Poly, p: u64) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        monic(&a, p)
    }

    /// `(s, t)` with `s*a + t*b = 1` for coprime `a`, `b`.
    pub fn bezout(a: &Poly, b: &Poly, p: u64) -> (Poly, Poly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (vec![1u64], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1, p);
            let s2 = sub(&s0, &mul(&q, &s1, p), p);
            let t2 = sub(&t0, &mul(&q, &t1, p), p);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        assert_eq!(degree(&r0), Some(0), "bezout on non-coprime polynomials");
        let i = inv(r0[0], p);
        let scale = |v: &Poly| trim(v.iter().map(|&c| c * i % p).collect());
        (scale(&s0), scale(&t0))
    }

    pub fn powmod(base: &Poly, exp: &BigUint, m: &Poly, p: u64) -> Poly {
        let mut result = vec![1u64];
        let mut b = rem(base, m, p);
        for i in 0..exp.bits() {
            if exp.bit(i) {
                result = rem(&mul(&result, &b, p), m, p);
            }
            b = rem(&mul(&b, &b, p), m, p);
        }
        result
    }

    /// Irreducible monic factors of a monic squarefree polynomial, `p` odd.
    pub fn factor_squarefree(f: &Poly, p: u64, rng: &mut ChaCha8Rng) -> Vec<Poly> {
        let mut out = Vec::new();
        for (g, d) in distinct_degree(f, p) {
            equal_degree(&g, d, p, rng, &mut out);
        }
        out
    }

    fn distinct_degree(f: &Poly, p: u64) -> Vec<(Poly, usize)> {
        let mut res = Vec::new();
        let mut f = f.clone();
        let x: Poly = vec![0, 1];
        let mut h = rem(&x, &f, p);
        let mut i = 0;
        let pexp = BigUint::from(p);
        while degree(&f).unwrap_or(0) >= 2 * (i + 1) {
            i += 1;
            h = powmod(&h, &pexp, &f, p);
            let g = gcd(&f, &sub(&h, &x, p), p);
            if degree(&g).unwrap_or(0) > 0 {
                f = divrem(&f, &g, p).0;
                h = rem(&h, &f, p);
                res.push((g, i));
            }
        }
        if degree(&f).unwrap_or(0) > 0 {
            let d = degree(&f).unwrap();
            res.push((f, d));
        }
        res
    }

    fn equal_degree(f: &Poly, d: usize, p: u64, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) {
        let n = degree(f).unwrap();
        if n == d {
            out.push(f.clone());
            return;
        }
        let exp = (BigUint::from(p).pow(d as u32) - BigUint::one()) >> 1;
        loop {
            let a: Poly = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
            if degree(&a).unwrap_or(0) == 0 {
                continue;
            }
            let b = sub(&powmod(&a, &exp, f, p), &vec![1], p);
            let g = gcd(f, &b, p);
            let dg = degree(&g).unwrap_or(0);
            if dg > 0 && dg < n {
                let h = monic(&divrem(f, &g, p).0, p);
                equal_degree(&g, d, p, rng, out);
                equal_degree(&h, d, p, rng, out);
                return;
            }
        }
    }
}

mod hensel {
    use super::*;

    /// Lifts the monic modular factorization of `lc(f)^-1 f` to the given
    /// modulus `p^k`. Returns monic integer polynomials with coefficients in
    /// `[0, p^k)`.
    pub fn lift_all(f: &ZPoly, modular: &[fp::Poly], p: u64, k: u32, modulus: &BigInt) -> Vec<ZPoly> {
        let lc = f.leading();
        let inv = lc
            .extended_gcd(modulus)
            .x
            .mod_floor(modulus);
        let target = ZPoly::new(f.coeffs().iter().map(|c| (c * &inv).mod_floor(modulus)).collect());
        let mut out = Vec::with_capacity(modular.len());
        let mut current = target;
        for (i, g0) in modular.iter().enumerate() {
            if i + 1 == modular.len() {
                out.push(current);
                break;
            }
            let h0 = modular[i + 1..]
                .iter()
                .fold(vec![1u64], |acc, u| fp::mul(&acc, u, p));
            let (g, h) = lift_pair(&current, g0, &h0, p, k, modulus);
            out.push(g);
            current = h;
        }
        out
    }

    /// Linear Hensel lifting of `f = g0 * h0 (mod p)` with `f`, `g0`, `h0`
    /// monic.
    fn lift_pair(f: &ZPoly, g0: &fp::Poly, h0: &fp::Poly, p: u64, k: u32, modulus: &BigInt) -> (ZPoly, ZPoly) {
        let (s, t) = fp::bezout(g0, h0, p);
        let mut g = fp::to_z(g0);
        let mut h = fp::to_z(h0);
        let pb = BigInt::from(p);
        let mut pj = pb.clone();
        for _ in 1..k {
            let diff = f - &(&g * &h);
            let e = ZPoly::new(diff.coeffs().iter().map(|c| c.mod_floor(modulus) / &pj).collect());
            let ep = fp::from_z(&e, p);
            let (q, r) = fp::divrem(&fp::mul(&t, &ep, p), g0, p);
            let dh = fp::add(&fp::mul(&s, &ep, p), &fp::mul(&q, h0, p), p);
            g = &g + &fp::to_z(&r).scale(&pj);
            h = &h + &fp::to_z(&dh).scale(&pj);
            pj *= &pb;
        }
        let reduce = |v: &ZPoly| ZPoly::new(v.coeffs().iter().map(|c| c.mod_floor(modulus)).collect());
        (reduce(&g), reduce(&h))
    }
}
