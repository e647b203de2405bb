//! Châtelet surfaces `y^2 - a z^2 = P(x)` with `deg P` in `{3, 4}`: Hilbert
//! symbols, local solvability place by place, and a search for fibers
//! carrying rational points.
//!
//! `x` ranges over the projective line. A point `x = u/w` has fiber
//! `y^2 - a z^2 = P4(u, w)`, where `P4` is `P` homogenized to degree four;
//! this differs from `P(u/w)` by the square `w^4`. For a cubic `P` the fiber
//! at infinity is therefore `y^2 - a z^2 = 0`, which always has a point.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith;
use crate::poly::ZPoly;
use crate::proj_line::{self, ProjPoint};
use crate::{Error, Result};

/// A place of the rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Real,
    Finite(BigInt),
}

impl Place {
    pub fn prime(p: i64) -> Place {
        Place::Finite(BigInt::from(p))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real => f.write_str("real"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "real" | "R" | "inf" => Ok(Place::Real),
            t => {
                let p: BigInt = t.parse().map_err(|_| Error::Parse(format!("bad place {t:?}")))?;
                if !arith::is_prime(&p) {
                    return Err(Error::NotPrime(p.to_string()));
                }
                Ok(Place::Finite(p))
            }
        }
    }
}

/// `n/d` up to squares, as the integer `n*d`.
fn integral_class(r: &BigRational) -> BigInt {
    r.numer() * r.denom()
}

fn legendre(u: &BigInt, p: &BigInt) -> i8 {
    let e = (p - 1u32) / 2u32;
    let r = u.mod_floor(p).modpow(&e, p);
    if r.is_one() {
        1
    } else {
        -1
    }
}

fn split(n: &BigInt, p: &BigInt) -> (u32, BigInt) {
    arith::split_valuation(n, p)
}

fn hilbert_integral(a: &BigInt, b: &BigInt, place: &Place) -> i8 {
    match place {
        Place::Real => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Finite(p) if p == &BigInt::from(2) => {
            let (alpha, u) = split(a, p);
            let (beta, v) = split(b, p);
            let m8 = |x: &BigInt| x.mod_floor(&BigInt::from(8)).to_u32().expect("small");
            let eps = |x: u32| (x - 1) / 2 % 2;
            let omega = |x: u32| (x * x - 1) / 8 % 2;
            let (u8_, v8) = (m8(&u), m8(&v));
            let e = eps(u8_) * eps(v8) + alpha * omega(v8) + beta * omega(u8_);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Place::Finite(p) => {
            let (alpha, u) = split(a, p);
            let (beta, v) = split(b, p);
            let eps = ((p - 1u32) / 2u32).is_odd();
            let mut s: i8 = if eps && alpha % 2 == 1 && beta % 2 == 1 { -1 } else { 1 };
            if beta % 2 == 1 {
                s *= legendre(&u, p);
            }
            if alpha % 2 == 1 {
                s *= legendre(&v, p);
            }
            s
        }
    }
}

/// The local Hilbert symbol `(a, b)_v`.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, place: &Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroArgument);
    }
    if let Place::Finite(p) = place {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p.to_string()));
        }
    }
    Ok(hilbert_integral(&integral_class(a), &integral_class(b), place))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChateletSurface {
    a: BigRational,
    /// Squarefree integer in the square class of `a`.
    a_class: BigInt,
    p: ZPoly,
}

impl ChateletSurface {
    pub fn new(a: BigRational, p: ZPoly) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::InvalidSurface("a = 0".into()));
        }
        if !matches!(p.degree(), Some(3) | Some(4)) {
            return Err(Error::InvalidSurface(format!("P = {p} must have degree 3 or 4")));
        }
        if p.discriminant().is_zero() {
            return Err(Error::InvalidSurface(format!("P = {p} is not separable")));
        }
        let n = integral_class(&a);
        let fac = arith::factorize(&n)?;
        let mut a_class = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
        for (q, e) in fac.factors() {
            if e % 2 == 1 {
                a_class *= q;
            }
        }
        Ok(ChateletSurface { a, a_class, p })
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn poly(&self) -> &ZPoly {
        &self.p
    }

    /// Whether `a` is a square, making every fiber with `P != 0` split.
    pub fn is_split(&self) -> bool {
        self.a_class.is_one()
    }

    /// `P4(u, w)` at `x = u/w`.
    pub fn fiber_value(&self, x: &ProjPoint) -> BigInt {
        self.p.eval_homogeneous(x.x(), x.y(), 4)
    }

    /// Primes outside which the surface has good reduction.
    pub fn bad_primes(&self) -> Vec<BigInt> {
        let n = BigInt::from(2) * self.a.numer() * self.a.denom() * self.p.discriminant() * self.p.leading();
        arith::factorize(&n).expect("nonzero").primes().cloned().collect()
    }

    fn symbol(&self, v: &BigInt, place: &Place) -> i8 {
        hilbert_integral(&self.a_class, v, place)
    }
}

/// Whether the fiber over `x` has a point over the completion at `place`.
pub fn fiber_solvable(s: &ChateletSurface, x: &ProjPoint, place: &Place) -> bool {
    let v = s.fiber_value(x);
    v.is_zero() || s.symbol(&v, place) == 1
}

/// Whether the fiber over `x` has a rational point, by the Hasse principle
/// for conics.
pub fn fiber_has_rational_point(s: &ChateletSurface, x: &ProjPoint) -> bool {
    let v = s.fiber_value(x);
    if v.is_zero() {
        return true;
    }
    if s.symbol(&v, &Place::Real) == -1 {
        return false;
    }
    let n = BigInt::from(2) * &s.a_class * &v;
    let fac = arith::factorize(&n).expect("nonzero");
    let ok = fac.primes().all(|p| s.symbol(&v, &Place::Finite(p.clone())) == 1);
    ok
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    /// A fiber with a local point.
    Witness(ProjPoint),
    /// The prime does not divide `2 a disc(P) lead(P)`.
    GoodReduction,
    /// Every residue class of `x` modulo `p^precision` was tried.
    Exhausted { precision: u32 },
    /// `a < 0` and `P4 < 0` on the whole real line.
    NegativeDefinite,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaceReport {
    pub place: Place,
    pub solvable: bool,
    pub evidence: Evidence,
}

pub fn locally_solvable_at(s: &ChateletSurface, place: &Place) -> PlaceReport {
    match place {
        Place::Real => real_report(s),
        Place::Finite(p) => {
            if !s.bad_primes().contains(p) {
                return PlaceReport { place: place.clone(), solvable: true, evidence: Evidence::GoodReduction };
            }
            finite_report(s, p)
        }
    }
}

fn report(place: Place, x: ProjPoint) -> PlaceReport {
    PlaceReport { place, solvable: true, evidence: Evidence::Witness(x) }
}

fn real_report(s: &ChateletSurface) -> PlaceReport {
    let inf = ProjPoint::infinity();
    if s.a_class.is_positive() {
        return report(Place::Real, ProjPoint::integer(0));
    }
    if fiber_solvable(s, &inf, &Place::Real) {
        return report(Place::Real, inf);
    }
    // P4 < 0 at infinity; look for a nonnegative value between real roots
    for x in nonnegative_candidates(&s.p) {
        let pt = ProjPoint::new(x.numer().clone(), x.denom().clone()).expect("finite");
        if fiber_solvable(s, &pt, &Place::Real) {
            return report(Place::Real, pt);
        }
    }
    PlaceReport { place: Place::Real, solvable: false, evidence: Evidence::NegativeDefinite }
}

type QPoly = Vec<BigRational>;

fn qpoly(p: &ZPoly) -> QPoly {
    p.coeffs().iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

fn qtrim(mut p: QPoly) -> QPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn qrem(a: &QPoly, b: &QPoly) -> QPoly {
    let mut r = a.clone();
    let db = b.len() - 1;
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let q = r.last().expect("nonempty") / b.last().expect("nonzero");
        for (i, c) in b.iter().enumerate() {
            r[k + i] -= &q * c;
        }
        r.pop();
        r = qtrim(r);
    }
    r
}

fn qeval(p: &QPoly, x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn sturm_sequence(p: &ZPoly) -> Vec<QPoly> {
    let mut seq = vec![qpoly(p), qpoly(&p.derivative())];
    loop {
        let n = seq.len();
        let r: QPoly = qrem(&seq[n - 2], &seq[n - 1]).into_iter().map(|c| -c).collect();
        if r.is_empty() {
            return seq;
        }
        seq.push(r);
    }
}

fn sign_changes(seq: &[QPoly], x: &BigRational) -> usize {
    let signs: Vec<i8> = seq
        .iter()
        .map(|q| qeval(q, x))
        .filter(|v| !v.is_zero())
        .map(|v| if v.is_positive() { 1 } else { -1 })
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Endpoints of isolating intervals for the real roots of a squarefree `p`:
/// between two consecutive roots one of them has the sign of the gap.
fn nonnegative_candidates(p: &ZPoly) -> Vec<BigRational> {
    let seq = sturm_sequence(p);
    let lead = p.leading().abs();
    let m: BigInt = p.coeffs().iter().map(|c| c.abs()).max().unwrap_or_default() / &lead + 2;
    let bound = BigRational::from_integer(m);
    let mut stack = vec![(-bound.clone(), bound)];
    let mut isolated: Vec<(BigRational, BigRational)> = Vec::new();
    while let Some((l, h)) = stack.pop() {
        let count = sign_changes(&seq, &l) - sign_changes(&seq, &h);
        match count {
            0 => {}
            1 => isolated.push((l, h)),
            _ => {
                let mid = (&l + &h) / BigInt::from(2);
                stack.push((l, mid.clone()));
                stack.push((mid, h));
            }
        }
    }
    isolated.sort();
    isolated.into_iter().flat_map(|(l, h)| [l, h]).collect()
}

fn finite_report(s: &ChateletSurface, p: &BigInt) -> PlaceReport {
    let place = Place::Finite(p.clone());
    let disc = s.p.discriminant();
    let precision = arith::valuation_unchecked(&disc, p) + 3;
    let modulus = num_traits::pow(p.clone(), precision as usize);
    let pk = modulus.to_u64().expect("precision bounded by the discriminant");
    let inf = ProjPoint::infinity();
    if fiber_solvable(s, &inf, &place) {
        return report(place, inf);
    }
    // (x : 1) for x mod p^k, then (1 : p y) for y mod p^(k-1)
    let affine = (0..pk).map(|x| ProjPoint::integer(x as i64));
    let p_small = p.to_i64().expect("small prime");
    let near_inf = (1..pk / p_small as u64).map(|y| ProjPoint::from_ints(1, p_small * y as i64).expect("coprime"));
    for x in affine.chain(near_inf) {
        if fiber_solvable(s, &x, &place) {
            return report(place, x);
        }
    }
    PlaceReport { place, solvable: false, evidence: Evidence::Exhausted { precision } }
}

/// Reports at the real place and every bad prime, and their conjunction.
pub fn everywhere_locally_solvable(s: &ChateletSurface) -> (bool, Vec<PlaceReport>) {
    let mut reports = vec![locally_solvable_at(s, &Place::Real)];
    for p in s.bad_primes() {
        reports.push(locally_solvable_at(s, &Place::Finite(p)));
    }
    (reports.iter().all(|r| r.solvable), reports)
}

/// Every `x` of height at most `bound` whose fiber has a rational point,
/// in enumeration order.
pub fn search_solvable_fibers(s: &ChateletSurface, bound: u64) -> Result<Vec<ProjPoint>> {
    if bound < 1 {
        return Err(Error::BoundTooSmall { min: 1, got: bound });
    }
    let points: Vec<ProjPoint> = proj_line::enumerate_points(bound).collect();
    Ok(points.into_par_iter().filter(|x| fiber_has_rational_point(s, x)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn surface(a: i64, p: &[i64]) -> ChateletSurface {
        ChateletSurface::new(q(a), ZPoly::from_i64s(p)).unwrap()
    }

    /// `a = -1`, `P = (x^2 - 2)(3 - x^2)`.
    fn iskovskikh() -> ChateletSurface {
        surface(-1, &[-6, 0, 5, 0, -1])
    }

    fn pt(s: &str) -> ProjPoint {
        s.parse().unwrap()
    }

    #[test]
    fn symbols() {
        assert_eq!(hilbert_symbol(&q(-1), &q(-1), &Place::Real).unwrap(), -1);
        assert_eq!(hilbert_symbol(&q(-1), &q(-1), &Place::prime(2)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&q(2), &q(7), &Place::prime(7)).unwrap(), 1);
        assert_eq!(hilbert_symbol(&q(3), &q(7), &Place::prime(7)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&q(2), &q(3), &Place::prime(3)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&q(2), &q(2), &Place::prime(2)).unwrap(), 1);
        assert_eq!(hilbert_symbol(&q(3), &q(3), &Place::prime(2)).unwrap(), -1);
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(
            hilbert_symbol(&half, &q(3), &Place::prime(3)).unwrap(),
            hilbert_symbol(&q(2), &q(3), &Place::prime(3)).unwrap()
        );
        assert!(hilbert_symbol(&q(0), &q(3), &Place::Real).is_err());
        assert!(hilbert_symbol(&q(1), &q(3), &Place::prime(9)).is_err());
        assert_eq!("real".parse::<Place>().unwrap(), Place::Real);
        assert!("4".parse::<Place>().is_err());
    }

    /// Primitive solutions of `z^2 = a x^2 + b y^2` modulo `p^k`.
    fn brute_symbol(a: i64, b: i64, p: i64, k: u32) -> i8 {
        let m = p.pow(k);
        let squares: Vec<(i64, bool)> = (0..m).map(|z| (z * z % m, z % p != 0)).collect();
        for x in 0..m {
            for y in 0..m {
                let unit_xy = x % p != 0 || y % p != 0;
                let t = ((a * x % m * x + b * y % m * y) % m + 2 * m) % m;
                if squares.iter().any(|(s, unit_z)| *s == t && (unit_xy || *unit_z)) {
                    return 1;
                }
            }
        }
        -1
    }

    #[test]
    fn symbols_match_brute_force() {
        for (p, k) in [(2i64, 5u32), (3, 3), (5, 3), (7, 3)] {
            for a in [-30i64, -15, -6, -3, -2, -1, 1, 2, 3, 5, 6, 7, 10, 14, 15, 21] {
                for b in [-35i64, -10, -7, -5, -2, -1, 1, 2, 3, 6, 7, 11, 15] {
                    let got = hilbert_symbol(&q(a), &q(b), &Place::prime(p)).unwrap();
                    assert_eq!(got, brute_symbol(a, b, p, k), "({a}, {b})_{p}");
                }
            }
        }
    }

    #[test]
    fn fibers() {
        let split = surface(1, &[1, 0, 0, 0, 1]);
        assert!(split.is_split());
        for x in ["0", "5/3", "inf"] {
            for place in [Place::Real, Place::prime(2), Place::prime(17)] {
                assert!(fiber_solvable(&split, &pt(x), &place));
            }
        }
        let s = iskovskikh();
        assert!(!fiber_solvable(&s, &pt("0"), &Place::Real));
        assert!(fiber_solvable(&s, &pt("3/2"), &Place::Real));
        assert_eq!(s.bad_primes(), vec![BigInt::from(2), BigInt::from(3)]);
        assert_eq!(s.p.discriminant(), BigInt::from(96));
    }

    #[test]
    fn local_reports() {
        let s = iskovskikh();
        let real = locally_solvable_at(&s, &Place::Real);
        assert!(real.solvable);
        let Evidence::Witness(x) = &real.evidence else { panic!("{real:?}") };
        assert!(s.fiber_value(x).is_positive());
        for p in [2, 3] {
            let r = locally_solvable_at(&s, &Place::prime(p));
            assert!(r.solvable, "{r:?}");
            assert!(matches!(r.evidence, Evidence::Witness(_)));
        }
        let r5 = locally_solvable_at(&s, &Place::prime(5));
        assert_eq!(r5.evidence, Evidence::GoodReduction);
        let (ok, reports) = everywhere_locally_solvable(&s);
        assert!(ok);
        assert_eq!(reports.len(), 3);
        let neg = surface(-1, &[-1, 0, 0, 0, -1]);
        let (ok, reports) = everywhere_locally_solvable(&neg);
        assert!(!ok);
        assert_eq!(reports[0].evidence, Evidence::NegativeDefinite);
        assert!(everywhere_locally_solvable(&surface(1, &[1, 0, 0, 0, 1])).0);
    }

    #[test]
    fn searches() {
        assert!(search_solvable_fibers(&iskovskikh(), 100).unwrap().is_empty());
        let split = surface(1, &[1, 0, 0, 0, 1]);
        assert!(search_solvable_fibers(&split, 1).unwrap().contains(&pt("0")));
        let sum = surface(-1, &[1, 0, 0, 0, 1]);
        let found = search_solvable_fibers(&sum, 1).unwrap();
        assert!(found.contains(&pt("1")) && found.contains(&pt("-1")));
        // a cubic always has the degenerate fiber at infinity
        let cubic = surface(-1, &[-1, 0, 0, -1]);
        assert!(search_solvable_fibers(&cubic, 1).unwrap().contains(&pt("inf")));
    }

    #[test]
    fn invalid_surfaces() {
        assert!(ChateletSurface::new(q(0), ZPoly::from_i64s(&[1, 0, 0, 0, 1])).is_err());
        assert!(ChateletSurface::new(q(2), ZPoly::from_i64s(&[1, 0, 1])).is_err());
        assert!(ChateletSurface::new(q(2), ZPoly::from_i64s(&[1, 0, 2, 0, 1])).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn nonzero() -> impl Strategy<Value = i64> {
            (-10_000i64..10_000).prop_filter("nonzero", |v| *v != 0)
        }

        fn places() -> impl Strategy<Value = Place> {
            prop_oneof![Just(Place::Real), Just(Place::prime(2)), Just(Place::prime(3)), Just(Place::prime(5)), Just(Place::prime(101))]
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(1000))]
            #[test]
            fn bilinear(a in nonzero(), b1 in nonzero(), b2 in nonzero(), v in places()) {
                let s = |x: i64, y: i64| hilbert_symbol(&q(x), &q(y), &v).unwrap();
                let prod = hilbert_symbol(&q(a), &(q(b1) * q(b2)), &v).unwrap();
                prop_assert_eq!(prod, s(a, b1) * s(a, b2));
                prop_assert_eq!(s(a, b1), s(b1, a));
            }

            #[test]
            fn product_formula(a in nonzero(), b in nonzero()) {
                let n = BigInt::from(2) * a * b;
                let mut prod = hilbert_symbol(&q(a), &q(b), &Place::Real).unwrap();
                for p in arith::factorize(&n).unwrap().primes() {
                    prod *= hilbert_symbol(&q(a), &q(b), &Place::Finite(p.clone())).unwrap();
                }
                prop_assert_eq!(prod, 1);
            }
        }
    }
}
