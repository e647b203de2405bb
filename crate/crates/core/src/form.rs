//! Homogeneous integer forms in two variables `X`, `Y`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::ZPoly;

/// A binary form of a declared degree `d`: `sum c_i X^i Y^(d-i)`.
///
/// The declared degree may exceed the degree in `X`; the difference is the
/// multiplicity of `Y` (the point at infinity) as a factor.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    /// `coeffs[i]` multiplies `X^i Y^(d-i)`; length `d + 1`.
    coeffs: Vec<BigInt>,
}

impl BinaryForm {
    /// Form of degree `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "binary form needs a declared degree");
        BinaryForm { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Homogenizes `p(x)` to degree `d`. Panics if `d < deg p`.
    pub fn homogenize(p: &ZPoly, d: usize) -> Self {
        assert!(p.deg() <= d, "declared degree below polynomial degree");
        let mut coeffs = p.coeffs().to_vec();
        coeffs.resize(d + 1, BigInt::zero());
        BinaryForm { coeffs }
    }

    /// `X`, vanishing at the point 0.
    pub fn x() -> Self {
        Self::from_i64s(&[0, 1])
    }

    /// `Y`, vanishing at the point at infinity.
    pub fn y() -> Self {
        Self::from_i64s(&[1, 0])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `F(x, 1)` as a polynomial.
    pub fn dehomogenize(&self) -> ZPoly {
        ZPoly::new(self.coeffs.clone())
    }

    /// Multiplicity of `Y` as a factor (the order of vanishing at infinity).
    pub fn y_multiplicity(&self) -> usize {
        if self.is_zero() {
            return self.degree();
        }
        self.degree() - self.dehomogenize().deg()
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        self.dehomogenize().eval_homogeneous(x, y, self.degree())
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Coefficient of the highest power of `X` that appears.
    pub fn leading(&self) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .find(|c| !c.is_zero())
            .cloned()
            .unwrap_or_default()
    }

    /// Content one, leading coefficient positive. The zero form is returned
    /// unchanged.
    pub fn normalized(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.leading().is_negative() {
            c = -c;
        }
        BinaryForm { coeffs: self.coeffs.iter().map(|a| a / &c).collect() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        BinaryForm { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree(), other.degree(), "adding forms of different degree");
        BinaryForm { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.degree(), other.degree(), "subtracting forms of different degree");
        BinaryForm { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut coeffs = vec![BigInt::zero(); self.degree() + other.degree() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        BinaryForm { coeffs }
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(BinaryForm::from_i64s(&[1]), |acc, _| acc.mul(self))
    }

    /// Partial derivative in `X`.
    pub fn d_x(&self) -> Self {
        if self.degree() == 0 {
            return BinaryForm::from_i64s(&[0]);
        }
        BinaryForm {
            coeffs: (1..=self.degree()).map(|i| &self.coeffs[i] * BigInt::from(i)).collect(),
        }
    }

    /// Partial derivative in `Y`.
    pub fn d_y(&self) -> Self {
        let d = self.degree();
        if d == 0 {
            return BinaryForm::from_i64s(&[0]);
        }
        BinaryForm {
            coeffs: (0..d).map(|i| &self.coeffs[i] * BigInt::from(d - i)).collect(),
        }
    }

    /// Substitutes `X -> p`, `Y -> q` for forms `p`, `q` of a common degree.
    pub fn compose(&self, p: &Self, q: &Self) -> Self {
        assert_eq!(p.degree(), q.degree());
        let d = self.degree();
        let mut acc = BinaryForm::from_i64s(&vec![0; d * p.degree() + 1]);
        let ppows: Vec<BinaryForm> = (0..=d).scan(BinaryForm::from_i64s(&[1]), |s, _| {
            let cur = s.clone();
            *s = s.mul(p);
            Some(cur)
        })
        .collect();
        let qpows: Vec<BinaryForm> = (0..=d).scan(BinaryForm::from_i64s(&[1]), |s, _| {
            let cur = s.clone();
            *s = s.mul(q);
            Some(cur)
        })
        .collect();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&ppows[i].mul(&qpows[d - i]).scale(c));
        }
        acc
    }

    /// Exact division by another form, if it divides.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        if other.degree() > self.degree() {
            return None;
        }
        if self.y_multiplicity() < other.y_multiplicity() {
            return None;
        }
        let q = self.dehomogenize().div_exact(&other.dehomogenize())?;
        Some(Self::homogenize(&q, self.degree() - other.degree()))
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.div_exact(self).is_some()
    }

    /// Homogeneous resultant of two forms; zero iff they share a root on the
    /// projective line.
    pub fn resultant(&self, other: &Self) -> BigInt {
        let a: Vec<BigInt> = self.coeffs.iter().rev().cloned().collect();
        let b: Vec<BigInt> = other.coeffs.iter().rev().cloned().collect();
        crate::poly::sylvester_resultant(&a, &b)
    }

    /// Factorization over the rationals: a signed integer unit and normalized
    /// irreducible forms with multiplicities, `Y` included as a factor when
    /// the form vanishes at infinity.
    pub fn factor(&self) -> (BigInt, Vec<(BinaryForm, u32)>) {
        assert!(!self.is_zero(), "factoring the zero form");
        let k = self.y_multiplicity();
        let fac = self.dehomogenize().factor();
        let mut out: Vec<(BinaryForm, u32)> = fac
            .factors
            .iter()
            .map(|(q, e)| (BinaryForm::homogenize(q, q.deg()), *e))
            .collect();
        if k > 0 {
            out.push((BinaryForm::y(), k as u32));
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        (fac.unit, out)
    }
}

impl PartialOrd for BinaryForm {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then coefficients from the highest power of `X` down.
impl Ord for BinaryForm {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut mono = Vec::new();
            match i {
                0 => {}
                1 => mono.push("X".to_string()),
                _ => mono.push(format!("X^{i}")),
            }
            match d - i {
                0 => {}
                1 => mono.push("Y".to_string()),
                e => mono.push(format!("Y^{e}")),
            }
            let abs = c.abs();
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    out.push_str(&abs.to_string());
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryForm({self})")
    }
}
