//! Rational points of the projective line, heights, prime divisors as
//! primitive irreducible forms, and local intersection numbers on the
//! standard integral model.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith;
use crate::form::BinaryForm;
use crate::{Error, Result};

/// A point `(x : y)` with `gcd(x, y) = 1`, normalized so that `y > 0`, or
/// `(1 : 0)` for the point at infinity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    x: BigInt,
    y: BigInt,
}

impl ProjPoint {
    /// Normalizes an arbitrary nonzero pair.
    pub fn new(x: BigInt, y: BigInt) -> Result<Self> {
        if x.is_zero() && y.is_zero() {
            return Err(Error::ZeroPoint);
        }
        let g = x.gcd(&y);
        let (mut x, mut y) = (x / &g, y / &g);
        if y.is_negative() || (y.is_zero() && x.is_negative()) {
            x = -x;
            y = -y;
        }
        Ok(ProjPoint { x, y })
    }

    pub fn from_ints(x: i64, y: i64) -> Result<Self> {
        Self::new(BigInt::from(x), BigInt::from(y))
    }

    /// Point `n : 1`.
    pub fn integer(n: i64) -> Self {
        ProjPoint { x: BigInt::from(n), y: BigInt::one() }
    }

    pub fn infinity() -> Self {
        ProjPoint { x: BigInt::one(), y: BigInt::zero() }
    }

    pub(crate) fn from_coprime_unchecked(x: BigInt, y: BigInt) -> Self {
        debug_assert!(x.gcd(&y).is_one());
        ProjPoint { x, y }
    }

    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    pub fn is_infinity(&self) -> bool {
        self.y.is_zero()
    }

    /// Multiplicative height `max(|x|, |y|)`.
    pub fn height(&self) -> BigInt {
        point_height(self)
    }

    /// `y*X - x*Y`, normalized: the prime form vanishing at this point.
    pub fn as_form(&self) -> PrimeForm {
        point_as_form(self)
    }

    /// Machine-word coordinates, when they fit.
    pub fn to_i64_pair(&self) -> Option<(i64, i64)> {
        Some((self.x.to_i64()?, self.y.to_i64()?))
    }
}

impl fmt::Display for ProjPoint {
    /// `inf`, `n` or `a/b`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_zero() {
            write!(f, "inf")
        } else if self.y.is_one() {
            write!(f, "{}", self.x)
        } else {
            write!(f, "{}/{}", self.x, self.y)
        }
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{})", self.x, self.y)
    }
}

impl FromStr for ProjPoint {
    type Err = Error;

    /// Accepts `inf`, an integer `n`, or `a/b`; `a/0` with `a != 0` is the
    /// point at infinity.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(Self::infinity());
        }
        let bad = || Error::Parse(format!("invalid point {s:?}"));
        match s.split_once('/') {
            Some((a, b)) => {
                let a: BigInt = a.trim().parse().map_err(|_| bad())?;
                let b: BigInt = b.trim().parse().map_err(|_| bad())?;
                Self::new(a, b)
            }
            None => {
                let a: BigInt = s.parse().map_err(|_| bad())?;
                Self::new(a, BigInt::one())
            }
        }
    }
}

/// A prime divisor of the projective line: an irreducible binary form with
/// content one and positive leading coefficient.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeForm(BinaryForm);

impl PrimeForm {
    /// Normalizes `form` and checks irreducibility over the rationals.
    pub fn new(form: BinaryForm) -> Result<Self> {
        if form.degree() == 0 || form.is_zero() {
            return Err(Error::InvalidForm(format!("{form} has no zeros on the line")));
        }
        let (_, factors) = form.factor();
        match factors.as_slice() {
            [(f, 1)] if f.degree() == form.degree() => Ok(PrimeForm(f.clone())),
            _ => Err(Error::ReducibleForm(form.to_string())),
        }
    }

    /// For factors produced by [`BinaryForm::factor`], which are already
    /// normalized and irreducible.
    pub(crate) fn from_factor(form: BinaryForm) -> Self {
        debug_assert_eq!(form, form.normalized());
        PrimeForm(form)
    }

    pub fn form(&self) -> &BinaryForm {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.degree()
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        self.0.eval(x, y)
    }

    /// The rational point this form vanishes at, for degree one.
    pub fn rational_root(&self) -> Option<ProjPoint> {
        if self.degree() != 1 {
            return None;
        }
        let c = self.0.coeffs();
        // c0*Y + c1*X = 0 at (-c0 : c1)
        ProjPoint::new(-&c[0], c[1].clone()).ok()
    }

    /// Small machine coefficients for the scanning fast path.
    pub(crate) fn small_coeffs(&self) -> Option<Vec<i64>> {
        self.0.coeffs().iter().map(ToPrimitive::to_i64).collect()
    }
}

impl fmt::Display for PrimeForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for PrimeForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PrimeForm({})", self.0)
    }
}

/// Local intersection number; `Infinite` when the point lies on the divisor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Intersection {
    Finite(u32),
    Infinite,
}

impl Intersection {
    pub fn is_zero(self) -> bool {
        self == Intersection::Finite(0)
    }
}

pub fn point_height(p: &ProjPoint) -> BigInt {
    p.x.abs().max(p.y.abs())
}

pub fn point_as_form(p: &ProjPoint) -> PrimeForm {
    let form = BinaryForm::new(vec![-p.x.clone(), p.y.clone()]);
    PrimeForm::from_factor(form.normalized())
}

/// `v_p(g_D(x, y))` for the primitive representative of `P`.
///
/// On the standard model over the integers two primitive pairs agree modulo
/// `p^m` up to a unit exactly when `p^m` divides their cross product, which
/// is the value of the degree-one form of the other point; for a divisor of
/// higher degree this is the length of the scheme-theoretic intersection.
pub fn intersection_at(point: &ProjPoint, divisor: &PrimeForm, p: &BigInt) -> Result<Intersection> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let v = divisor.eval(&point.x, &point.y);
    if v.is_zero() {
        return Ok(Intersection::Infinite);
    }
    Ok(Intersection::Finite(arith::valuation_unchecked(&v, p)))
}

/// Every normalized point of height at most `bound`, ordered
/// lexicographically by `(y, x)`.
pub fn enumerate_points(bound: u64) -> impl Iterator<Item = ProjPoint> {
    let b = bound as i64;
    std::iter::once(ProjPoint::infinity()).chain((1..=b).flat_map(move |y| {
        (-b..=b)
            .filter(move |x| x.gcd(&y) == 1)
            .map(move |x| ProjPoint::from_coprime_unchecked(BigInt::from(x), BigInt::from(y)))
    }))
}

/// Number of points [`enumerate_points`] yields, without materializing them.
pub fn count_points(bound: u64) -> u64 {
    let b = bound as i64;
    1 + (1..=b)
        .map(|y| (-b..=b).filter(|x| x.gcd(&y) == 1).count() as u64)
        .sum::<u64>()
}
