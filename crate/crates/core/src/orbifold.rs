//! Orbifold divisors on the projective line, the general-type criterion and
//! orbifold rational points.
//!
//! A point is an orbifold point for `Δ = Σ (1 - 1/m_j) Δ_j` outside a set
//! `S` of primes when, at every prime not in `S`, its intersection with each
//! `Δ_j` is either zero or at least `m_j`. A point lying on `Δ_j` has
//! infinite intersection with it and satisfies the condition for `j`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith;
use crate::proj_line::{PrimeForm, ProjPoint};
use crate::{Error, Result};

/// Finite set of excluded primes.
pub type PrimeSet = BTreeSet<u64>;

/// `Σ (1 - 1/m_j) Δ_j` with pairwise distinct prime forms and `m_j >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OrbifoldDivisor {
    components: Vec<(PrimeForm, u32)>,
}

impl OrbifoldDivisor {
    pub fn new(components: Vec<(PrimeForm, u32)>) -> Result<Self> {
        for (i, (form, m)) in components.iter().enumerate() {
            if *m < 2 {
                return Err(Error::InvalidDivisor(format!(
                    "component {i} ({form}) has multiplicity {m} < 2"
                )));
            }
            if components[..i].iter().any(|(g, _)| g == form) {
                return Err(Error::InvalidDivisor(format!("component {form} repeated")));
            }
        }
        Ok(OrbifoldDivisor { components })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// `Σ ½ P_i` over the given rational points.
    pub fn halves(points: &[ProjPoint]) -> Result<Self> {
        Self::new(points.iter().map(|p| (p.as_form(), 2)).collect())
    }

    pub fn components(&self) -> &[(PrimeForm, u32)] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn multiplicity_of(&self, form: &PrimeForm) -> Option<u32> {
        self.components.iter().find(|(f, _)| f == form).map(|(_, m)| *m)
    }

    /// `Σ (1 - 1/m_j) deg Δ_j`.
    pub fn weighted_degree(&self) -> BigRational {
        self.components
            .iter()
            .map(|(f, m)| {
                let m = BigInt::from(*m);
                BigRational::new(m.clone() - 1, m) * BigInt::from(f.degree())
            })
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// A copy with one more component.
    pub fn with_component(&self, form: PrimeForm, m: u32) -> Result<Self> {
        let mut components = self.components.clone();
        components.push((form, m));
        Self::new(components)
    }
}

/// `2g - 2 + Σ (1 - 1/m_j) deg Δ_j`.
pub fn canonical_degree(genus: u64, divisor: &OrbifoldDivisor) -> BigRational {
    BigRational::from_integer(BigInt::from(2 * genus as i128 - 2)) + divisor.weighted_degree()
}

pub fn is_general_type(genus: u64, divisor: &OrbifoldDivisor) -> bool {
    canonical_degree(genus, divisor) > BigRational::zero()
}

/// A prime at which a point violates the multiplicity condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    /// Index into the divisor's components.
    pub component: usize,
    pub prime: BigInt,
    /// Intersection number, strictly between 0 and the multiplicity.
    pub value: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbifoldPointReport {
    pub point: ProjPoint,
    pub member: bool,
    pub witness: Option<Witness>,
}

/// Membership test with the first violation (lowest component index, then
/// smallest prime) as witness.
pub fn is_orbifold_point(point: &ProjPoint, divisor: &OrbifoldDivisor, excluded: &PrimeSet) -> OrbifoldPointReport {
    let witness = first_violation(point, divisor, excluded);
    OrbifoldPointReport { point: point.clone(), member: witness.is_none(), witness }
}

fn first_violation(point: &ProjPoint, divisor: &OrbifoldDivisor, excluded: &PrimeSet) -> Option<Witness> {
    for (j, (form, m)) in divisor.components.iter().enumerate() {
        let value = form.eval(point.x(), point.y());
        if value.is_zero() {
            continue;
        }
        let fac = arith::factorize(&value).expect("nonzero");
        for (p, e) in fac.factors() {
            if p.to_u64().is_some_and(|q| excluded.contains(&q)) {
                continue;
            }
            if *e < *m {
                return Some(Witness { component: j, prime: p.clone(), value: *e });
            }
        }
    }
    None
}

/// Scan settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanOptions {
    /// Keep points lying on the support of the divisor.
    pub include_support: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { include_support: true }
    }
}

/// Largest value table the sieve path will allocate.
const TABLE_LIMIT: u128 = 1 << 25;

/// Orbifold points of height at most `bound`, in enumeration order.
///
/// When every component has small coefficients the component values are
/// bounded, and membership reduces to lookups in a table of minimal prime
/// exponents built by sieving once. Components `X` and `Y` further restrict
/// the coordinates before any pair is formed. Otherwise each point is
/// factored individually. Work is split across the current rayon pool by
/// `y`; the output order does not depend on the number of threads.
pub fn scan_orbifold_points(
    divisor: &OrbifoldDivisor,
    excluded: &PrimeSet,
    bound: u64,
    options: ScanOptions,
) -> Result<Vec<ProjPoint>> {
    if bound < 1 {
        return Err(Error::BoundTooSmall { min: 1, got: bound });
    }
    match SieveScan::new(divisor, excluded, bound) {
        Some(sieve) => Ok(sieve.run(options)),
        None => Ok(naive_scan(divisor, excluded, bound, options)),
    }
}

fn naive_scan(divisor: &OrbifoldDivisor, excluded: &PrimeSet, bound: u64, options: ScanOptions) -> Vec<ProjPoint> {
    let b = bound as i64;
    let keep = |p: &ProjPoint| {
        if !options.include_support
            && divisor.components.iter().any(|(f, _)| f.eval(p.x(), p.y()).is_zero())
        {
            return false;
        }
        first_violation(p, divisor, excluded).is_none()
    };
    let mut out: Vec<ProjPoint> = Vec::new();
    if keep(&ProjPoint::infinity()) {
        out.push(ProjPoint::infinity());
    }
    let rows: Vec<Vec<ProjPoint>> = (1..=b)
        .into_par_iter()
        .map(|y| {
            (-b..=b)
                .filter(|x| x.gcd(&y) == 1)
                .map(|x| ProjPoint::from_coprime_unchecked(BigInt::from(x), BigInt::from(y)))
                .filter(|p| keep(p))
                .collect()
        })
        .collect();
    out.extend(rows.into_iter().flatten());
    out
}

struct SieveScan {
    bound: i64,
    /// Small coefficients (`X^i Y^(d-i)`) and multiplicity per component.
    components: Vec<(Vec<i64>, u8)>,
    /// Minimal exponent over primes outside `S` dividing `v`, 255 if none.
    min_exp: Vec<u8>,
    x_component: Option<u8>,
    y_component: Option<u8>,
}

impl SieveScan {
    fn new(divisor: &OrbifoldDivisor, excluded: &PrimeSet, bound: u64) -> Option<Self> {
        let mut components = Vec::new();
        let mut max_value: u128 = 1;
        for (form, m) in &divisor.components {
            let coeffs = form.small_coeffs()?;
            let d = form.degree() as u32;
            let b_pow = (bound as u128).checked_pow(d)?;
            let sum: u128 = coeffs.iter().map(|c| c.unsigned_abs() as u128).sum();
            max_value = max_value.max(sum.checked_mul(b_pow)?);
            components.push((coeffs, (*m).min(255) as u8));
        }
        if max_value > TABLE_LIMIT {
            return None;
        }
        let x_component = components.iter().find(|(c, _)| c == &[0, 1]).map(|(_, m)| *m);
        let y_component = components.iter().find(|(c, _)| c == &[1, 0]).map(|(_, m)| *m);
        let min_exp = min_exponent_table(max_value as usize, excluded);
        Some(SieveScan { bound: bound as i64, components, min_exp, x_component, y_component })
    }

    fn coordinate_ok(&self, v: i64, m: Option<u8>, include_support: bool) -> bool {
        match m {
            None => true,
            Some(_) if v == 0 => include_support,
            Some(m) => self.min_exp[v.unsigned_abs() as usize] >= m,
        }
    }

    fn accepts(&self, x: i64, y: i64, include_support: bool) -> bool {
        self.components.iter().all(|(coeffs, m)| {
            let d = coeffs.len() - 1;
            // Horner in x with powers of y
            let mut v: i128 = 0;
            let mut ypow: i128 = 1;
            let mut terms = [0i128; 32];
            if d < 32 {
                for t in terms.iter_mut().take(d + 1) {
                    *t = ypow;
                    ypow *= y as i128;
                }
                let mut xpow: i128 = 1;
                for (i, c) in coeffs.iter().enumerate() {
                    v += *c as i128 * xpow * terms[d - i];
                    xpow *= x as i128;
                }
            } else {
                unreachable!("degree bounded by the table limit");
            }
            if v == 0 {
                include_support
            } else {
                self.min_exp[v.unsigned_abs() as usize] >= *m
            }
        })
    }

    fn run(&self, options: ScanOptions) -> Vec<ProjPoint> {
        let b = self.bound;
        let inc = options.include_support;
        let xs: Vec<i64> = (-b..=b)
            .filter(|&x| self.coordinate_ok(x, self.x_component, inc))
            .collect();
        let mut out = Vec::new();
        if self.accepts(1, 0, inc) {
            out.push(ProjPoint::infinity());
        }
        let rows: Vec<Vec<ProjPoint>> = (1..=b)
            .into_par_iter()
            .map(|y| {
                if !self.coordinate_ok(y, self.y_component, inc) {
                    return Vec::new();
                }
                xs.iter()
                    .filter(|&&x| x.gcd(&y) == 1 && self.accepts(x, y, inc))
                    .map(|&x| ProjPoint::from_coprime_unchecked(BigInt::from(x), BigInt::from(y)))
                    .collect()
            })
            .collect();
        out.extend(rows.into_iter().flatten());
        out
    }
}

/// For `1 <= v <= limit`, the least exponent of a prime outside `excluded`
/// in `v` (255 when there is none).
fn min_exponent_table(limit: usize, excluded: &PrimeSet) -> Vec<u8> {
    let mut min_exp = vec![u8::MAX; limit + 1];
    let mut composite = vec![false; limit + 1];
    for p in 2..=limit {
        if composite[p] {
            continue;
        }
        let mut j = p.saturating_mul(p);
        while j <= limit {
            composite[j] = true;
            j += p;
        }
        if excluded.contains(&(p as u64)) {
            continue;
        }
        let mut m = p;
        while m <= limit {
            let mut e = 1u8;
            let mut q = m / p;
            while q % p == 0 {
                q /= p;
                e += 1;
            }
            if e < min_exp[m] {
                min_exp[m] = e;
            }
            m += p;
        }
    }
    min_exp
}
