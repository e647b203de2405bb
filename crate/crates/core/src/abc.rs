//! abc triples: heights, conductors, the split `N = N_0 N_1 N_inf` along a
//! ratio, quality scans and the key-inequality report for a Belyi map.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{self, SpfSieve};
use crate::belyi::{self, BelyiMap, Target};
use crate::orbifold::{self, OrbifoldDivisor, PrimeSet, ScanOptions};
use crate::proj_line::ProjPoint;
use crate::{Error, Result};

/// Nonzero coprime integers with `a + b + c = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbcTriple {
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

impl AbcTriple {
    pub fn new(a: BigInt, b: BigInt, c: BigInt) -> Result<Self> {
        if a.is_zero() || b.is_zero() || c.is_zero() {
            return Err(Error::InvalidTriple(format!("({a}, {b}, {c}) has a zero entry")));
        }
        if !(&a + &b + &c).is_zero() {
            return Err(Error::InvalidTriple(format!("({a}, {b}, {c}) does not sum to zero")));
        }
        if !a.gcd(&b).is_one() {
            return Err(Error::InvalidTriple(format!("({a}, {b}, {c}) is not coprime")));
        }
        Ok(AbcTriple { a, b, c })
    }

    pub fn from_i64s(a: i64, b: i64, c: i64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into())
    }

    /// Divides out the common factor of a nonzero-sum-free triple.
    pub fn primitive(a: BigInt, b: BigInt, c: BigInt) -> Result<Self> {
        let g = a.gcd(&b);
        if g.is_zero() {
            return Err(Error::InvalidTriple("zero triple".into()));
        }
        Self::new(a / &g, b / &g, c / &g)
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    /// Representative under permutations and global sign: `0 < a <= b`,
    /// `c = -(a + b)`.
    pub fn canonical(&self) -> AbcTriple {
        let mut v = [self.a.clone(), self.b.clone(), self.c.clone()];
        v.sort_by_key(|x| x.abs());
        let sign = if v[0].is_negative() { -1 } else { 1 };
        let [a, b, c] = v.map(|x| x * sign);
        AbcTriple { a, b, c }
    }

    pub fn height(&self) -> BigInt {
        self.a.abs().max(self.b.abs()).max(self.c.abs())
    }

    pub fn conductor(&self) -> BigInt {
        arith::radical(&(&self.a * &self.b * &self.c)).expect("nonzero")
    }

    /// `ln H / ln N`; infinite when `N = 1`, which coprimality rules out.
    pub fn quality(&self) -> f64 {
        let n = self.conductor();
        if n.is_one() {
            return f64::INFINITY;
        }
        arith::ln_big(&self.height()) / arith::ln_big(&n)
    }
}

impl fmt::Display for AbcTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

pub fn triple_height(t: &AbcTriple) -> BigInt {
    t.height()
}

pub fn triple_conductor(t: &AbcTriple) -> BigInt {
    t.conductor()
}

/// `Π_v max(|a|_v, |b|_v, |c|_v)` over the real place and every prime
/// dividing `abc`, computed from valuations.
pub fn height_from_places(t: &AbcTriple) -> BigRational {
    let entries = [&t.a, &t.b, &t.c];
    let mut h = BigRational::from_integer(t.height());
    let n = &t.a * &t.b * &t.c;
    for p in arith::factorize(&n).expect("nonzero").primes() {
        let vmin = entries.iter().map(|x| arith::valuation_unchecked(x, p)).min().unwrap_or(0);
        // |x|_p = p^(-v), so the max is p^(-vmin)
        h /= BigRational::from_integer(num_traits::pow(p.clone(), vmin as usize));
    }
    h
}

fn check_ratio(r: &ProjPoint) -> Result<()> {
    if r.is_infinity() || r.x().is_zero() || r.x() == r.y() {
        return Err(Error::DegenerateRatio(r.to_string()));
    }
    Ok(())
}

/// For `r = p/q`, the triple `(-p, q, p - q)`.
pub fn triple_from_ratio(r: &ProjPoint) -> Result<AbcTriple> {
    check_ratio(r)?;
    let (p, q) = (r.x().clone(), r.y().clone());
    let c = &p - &q;
    AbcTriple::new(-p, q, c)
}

/// `(rad p, rad(p - q), rad q)` for `r = p/q`.
pub fn conductor_split(r: &ProjPoint) -> Result<(BigInt, BigInt, BigInt)> {
    check_ratio(r)?;
    let rad = |n: &BigInt| arith::radical(n).expect("nonzero");
    Ok((rad(r.x()), rad(&(r.x() - r.y())), rad(r.y())))
}

#[derive(Debug, Clone, PartialEq)]
pub struct QualityRecord {
    pub triple: AbcTriple,
    pub height: BigInt,
    pub conductor: BigInt,
    pub quality: f64,
}

impl QualityRecord {
    pub fn of(triple: AbcTriple) -> Self {
        QualityRecord {
            height: triple.height(),
            conductor: triple.conductor(),
            quality: triple.quality(),
            triple,
        }
    }
}

/// Canonical triples with `H <= bound` and quality at least `q_min`, by
/// descending quality, then ascending height, then triple.
pub fn scan_high_quality(bound: u64, q_min: f64) -> Result<Vec<QualityRecord>> {
    if bound < 3 {
        return Err(Error::BoundTooSmall { min: 3, got: bound });
    }
    let sieve = SpfSieve::new(bound as usize);
    let mut hits: Vec<(f64, u64, u64, u64)> = (2..=bound)
        .into_par_iter()
        .flat_map_iter(|c| {
            let rc = sieve.radical(c as usize);
            let lc = (c as f64).ln();
            let sieve = &sieve;
            (1..=c / 2).filter_map(move |a| {
                let b = c - a;
                if a.gcd(&b) != 1 {
                    return None;
                }
                let n = rc * sieve.radical(a as usize) * sieve.radical(b as usize);
                let q = lc / (n as f64).ln();
                (q >= q_min).then_some((q, c, a, b))
            })
        })
        .collect();
    hits.sort_by(|x, y| {
        y.0.partial_cmp(&x.0).unwrap_or(Ordering::Equal).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2))
    });
    Ok(hits
        .into_iter()
        .map(|(_, c, a, b)| {
            let t = AbcTriple::new(a.into(), b.into(), -BigInt::from(c)).expect("coprime");
            QualityRecord::of(t)
        })
        .collect())
}

/// Per-target slopes `deg D_t / deg f` and logarithmic data at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct KeyInequalityRow {
    pub point: ProjPoint,
    pub ratio: ProjPoint,
    pub height: BigInt,
    /// `N_0`, `N_1`, `N_inf`.
    pub split: [BigInt; 3],
    pub conductor: BigInt,
    pub log_height: f64,
    pub log_split: [f64; 3],
    pub slopes: [BigRational; 3],
    /// `(ln N_t - slope_t ln H) / (sqrt(ln H) + 1)`.
    pub residuals: [f64; 3],
}

impl KeyInequalityRow {
    pub fn split_identity_holds(&self) -> bool {
        &self.split[0] * &self.split[1] * &self.split[2] == self.conductor
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KeyInequalityReport {
    pub slopes: [BigRational; 3],
    pub rows: Vec<KeyInequalityRow>,
}

impl KeyInequalityReport {
    /// Largest residual for target `t`, if there are rows.
    pub fn max_residual(&self, t: Target) -> Option<f64> {
        self.rows.iter().map(|r| r.residuals[t as usize]).reduce(f64::max)
    }
}

/// One row for each orbifold point of height at most `bound` outside
/// `f^-1({0, 1, inf})`, in enumeration order.
pub fn key_inequality_report(
    map: &BelyiMap,
    divisor: &OrbifoldDivisor,
    excluded: &PrimeSet,
    bound: u64,
) -> Result<KeyInequalityReport> {
    let pullback = belyi::orbifold_pullback(map, divisor)?;
    let deg = BigInt::from(map.degree());
    let slopes = Target::ALL.map(|t| pullback.degree_of(t) / &deg);
    let slopes_f = slopes.clone().map(|s| s.to_f64().expect("finite"));
    let points = orbifold::scan_orbifold_points(divisor, excluded, bound, ScanOptions::default())?;
    let rows = points
        .par_iter()
        .filter_map(|p| {
            let r = map.evaluate(p);
            let triple = triple_from_ratio(&r).ok()?;
            let (n0, n1, ninf) = conductor_split(&r).expect("nondegenerate");
            let split = [n0, n1, ninf];
            let height = triple.height();
            let log_height = arith::ln_big(&height);
            let log_split = [0, 1, 2].map(|i| arith::ln_big(&split[i]));
            let denom = log_height.sqrt() + 1.0;
            let residuals = [0, 1, 2].map(|i| (log_split[i] - slopes_f[i] * log_height) / denom);
            Some(KeyInequalityRow {
                point: p.clone(),
                ratio: r,
                conductor: triple.conductor(),
                height,
                split,
                log_height,
                log_split,
                slopes: slopes.clone(),
                residuals,
            })
        })
        .collect();
    Ok(KeyInequalityReport { slopes, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(s: &str) -> ProjPoint {
        s.parse().unwrap()
    }

    fn t(a: i64, b: i64, c: i64) -> AbcTriple {
        AbcTriple::from_i64s(a, b, c).unwrap()
    }

    #[test]
    fn triples_from_ratios() {
        assert_eq!(triple_from_ratio(&pt("2")).unwrap(), t(-2, 1, 1));
        assert_eq!(triple_from_ratio(&pt("9/8")).unwrap(), t(-9, 8, 1));
        assert_eq!(triple_from_ratio(&pt("-1")).unwrap(), t(1, 1, -2));
        for r in ["0", "1", "inf"] {
            assert_eq!(triple_from_ratio(&pt(r)).unwrap_err().precondition(), "nondegenerate_ratio");
        }
        assert!(AbcTriple::from_i64s(2, 4, -6).is_err());
        assert!(AbcTriple::from_i64s(2, 3, 4).is_err());
    }

    #[test]
    fn heights_and_conductors() {
        for (tr, h, n) in [(t(-2, 1, 1), 2, 2), (t(-9, 8, 1), 9, 6), (t(-81, 80, 1), 81, 30)] {
            assert_eq!(triple_height(&tr), BigInt::from(h));
            assert_eq!(triple_conductor(&tr), BigInt::from(n));
            assert_eq!(height_from_places(&tr), BigRational::from_integer(BigInt::from(h)));
        }
        assert_eq!(t(-2, 1, 1).quality(), 1.0);
        assert!((t(-9, 8, 1).quality() - 1.2263).abs() < 1e-4);
    }

    #[test]
    fn splits() {
        let b = |n: i64| BigInt::from(n);
        assert_eq!(conductor_split(&pt("9/8")).unwrap(), (b(3), b(1), b(2)));
        assert_eq!(conductor_split(&pt("2")).unwrap(), (b(2), b(1), b(1)));
        assert_eq!(conductor_split(&pt("81/80")).unwrap(), (b(3), b(1), b(10)));
        for r in crate::proj_line::enumerate_points(500) {
            let Ok(tr) = triple_from_ratio(&r) else { continue };
            let (n0, n1, ninf) = conductor_split(&r).unwrap();
            assert_eq!(n0 * n1 * ninf, tr.conductor());
        }
    }

    #[test]
    fn canonical_form() {
        assert_eq!(t(-9, 8, 1).canonical(), t(1, 8, -9));
        assert_eq!(t(1, 1, -2).canonical(), t(1, 1, -2));
        assert_eq!(t(-1, -1, 2).canonical(), t(1, 1, -2));
        assert_eq!(t(5, -9, 4).canonical(), t(4, 5, -9));
    }

    #[test]
    fn quality_scans() {
        let ten = scan_high_quality(10, 1.2).unwrap();
        assert_eq!(ten[0].triple, t(1, 8, -9));
        let hundred = scan_high_quality(100, 1.29).unwrap();
        assert!(hundred.iter().any(|r| r.triple == t(1, 80, -81)));
        assert!((hundred.iter().find(|r| r.triple == t(1, 80, -81)).unwrap().quality - 1.2920).abs() < 1e-4);
        assert!(scan_high_quality(10, 10.0).unwrap().is_empty());
        assert!(scan_high_quality(2, 1.0).is_err());
        // oracle: direct enumeration of canonical triples
        let all = scan_high_quality(60, 0.5).unwrap();
        let mut expected = 0;
        for c in 2..=60i64 {
            for a in 1..=c / 2 {
                if a.gcd(&(c - a)) == 1 && t(a, c - a, -c).quality() >= 0.5 {
                    expected += 1;
                }
            }
        }
        assert_eq!(all.len(), expected);
        assert!(all.windows(2).all(|w| w[0].quality >= w[1].quality));
    }

    #[test]
    fn key_inequality_for_square() {
        let f = BelyiMap::parse("x^2").unwrap();
        let d = OrbifoldDivisor::halves(&[pt("0"), pt("1"), pt("-1"), pt("inf")]).unwrap();
        let rep = key_inequality_report(&f, &d, &PrimeSet::new(), 50).unwrap();
        assert!(rep.rows.iter().all(KeyInequalityRow::split_identity_holds));
        assert!(rep.rows.iter().all(|r| r.point != pt("3/2")));
        // D_0 = X/2, D_1 = (X - Y)/2 + (X + Y)/2, D_inf = Y/2 over deg f = 2
        let quarter = BigRational::new(BigInt::from(1), BigInt::from(4));
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(rep.slopes, [quarter.clone(), half, quarter]);
        let d = OrbifoldDivisor::halves(&[pt("0"), pt("inf")]).unwrap();
        let rep = key_inequality_report(&f, &d, &PrimeSet::new(), 1000).unwrap();
        assert!(!rep.rows.is_empty());
        assert!(rep.rows.iter().all(KeyInequalityRow::split_identity_holds));
        assert!(rep.max_residual(Target::Zero).unwrap().is_finite());
        let bad = OrbifoldDivisor::halves(&[pt("2")]).unwrap();
        assert!(key_inequality_report(&f, &bad, &PrimeSet::new(), 10).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(100))]
            #[test]
            fn scaling_invariance(a in 1i64..100_000, b in 1i64..100_000, lam in 1i64..10_000, neg in any::<bool>()) {
                let Ok(tr) = AbcTriple::primitive(a.into(), (-b).into(), (b - a).into()) else { return Ok(()) };
                let s = if neg { -lam } else { lam };
                let scaled = AbcTriple::primitive(
                    tr.a() * s, tr.b() * s, tr.c() * s,
                ).unwrap();
                prop_assert_eq!(scaled.height(), tr.height());
                prop_assert_eq!(scaled.conductor(), tr.conductor());
            }

            #[test]
            fn place_height_matches(a in 1i64..1_000_000_000, b in 1i64..1_000_000_000) {
                let Ok(tr) = AbcTriple::primitive(a.into(), b.into(), (-(a + b)).into()) else { return Ok(()) };
                prop_assert_eq!(height_from_places(&tr), BigRational::from_integer(tr.height()));
            }
        }
    }
}
