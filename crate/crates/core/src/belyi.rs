//! Rational self-maps of the projective line: evaluation, ramification,
//! the Belyi test, orbifold pullback divisors and the degree identity.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::form::BinaryForm;
use crate::orbifold::{self, OrbifoldDivisor};
use crate::parse::{self, RationalFunction};
use crate::proj_line::{PrimeForm, ProjPoint};
use crate::{Error, Result};

/// `(F : G)` with `F`, `G` forms of a common degree `d >= 1`, no common
/// root and coprime coefficients overall.
#[derive(Clone, PartialEq, Eq)]
pub struct BelyiMap {
    f: BinaryForm,
    g: BinaryForm,
}

/// The three points over which a Belyi map may branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    Zero,
    One,
    Infinity,
}

impl Target {
    pub const ALL: [Target; 3] = [Target::Zero, Target::One, Target::Infinity];

    pub fn label(self) -> &'static str {
        match self {
            Target::Zero => "0",
            Target::One => "1",
            Target::Infinity => "inf",
        }
    }
}

impl BelyiMap {
    pub fn new(f: BinaryForm, g: BinaryForm) -> Result<Self> {
        if f.degree() != g.degree() {
            return Err(Error::InvalidMap(format!("{f} and {g} have different degrees")));
        }
        if f.degree() == 0 {
            return Err(Error::InvalidMap("constant map".into()));
        }
        if f.is_zero() || g.is_zero() {
            return Err(Error::InvalidMap("constant map".into()));
        }
        if f.resultant(&g).is_zero() {
            return Err(Error::InvalidMap(format!("{f} and {g} share a root")));
        }
        let c = f.content().gcd(&g.content());
        let c = if g.leading().is_negative() { -c } else { c };
        let f = BinaryForm::new(f.coeffs().iter().map(|a| a / &c).collect());
        let g = BinaryForm::new(g.coeffs().iter().map(|a| a / &c).collect());
        Ok(BelyiMap { f, g })
    }

    pub fn from_rational_function(r: &RationalFunction) -> Result<Self> {
        let (f, g) = r.to_forms();
        Self::new(f, g)
    }

    /// Parses a rational function of `x` such as `4*x*(1-x)`.
    pub fn parse(s: &str) -> Result<Self> {
        Self::from_rational_function(&parse::parse_rational_function(s)?)
    }

    pub fn identity() -> Self {
        BelyiMap { f: BinaryForm::x(), g: BinaryForm::y() }
    }

    pub fn numerator(&self) -> &BinaryForm {
        &self.f
    }

    pub fn denominator(&self) -> &BinaryForm {
        &self.g
    }

    pub fn degree(&self) -> usize {
        self.f.degree()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &BelyiMap) -> BelyiMap {
        let f = self.f.compose(&inner.f, &inner.g);
        let g = self.g.compose(&inner.f, &inner.g);
        BelyiMap::new(f, g).expect("composition of morphisms is a morphism")
    }

    pub fn evaluate(&self, p: &ProjPoint) -> ProjPoint {
        ProjPoint::new(self.f.eval(p.x(), p.y()), self.g.eval(p.x(), p.y()))
            .expect("no common root")
    }

    fn fiber_form(&self, t: Target) -> BinaryForm {
        match t {
            Target::Zero => self.f.clone(),
            Target::One => self.f.sub(&self.g),
            Target::Infinity => self.g.clone(),
        }
    }

    /// `F_X G_Y - F_Y G_X`, of degree `2d - 2`; it vanishes exactly at the
    /// critical points, to order `e - 1` at a point of ramification index `e`.
    pub fn jacobian(&self) -> BinaryForm {
        self.f.d_x().mul(&self.g.d_y()).sub(&self.f.d_y().mul(&self.g.d_x()))
    }
}

impl fmt::Display for BelyiMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} : {})", self.f, self.g)
    }
}

impl fmt::Debug for BelyiMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BelyiMap{self}")
    }
}

/// A critical point whose value lies outside `{0, 1, inf}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtraCritical {
    pub point: PrimeForm,
    /// The critical value, when the critical point is rational.
    pub value: Option<ProjPoint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fiber {
    pub target: Target,
    /// Prime divisors over the target with their ramification indices.
    pub points: Vec<(PrimeForm, u32)>,
}

impl Fiber {
    /// `Σ n_δ deg δ`.
    pub fn degree(&self) -> usize {
        self.points.iter().map(|(d, n)| *n as usize * d.degree()).sum()
    }

    /// `Σ b(δ) deg δ` with branch number `b = n - 1`.
    pub fn branching(&self) -> usize {
        self.points.iter().map(|(d, n)| (*n as usize - 1) * d.degree()).sum()
    }

    pub fn contains(&self, form: &PrimeForm) -> Option<u32> {
        self.points.iter().find(|(d, _)| d == form).map(|(_, n)| *n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamificationData {
    /// Fibers over 0, 1 and inf, in that order.
    pub fibers: [Fiber; 3],
    pub extra_critical: Vec<ExtraCritical>,
}

impl RamificationData {
    pub fn fiber(&self, t: Target) -> &Fiber {
        &self.fibers[t as usize]
    }

    pub fn is_belyi(&self) -> bool {
        self.extra_critical.is_empty()
    }

    /// The fiber containing `form`, if any.
    pub fn locate(&self, form: &PrimeForm) -> Option<(Target, u32)> {
        self.fibers.iter().find_map(|fb| fb.contains(form).map(|n| (fb.target, n)))
    }
}

pub fn ramification_data(map: &BelyiMap) -> RamificationData {
    let fibers = Target::ALL.map(|t| {
        let (_, factors) = map.fiber_form(t).factor();
        Fiber {
            target: t,
            points: factors.into_iter().map(|(d, n)| (PrimeForm::from_factor(d), n)).collect(),
        }
    });
    let mut extra_critical = Vec::new();
    let jac = map.jacobian();
    if !jac.is_zero() && jac.degree() > 0 {
        let (_, factors) = jac.factor();
        for (d, _) in factors {
            if d.degree() == 0 {
                continue;
            }
            let form = PrimeForm::from_factor(d);
            if fibers.iter().any(|fb| fb.contains(&form).is_some()) {
                continue;
            }
            let value = form.rational_root().map(|p| map.evaluate(&p));
            extra_critical.push(ExtraCritical { point: form, value });
        }
    }
    RamificationData { fibers, extra_critical }
}

pub fn is_belyi(map: &BelyiMap) -> bool {
    ramification_data(map).is_belyi()
}

/// `D_t = Σ α_δ δ` over the reduced fiber over `t`, with `α_δ = 1/m_j` when
/// `δ = Δ_j` and `1` otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackDivisor {
    pub target: Target,
    pub components: Vec<(PrimeForm, BigRational)>,
}

impl PullbackDivisor {
    pub fn degree(&self) -> BigRational {
        self.components
            .iter()
            .map(|(d, a)| a * BigInt::from(d.degree()))
            .fold(BigRational::zero(), |s, t| s + t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pullback {
    /// `D_0`, `D_1`, `D_inf`.
    pub divisors: [PullbackDivisor; 3],
}

impl Pullback {
    pub fn divisor(&self, t: Target) -> &PullbackDivisor {
        &self.divisors[t as usize]
    }

    pub fn degree_of(&self, t: Target) -> BigRational {
        self.divisor(t).degree()
    }

    /// `deg D = deg D_0 + deg D_1 + deg D_inf`.
    pub fn degree(&self) -> BigRational {
        self.divisors.iter().map(PullbackDivisor::degree).fold(BigRational::zero(), |s, t| s + t)
    }
}

/// Checks the Belyi property and that each component of `divisor` lies in
/// `f^-1({0, 1, inf})`.
pub fn check_admissible(map: &BelyiMap, divisor: &OrbifoldDivisor) -> Result<RamificationData> {
    let ram = ramification_data(map);
    if let Some(c) = ram.extra_critical.first() {
        let at = match &c.value {
            Some(v) => format!("{} -> {v}", c.point),
            None => c.point.to_string(),
        };
        return Err(Error::NotBelyi(at));
    }
    for (index, (form, _)) in divisor.components().iter().enumerate() {
        if ram.locate(form).is_none() {
            return Err(Error::ComponentOutsideFibers { index, form: form.to_string() });
        }
    }
    Ok(ram)
}

pub fn orbifold_pullback(map: &BelyiMap, divisor: &OrbifoldDivisor) -> Result<Pullback> {
    let ram = check_admissible(map, divisor)?;
    Ok(pullback_from(&ram, divisor))
}

fn pullback_from(ram: &RamificationData, divisor: &OrbifoldDivisor) -> Pullback {
    let divisors = Target::ALL.map(|t| PullbackDivisor {
        target: t,
        components: ram
            .fiber(t)
            .points
            .iter()
            .map(|(d, _)| {
                let alpha = match divisor.multiplicity_of(d) {
                    Some(m) => BigRational::new(BigInt::one(), BigInt::from(m)),
                    None => BigRational::one(),
                };
                (d.clone(), alpha)
            })
            .collect(),
    });
    Pullback { divisors }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeIdentity {
    /// `3 deg f - Σ b(δ) deg δ - Σ (1 - 1/m_j) deg Δ_j`.
    pub lhs: BigRational,
    /// `deg f + 2 - Σ (1 - 1/m_j) deg Δ_j`.
    pub rhs: BigRational,
    /// `deg D` summed directly from the pullback divisors.
    pub deg_d: BigRational,
    pub equal: bool,
}

pub fn verify_degree_identity(map: &BelyiMap, divisor: &OrbifoldDivisor) -> Result<DegreeIdentity> {
    let ram = check_admissible(map, divisor)?;
    let d = BigInt::from(map.degree());
    let branching: usize = ram.fibers.iter().map(Fiber::branching).sum();
    let weighted = divisor.weighted_degree();
    let lhs = BigRational::from_integer(BigInt::from(3) * &d - BigInt::from(branching)) - &weighted;
    let rhs = BigRational::from_integer(d + 2) - &weighted;
    let deg_d = pullback_from(&ram, divisor).degree();
    let equal = lhs == rhs && rhs == deg_d;
    Ok(DegreeIdentity { lhs, rhs, deg_d, equal })
}

/// Whether `deg D < deg f`.
pub fn transfer_general_type(map: &BelyiMap, divisor: &OrbifoldDivisor) -> Result<bool> {
    let deg_d = orbifold_pullback(map, divisor)?.degree();
    Ok(deg_d < BigRational::from_integer(BigInt::from(map.degree())))
}

/// Same as [`orbifold::is_general_type`] on the line, for cross-checks.
pub fn source_is_general_type(divisor: &OrbifoldDivisor) -> bool {
    orbifold::is_general_type(0, divisor)
}

/// The four maps whose compositions generate the test corpus.
pub fn basic_maps() -> [BelyiMap; 4] {
    ["x^2", "4*x*(1-x)", "1-x", "1/x"].map(|s| BelyiMap::parse(s).expect("valid"))
}
