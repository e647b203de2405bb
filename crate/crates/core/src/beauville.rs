//! Fiber products of double covers of the line branched at rational
//! points, actions of `(Z/2)^m` by sign flips, and the invariants of the
//! quotient of a product of two such curves by a diagonal action.
//!
//! Curves are handled through branch data only. A tower of `n` double covers
//! has deck group `F_2^n`; a base point lying in the branch pairs of the
//! covers in `T` has inertia generated by the indicator vector `e_T`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::proj_line::ProjPoint;
use crate::{Error, Result};

/// Largest number of covers or generators accepted.
pub const MAX_RANK: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerSpec {
    pairs: Vec<(ProjPoint, ProjPoint)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchPoint {
    pub point: ProjPoint,
    /// `e_T`: bit `j` set when cover `j` branches here.
    pub inertia: u32,
}

impl BranchPoint {
    /// Covers branching at this point, numbered from 1.
    pub fn covers(&self) -> Vec<usize> {
        (0..32).filter(|j| self.inertia >> j & 1 == 1).map(|j| j + 1).collect()
    }
}

impl TowerSpec {
    pub fn new(pairs: Vec<(ProjPoint, ProjPoint)>) -> Result<Self> {
        if pairs.is_empty() || pairs.len() > MAX_RANK {
            return Err(Error::InvalidTower(format!(
                "need between 1 and {MAX_RANK} covers, got {}",
                pairs.len()
            )));
        }
        for (i, (p, q)) in pairs.iter().enumerate() {
            if p == q {
                return Err(Error::InvalidTower(format!("cover {} is branched twice at {p}", i + 1)));
            }
        }
        let tower = TowerSpec { pairs };
        tower.check_irreducible()?;
        Ok(tower)
    }

    /// Parses pairs of point strings.
    pub fn from_strs<S: AsRef<str>>(pairs: &[[S; 2]]) -> Result<Self> {
        let parse = |s: &S| s.as_ref().parse::<ProjPoint>();
        let pairs = pairs.iter().map(|[p, q]| Ok((parse(p)?, parse(q)?))).collect::<Result<_>>()?;
        Self::new(pairs)
    }

    pub fn n(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(ProjPoint, ProjPoint)] {
        &self.pairs
    }

    /// Each subset of covers must have a nonempty mod-2 sum of branch loci.
    fn check_irreducible(&self) -> Result<()> {
        let points = self.branch_locus();
        // column j of the incidence matrix, as a bitmask over points
        let column = |j: usize| -> u64 {
            points
                .iter()
                .enumerate()
                .filter(|(_, b)| b.inertia >> j & 1 == 1)
                .fold(0u64, |acc, (i, _)| acc | 1 << i)
        };
        let cols: Vec<u64> = (0..self.n()).map(column).collect();
        for subset in 1u32..(1 << self.n()) {
            let sum = (0..self.n()).filter(|j| subset >> j & 1 == 1).fold(0, |acc, j| acc ^ cols[j]);
            if sum == 0 {
                return Err(Error::ReducibleTower(
                    (0..self.n()).filter(|j| subset >> j & 1 == 1).map(|j| j + 1).collect(),
                ));
            }
        }
        Ok(())
    }

    /// Distinct branch points in order of first appearance.
    pub fn branch_locus(&self) -> Vec<BranchPoint> {
        let mut out: Vec<BranchPoint> = Vec::new();
        for (j, (p, q)) in self.pairs.iter().enumerate() {
            for pt in [p, q] {
                match out.iter_mut().find(|b| &b.point == pt) {
                    Some(b) => b.inertia |= 1 << j,
                    None => out.push(BranchPoint { point: pt.clone(), inertia: 1 << j }),
                }
            }
        }
        out
    }

    /// Ramification points on the normalized tower: `2^(n-1)` over each
    /// branch point.
    pub fn ramification_points(&self) -> u64 {
        self.branch_locus().len() as u64 * (1u64 << (self.n() - 1))
    }
}

/// `2 - 2g = 2 * 2^n - (#branch points) * 2^(n-1)`.
pub fn tower_genus(t: &TowerSpec) -> u64 {
    let deg = 1i64 << t.n();
    let chi = 2 * deg - t.ramification_points() as i64;
    ((2 - chi) / 2) as u64
}

pub fn branch_locus(t: &TowerSpec) -> Vec<BranchPoint> {
    t.branch_locus()
}

/// `m` generators acting on an `n`-cover tower: generator `i` applies the
/// deck involution of cover `j` when bit `j` of `vectors[i]` is set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSpec {
    n: usize,
    vectors: Vec<u32>,
}

impl ActionSpec {
    pub fn new(n: usize, vectors: Vec<u32>) -> Result<Self> {
        if vectors.is_empty() || vectors.len() > MAX_RANK || n == 0 || n > MAX_RANK {
            return Err(Error::InvalidAction(format!(
                "need 1..={MAX_RANK} generators on 1..={MAX_RANK} covers"
            )));
        }
        if let Some(v) = vectors.iter().find(|v| **v >> n != 0) {
            return Err(Error::InvalidAction(format!("vector {v:#b} has more than {n} bits")));
        }
        Ok(ActionSpec { n, vectors })
    }

    /// From rows of 0/1 entries, entry `j` for cover `j + 1`.
    pub fn from_bits(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        let mut vectors = Vec::new();
        for row in rows {
            if row.len() != n {
                return Err(Error::InvalidAction("rows of different lengths".into()));
            }
            let mut v = 0u32;
            for (j, b) in row.iter().enumerate() {
                match b {
                    0 => {}
                    1 => v |= 1 << j,
                    _ => return Err(Error::InvalidAction(format!("entry {b} is not a bit"))),
                }
            }
            vectors.push(v);
        }
        Self::new(n, vectors)
    }

    pub fn m(&self) -> usize {
        self.vectors.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vectors(&self) -> &[u32] {
        &self.vectors
    }

    /// `ε(g)` for `g` in `F_2^m`.
    pub fn epsilon(&self, g: u32) -> u32 {
        self.vectors.iter().enumerate().filter(|(i, _)| g >> i & 1 == 1).fold(0, |acc, (_, v)| acc ^ v)
    }

    pub fn check_faithful(&self) -> Result<()> {
        match (1u32..(1 << self.m())).find(|&g| self.epsilon(g) == 0) {
            Some(g) => Err(Error::ActionNotFaithful(element_name(g))),
            None => Ok(()),
        }
    }

    /// `ε(F_2^m)` as a sorted list of vectors.
    pub fn image(&self) -> Vec<u32> {
        let set: BTreeSet<u32> = (0u32..(1 << self.m())).map(|g| self.epsilon(g)).collect();
        set.into_iter().collect()
    }
}

/// `g` in `F_2^m` as a word in generators `a, b, c, ...`; `1` for zero.
pub fn element_name(g: u32) -> String {
    if g == 0 {
        return "1".into();
    }
    (0..26).filter(|i| g >> i & 1 == 1).map(|i| (b'a' + i as u8) as char).collect()
}

fn check_compatible(t: &TowerSpec, a: &ActionSpec) -> Result<()> {
    if t.n() != a.n() {
        return Err(Error::InvalidAction(format!(
            "action on {} covers applied to a tower of {}",
            a.n(),
            t.n()
        )));
    }
    a.check_faithful()
}

/// Nonzero `g` fixing some point: `ε(g) = e_T` for a branch point.
pub fn stabilizer_elements(t: &TowerSpec, a: &ActionSpec) -> Result<BTreeSet<u32>> {
    check_compatible(t, a)?;
    let inertia: BTreeSet<u32> = t.branch_locus().iter().map(|b| b.inertia).collect();
    Ok((1u32..(1 << a.m())).filter(|&g| inertia.contains(&a.epsilon(g))).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreenessCertificate {
    pub free: bool,
    pub stabilizers_c: BTreeSet<u32>,
    pub stabilizers_d: BTreeSet<u32>,
    /// Elements fixing a point on both curves.
    pub common: Vec<u32>,
}

pub fn is_free_diagonal(
    tc: &TowerSpec,
    ac: &ActionSpec,
    td: &TowerSpec,
    ad: &ActionSpec,
) -> Result<FreenessCertificate> {
    if ac.m() != ad.m() {
        return Err(Error::InvalidAction(format!(
            "groups of rank {} and {} differ",
            ac.m(),
            ad.m()
        )));
    }
    let sc = stabilizer_elements(tc, ac)?;
    let sd = stabilizer_elements(td, ad)?;
    let common: Vec<u32> = sc.intersection(&sd).copied().collect();
    Ok(FreenessCertificate { free: common.is_empty(), stabilizers_c: sc, stabilizers_d: sd, common })
}

/// Genus of the quotient of the tower by a subgroup `h` of its deck group,
/// given by its elements.
pub fn quotient_genus(t: &TowerSpec, h: &[u32]) -> Result<u64> {
    let set: BTreeSet<u32> = h.iter().copied().collect();
    let n = t.n();
    if !set.contains(&0) || set.iter().any(|v| v >> n != 0) {
        return Err(Error::NotSubgroup(format!("{h:?} in F_2^{n}")));
    }
    for x in &set {
        for y in &set {
            if !set.contains(&(x ^ y)) {
                return Err(Error::NotSubgroup(format!("{h:?} is not closed under addition")));
            }
        }
    }
    let deg = (1i64 << n) / set.len() as i64;
    let ramified = t.branch_locus().iter().filter(|b| !set.contains(&b.inertia)).count() as i64;
    let chi = 2 * deg - ramified * deg / 2;
    Ok(((2 - chi) / 2) as u64)
}

/// Every subgroup of `F_2^n`.
pub fn subgroups(n: usize) -> Vec<Vec<u32>> {
    let mut found: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut frontier = vec![vec![0u32]];
    found.insert(vec![0]);
    while let Some(h) = frontier.pop() {
        for v in 1u32..(1 << n) {
            if h.contains(&v) {
                continue;
            }
            let mut bigger: Vec<u32> = h.iter().flat_map(|x| [*x, x ^ v]).collect();
            bigger.sort_unstable();
            bigger.dedup();
            if found.insert(bigger.clone()) {
                frontier.push(bigger);
            }
        }
    }
    found.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurfaceInvariants {
    #[serde(rename = "gC")]
    pub g_c: u64,
    #[serde(rename = "gD")]
    pub g_d: u64,
    pub chi_product: i64,
    #[serde(rename = "chi_S")]
    pub chi_s: i64,
    pub q: u64,
    pub pg: i64,
    pub double_fibres: [usize; 2],
    pub ramification_points: [u64; 2],
    pub free: bool,
}

pub fn surface_invariants(
    tc: &TowerSpec,
    ac: &ActionSpec,
    td: &TowerSpec,
    ad: &ActionSpec,
) -> Result<SurfaceInvariants> {
    let cert = is_free_diagonal(tc, ac, td, ad)?;
    if !cert.free {
        return Err(Error::NotFree(cert.common.iter().map(|g| element_name(*g)).collect()));
    }
    let g_c = tower_genus(tc);
    let g_d = tower_genus(td);
    let chi_product = (g_c as i64 - 1) * (g_d as i64 - 1);
    let order = 1i64 << ac.m();
    if chi_product % order != 0 {
        return Err(Error::NonIntegralEuler { chi: chi_product, order: order as u64 });
    }
    let chi_s = chi_product / order;
    let q = quotient_genus(tc, &ac.image())? + quotient_genus(td, &ad.image())?;
    Ok(SurfaceInvariants {
        g_c,
        g_d,
        chi_product,
        chi_s,
        q,
        pg: chi_s - 1 + q as i64,
        double_fibres: [tc.branch_locus().len(), td.branch_locus().len()],
        ramification_points: [tc.ramification_points(), td.ramification_points()],
        free: true,
    })
}

/// Two towers and the actions on them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeauvilleConfig {
    #[serde(rename = "covers_C")]
    pub covers_c: Vec<[String; 2]>,
    #[serde(rename = "covers_D")]
    pub covers_d: Vec<[String; 2]>,
    #[serde(rename = "action_C")]
    pub action_c: Vec<Vec<u8>>,
    #[serde(rename = "action_D")]
    pub action_d: Vec<Vec<u8>>,
}

/// A validated configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    pub tower_c: TowerSpec,
    pub action_c: ActionSpec,
    pub tower_d: TowerSpec,
    pub action_d: ActionSpec,
}

impl BeauvilleConfig {
    /// Six branch points `0..5` for `C`; for `D` the last pair reuses the
    /// point `3` of the second, so five branch points `0..4`.
    pub fn paper() -> Self {
        let pairs = |v: &[(&str, &str)]| v.iter().map(|(p, q)| [p.to_string(), q.to_string()]).collect();
        BeauvilleConfig {
            covers_c: pairs(&[("0", "1"), ("2", "3"), ("4", "5")]),
            covers_d: pairs(&[("0", "1"), ("2", "3"), ("4", "3")]),
            action_c: vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
            action_d: vec![vec![1, 0, 1], vec![1, 1, 1], vec![1, 1, 0]],
        }
    }

    pub fn build(&self) -> Result<Configuration> {
        Ok(Configuration {
            tower_c: TowerSpec::from_strs(&self.covers_c)?,
            action_c: ActionSpec::from_bits(&self.action_c)?,
            tower_d: TowerSpec::from_strs(&self.covers_d)?,
            action_d: ActionSpec::from_bits(&self.action_d)?,
        })
    }
}

impl Configuration {
    pub fn freeness(&self) -> Result<FreenessCertificate> {
        is_free_diagonal(&self.tower_c, &self.action_c, &self.tower_d, &self.action_d)
    }

    pub fn invariants(&self) -> Result<SurfaceInvariants> {
        surface_invariants(&self.tower_c, &self.action_c, &self.tower_d, &self.action_d)
    }
}

impl fmt::Display for BranchPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:?}", self.point, self.covers())
    }
}
