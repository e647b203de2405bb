use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Precondition and input violations. Every variant names the violated
/// condition so front ends can report it verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero has no factorization, valuation or radical")]
    ZeroArgument,
    #[error("{0} is not a prime")]
    NotPrime(String),
    #[error("(0:0) is not a point of the projective line")]
    ZeroPoint,
    #[error("invalid form: {0}")]
    InvalidForm(String),
    #[error("form {0} is reducible over the rationals")]
    ReducibleForm(String),
    #[error("invalid orbifold divisor: {0}")]
    InvalidDivisor(String),
    #[error("height bound must be at least {min}, got {got}")]
    BoundTooSmall { min: u64, got: u64 },
    #[error("ratio {0} is degenerate (one of 0, 1, inf)")]
    DegenerateRatio(String),
    #[error("invalid abc triple: {0}")]
    InvalidTriple(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("map is not Belyi: critical values outside {{0, 1, inf}} at {0}")]
    NotBelyi(String),
    #[error("orbifold component {index} ({form}) is not contained in f^-1({{0,1,inf}})")]
    ComponentOutsideFibers { index: usize, form: String },
    #[error("invalid tower: {0}")]
    InvalidTower(String),
    #[error("tower is reducible: covers {0:?} have cancelling branch loci")]
    ReducibleTower(Vec<usize>),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("action is not faithful: nonzero element {0} acts trivially")]
    ActionNotFaithful(String),
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("diagonal action is not free: common stabilizers {0:?}")]
    NotFree(Vec<String>),
    #[error("chi(C x D) = {chi} is not divisible by the group order {order}")]
    NonIntegralEuler { chi: i64, order: u64 },
    #[error("invalid Chatelet surface: {0}")]
    InvalidSurface(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable name of the violated precondition.
    pub fn precondition(&self) -> &'static str {
        match self {
            Error::ZeroArgument => "nonzero_argument",
            Error::NotPrime(_) => "prime_argument",
            Error::ZeroPoint => "nonzero_point",
            Error::InvalidForm(_) => "valid_form",
            Error::ReducibleForm(_) => "irreducible_form",
            Error::InvalidDivisor(_) => "valid_divisor",
            Error::BoundTooSmall { .. } => "height_bound",
            Error::DegenerateRatio(_) => "nondegenerate_ratio",
            Error::InvalidTriple(_) => "valid_triple",
            Error::InvalidMap(_) => "valid_map",
            Error::NotBelyi(_) => "belyi_map",
            Error::ComponentOutsideFibers { .. } => "support_in_fibers",
            Error::InvalidTower(_) => "valid_tower",
            Error::ReducibleTower(_) => "irreducible_tower",
            Error::InvalidAction(_) => "valid_action",
            Error::ActionNotFaithful(_) => "faithful_action",
            Error::NotSubgroup(_) => "subgroup",
            Error::NotFree(_) => "free_action",
            Error::NonIntegralEuler { .. } => "integral_euler_characteristic",
            Error::InvalidSurface(_) => "valid_surface",
            Error::Parse(_) => "syntax",
        }
    }
}
