use thiserror::Error;

use crate::lattice::{FractionalPoint, LatticeVector};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a ray direction: zero vector")]
    NotARayDirection,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("denominator mismatch: expected {expected}, got {got}")]
    DenominatorMismatch { expected: u32, got: u32 },

    #[error("invalid denominator {0}: q must be at least {1}")]
    InvalidDenominator(u32, u32),

    #[error("enumeration too large: {count} elements exceeds cap {cap}")]
    EnumerationTooLarge { count: u128, cap: u64 },

    #[error("duplicate ray {0}")]
    DuplicateRay(LatticeVector),

    #[error("cone {0} is not pointed (contains a line)")]
    NonPointedCone(usize),

    #[error("ray {0} is not used by any maximal cone")]
    UnusedRay(usize),

    #[error("ray index {index} out of range in cone {cone}")]
    RayIndexOutOfRange { cone: usize, index: usize },

    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("fan is not verified complete ({0}); pass an explicit completeness override")]
    IncompleteFan(&'static str),

    #[error("polyhedron is unbounded in coordinate {0}")]
    Unbounded(usize),

    #[error("polyhedron is empty")]
    EmptyPolyhedron,

    #[error("coefficient count mismatch: {expected} rays, {got} coefficients")]
    CoefficientCount { expected: usize, got: usize },

    #[error("not regular on X: term {point} violates ray {ray}")]
    NotRegular { point: FractionalPoint, ray: usize },

    #[error("not diagonally split at q = {q}: class {class:?} has no interior representative")]
    NotDiagonallySplit { q: u32, class: Vec<i64> },

    #[error("cone {0} is not full-dimensional")]
    NotFullDimensional(usize),

    #[error("no representative system with ray spread below one exists at q = {0}")]
    NoNarrowRepresentatives(u32),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
