//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero vector has no primitive part")]
    ZeroVector,
    #[error("dimension mismatch: expected rank {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("cone is not strongly convex (contains a line)")]
    NotPointed,
    #[error("fan is invalid: {0}")]
    InvalidFan(String),
    #[error("group translates of the fan do not intersect in common faces: {0}")]
    Overlap(String),
    #[error("subdivision ray {0} is not contained in the support of the fan")]
    RayNotInSupport(String),
    #[error("no cone of the fan is full-dimensional")]
    NotFullDimensional,
    #[error("support of the fan is not convex")]
    NonConvexSupport,
    #[error("matrix group closure exceeded budget of {0} elements")]
    ClosureBudgetExceeded(usize),
    #[error("matrix generator is not unimodular")]
    NotUnimodular,
    #[error("Cartan matrix is not of finite type: {0}")]
    NotFiniteType(String),
    #[error("operation requires the adjoint lattice form")]
    NotAdjoint,
    #[error("refinement budget of {0} orbit steps exceeded")]
    BudgetExceeded(usize),
    #[error("input fan is not stable under the given group")]
    NotStable,
    #[error("group stability was lost during refinement: {0}")]
    StabilityLost(String),
    #[error("refinement step did not decrease the multiplicity measure")]
    NoProgress,
    #[error("projectivity was lost during refinement")]
    ProjectivityLost,
    #[error("chamber fan saturation is not projective; preliminary subdivision required")]
    ChamberFanNotProjective,
    #[error("chamber point lies in no cone contained in the chamber")]
    NotCovering,
    #[error("recession images do not form a fan: {0}")]
    NotAFan(String),
    #[error("matrix is not unipotent")]
    NotUnipotent,
    #[error("fan has no ray off the fixed axis; a complete fan always has one")]
    NoRayOffAxis,
    #[error("orbit escape search exceeded bound {0}")]
    BoundExceeded(usize),
    #[error("linearization search exhausted the box with sup-norm bound {0}")]
    SearchExhausted(u64),
}

pub type Result<T> = std::result::Result<T, Error>;
