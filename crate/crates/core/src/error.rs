use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:.3e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("mixing weight {0} outside [0, 1]")]
    InvalidWeight(f64),

    #[error("noise-ball sampler rejected {0} consecutive draws; radius too large")]
    RejectionOverflow(usize),

    #[error("coordinates do not describe a state (minimum Bell population {min_population:.3e})")]
    NotPositive { min_population: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("observable is degenerate; a nondegenerate observable is required")]
    DegenerateObservable,

    #[error("{0}")]
    Invariant(#[from] InvariantViolation),
}

pub type Result<T> = std::result::Result<T, Error>;

/// A named density-matrix invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Invariant {
    Dimensions,
    Finite,
    Hermitian,
    UnitTrace,
    PositiveSemidefinite,
    UnitNorm,
}

impl Invariant {
    pub fn name(self) -> &'static str {
        match self {
            Invariant::Dimensions => "dimensions",
            Invariant::Finite => "finite",
            Invariant::Hermitian => "hermitian",
            Invariant::UnitTrace => "trace",
            Invariant::PositiveSemidefinite => "positive-semidefinite",
            Invariant::UnitNorm => "unit-norm",
        }
    }
}

impl std::fmt::Display for Invariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{invariant} invariant violated: {detail}")]
pub struct InvariantViolation {
    pub invariant: Invariant,
    pub detail: String,
}

impl InvariantViolation {
    pub fn new(invariant: Invariant, detail: impl Into<String>) -> Self {
        Self {
            invariant,
            detail: detail.into(),
        }
    }
}
