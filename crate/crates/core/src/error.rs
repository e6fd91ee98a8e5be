use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not symmetric: ‖A − Aᵀ‖_F = {residual:e} exceeds {bound:e}")]
    NotSymmetric { residual: f64, bound: f64 },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("multiplicity structure mismatch: {left:?} vs {right:?}")]
    Structure { left: Vec<usize>, right: Vec<usize> },

    #[error("dimension {n} exceeds the cap of {cap} for {what}; use sampling instead")]
    SizeCap { n: usize, cap: usize, what: &'static str },

    #[error("search produced more than {limit} results")]
    LimitExceeded { limit: usize },

    #[error("non-finite function value at {point:?}")]
    Evaluation { point: Vec<f64> },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("probe underflow at level {level}: |s| = {value:e}; try a larger displacement")]
    DegenerateProbe { level: usize, value: f64 },

    #[error("trajectory diverged at step {step}")]
    Divergence { step: usize },

    #[error("input error at line {line}: {message}")]
    Input { line: usize, message: String },
}

impl Error {
    /// True for errors produced by numerical breakdown rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::Evaluation { .. }
                | Error::DegenerateProbe { .. }
                | Error::Divergence { .. }
        )
    }
}
