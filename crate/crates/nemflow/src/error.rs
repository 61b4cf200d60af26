//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by the analytic modules and the grid solver.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A point lies outside the domain where a formula is valid.
    #[error("domain error: {what} (|x| = {radius})")]
    Domain { what: &'static str, radius: f64 },

    /// Evaluation at a singular point.
    #[error("singular point: {0}")]
    Singular(&'static str),

    /// A requested index, degree or option is not available.
    #[error("unsupported {what}: {detail}")]
    Unsupported { what: &'static str, detail: String },

    /// Input violates a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A quadrature failed to converge.
    #[error("quadrature failure: {0}")]
    Quadrature(String),

    /// The anisotropic symbol is close to singular.
    #[error("near-singular symbol at direction {direction:?}: min singular value {sigma:.3e}")]
    NearSingular { direction: [f64; 3], sigma: f64 },

    /// A source term has a nonzero sphere mean, so a log term is present.
    #[error("log term present: sphere mean {mean:.3e}; the 1/|x| coefficient is undefined")]
    LogTerm { mean: f64 },

    /// The grid does not resolve the sphere.
    #[error("resolution error: {0}")]
    Resolution(String),

    /// The linear solver failed to reach its tolerance.
    #[error("linear solver stagnated after {iterations} iterations (residual {residual:.3e})")]
    Stagnation {
        iterations: usize,
        residual: f64,
        history: Vec<f64>,
    },

    /// The Picard map is not contracting.
    #[error("gamma too large for Picard: update ratios {ratios:?}")]
    NotContracting { ratios: Vec<f64> },

    /// The Picard iteration ran out of iterations before converging.
    #[error("Picard iteration budget of {iterations} exhausted (relative update {update:.3e})")]
    IterationBudget {
        iterations: usize,
        update: f64,
        history: Vec<f64>,
    },

    /// The drag does not have the expected uniaxial structure.
    #[error("symmetry violated: drag residual {residual:.3e} exceeds 5%")]
    SymmetryViolated { residual: f64 },

    /// Required derivative data was not supplied.
    #[error("missing derivative data: {0}")]
    MissingDerivative(&'static str),
}

/// Crate result alias.
pub type Result<T> = std::result::Result<T, Error>;
