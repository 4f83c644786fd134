use crate::expr::ExprError;

/// Errors raised by the model, integration and spectral layers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(
        "h'(x) = {value} is not positive at x = {x}; h must be strictly increasing on the domain"
    )]
    NotIncreasing { x: f64, value: f64 },
    #[error("A = {0} must be below 1/4 so that k = sqrt(1 - 4A) is real")]
    CouplingTooLarge(f64),
    #[error("h({x}) = {value} is not positive; A != 0 needs h > 0 on the domain")]
    NonPositiveImage { x: f64, value: f64 },
    #[error("point x = {x} lies outside the domain ({xmin}, {xmax})")]
    OutsideDomain { x: f64, xmin: f64, xmax: f64 },
    #[error("h(x) vanishes at x = {x} while A != 0")]
    Singular { x: f64 },
    #[error("orbit left the admissible region at t = {t}")]
    DomainExit { t: f64 },
    #[error("trajectory never returned to the Poincare section")]
    NoCrossing,
    #[error("least-squares fit is degenerate: {0}")]
    DegenerateFit(String),
    #[error("grid coverage rule violated: {0}")]
    Coverage(String),
    #[error("non-finite coefficient at grid node {index}")]
    NonFinite { index: usize },
    #[error("inverse iteration did not converge after {sweeps} sweeps (residual {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("integrand is not integrable at xi = 0 (combined exponent {exponent})")]
    NonIntegrable { exponent: f64 },
    #[error("state is annihilated by {0}")]
    Annihilated(String),
    #[error("input is not an eigenstate: PDE residual {0:e}")]
    NotEigenstate(f64),
    #[error("generator {label} cannot be used here: {reason}")]
    InvalidGenerator { label: String, reason: String },
    #[error("von Roos parameters must satisfy alpha + beta + gamma = -1 (sum is {0})")]
    ParameterSum(f64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
