use num_complex::Complex64;
use thiserror::Error;

/// Errors shared by all numerical modules.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("gamma-type function evaluated at a nonpositive integer: {0}")]
    GammaPole(Complex64),
    #[error("hypergeometric series did not converge within {max_terms} terms")]
    NoConvergence { max_terms: usize },
    #[error("hypergeometric denominator parameter {0} is a nonpositive integer reached before termination")]
    DenominatorPole(Complex64),
    #[error("no numerator parameter terminates the series")]
    NonTerminating,
    #[error("argument outside the function domain: {0}")]
    Domain(String),
    #[error("invalid quantum numbers: {0}")]
    QuantumNumbers(String),
    #[error("spectral parameter on a band boundary (lambda = {0})")]
    BandBoundary(f64),
    #[error("state does not belong to the requested spectral band")]
    BandMismatch,
    #[error("coordinate chart degenerates here: {0}")]
    ChartBoundary(String),
    #[error("floating-point overflow in {0}")]
    Overflow(&'static str),
    #[error("quadrature tolerance not met (estimate {estimate:e} > requested {requested:e})")]
    ToleranceNotMet { estimate: f64, requested: f64 },
    #[error("integrand does not appear to decay on the infinite tail")]
    NonDecay,
    #[error("normalization integral I(n,sigma) is not positive: {0}")]
    NonPositiveNorm(f64),
    #[error("division by near-zero radial value |S| = {0:e}")]
    NearZeroDivision(f64),
    #[error("{0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
