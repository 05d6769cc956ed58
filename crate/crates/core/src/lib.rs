//! Quantum Kepler-Coulomb problem on the single-sheeted hyperboloid
//! x^2 - x0^2 = R^2 (imaginary Lobachevsky space).
//!
//! The crate provides the radial solutions in spherical and
//! elliptic-parabolic coordinates, the discrete and continuous spectra,
//! normalization constants, connection and interbasis-expansion
//! coefficients, and spectral decompositions of test functions, together
//! with the special-function and quadrature machinery they need.

pub mod epii;
pub mod error;
pub mod expansion;
pub mod geometry;
pub mod interbasis;
pub mod quad;
pub mod radial;
pub mod specfun;
pub mod validate;

pub use error::{Error, Result};
