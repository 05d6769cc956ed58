//! Special-function primitives: complex log-gamma/digamma, Gauss 2F1 with
//! complex parameters, terminating 4F3, and associated Legendre functions.

pub mod gamma;
pub mod hyp2f1;
pub mod hyp4f3;
pub mod legendre;

pub use gamma::{digamma, gamma, ln_abs_gamma_sq, ln_gamma, ln_gamma_diff};
pub use hyp2f1::{hyp2f1, hyp2f1_c, hyp2f1_xw, Hyp2F1Params};
pub use hyp4f3::hyp4f3_terminating;
pub use legendre::{legendre_p, ln_factorial, spherical_harmonic};
