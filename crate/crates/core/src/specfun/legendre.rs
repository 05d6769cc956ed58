//! Associated Legendre functions P_l^m(x) on [-1,1] in the positive Ferrers
//! convention (no Condon-Shortley factor), plus the matching spherical
//! harmonics.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// P_l^m(x) for integer l >= 0, 0 <= m <= l, x in [-1,1].
///
/// Convention: P_l^m(x) = (1-x^2)^{m/2} d^m/dx^m P_l(x), so P_1^1(0) = +1.
/// Computed by the diagonal seed P_m^m = (2m-1)!! (1-x^2)^{m/2} followed by
/// the upward l-recurrence, which is stable in this direction.
pub fn legendre_p(l: u32, m: u32, x: f64) -> Result<f64> {
    if m > l {
        return Err(Error::Domain(format!("legendre_p needs m <= l, got l={l} m={m}")));
    }
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("legendre_p needs |x| <= 1, got {x}")));
    }
    let s2 = (1.0 - x) * (1.0 + x); // 1 - x^2 without cancellation at |x| near 1
    let mut pmm = 1.0f64;
    if m > 0 {
        let s = s2.sqrt();
        let mut fact = 1.0;
        for _ in 0..m {
            pmm *= fact * s;
            fact += 2.0;
        }
    }
    if l == m {
        return Ok(pmm);
    }
    let mf = m as f64;
    let mut pm1 = pmm;
    let mut p = x * (2.0 * mf + 1.0) * pmm; // P_{m+1}^m
    for ll in (m + 2)..=l {
        let lf = ll as f64;
        let next = (x * (2.0 * lf - 1.0) * p - (lf + mf - 1.0) * pm1) / (lf - mf);
        pm1 = p;
        p = next;
    }
    Ok(p)
}

pub fn ln_factorial(n: u32) -> f64 {
    (2..=n as u64).map(|k| (k as f64).ln()).sum()
}

/// Spherical harmonic on the unit sphere,
///
///   Y_{lm} = (-1)^{(m+|m|)/2} sqrt((2l+1)/2 (l-|m|)!/(l+|m|)!)
///            P_l^{|m|}(cos theta) e^{i m phi} / sqrt(2 pi),
///
/// orthonormal with respect to sin(theta) dtheta dphi.
pub fn spherical_harmonic(l: u32, m: i32, theta: f64, phi: f64) -> Result<Complex64> {
    let am = m.unsigned_abs();
    if am > l {
        return Err(Error::QuantumNumbers(format!("|m| = {am} exceeds l = {l}")));
    }
    let p = legendre_p(l, am, theta.cos())?;
    let ln_norm = 0.5
        * (((2 * l + 1) as f64 / 2.0).ln() + ln_factorial(l - am) - ln_factorial(l + am)
            - (2.0 * std::f64::consts::PI).ln());
    let phase = if m > 0 && m % 2 != 0 { -1.0 } else { 1.0 };
    let e = Complex64::new(0.0, m as f64 * phi).exp();
    Ok(phase * ln_norm.exp() * p * e)
}
