//! Gauss hypergeometric function 2F1(a,b;c;x) for complex parameters and
//! real argument x in [0,1).
//!
//! Strategy: direct series for x <= 1/2, the x -> 1-x linear transformation
//! for x > 1/2. When c-a-b sits within 1e-3 of an integer the two terms of
//! the transformation nearly cancel; that case is handled by pairing the
//! cancelling coefficients analytically, which stays accurate uniformly in
//! the distance to the degeneracy (including exactly on it).

use num_complex::Complex64;

use super::gamma::{digamma, ln_gamma, ln_gamma_diff};
use crate::error::{Error, Result};

/// Parameters of 2F1(a,b;c;x).
#[derive(Debug, Clone, Copy)]
pub struct Hyp2F1Params {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub x: f64,
}

const MAX_TERMS: usize = 100_000;
const TERM_TOL: f64 = 1e-17;
const DEGENERACY_WINDOW: f64 = 1e-3;

/// If z is a nonpositive integer (to f64 exactness), return -z.
fn nonpositive_int(z: Complex64) -> Option<u64> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        Some(-z.re as u64)
    } else {
        None
    }
}

/// exp(z) - 1 without cancellation for small z.
fn cexpm1(z: Complex64) -> Complex64 {
    let em = z.re.exp_m1();
    let (s, c) = z.im.sin_cos();
    let half = (0.5 * z.im).sin();
    Complex64::new(em * c - 2.0 * half * half, (em + 1.0) * s)
}

/// Direct Gauss series; caller guarantees |x| <= 1/2 or termination.
fn gauss_series(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    x: f64,
    terminate_at: Option<u64>,
) -> Result<Complex64> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut small_streak = 0;
    let cap = terminate_at.map(|n| n as usize).unwrap_or(MAX_TERMS);
    for k in 0..=cap {
        if terminate_at == Some(k as u64) {
            return Ok(sum);
        }
        let kf = k as f64;
        let den = c + kf;
        if den.norm() == 0.0 {
            return Err(Error::DenominatorPole(c));
        }
        term *= (a + kf) * (b + kf) / (den * (kf + 1.0)) * x;
        sum += term;
        if term.norm() < TERM_TOL * sum.norm().max(f64::MIN_POSITIVE) {
            small_streak += 1;
            if small_streak >= 3 {
                return Ok(sum);
            }
        } else {
            small_streak = 0;
        }
        if !sum.is_finite() {
            return Err(Error::Overflow("hyp2f1 series"));
        }
    }
    if terminate_at.is_some() {
        Ok(sum)
    } else {
        Err(Error::NoConvergence { max_terms: MAX_TERMS })
    }
}

/// Gamma-product coefficient exp(sum lnG(num) - sum lnG(den)).
/// Returns zero when a denominator sits on a pole; errors when a numerator
/// does.
fn gamma_coeff(nums: &[Complex64], dens: &[Complex64]) -> Result<Complex64> {
    for d in dens {
        if nonpositive_int(*d).is_some() {
            return Ok(Complex64::new(0.0, 0.0));
        }
    }
    let mut ln = Complex64::new(0.0, 0.0);
    for n in nums {
        ln += ln_gamma(*n)?;
    }
    for d in dens {
        ln -= ln_gamma(*d)?;
    }
    Ok(ln.exp())
}

/// Generic x -> 1-x connection (c-a-b away from integers).
fn transform_generic(a: Complex64, b: Complex64, c: Complex64, w: f64) -> Result<Complex64> {
    let s = c - a - b;
    let c1 = gamma_coeff(&[c, s], &[c - a, c - b])?;
    let t1 = if c1.norm() == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        c1 * gauss_series(a, b, Complex64::new(1.0, 0.0) - s, w, None)?
    };
    let c2 = gamma_coeff(&[c, -s], &[a, b])?;
    let t2 = if c2.norm() == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        c2 * (s * w.ln()).exp()
            * gauss_series(c - a, c - b, Complex64::new(1.0, 0.0) + s, w, None)?
    };
    Ok(t1 + t2)
}

/// x -> 1-x connection when s = c-a-b = m + eps with integer m >= 0 and
/// |eps| small. The k-th tail coefficient combines the two series as
///
///   A_k = pi/sin(pi s) [ P1_k/Gamma(k-m+1-eps) - w^eps P2_{k-m}/Gamma(k+1+eps) ]
///
/// and the bracket is evaluated through expm1 of an analytically formed
/// log-ratio, so no subtractive cancellation occurs for any |eps|.
fn transform_near_integer(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    w: f64,
    m: u64,
    eps: Complex64,
) -> Result<Complex64> {
    let ln_w = w.ln();
    let s = c - a - b;
    let one = Complex64::new(1.0, 0.0);
    let ln_gc = ln_gamma(c)?;
    let sign_m = if m % 2 == 0 { 1.0 } else { -1.0 };

    // head: k = 0 .. m-1, first series only (no cancellation there)
    let mut sum = Complex64::new(0.0, 0.0);
    if m > 0 {
        let head_coeff = gamma_coeff(&[c, s], &[c - a, c - b])?;
        if head_coeff.norm() > 0.0 {
            let mut poch = one; // (a)_k (b)_k / ((1-s)_k k!) w^k
            for k in 0..m {
                sum += head_coeff * poch;
                let kf = k as f64;
                poch *= (a + kf) * (b + kf) / ((one - s + kf) * (kf + 1.0)) * w;
            }
        }
    }

    // tail: k = m, m+1, ...
    let mf = m as f64;
    let exact = eps.norm() == 0.0;
    // ln P1_k at k = m, advanced incrementally afterwards
    let mut ln_p1 = ln_gamma(a + mf)? - ln_gamma(a)? + ln_gamma(b + mf)? - ln_gamma(b)?
        - ln_gamma(Complex64::new(mf + 1.0, 0.0))?
        - ln_gamma(c - a)?
        - ln_gamma(c - b)?;
    // ln Gamma(j+1-eps) at j = 0
    let mut ln_gj = ln_gamma(one - eps)?;
    // prefactor pi*Gamma(c)/sin(pi s) = (-1)^m pi Gamma(c)/sin(pi eps)
    let inv_sin = if exact {
        Complex64::new(0.0, 0.0) // unused
    } else {
        let se = (std::f64::consts::PI * eps).sin();
        Complex64::new(std::f64::consts::PI, 0.0) / se
    };
    let mut small_streak = 0;
    for j in 0..MAX_TERMS {
        let k = m + j as u64;
        let kf = k as f64;
        let jf = j as f64;
        let ln_wk = kf * ln_w;
        let term = if exact {
            let psi_sum = ln_w + digamma(a + kf)? + digamma(b + kf)?
                - digamma(Complex64::new(jf + 1.0, 0.0))?
                - digamma(Complex64::new(kf + 1.0, 0.0))?;
            -sign_m
                * (ln_gc + ln_p1 + ln_wk - ln_gamma(Complex64::new(jf + 1.0, 0.0))?).exp()
                * psi_sum
        } else {
            let delta = eps * ln_w
                + ln_gamma_diff(b + kf, eps)?
                + ln_gamma_diff(a + kf, eps)?
                + ln_gamma_diff(Complex64::new(jf + 1.0, 0.0), -eps)?
                - ln_gamma_diff(Complex64::new(kf + 1.0, 0.0), eps)?;
            sign_m * inv_sin * (ln_gc + ln_p1 + ln_wk - ln_gj).exp() * (-cexpm1(delta))
        };
        sum += term;
        if term.norm() < TERM_TOL * sum.norm().max(f64::MIN_POSITIVE) {
            small_streak += 1;
            if small_streak >= 3 {
                return Ok(sum);
            }
        } else {
            small_streak = 0;
        }
        if !sum.is_finite() {
            return Err(Error::Overflow("hyp2f1 near-integer tail"));
        }
        ln_p1 += (a + kf).ln() + (b + kf).ln() - (kf + 1.0).ln();
        ln_gj += (jf + 1.0 - eps).ln();
    }
    Err(Error::NoConvergence { max_terms: MAX_TERMS })
}

fn hyp2f1_inner(a: Complex64, b: Complex64, c: Complex64, x: f64, w: f64) -> Result<Complex64> {
    // terminating series win over everything else (and tolerate x = 1)
    let na = nonpositive_int(a);
    let nb = nonpositive_int(b);
    let nterm = match (na, nb) {
        (Some(i), Some(j)) => Some(i.min(j)),
        (Some(i), None) => Some(i),
        (None, Some(j)) => Some(j),
        (None, None) => None,
    };
    if let Some(nc) = nonpositive_int(c) {
        match nterm {
            Some(n) if n <= nc => {}
            _ => return Err(Error::DenominatorPole(c)),
        }
    }
    if let Some(n) = nterm {
        return gauss_series(a, b, c, x, Some(n));
    }
    if !(w > 0.0) {
        return Err(Error::Domain(format!("hyp2f1 requires x < 1 (1-x = {w:e})")));
    }
    if x <= 0.5 {
        return gauss_series(a, b, c, x, None);
    }
    let s = c - a - b;
    let m_round = s.re.round();
    let near = (s - m_round).norm() < DEGENERACY_WINDOW;
    if near && m_round < 0.0 {
        // Euler transformation flips the sign of c-a-b
        let pref = (s * w.ln()).exp();
        let inner = hyp2f1_inner(c - a, c - b, c, x, w)?;
        return Ok(pref * inner);
    }
    if near {
        let m = m_round as u64;
        return transform_near_integer(a, b, c, w, m, s - m_round);
    }
    transform_generic(a, b, c, w)
}

pub fn hyp2f1(p: &Hyp2F1Params) -> Result<Complex64> {
    let Hyp2F1Params { a, b, c, x } = *p;
    if !(0.0..1.0).contains(&x) && nonpositive_int(a).is_none() && nonpositive_int(b).is_none() {
        return Err(Error::Domain(format!("hyp2f1 requires x in [0,1), got {x}")));
    }
    if !x.is_finite() {
        return Err(Error::Domain(format!("hyp2f1 argument must be finite, got {x}")));
    }
    hyp2f1_inner(a, b, c, x, 1.0 - x)
}

/// Convenience wrapper.
pub fn hyp2f1_c(a: Complex64, b: Complex64, c: Complex64, x: f64) -> Result<Complex64> {
    hyp2f1(&Hyp2F1Params { a, b, c, x })
}

/// Variant taking 1-x precomputed without cancellation; needed when x is
/// exponentially close to 1 (the subtraction 1-x would lose all digits).
/// Requires w > 0 and x, w consistent.
pub fn hyp2f1_xw(a: Complex64, b: Complex64, c: Complex64, x: f64, w: f64) -> Result<Complex64> {
    if !(w > 0.0 && w <= 1.0) || x < 0.0 {
        return Err(Error::Domain(format!("hyp2f1_xw needs 0 <= x, 0 < 1-x <= 1, got x={x}, w={w}")));
    }
    hyp2f1_inner(a, b, c, x, w)
}
