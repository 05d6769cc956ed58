//! Separated solutions in the elliptic-parabolic coordinates t1, t2 on the
//! PlusHalf chart: S1(t1) S2(t2) e^{i m phi} with separation constant A.
//! For a fixed discrete energy level n the constant A has a continuous
//! branch A = k^2 > 0 and, when sigma = alpha R / n > 1, finitely many
//! discrete values A = -(sigma - n1 - n2 - 1)^2.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{EPCoords, Half, ModelParams};
use crate::quad::{self, QuadratureSpec};
use crate::specfun::{digamma, gamma, hyp2f1_c, hyp2f1_xw, ln_abs_gamma_sq, ln_factorial, ln_gamma};

/// Continuous-A state labels: energy level n, k = sqrt(A) > 0, and the
/// angular number m.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EPContinuous {
    pub n: u32,
    pub k: f64,
    pub m: i32,
    pub sigma: f64,
    pub alpha_r: f64,
}

impl EPContinuous {
    pub fn new(n: u32, k: f64, m: i32, mp: &ModelParams) -> Result<Self> {
        let ar = mp.alpha_r();
        if n < 1 || ((n * n) as f64) <= ar {
            return Err(Error::QuantumNumbers(format!(
                "level n={n} needs n >= 1 and n^2 > alpha R = {ar}"
            )));
        }
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::Domain("separation parameter k must be positive".into()));
        }
        Ok(Self { n, k, m, sigma: ar / n as f64, alpha_r: ar })
    }

    pub fn separation_constant(&self) -> f64 {
        self.k * self.k
    }

    /// 2 E R^2 for the level.
    pub fn energy_r2(&self) -> f64 {
        let d = self.n as f64 - self.sigma;
        -d * d + 1.0 - 2.0 * self.alpha_r
    }
}

/// Discrete-A state labels (n1, n2, m) with derived n = |m| + n1 - n2.
/// Admissibility follows the printed inequalities; states with sigma >= n
/// are admitted but have divergent half-space norm (see is_normalizable).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EPDiscrete {
    pub n1: u32,
    pub n2: u32,
    pub m: i32,
    pub n: u32,
    pub sigma: f64,
    pub alpha_r: f64,
}

impl EPDiscrete {
    pub fn new(n1: u32, n2: u32, m: i32, mp: &ModelParams) -> Result<Self> {
        let ar = mp.alpha_r();
        let am = m.unsigned_abs() as i64;
        let n = am + n1 as i64 - n2 as i64;
        if n < 1 {
            return Err(Error::QuantumNumbers(format!(
                "derived n = |m| + n1 - n2 = {n} must be positive"
            )));
        }
        let nf = n as f64;
        let amf = am as f64;
        let sigma = ar / nf;
        let ok = nf - sigma < amf
            && amf < nf + sigma
            && (n1 as f64) <= (nf + sigma - amf - 1.0) / 2.0
            && (n2 as f64) <= (amf - nf + sigma - 1.0) / 2.0
            && sigma - (n1 + n2) as f64 - 1.0 > 0.0;
        if !ok {
            return Err(Error::QuantumNumbers(format!(
                "(n1, n2, m) = ({n1}, {n2}, {m}) is not admissible at alpha R = {ar}"
            )));
        }
        Ok(Self { n1, n2, m, n: n as u32, sigma, alpha_r: ar })
    }

    pub fn separation_constant(&self) -> f64 {
        let d = self.sigma - (self.n1 + self.n2 + 1) as f64;
        -d * d
    }

    /// The half-space norm is finite (and the normalization constant real)
    /// only for sigma < n.
    pub fn is_normalizable(&self) -> bool {
        self.sigma < self.n as f64
    }
}

/// Every admissible (n1, n2) for the given m, ordered by (n1, n2).
pub fn discrete_ep_states(mp: &ModelParams, m: i32) -> Vec<EPDiscrete> {
    let bound = mp.alpha_r().ceil() as u32 + 2;
    let mut out = Vec::new();
    for n1 in 0..=bound {
        for n2 in 0..=bound {
            if let Ok(d) = EPDiscrete::new(n1, n2, m, mp) {
                out.push(d);
            }
        }
    }
    out
}

fn ln_1p_exp(u: f64) -> f64 {
    if u > 18.0 {
        u + (-u).exp().ln_1p()
    } else {
        u.exp().ln_1p()
    }
}

/// S1 for continuous A, parametrized by x = t1 and the exact complement
/// w = 1 - t1.
fn s1_cont_xw(x: f64, w: f64, s: &EPContinuous) -> Result<Complex64> {
    let am = s.m.unsigned_abs() as f64;
    let nf = s.n as f64;
    let ik = Complex64::new(0.0, s.k);
    let a = (Complex64::new(1.0 + nf + s.sigma + am, 0.0) - ik) / 2.0;
    let b = (Complex64::new(1.0 - nf - s.sigma + am, 0.0) - ik) / 2.0;
    let f = hyp2f1_xw(a, b, Complex64::new(am + 1.0, 0.0), x, w)?;
    // t1^{|m|/2} (1-t1)^{-ik/2}
    let pref = x.powf(am / 2.0) * (-ik / 2.0 * w.ln()).exp();
    Ok(pref * f)
}

pub fn s1_continuous(t1: f64, s: &EPContinuous) -> Result<Complex64> {
    if !(0.0..1.0).contains(&t1) {
        return Err(Error::Domain(format!("S1 needs 0 <= t1 < 1, got {t1}")));
    }
    s1_cont_xw(t1, 1.0 - t1, s)
}

/// Oscillation amplitude at the t1 = 1 edge: S1 -> 2 Re[kappa e^{iku/2}].
fn s1_edge_coefficient(s: &EPContinuous) -> Result<Complex64> {
    let [zp, zm, _, _] = gamma_args(s);
    let am = s.m.unsigned_abs() as f64;
    Ok(gamma(Complex64::new(am + 1.0, 0.0))? * gamma(Complex64::new(0.0, s.k))?
        / (gamma(zm)? * gamma(zp)?))
}

fn s2_edge_coefficient(s: &EPContinuous) -> Result<Complex64> {
    let [_, _, wp, wm] = gamma_args(s);
    let nf = s.n as f64;
    Ok(gamma(Complex64::new(nf - s.sigma + 1.0, 0.0))? * gamma(Complex64::new(0.0, s.k))?
        / (gamma(wm)? * gamma(wp)?))
}

/// S1 at t1 = 1 - e^{-u}; accurate arbitrarily close to the t1 = 1 edge.
pub fn s1_continuous_u(u: f64, s: &EPContinuous) -> Result<Complex64> {
    if !(u >= 0.0) {
        return Err(Error::Domain(format!("edge distance parameter must be >= 0, got {u}")));
    }
    let w = (-u).exp();
    if w < 1e-280 {
        // pure edge oscillation; corrections are O(w)
        let kap = s1_edge_coefficient(s)?;
        let v = 2.0 * (kap * Complex64::new(0.0, s.k * u / 2.0).exp()).re;
        return Ok(Complex64::new(v, 0.0));
    }
    s1_cont_xw(1.0 - w, w, s)
}

fn s2_cont_inner(ln_t2: f64, ln_t2m1: f64, x: f64, w: f64, s: &EPContinuous) -> Result<Complex64> {
    let am = s.m.unsigned_abs() as f64;
    let nf = s.n as f64;
    let ik = Complex64::new(0.0, s.k);
    let a = (Complex64::new(1.0 + nf - s.sigma + am, 0.0) - ik) / 2.0;
    let b = (Complex64::new(1.0 + nf - s.sigma - am, 0.0) - ik) / 2.0;
    let f = hyp2f1_xw(a, b, Complex64::new(nf - s.sigma + 1.0, 0.0), x, w)?;
    // t2^{(ik-n+sigma-1)/2} (t2-1)^{-ik/2}
    let pref = ((ik - nf + s.sigma - 1.0) / 2.0 * ln_t2 - ik / 2.0 * ln_t2m1).exp();
    Ok(pref * f)
}

pub fn s2_continuous(t2: f64, s: &EPContinuous) -> Result<Complex64> {
    if !(t2 > 1.0) {
        return Err(Error::Domain(format!("S2 needs t2 > 1, got {t2}")));
    }
    s2_cont_inner(t2.ln(), (t2 - 1.0).ln(), 1.0 / t2, (t2 - 1.0) / t2, s)
}

/// S2 at t2 = 1 + e^u; u may be any real (large negative reaches the
/// t2 = 1 edge, large positive the far tail).
pub fn s2_continuous_u(u: f64, s: &EPContinuous) -> Result<Complex64> {
    if u < -645.0 {
        let kap = s2_edge_coefficient(s)?;
        let v = 2.0 * (kap * Complex64::new(0.0, -s.k * u / 2.0).exp()).re;
        return Ok(Complex64::new(v, 0.0));
    }
    let e = u.exp();
    // x = 1/(1+e), w = e/(1+e)
    let (x, w) = if u >= 0.0 {
        let em = (-u).exp();
        (em / (1.0 + em), 1.0 / (1.0 + em))
    } else {
        (1.0 / (1.0 + e), e / (1.0 + e))
    };
    s2_cont_inner(ln_1p_exp(u), u, x, w, s)
}

fn gamma_args(s: &EPContinuous) -> [Complex64; 4] {
    let am = s.m.unsigned_abs() as f64;
    let nf = s.n as f64;
    let k2 = s.k / 2.0;
    [
        Complex64::new((am + 1.0 + nf + s.sigma) / 2.0, k2),
        Complex64::new((am + 1.0 - nf - s.sigma) / 2.0, k2),
        Complex64::new((am + 1.0 + nf - s.sigma) / 2.0, k2),
        Complex64::new((-am + 1.0 + nf - s.sigma) / 2.0, k2),
    ]
}

fn ln_sinh(x: f64) -> f64 {
    x + (-(-2.0 * x).exp()).ln_1p() - std::f64::consts::LN_2
}

/// Closed form of the integral of S1^2 over (0, 1).
pub fn norm_integral_s1(s: &EPContinuous) -> Result<f64> {
    let [zp, zm, _, _] = gamma_args(s);
    let am = s.m.unsigned_abs();
    let nf = s.n as f64;
    let pi = std::f64::consts::PI;
    let im_part = (digamma(zm)? - digamma(zp)?).im;
    let ln = (2.0 * pi).ln() + 2.0 * ln_factorial(am)
        - (nf + s.sigma).ln()
        - ln_sinh(pi * s.k)
        - ln_abs_gamma_sq(zp)?
        - ln_abs_gamma_sq(zm)?;
    Ok(ln.exp() * im_part)
}

/// Closed form of the integral of S2^2 over (1, infinity).
pub fn norm_integral_s2(s: &EPContinuous) -> Result<f64> {
    let [_, _, wp, wm] = gamma_args(s);
    let nf = s.n as f64;
    let pi = std::f64::consts::PI;
    let im_part = (digamma(wp)? + digamma(wm)?).im;
    let lg = ln_gamma(Complex64::new(nf - s.sigma, 0.0))?.re;
    let ln = (2.0 * pi * (nf - s.sigma)).ln() + 2.0 * lg
        - ln_sinh(pi * s.k)
        - ln_abs_gamma_sq(wp)?
        - ln_abs_gamma_sq(wm)?;
    Ok(ln.exp() * im_part)
}

/// Coefficient of delta(k - k') in the (1-t)^{-1}-weighted S1 overlap.
pub fn delta_coefficient_s1(s: &EPContinuous) -> Result<f64> {
    let [zp, zm, _, _] = gamma_args(s);
    let am = s.m.unsigned_abs();
    let pi = std::f64::consts::PI;
    let ln = 2.0 * (2.0 * pi).ln() + 2.0 * ln_factorial(am)
        - s.k.ln()
        - ln_sinh(pi * s.k)
        - ln_abs_gamma_sq(zp)?
        - ln_abs_gamma_sq(zm)?;
    Ok(ln.exp())
}

/// Coefficient of delta(k - k') in the (t-1)^{-1}-weighted S2 overlap.
pub fn delta_coefficient_s2(s: &EPContinuous) -> Result<f64> {
    let [_, _, wp, wm] = gamma_args(s);
    let nf = s.n as f64;
    let pi = std::f64::consts::PI;
    let lg = ln_gamma(Complex64::new(nf - s.sigma + 1.0, 0.0))?.re;
    let ln = 2.0 * (2.0 * pi).ln() + 2.0 * lg
        - s.k.ln()
        - ln_sinh(pi * s.k)
        - ln_abs_gamma_sq(wp)?
        - ln_abs_gamma_sq(wm)?;
    Ok(ln.exp())
}

/// The digamma combination entering the continuous normalization constant.
pub fn i_factor(s: &EPContinuous) -> Result<f64> {
    let [zp, zm, wp, wm] = gamma_args(s);
    let nf = s.n as f64;
    Ok(((nf - s.sigma) * (digamma(zm)? - digamma(zp)?)
        + (nf + s.sigma) * (digamma(wp)? + digamma(wm)?))
    .im)
}

/// Normalization constant of Psi = N S1 S2 e^{i m phi} against the
/// half-space condition (Psi_k, Psi_k') = pi delta(k - k'). Equivalent to
/// N^2 R^3/2 (D1 J2 + J1 D2) = 1 in terms of the closed-form integrals.
pub fn normalization_constant_continuous(s: &EPContinuous, mp: &ModelParams) -> Result<f64> {
    let [zp, zm, wp, wm] = gamma_args(s);
    let nf = s.n as f64;
    let am = s.m.unsigned_abs();
    let pi = std::f64::consts::PI;
    let i = i_factor(s)?;
    if !(i > 0.0) {
        return Err(Error::NonPositiveNorm(i));
    }
    let lg = ln_gamma(Complex64::new(nf - s.sigma + 1.0, 0.0))?.re;
    let ln = 0.5 * s.k.ln()
        + ln_sinh(pi * s.k)
        + 0.5 * (nf * nf - s.sigma * s.sigma).ln()
        + 0.5 * (ln_abs_gamma_sq(zp)? + ln_abs_gamma_sq(zm)? + ln_abs_gamma_sq(wp)? + ln_abs_gamma_sq(wm)?)
        - std::f64::consts::LN_2
        - 1.5 * pi.ln()
        - 1.5 * mp.r.ln()
        - lg
        - ln_factorial(am)
        - 0.5 * i.ln();
    Ok(ln.exp())
}

fn s1_disc_xw(x: f64, neg_ln_w: f64, d: &EPDiscrete) -> Result<f64> {
    let am = d.m.unsigned_abs() as f64;
    let nf = d.n as f64;
    let e1 = -(d.n1 as f64) + (nf + d.sigma - am - 1.0) / 2.0;
    let f = hyp2f1_c(
        Complex64::new(-(d.n1 as f64), 0.0),
        Complex64::new(nf + d.sigma - d.n1 as f64, 0.0),
        Complex64::new(am + 1.0, 0.0),
        x,
    )?;
    Ok(x.powf(am / 2.0) * (-neg_ln_w * e1).exp() * f.re)
}

pub fn s1_discrete(t1: f64, d: &EPDiscrete) -> Result<f64> {
    if !(0.0..1.0).contains(&t1) {
        return Err(Error::Domain(format!("S1 needs 0 <= t1 < 1, got {t1}")));
    }
    s1_disc_xw(t1, -(1.0 - t1).ln(), d)
}

/// Discrete S1 at t1 = 1 - e^{-u}.
pub fn s1_discrete_u(u: f64, d: &EPDiscrete) -> Result<f64> {
    if !(u >= 0.0) {
        return Err(Error::Domain(format!("edge distance parameter must be >= 0, got {u}")));
    }
    s1_disc_xw(1.0 - (-u).exp(), u, d)
}

fn s2_disc_inner(ln_t2: f64, ln_t2m1: f64, x: f64, d: &EPDiscrete) -> Result<f64> {
    let am = d.m.unsigned_abs() as f64;
    let nf = d.n as f64;
    let e2 = -(d.n2 as f64) + (am - nf + d.sigma - 1.0) / 2.0;
    let f = hyp2f1_c(
        Complex64::new(-(d.n2 as f64), 0.0),
        Complex64::new(am - d.n2 as f64, 0.0),
        Complex64::new(nf - d.sigma + 1.0, 0.0),
        x,
    )?;
    Ok(((d.n2 as f64 - am / 2.0) * ln_t2 + e2 * ln_t2m1).exp() * f.re)
}

pub fn s2_discrete(t2: f64, d: &EPDiscrete) -> Result<f64> {
    if !(t2 > 1.0) {
        return Err(Error::Domain(format!("S2 needs t2 > 1, got {t2}")));
    }
    s2_disc_inner(t2.ln(), (t2 - 1.0).ln(), 1.0 / t2, d)
}

/// Discrete S2 at t2 = 1 + e^u.
pub fn s2_discrete_u(u: f64, d: &EPDiscrete) -> Result<f64> {
    let x = if u >= 0.0 {
        let em = (-u).exp();
        em / (1.0 + em)
    } else {
        1.0 / (1.0 + u.exp())
    };
    s2_disc_inner(ln_1p_exp(u), u, x, d)
}

/// Normalization constant giving half-space norm 1/2; only the
/// sigma < n states have one.
pub fn normalization_constant_discrete(d: &EPDiscrete, mp: &ModelParams) -> Result<f64> {
    let nf = d.n as f64;
    if !d.is_normalizable() {
        return Err(Error::NonPositiveNorm(nf * nf - d.sigma * d.sigma));
    }
    let am = d.m.unsigned_abs();
    let amf = am as f64;
    let re = |x: f64| ln_gamma(Complex64::new(x, 0.0)).map(|v| v.re);
    let ln = 0.5 * ((nf * nf - d.sigma * d.sigma) * (d.sigma - (d.n1 + d.n2) as f64 - 1.0)).ln()
        - ln_factorial(am)
        - re(nf - d.sigma + 1.0)?
        + 0.5
            * (ln_factorial(am + d.n1) + ln_factorial(am - d.n2 - 1)
                - nf.ln()
                - 3.0 * mp.r.ln()
                - ln_factorial(d.n1)
                - ln_factorial(d.n2))
        + 0.5
            * (re(amf + d.sigma - d.n2 as f64)? + re(amf + d.n1 as f64 - d.sigma + 1.0)?
                - re(d.sigma - d.n1 as f64)?
                - re(d.sigma - d.n2 as f64)?);
    Ok(ln.exp())
}

/// Continuum wave function N S1 S2 e^{i m phi} on the PlusHalf chart.
pub fn wavefunction_continuous(c: &EPCoords, s: &EPContinuous, mp: &ModelParams) -> Result<Complex64> {
    if c.half != Half::PlusHalf {
        return Err(Error::ChartBoundary("separated states live on the x0 + x3 > 0 chart".into()));
    }
    let n = normalization_constant_continuous(s, mp)?;
    let phase = Complex64::new(0.0, s.m as f64 * c.phi).exp();
    Ok(n * s1_continuous(c.t1, s)? * s2_continuous(c.t2, s)? * phase)
}

/// Discrete wave function N S1 S2 e^{i m phi}/sqrt(2 pi).
pub fn wavefunction_discrete(c: &EPCoords, d: &EPDiscrete, mp: &ModelParams) -> Result<Complex64> {
    if c.half != Half::PlusHalf {
        return Err(Error::ChartBoundary("separated states live on the x0 + x3 > 0 chart".into()));
    }
    let n = normalization_constant_discrete(d, mp)?;
    let phase = Complex64::new(0.0, d.m as f64 * c.phi).exp();
    Ok(n * s1_discrete(c.t1, d)? * s2_discrete(c.t2, d)? * phase
        / (2.0 * std::f64::consts::PI).sqrt())
}

/// Half-space overlap of two discrete states with the same m, by
/// quadrature in edge-resolving variables. Equals 1/2 on the diagonal of
/// normalized states.
pub fn half_space_overlap_discrete(
    da: &EPDiscrete,
    db: &EPDiscrete,
    mp: &ModelParams,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if da.m != db.m {
        return Ok(0.0);
    }
    // dV splits into (dt1/(1-t1)) dt2 + dt1 (dt2/(t2-1)); with
    // t1 = 1 - e^{-u}, t2 = 1 + e^{v} each factor integral is smooth
    let a1 = quad::integrate_semi_infinite_re(
        &mut |u| s1_discrete_u(u, da).unwrap() * s1_discrete_u(u, db).unwrap(),
        0.0,
        spec,
    )?
    .require_converged()?
    .re();
    let b1 = quad::integrate_semi_infinite_re(
        &mut |u| {
            let e = (-u).exp();
            s1_discrete_u(u, da).unwrap() * s1_discrete_u(u, db).unwrap() * e
        },
        0.0,
        spec,
    )?
    .require_converged()?
    .re();
    let a2 = quad::integrate_real_line_re(
        &mut |v| s2_discrete_u(v, da).unwrap() * s2_discrete_u(v, db).unwrap(),
        spec,
    )?
    .require_converged()?
    .re();
    let b2 = quad::integrate_real_line_re(
        &mut |v| {
            // once the decaying product has underflowed, e^v may overflow;
            // skip the weight to avoid 0 * inf
            let g = s2_discrete_u(v, da).unwrap() * s2_discrete_u(v, db).unwrap();
            if g == 0.0 {
                0.0
            } else {
                g * v.exp()
            }
        },
        spec,
    )?
    .require_converged()?
    .re();
    let na = normalization_constant_discrete(da, mp)?;
    let nb = normalization_constant_discrete(db, mp)?;
    Ok(na * nb * mp.r.powi(3) / 4.0 * (a1 * b2 + b1 * a2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma;

    fn model(alpha: f64) -> ModelParams {
        ModelParams::new(1.0, alpha).unwrap()
    }

    fn state(alpha: f64, n: u32, k: f64, m: i32) -> EPContinuous {
        EPContinuous::new(n, k, m, &model(alpha)).unwrap()
    }

    #[test]
    fn s1_at_origin() {
        let s0 = state(0.5, 1, 0.9, 0);
        assert!((s1_continuous(0.0, &s0).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let s1 = state(0.5, 1, 0.9, 1);
        assert!(s1_continuous(0.0, &s1).unwrap().norm() == 0.0);
    }

    #[test]
    fn continuous_realness_and_oracles() {
        let s = state(0.5, 1, 0.9, 1);
        let v1 = s1_continuous(0.4, &s).unwrap();
        assert!((v1.re - 0.66487481365165192416).abs() < 1e-13, "S1 = {v1}");
        assert!(v1.im.abs() < 1e-10 * v1.re.abs());
        let v2 = s2_continuous(3.7, &s).unwrap();
        assert!((v2.re - 0.38196604139091489617).abs() < 1e-13, "S2 = {v2}");
        assert!(v2.im.abs() < 1e-10 * v2.re.abs());
        // u-parametrized entry points agree with the direct ones
        let u = 0.7f64;
        let t1 = 1.0 - (-u).exp();
        let a = s1_continuous_u(u, &s).unwrap();
        let b = s1_continuous(t1, &s).unwrap();
        assert!((a - b).norm() < 1e-13);
        let t2 = 1.0 + u.exp();
        let c = s2_continuous_u(u, &s).unwrap();
        let d = s2_continuous(t2, &s).unwrap();
        assert!((c - d).norm() < 1e-13);
    }

    fn d1(f: &dyn Fn(f64) -> f64, t: f64, h: f64) -> f64 {
        (f(t - 2.0 * h) - 8.0 * f(t - h) + 8.0 * f(t + h) - f(t + 2.0 * h)) / (12.0 * h)
    }
    fn d2(f: &dyn Fn(f64) -> f64, t: f64, h: f64) -> f64 {
        (-f(t - 2.0 * h) + 16.0 * f(t - h) - 30.0 * f(t) + 16.0 * f(t + h) - f(t + 2.0 * h))
            / (12.0 * h * h)
    }

    fn er2(n: u32, ar: f64) -> f64 {
        let sig = ar / n as f64;
        let d = n as f64 - sig;
        // 2 E R^2 = Lambda_n + 1 - 2 alpha R
        -d * d + 1.0 - 2.0 * ar
    }

    #[test]
    fn separated_ode_residuals() {
        // (t^2 - t) S'' + (2t - 1) S' + [c0 + m^2/(4t) + A/(4(t-1))] S = 0
        // with c0 = (E R^2 -+ alpha R)/2; the m^2 term enters with plus
        // sign (fitted numerically, consistent with the 3D Hamiltonian)
        let ar = 0.5;
        let s = state(ar, 1, 0.9, 1);
        let a_const = s.separation_constant();
        let e2 = er2(1, ar) / 2.0; // E R^2
        let m2 = 1.0;
        let h = 1e-3;
        let f1 = |t: f64| s1_continuous(t, &s).unwrap().re;
        for i in 0..50 {
            let t = 0.05 + 0.85 * i as f64 / 49.0;
            let res = (t * t - t) * d2(&f1, t, h)
                + (2.0 * t - 1.0) * d1(&f1, t, h)
                + ((e2 - ar) / 2.0 + m2 / (4.0 * t) + a_const / (4.0 * (t - 1.0))) * f1(t);
            assert!(res.abs() < 1e-7 * (f1(t).abs() + 1.0), "S1 residual {res:e} at t={t}");
        }
        let f2 = |t: f64| s2_continuous(t, &s).unwrap().re;
        for i in 0..50 {
            let t = 1.1 + 6.9 * i as f64 / 49.0;
            let res = (t * t - t) * d2(&f2, t, h)
                + (2.0 * t - 1.0) * d1(&f2, t, h)
                + ((e2 + ar) / 2.0 + m2 / (4.0 * t) + a_const / (4.0 * (t - 1.0))) * f2(t);
            assert!(res.abs() < 1e-7 * (f2(t).abs() + 1.0), "S2 residual {res:e} at t={t}");
        }
        // discrete states solve the same equations with A < 0
        let mp = model(6.5);
        let d = EPDiscrete::new(0, 0, 3, &mp).unwrap();
        let ad = d.separation_constant();
        let e2d = er2(3, 6.5) / 2.0;
        let g1 = |t: f64| s1_discrete(t, &d).unwrap();
        let g2 = |t: f64| s2_discrete(t, &d).unwrap();
        for i in 0..20 {
            let t = 0.1 + 0.8 * i as f64 / 19.0;
            let res = (t * t - t) * d2(&g1, t, h)
                + (2.0 * t - 1.0) * d1(&g1, t, h)
                + ((e2d - 6.5) / 2.0 + 9.0 / (4.0 * t) + ad / (4.0 * (t - 1.0))) * g1(t);
            assert!(res.abs() < 1e-7 * (g1(t).abs() + 1.0), "disc S1 residual {res:e} at t={t}");
            let t2 = 1.2 + 5.0 * i as f64 / 19.0;
            let res = (t2 * t2 - t2) * d2(&g2, t2, h)
                + (2.0 * t2 - 1.0) * d1(&g2, t2, h)
                + ((e2d + 6.5) / 2.0 + 9.0 / (4.0 * t2) + ad / (4.0 * (t2 - 1.0))) * g2(t2);
            assert!(res.abs() < 1e-7 * (g2(t2).abs() + 1.0), "disc S2 residual {res:e} at t={t2}");
        }
    }

    #[test]
    fn green_identity() {
        // int_a^b [2R^2(E - E') + (A - A')/(t-1)] S S' dt
        //   = -4 [t(t-1)(S' dS/dt - S dS'/dt)]_a^b
        let spec = QuadratureSpec::validation();
        let h = 1e-4;
        let cases: [(EPContinuous, EPContinuous); 2] = [
            (state(0.5, 1, 0.9, 1), state(0.5, 1, 1.7, 1)),
            (state(0.5, 1, 0.9, 1), state(0.5, 2, 1.3, 1)),
        ];
        for (sa, sb) in cases {
            let fa = |t: f64| s1_continuous(t, &sa).unwrap().re;
            let fb = |t: f64| s1_continuous(t, &sb).unwrap().re;
            let de = er2(sa.n, 0.5) - er2(sb.n, 0.5);
            let da = sa.separation_constant() - sb.separation_constant();
            let (a, b) = (0.2, 0.7);
            let lhs = quad::integrate_finite_re(
                &mut |t| (de + da / (t - 1.0)) * fa(t) * fb(t),
                a,
                b,
                &spec,
            )
            .unwrap()
            .re();
            let bdry = |t: f64| t * (t - 1.0) * (fb(t) * d1(&fa, t, h) - fa(t) * d1(&fb, t, h));
            let rhs = -4.0 * (bdry(b) - bdry(a));
            assert!((lhs - rhs).abs() < 1e-7 * rhs.abs().max(1.0), "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn closed_norm_integrals_match_quadrature() {
        let s = state(0.5, 1, 0.9, 1);
        let spec = QuadratureSpec::new(crate::quad::Scheme::AdaptiveGK, 1e-10, 1e-13, 6000).unwrap();
        let j1c = norm_integral_s1(&s).unwrap();
        assert!((j1c - 0.52146443586372570165).abs() < 1e-12);
        let j1q = quad::integrate_semi_infinite_re(
            &mut |u| {
                let v = s1_continuous_u(u, &s).unwrap().re;
                v * v * (-u).exp()
            },
            0.0,
            &spec,
        )
        .unwrap()
        .re();
        assert!((j1q - j1c).abs() < 1e-7 * j1c, "quad {j1q} vs closed {j1c}");
        let j2c = norm_integral_s2(&s).unwrap();
        assert!((j2c - 1.9823800962259236933).abs() < 1e-12);
        let j2q = quad::integrate_real_line_re(
            &mut |v| {
                let w = s2_continuous_u(v, &s).unwrap().re;
                let g = w * w;
                if g == 0.0 {
                    0.0
                } else {
                    g * v.exp()
                }
            },
            &spec,
        )
        .unwrap()
        .re();
        assert!((j2q - j2c).abs() < 1e-7 * j2c, "quad {j2q} vs closed {j2c}");
    }

    #[test]
    fn delta_coefficients_from_connection_amplitude() {
        // towards its oscillatory edge each S behaves as 2 Re[kappa e^{iku/2}];
        // the delta coefficient is 4 pi |kappa|^2
        let s = state(0.5, 1, 0.9, 1);
        let d1v = delta_coefficient_s1(&s).unwrap();
        assert!((d1v - 2.9252736994303668394).abs() < 1e-12);
        let [zp, zm, _, _] = gamma_args(&s);
        let kap = gamma(Complex64::new(2.0, 0.0)).unwrap()
            * gamma(Complex64::new(0.0, s.k)).unwrap()
            / (gamma(zm).unwrap() * gamma(zp).unwrap());
        assert!((d1v - 4.0 * std::f64::consts::PI * kap.norm_sqr()).abs() < 1e-12 * d1v);
        // numeric check of the asymptote deep in the edge region
        for u in [25.0f64, 28.0] {
            let v = s1_continuous_u(u, &s).unwrap().re;
            let asym = 2.0 * (kap * Complex64::new(0.0, s.k * u / 2.0).exp()).re;
            assert!((v - asym).abs() < 1e-8, "u={u}: {v} vs {asym}");
        }
        let d2v = delta_coefficient_s2(&s).unwrap();
        assert!(d2v > 0.0);
        // same amplitude structure for S2 at t2 -> 1+
        let [_, _, wp, wm] = gamma_args(&s);
        let c = Complex64::new(s.n as f64 - s.sigma + 1.0, 0.0);
        let kap2 = gamma(c).unwrap() * gamma(Complex64::new(0.0, s.k)).unwrap()
            / (gamma(wm).unwrap() * gamma(wp).unwrap());
        assert!((d2v - 4.0 * std::f64::consts::PI * kap2.norm_sqr()).abs() < 1e-12 * d2v);
        for v in [-25.0f64, -28.0] {
            let w = s2_continuous_u(v, &s).unwrap().re;
            let asym = 2.0 * (kap2 * Complex64::new(0.0, -s.k * v / 2.0).exp()).re;
            assert!((w - asym).abs() < 1e-8, "v={v}: {w} vs {asym}");
        }
    }

    #[test]
    fn continuous_normalization_constant() {
        let mp = model(0.5);
        let s = state(0.5, 1, 0.9, 1);
        let n = normalization_constant_continuous(&s, &mp).unwrap();
        assert!((n - 0.52942585654365030677).abs() < 1e-12, "N = {n}");
        // defining identity N^2 R^3/2 (D1 J2 + J1 D2) = 1
        let lhs = n * n / 2.0
            * (delta_coefficient_s1(&s).unwrap() * norm_integral_s2(&s).unwrap()
                + norm_integral_s1(&s).unwrap() * delta_coefficient_s2(&s).unwrap());
        assert!((lhs - 1.0).abs() < 1e-12);
        // more pinned values, including the alpha = 0 reduction
        let cases = [
            (0.0, 1, 0.9, 1, 0.40458984062221759707),
            (0.0, 2, 1.7, 1, 1.3563412879500613614),
            (0.5, 2, 2.1, -3, 2.1623220066702045622),
            (6.5, 3, 1.3, 2, 4.4430828656759394562),
        ];
        for (al, n, k, m, want) in cases {
            let mp = model(al);
            let s = state(al, n, k, m);
            let got = normalization_constant_continuous(&s, &mp).unwrap();
            assert!((got - want).abs() < 1e-12 * want, "({al},{n},{k},{m}): {got}");
        }
    }

    #[test]
    fn discrete_enumeration() {
        // sigma < 1 for every level: no discrete A at all
        assert!(discrete_ep_states(&model(0.5), 1).is_empty());
        assert!(discrete_ep_states(&model(0.5), 2).is_empty());
        // alpha R = 2.56: m = 1 admits the (non-normalizable) n = 1 state,
        // m = 2 the normalizable n = 2 one
        let mp = model(2.56);
        let m1 = discrete_ep_states(&mp, 1);
        assert_eq!(m1.len(), 1);
        assert_eq!((m1[0].n1, m1[0].n2, m1[0].n), (0, 0, 1));
        assert!(!m1[0].is_normalizable());
        assert!((m1[0].separation_constant() - -2.4336).abs() < 1e-12);
        let m2 = discrete_ep_states(&mp, 2);
        let labels: Vec<_> = m2.iter().map(|d| (d.n1, d.n2, d.n)).collect();
        assert_eq!(labels, vec![(0, 0, 2), (0, 1, 1)]);
        assert!(m2[0].is_normalizable());
        assert!(!m2[1].is_normalizable());
        // alpha R = 6.5, m = 3
        let states = discrete_ep_states(&model(6.5), 3);
        let labels: Vec<_> = states.iter().map(|d| (d.n1, d.n2, d.n)).collect();
        assert_eq!(labels, vec![(0, 0, 3), (0, 1, 2), (0, 2, 1), (1, 3, 1)]);
        assert!(states[0].is_normalizable());
        assert!(states[1..].iter().all(|d| !d.is_normalizable()));
        let labels: Vec<_> =
            discrete_ep_states(&model(6.5), 2).iter().map(|d| (d.n1, d.n2, d.n)).collect();
        assert_eq!(labels, vec![(0, 0, 2), (0, 1, 1), (1, 0, 3), (1, 1, 2), (1, 2, 1), (2, 3, 1)]);
    }

    #[test]
    fn discrete_norm_constants() {
        let cases = [
            (2.56, 0u32, 0u32, 2, 0.76611585771523367873),
            (6.5, 0, 0, 3, 3.9587790510177228414),
            (6.5, 1, 0, 2, 1.6795677073163263223),
            (6.5, 0, 1, 4, 1.0941487283454169819),
            (11.0, 0, 0, 4, 11.943222734434773510),
            (11.0, 1, 0, 4, 5.9965582867159077264),
        ];
        for (al, n1, n2, m, want) in cases {
            let mp = model(al);
            let d = EPDiscrete::new(n1, n2, m, &mp).unwrap();
            let got = normalization_constant_discrete(&d, &mp).unwrap();
            assert!((got - want).abs() < 1e-12 * want, "({al},{n1},{n2},{m}): {got}");
        }
        // non-normalizable state refuses
        let mp = model(2.56);
        let d = EPDiscrete::new(0, 0, 1, &mp).unwrap();
        assert!(matches!(normalization_constant_discrete(&d, &mp), Err(Error::NonPositiveNorm(_))));
    }

    #[test]
    fn discrete_half_space_norms_and_orthogonality() {
        let spec = QuadratureSpec::validation();
        let mp = model(2.56);
        let d = EPDiscrete::new(0, 0, 2, &mp).unwrap();
        let norm = half_space_overlap_discrete(&d, &d, &mp, &spec).unwrap();
        assert!((norm - 0.5).abs() < 1e-6, "norm = {norm}");
        let mp = model(6.5);
        let d = EPDiscrete::new(0, 0, 3, &mp).unwrap();
        let norm = half_space_overlap_discrete(&d, &d, &mp, &spec).unwrap();
        assert!((norm - 0.5).abs() < 1e-6, "norm = {norm}");
        // two normalizable states with the same m at alpha R = 11
        let mp = model(11.0);
        let da = EPDiscrete::new(0, 0, 4, &mp).unwrap();
        let db = EPDiscrete::new(1, 0, 4, &mp).unwrap();
        let na = half_space_overlap_discrete(&da, &da, &mp, &spec).unwrap();
        let nb = half_space_overlap_discrete(&db, &db, &mp, &spec).unwrap();
        let cross = half_space_overlap_discrete(&da, &db, &mp, &spec).unwrap();
        assert!((na - 0.5).abs() < 1e-6, "na = {na}");
        assert!((nb - 0.5).abs() < 1e-6, "nb = {nb}");
        assert!(cross.abs() < 1e-6, "cross = {cross}");
    }

    #[test]
    fn ep_hamiltonian_residual() {
        // H = (2/R^2)[ (1-t1)/(t2-t1) d/dt1 t1(1-t1) d/dt1
        //   + (1-t2)/(t1-t2) d/dt2 t2(1-t2) d/dt2 - m^2/(4 t1 t2) ]
        //   - (alpha/R)(t1+t2-2)/(t2-t1) applied to S1 S2
        let ar = 6.5;
        let mp = model(ar);
        let d = EPDiscrete::new(0, 0, 3, &mp).unwrap();
        let e = er2(3, ar); // 2 E R^2... actually E R^2 here? see below
        let energy = e / 2.0;
        let h = 1e-3;
        let f1 = |t: f64| s1_discrete(t, &d).unwrap();
        let f2 = |t: f64| s2_discrete(t, &d).unwrap();
        let m2 = 9.0;
        for (t1, t2) in [(0.3, 2.0), (0.6, 4.5), (0.15, 1.4)] {
            let psi = f1(t1) * f2(t2);
            // d/dt t(1-t) d/dt S = t(1-t) S'' + (1-2t) S'
            let op1 = t1 * (1.0 - t1) * d2(&f1, t1, h) + (1.0 - 2.0 * t1) * d1(&f1, t1, h);
            let op2 = t2 * (1.0 - t2) * d2(&f2, t2, h) + (1.0 - 2.0 * t2) * d1(&f2, t2, h);
            let hpsi = 2.0
                * ((1.0 - t1) / (t2 - t1) * op1 * f2(t2)
                    + (1.0 - t2) / (t1 - t2) * op2 * f1(t1)
                    - m2 / (4.0 * t1 * t2) * psi)
                - ar * (t1 + t2 - 2.0) / (t2 - t1) * psi;
            let res = (hpsi - energy * psi).abs();
            assert!(res < 1e-5 * (energy.abs() * psi.abs()).max(1e-3), "residual {res:e} at ({t1},{t2})");
        }
        // continuous state too
        let s = state(0.5, 1, 0.9, 1);
        let e = er2(1, 0.5) / 2.0;
        let g1 = |t: f64| s1_continuous(t, &s).unwrap().re;
        let g2 = |t: f64| s2_continuous(t, &s).unwrap().re;
        for (t1, t2) in [(0.4, 3.0), (0.7, 1.6)] {
            let psi = g1(t1) * g2(t2);
            let op1 = t1 * (1.0 - t1) * d2(&g1, t1, h) + (1.0 - 2.0 * t1) * d1(&g1, t1, h);
            let op2 = t2 * (1.0 - t2) * d2(&g2, t2, h) + (1.0 - 2.0 * t2) * d1(&g2, t2, h);
            let hpsi = 2.0
                * ((1.0 - t1) / (t2 - t1) * op1 * g2(t2)
                    + (1.0 - t2) / (t1 - t2) * op2 * g1(t1)
                    - 1.0 / (4.0 * t1 * t2) * psi)
                - 0.5 * (t1 + t2 - 2.0) / (t2 - t1) * psi;
            let res = (hpsi - e * psi).abs();
            assert!(res < 1e-5 * (e.abs() * psi.abs()).max(1e-3), "residual {res:e} at ({t1},{t2})");
        }
    }

    #[test]
    fn wavefunction_entry_points() {
        let mp = model(6.5);
        let d = EPDiscrete::new(0, 0, 3, &mp).unwrap();
        let c = EPCoords::new(0.4, 2.5, 1.1, Half::PlusHalf).unwrap();
        let v = wavefunction_discrete(&c, &d, &mp).unwrap();
        let want = normalization_constant_discrete(&d, &mp).unwrap()
            * s1_discrete(0.4, &d).unwrap()
            * s2_discrete(2.5, &d).unwrap()
            / (2.0 * std::f64::consts::PI).sqrt();
        assert!((v.norm() - want.abs()).abs() < 1e-13);
        let cm = EPCoords::new(2.5, 0.4, 1.1, Half::MinusHalf).unwrap();
        assert!(wavefunction_discrete(&cm, &d, &mp).is_err());
        let mpc = model(0.5);
        let s = state(0.5, 1, 0.9, 1);
        let v = wavefunction_continuous(&c, &s, &mpc).unwrap();
        assert!(v.is_finite());
    }

    #[test]
    fn invalid_parameters_rejected() {
        let mp = model(0.5);
        assert!(EPContinuous::new(0, 0.9, 1, &mp).is_err());
        assert!(EPContinuous::new(1, 0.0, 1, &mp).is_err());
        assert!(EPContinuous::new(1, -0.3, 1, &mp).is_err());
        let mp = model(6.25);
        assert!(EPContinuous::new(2, 0.9, 1, &mp).is_err()); // 4 <= 6.25
        assert!(EPContinuous::new(3, 0.9, 1, &mp).is_ok());
        let s = state(0.5, 1, 0.9, 1);
        assert!(s1_continuous(-0.1, &s).is_err());
        assert!(s1_continuous(1.0, &s).is_err());
        assert!(s2_continuous(1.0, &s).is_err());
    }
}
