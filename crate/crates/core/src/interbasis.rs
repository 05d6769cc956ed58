//! Expansion of a discrete elliptic-parabolic state over the spherical bound
//! states of the same energy level,
//!
//!   Psi_{n1 n2 m} = sum_{l >= max(n,|m|)} W_l Psi_{n l m},
//!
//! with the coefficient available in closed form (a terminating 4F3 at unit
//! argument) and through an independent projection quadrature.

use num_complex::Complex64;

use crate::epii::{
    normalization_constant_discrete, s1_discrete, s2_discrete, wavefunction_discrete, EPDiscrete,
};
use crate::error::{Error, Result};
use crate::geometry::{spherical_to_ep, ModelParams, SphericalCoords};
use crate::quad::{self, QuadratureSpec};
use crate::radial::{bound_norm_constant, bound_state_radial, RadialQuantum};
use crate::specfun::{hyp2f1_c, hyp4f3_terminating, legendre_p, ln_factorial, ln_gamma};

/// Labels of one expansion coefficient: the elliptic-parabolic state
/// (n1, n2, m) and the target orbital number l.
#[derive(Debug, Clone, Copy)]
pub struct InterbasisKey {
    pub ep: EPDiscrete,
    pub ell: u32,
    pub alpha_r: f64,
}

impl InterbasisKey {
    pub fn new(n1: u32, n2: u32, m: i32, ell: u32, mp: &ModelParams) -> Result<Self> {
        let ep = EPDiscrete::new(n1, n2, m, mp)?;
        if !ep.is_normalizable() {
            return Err(Error::QuantumNumbers(format!(
                "state (n1, n2, m) = ({n1}, {n2}, {m}) has sigma = {} >= n = {}; it has no \
                 expansion over the normalizable spherical level",
                ep.sigma, ep.n
            )));
        }
        let lmin = ep.n.max(m.unsigned_abs());
        if ell < lmin {
            return Err(Error::QuantumNumbers(format!(
                "l = {ell} below the expansion floor max(n, |m|) = {lmin}"
            )));
        }
        Ok(Self { ep, ell, alpha_r: mp.alpha_r() })
    }

    fn radial(&self) -> Result<RadialQuantum> {
        let unit = ModelParams::new(1.0, self.alpha_r)?;
        RadialQuantum::new(self.ep.n, self.ell, &unit)
    }
}

fn ln_re(x: f64) -> Result<f64> {
    Ok(ln_gamma(Complex64::new(x, 0.0))?.re)
}

/// ln |Gamma(x)| and the sign of Gamma(x) for real non-pole x.
fn ln_gamma_signed(x: f64) -> Result<(f64, f64)> {
    if x > 0.0 {
        Ok((ln_re(x)?, 1.0))
    } else if x == x.floor() {
        Err(Error::GammaPole(Complex64::new(x, 0.0)))
    } else {
        let s = (std::f64::consts::PI * x).sin();
        let l = std::f64::consts::PI.ln() - s.abs().ln() - ln_re(1.0 - x)?;
        Ok((l, s.signum()))
    }
}

/// The positive prefactor C: sqrt(sigma-n1-n2-1)/|m|! times the square roots
/// of the l- and (n1,n2)-dependent factorial ratios.
pub fn coeff_c(key: &InterbasisKey) -> Result<f64> {
    let d = &key.ep;
    let l = key.ell;
    let am = d.m.unsigned_abs();
    let (lf, s) = (l as f64, d.sigma);
    let ln = 0.5 * (s - (d.n1 + d.n2 + 1) as f64).ln() - ln_factorial(am)
        + 0.5
            * ((2.0 * lf + 1.0).ln() - std::f64::consts::LN_2 + ln_factorial(l - am)
                - ln_factorial(l + am)
                + ln_factorial(l - d.n)
                + ln_re(lf + 1.0 + s)?
                - ln_factorial(l + d.n)
                - ln_re(lf + 1.0 - s)?)
        + 0.5
            * (ln_factorial(am + d.n1) + ln_factorial(am - d.n2 - 1)
                - ln_factorial(d.n1)
                - ln_factorial(d.n2));
    Ok(ln.exp())
}

/// B as a terminating 4F3 at unit argument with its gamma-ratio prefactor.
pub fn coeff_b_closed(key: &InterbasisKey) -> Result<f64> {
    let d = &key.ep;
    let am = d.m.unsigned_abs() as f64;
    let (nf, lf, s) = (d.n as f64, key.ell as f64, d.sigma);
    let n1 = d.n1 as f64;
    let n2 = d.n2 as f64;
    // Pochhammer (s - n1 - n2)_{n1}; positive throughout the admissible range
    let poch = ln_re(s - n2)? - ln_re(s - n1 - n2)?;
    let (g2, s2) = ln_gamma_signed(s - n1)?;
    let (g3, s3) = ln_gamma_signed(s - n1 - am)?;
    let (g5, s5) = ln_gamma_signed(s - n1 + lf + 1.0)?;
    let (g6, s6) = ln_gamma_signed(s - n1 - lf)?;
    let sign = if d.n1 % 2 == 0 { 1.0 } else { -1.0 } * s2 * s3 * s5 * s6;
    let ln = std::f64::consts::LN_2 + ln_factorial(d.m.unsigned_abs())
        - ln_factorial(d.n1 + d.m.unsigned_abs())
        + ln_factorial(key.ell + d.m.unsigned_abs())
        - ln_factorial(key.ell - d.m.unsigned_abs())
        + poch
        + g2
        + g3
        - g5
        - g6;
    let f = hyp4f3_terminating(
        [-n1, nf + s - n1, s - n1, s - n1 - am],
        [s - n1 - n2, s - n1 + lf + 1.0, s - n1 - lf],
    )?;
    Ok(sign * ln.exp() * f)
}

/// B by direct quadrature of its defining integral over (-1, 1).
pub fn coeff_b_integral(key: &InterbasisKey, spec: &QuadratureSpec) -> Result<f64> {
    let d = key.ep;
    let l = key.ell;
    let am = d.m.unsigned_abs();
    let amf = am as f64;
    let (nf, s, n1) = (d.n as f64, d.sigma, d.n1 as f64);
    // the (1+x)/2 power can be mildly singular at x = -1; tanh-sinh absorbs it
    quad::tanh_sinh(
        &mut |x: f64| {
            let u = (1.0 - x) / 2.0;
            let v = (1.0 + x) / 2.0;
            let f = hyp2f1_c(
                Complex64::new(-n1, 0.0),
                Complex64::new(nf + s - n1, 0.0),
                Complex64::new(amf + 1.0, 0.0),
                u,
            )
            .map(|z| z.re)
            .unwrap_or(f64::NAN);
            let p = legendre_p(l, am, x).unwrap_or(f64::NAN);
            Complex64::new(u.powf(amf / 2.0) * v.powf(-n1 + s - 1.0 - amf / 2.0) * f * p, 0.0)
        },
        -1.0,
        1.0,
        spec,
    )
    .require_converged()
    .map(|r| r.re())
}

// Gauss value of the radial 2F1 at tau -> infinity; carries the (-1)^(l-n)
// parity through Gamma(sigma-l).
fn radial_edge_value(key: &InterbasisKey) -> Result<f64> {
    let (nf, lf, s) = (key.ep.n as f64, key.ell as f64, key.ep.sigma);
    let (g1, s1) = ln_gamma_signed(s - nf)?;
    let (g2, s2) = ln_gamma_signed(s - lf)?;
    let ln = ln_re(nf + s + 1.0)? + g1 - g2 - ln_re(s + lf + 1.0)?;
    Ok(s1 * s2 * ln.exp())
}

fn phase_m(m: i32) -> f64 {
    // (-1)^{(m+|m|)/2}
    if m > 0 && m % 2 != 0 {
        -1.0
    } else {
        1.0
    }
}

fn ln_pref_y(ell: u32, am: u32) -> f64 {
    0.5 * ((2.0 * ell as f64 + 1.0).ln() - std::f64::consts::LN_2 + ln_factorial(ell - am)
        - ln_factorial(ell + am))
}

/// Closed form of the expansion coefficient W. Assembled from B, the
/// edge value of the radial function, and the two normalization constants;
/// this is the reading that agrees with the projection quadrature.
pub fn coeff_w_closed(key: &InterbasisKey) -> Result<f64> {
    let unit = ModelParams::new(1.0, key.alpha_r)?;
    let nd = normalization_constant_discrete(&key.ep, &unit)?;
    let nnl = bound_norm_constant(&key.radial()?)?;
    let b = coeff_b_closed(key)?;
    let f1 = radial_edge_value(key)?;
    let am = key.ep.m.unsigned_abs();
    Ok(phase_m(key.ep.m) * ln_pref_y(key.ell, am).exp() * nd * b / (2.0 * nnl * f1))
}

/// W by projecting the elliptic-parabolic state onto one spherical harmonic
/// at fixed tau and dividing out the radial factor. The result is
/// tau-independent; tau only sets how much of the sphere the chart covers.
pub fn coeff_w_numeric(key: &InterbasisKey, tau: Option<f64>, spec: &QuadratureSpec) -> Result<f64> {
    let rq = key.radial()?;
    let mut tau = tau.unwrap_or(1.5);
    let mut radial = f64::NAN;
    let mut tries = 0;
    while tries < 8 {
        radial = bound_state_radial(tau, &rq)? * bound_norm_constant(&rq)? / tau.cosh();
        if radial.abs() >= 1e-12 {
            break;
        }
        tau += 0.5;
        tries += 1;
    }
    if radial.abs() < 1e-12 {
        return Err(Error::NearZeroDivision(radial.abs()));
    }
    let th = tau.tanh();
    let d = key.ep;
    let am = d.m.unsigned_abs();
    let proj = quad::tanh_sinh(
        &mut |x: f64| {
            let t1 = (1.0 - x) / (1.0 + th);
            let t2 = (1.0 + x) / (1.0 - th);
            // nodes can round a hair past the endpoints where the
            // fractional powers leave their domain; the integrand vanishes
            if !(x > -1.0 && x < 1.0) || !(t1 >= 0.0 && t1 < 1.0) || !(t2 > 1.0) {
                return Complex64::new(0.0, 0.0);
            }
            let v = legendre_p(key.ell, am, x)
                .and_then(|p| Ok(p * s1_discrete(t1, &d)? * s2_discrete(t2, &d)?))
                .unwrap_or(f64::NAN);
            Complex64::new(v, 0.0)
        },
        -th,
        1.0,
        spec,
    )
    .require_converged()?
    .re();
    let unit = ModelParams::new(1.0, key.alpha_r)?;
    let nd = normalization_constant_discrete(&d, &unit)?;
    Ok(phase_m(d.m) * ln_pref_y(key.ell, am).exp() * nd * proj / radial)
}

/// Coefficient table (l, W_l) for l = max(n,|m|) .. ell_max.
pub fn coefficient_table(
    n1: u32,
    n2: u32,
    m: i32,
    ell_max: u32,
    mp: &ModelParams,
) -> Result<Vec<(u32, f64)>> {
    let ep = EPDiscrete::new(n1, n2, m, mp)?;
    let lmin = ep.n.max(m.unsigned_abs());
    (lmin..=ell_max)
        .map(|l| {
            let key = InterbasisKey::new(n1, n2, m, l, mp)?;
            Ok((l, coeff_w_closed(&key)?))
        })
        .collect()
}

/// Partial synthesis sum_{l <= ell_max} W_l Psi_{nlm} at a spherical point.
pub fn synthesize(
    n1: u32,
    n2: u32,
    m: i32,
    ell_max: u32,
    c: &SphericalCoords,
    mp: &ModelParams,
) -> Result<Complex64> {
    let ep = EPDiscrete::new(n1, n2, m, mp)?;
    let table = coefficient_table(n1, n2, m, ell_max, mp)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (l, w) in table {
        let rq = RadialQuantum::new(ep.n, l, mp)?;
        acc += w * crate::radial::full_wavefunction(c, &rq, m, mp)?;
    }
    Ok(acc)
}

/// Residual of the truncated synthesis against the elliptic-parabolic state,
/// maximized over the given chart points.
pub fn synthesis_residual(
    n1: u32,
    n2: u32,
    m: i32,
    ell_max: u32,
    points: &[SphericalCoords],
    mp: &ModelParams,
) -> Result<f64> {
    let ep = EPDiscrete::new(n1, n2, m, mp)?;
    let mut worst = 0.0f64;
    for c in points {
        let target = wavefunction_discrete(&spherical_to_ep(c)?, &ep, mp)?;
        let got = synthesize(n1, n2, m, ell_max, c, mp)?;
        worst = worst.max((got - target).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::gauss_legendre_nodes;
    use crate::radial::normalized_bound_state;

    fn model(alpha: f64) -> ModelParams {
        ModelParams::new(1.0, alpha).unwrap()
    }

    fn key(alpha: f64, n1: u32, n2: u32, m: i32, l: u32) -> InterbasisKey {
        InterbasisKey::new(n1, n2, m, l, &model(alpha)).unwrap()
    }

    #[test]
    fn key_validation() {
        // l below the floor
        assert!(InterbasisKey::new(0, 0, 3, 2, &model(6.5)).is_err());
        // sigma >= n: no normalizable expansion target
        assert!(InterbasisKey::new(0, 0, 1, 3, &model(2.56)).is_err());
        // inadmissible labels propagate
        assert!(InterbasisKey::new(5, 0, 1, 8, &model(2.56)).is_err());
        assert!(InterbasisKey::new(0, 0, 2, 2, &model(2.56)).is_ok());
    }

    #[test]
    fn c_prefactor_values() {
        let cases = [
            (2.56, 0, 0, 2, 2, 0.0757689093060169245031),
            (2.56, 0, 0, 2, 3, 0.0282841225423509249557),
            (2.56, 0, 0, 2, 4, 0.014894509282072038634),
            (6.5, 1, 0, 2, 3, 0.0414868344766538443004),
            (6.5, 0, 1, 4, 4, 0.000419307027858126281549),
        ];
        for (al, n1, n2, m, l, want) in cases {
            let c = coeff_c(&key(al, n1, n2, m, l)).unwrap();
            assert!((c - want).abs() < 1e-13 * want, "C({al},{n1},{n2},{m},{l}) = {c}");
            assert!(c > 0.0);
        }
        // vanishes as sigma approaches the admissibility edge n1+n2+1
        let c1 = coeff_c(&key(2.0 + 4e-6, 0, 0, 2, 2)).unwrap();
        let c2 = coeff_c(&key(2.0 + 1e-6, 0, 0, 2, 2)).unwrap();
        assert!((c1 / c2 - 2.0).abs() < 1e-3, "sqrt scaling: {}", c1 / c2);
    }

    #[test]
    fn b_closed_oracles() {
        let cases = [
            (2.56, 0, 0, 2, 2, 5.01444159178433889602),
            (2.56, 0, 0, 2, 3, -10.0757471236788118004),
            (2.56, 0, 0, 2, 4, 15.5716091911399818734),
            (6.5, 1, 0, 2, 3, 3.24973227112446127726),
            (6.5, 1, 0, 2, 4, -6.7629563480157707662),
            (6.5, 0, 1, 4, 4, 88.5332467376609991211),
            (11.0, 1, 0, 4, 5, 211.482066320775998195),
        ];
        for (al, n1, n2, m, l, want) in cases {
            let b = coeff_b_closed(&key(al, n1, n2, m, l)).unwrap();
            assert!((b - want).abs() < 1e-12 * want.abs(), "B({al},{n1},{n2},{m},{l}) = {b}");
        }
    }

    #[test]
    fn b_dual_path() {
        let spec = QuadratureSpec::validation();
        for (al, n1, n2, m, l) in [
            (2.56, 0, 0, 2, 2),
            (2.56, 0, 0, 2, 5),
            (6.5, 0, 0, 3, 4),
            (6.5, 1, 0, 2, 3),
            (6.5, 0, 1, 4, 5),
            (11.0, 1, 0, 4, 6),
        ] {
            let k = key(al, n1, n2, m, l);
            let closed = coeff_b_closed(&k).unwrap();
            let direct = coeff_b_integral(&k, &spec).unwrap();
            assert!(
                (closed - direct).abs() < 1e-8 * closed.abs().max(1.0),
                "({al},{n1},{n2},{m},{l}): closed {closed} vs quad {direct}"
            );
        }
    }

    fn rf(a: f64, k: u32) -> f64 {
        (0..k).map(|j| a + j as f64).product()
    }

    #[test]
    fn hypergeometric_finite_rearrangement() {
        // 2F1(-n1, n+s-n1; |m|+1; (1-x)/2) as a finite sum in powers of
        // (1+x)/2 with prefactor (-1)^{n1} |m|! / ((n1+|m|)! ) * (s-n1-n2)_{n1}
        for (al, n1, n2, m) in [(6.5, 1u32, 0u32, 2i32), (6.5, 1, 1, 2), (11.0, 3, 1, 2)] {
            let am = m.unsigned_abs();
            let n = am + n1 - n2;
            let s = al / n as f64;
            let (nf, amf) = (n as f64, am as f64);
            for i in 0..20 {
                let x = -0.95 + 1.9 * i as f64 / 19.0;
                let lhs = hyp2f1_c(
                    Complex64::new(-(n1 as f64), 0.0),
                    Complex64::new(nf + s - n1 as f64, 0.0),
                    Complex64::new(amf + 1.0, 0.0),
                    (1.0 - x) / 2.0,
                )
                .unwrap()
                .re;
                let y = (1.0 + x) / 2.0;
                let base = s - (n1 + n2) as f64;
                let sum: f64 = (0..=n1)
                    .map(|k| {
                        rf(-(n1 as f64), k) * rf(nf + s - n1 as f64, k)
                            / (rf(base, k) * rf(1.0, k))
                            * y.powi(k as i32)
                    })
                    .sum();
                let sign = if n1 % 2 == 0 { 1.0 } else { -1.0 };
                let pref = sign * (ln_factorial(am) - ln_factorial(n1 + am)).exp() * rf(base, n1);
                assert!(
                    (lhs - pref * sum).abs() < 1e-10 * lhs.abs().max(1.0),
                    "x={x}: {lhs} vs {}",
                    pref * sum
                );
            }
        }
    }

    #[test]
    fn fourf3_transformation_identity() {
        // 4F3[-n,b,c,d;e,f,g;1] with balanced parameters equals
        // (f-b)_n (g-b)_n / ((f)_n (g)_n) 4F3[-n,b,e-c,e-d;e,b-f-n+1,b-g-n+1;1]
        for (n, b, c, d) in [(2u32, 0.6, 1.1, -0.4), (3, 1.3, 0.25, 2.2), (4, -0.7, 1.9, 0.8)] {
            let (e, f) = (2.3, 1.7);
            let nf = n as f64;
            let g = -nf + b + c + d + 1.0 - e - f;
            let lhs = hyp4f3_terminating([-nf, b, c, d], [e, f, g]).unwrap();
            let rhs = rf(f - b, n) * rf(g - b, n) / (rf(f, n) * rf(g, n))
                * hyp4f3_terminating([-nf, b, e - c, e - d], [e, b - f - nf + 1.0, b - g - nf + 1.0])
                    .unwrap();
            assert!((lhs - rhs).abs() < 1e-10 * lhs.abs().max(1.0), "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn w_closed_oracles() {
        let cases = [
            (2.56, 0, 0, 2, 2, 0.326660859414118868364),
            (2.56, 0, 0, 2, 3, 0.245021084116709907744),
            (2.56, 0, 0, 2, 4, 0.199408277738149721255),
            (2.56, 0, 0, -2, 2, 0.326660859414118868364),
            (6.5, 0, 0, 3, 3, -0.513264902574736512093),
            (6.5, 0, 0, 3, 6, -0.164291772638430618047),
            (6.5, 0, 0, 3, 8, -0.103336883315180902521),
            (6.5, 1, 0, 2, 3, 0.177800177800266700445),
            (6.5, 1, 0, 2, 4, 0.167914537983641571866),
            (6.5, 0, 1, 4, 4, -0.135309390700930356043),
            (6.5, 0, 1, 4, 5, -0.141086194102681190356),
            (11.0, 1, 0, 4, 5, 0.12159336427848001519),
            (11.0, 1, 0, 4, 6, 0.13346931172681528747),
        ];
        for (al, n1, n2, m, l, want) in cases {
            let w = coeff_w_closed(&key(al, n1, n2, m, l)).unwrap();
            assert!((w - want).abs() < 1e-12 * want.abs(), "W({al},{n1},{n2},{m},{l}) = {w}");
        }
        // for odd m the coefficient flips sign with the sign of m
        let a = coeff_w_closed(&key(6.5, 0, 0, 3, 4)).unwrap();
        let b = coeff_w_closed(&key(6.5, 0, 0, -3, 4)).unwrap();
        assert!((a + b).abs() < 1e-15);
    }

    #[test]
    fn w_sign_constant_in_ell() {
        // B and the radial edge value alternate in step, so W keeps one sign
        // along l for a fixed state
        for l in 3..12 {
            assert!(coeff_w_closed(&key(6.5, 0, 0, 3, l)).unwrap() < 0.0);
            assert!(coeff_w_closed(&key(6.5, 1, 0, 2, l)).unwrap() > 0.0);
        }
    }

    #[test]
    fn product_form_ratio_is_ell_independent() {
        // the C*B product tracks W only up to a state-dependent constant;
        // the ratio must not drift with l
        for (al, n1, n2, m) in [(6.5, 0u32, 0u32, 3i32), (6.5, 1, 0, 2), (2.56, 0, 0, 2)] {
            let lmin = (m.unsigned_abs() + n1 - n2).max(m.unsigned_abs());
            let mut ratios = Vec::new();
            for l in lmin..lmin + 5 {
                let k = key(al, n1, n2, m, l);
                let w = coeff_w_closed(&k).unwrap();
                let am = m.unsigned_abs();
                let sign = if (l - k.ep.n + (m.unsigned_abs() + m.max(0) as u32)) % 2 == 0 {
                    1.0
                } else {
                    -1.0
                };
                let _ = am;
                let cb = sign * coeff_c(&k).unwrap() * coeff_b_closed(&k).unwrap();
                ratios.push(w / cb);
            }
            for r in &ratios[1..] {
                assert!(
                    (r - ratios[0]).abs() < 1e-10 * ratios[0].abs(),
                    "drift: {ratios:?}"
                );
            }
        }
    }

    #[test]
    fn w_numeric_matches_closed() {
        let spec = QuadratureSpec::validation();
        let keys = [
            (2.56, 0, 0, 2, 2),
            (2.56, 0, 0, 2, 3),
            (2.56, 0, 0, 2, 4),
            (2.56, 0, 0, -2, 2),
            (6.5, 0, 0, 3, 3),
            (6.5, 0, 0, 3, 4),
            (6.5, 0, 0, 3, 5),
            (6.5, 1, 0, 2, 3),
            (6.5, 1, 0, 2, 4),
            (6.5, 0, 1, 4, 4),
        ];
        for (al, n1, n2, m, l) in keys {
            let k = key(al, n1, n2, m, l);
            let closed = coeff_w_closed(&k).unwrap();
            let numeric = coeff_w_numeric(&k, None, &spec).unwrap();
            assert!(
                (closed - numeric).abs() < 1e-6 * closed.abs(),
                "({al},{n1},{n2},{m},{l}): closed {closed} vs numeric {numeric}"
            );
        }
        // extraction is tau-independent
        let k = key(6.5, 0, 0, 3, 4);
        let w0 = coeff_w_numeric(&k, Some(1.0), &spec).unwrap();
        let w1 = coeff_w_numeric(&k, Some(1.5), &spec).unwrap();
        let w2 = coeff_w_numeric(&k, Some(2.0), &spec).unwrap();
        assert!((w0 - w1).abs() < 1e-7 * w0.abs());
        assert!((w1 - w2).abs() < 1e-7 * w0.abs());
    }

    #[test]
    fn synthesis_converges_pointwise() {
        let mp = model(6.5);
        let mut points = Vec::new();
        for (tau, theta) in [
            (0.6, 0.5),
            (0.6, 1.2),
            (1.0, 0.8),
            (1.0, 1.7),
            (1.5, 0.4),
            (1.5, 2.0),
        ] {
            points.push(SphericalCoords::new(tau, theta, 0.9).unwrap());
        }
        let r20 = synthesis_residual(0, 0, 3, 23, &points, &mp).unwrap();
        let r40 = synthesis_residual(0, 0, 3, 43, &points, &mp).unwrap();
        let r80 = synthesis_residual(0, 0, 3, 83, &points, &mp).unwrap();
        assert!(r40 < r20, "{r20} -> {r40}");
        assert!(r80 < r40, "{r40} -> {r80}");
        assert!(r80 < 2e-2, "residual {r80}");
    }

    #[test]
    fn half_space_norm_bookkeeping() {
        // sum over l of the truncated expansion, integrated over the chart,
        // must recover the half-space norm 1/2 of the source state
        let alpha = 6.5;
        let mp = model(alpha);
        let (n1, n2, m) = (0u32, 0u32, 3i32);
        let am = m.unsigned_abs();
        let lmax = 48u32;
        let table = coefficient_table(n1, n2, m, lmax, &mp).unwrap();
        let lmin = table[0].0;
        let n = am + n1 - n2;
        let nodes = gauss_legendre_nodes(24);
        let mut total = 0.0;
        // tau panels wide enough for the e^{2(sigma-n-1)tau} tail
        let (ta, tb, panels) = (-6.0, 12.0, 36);
        let wtau = (tb - ta) / panels as f64;
        for i in 0..panels {
            for &(xt, wt) in &nodes {
                let tau = ta + (i as f64 + 0.5 + 0.5 * xt) * wtau;
                let u: Vec<f64> = table
                    .iter()
                    .map(|&(l, _)| {
                        normalized_bound_state(tau, &RadialQuantum::new(n, l, &mp).unwrap())
                            .unwrap()
                    })
                    .collect();
                let a = -tau.tanh();
                let wx = (1.0 - a) / 2.0;
                let mut inner = 0.0;
                for &(xx, wwt) in &nodes {
                    let x = a + (1.0 + xx) * wx;
                    // one upward recurrence for every P_l^{|m|}(x)
                    let s2 = ((1.0 - x) * (1.0 + x)).sqrt();
                    let mut pmm = 1.0;
                    let mut fac = 1.0;
                    for _ in 0..am {
                        pmm *= fac * s2;
                        fac += 2.0;
                    }
                    let mut psum = 0.0;
                    let (mut pl, mut plm1) = (pmm, 0.0);
                    for l in am..=lmax {
                        if l >= lmin {
                            let (_, w) = table[(l - lmin) as usize];
                            let yn = ln_pref_y(l, am).exp() * phase_m(m);
                            psum += w * u[(l - lmin) as usize] * yn * pl;
                        }
                        let lf = (l + 1) as f64;
                        let mf = am as f64;
                        let next = (x * (2.0 * lf - 1.0) * pl - (lf + mf - 1.0) * plm1) / (lf - mf);
                        plm1 = pl;
                        pl = next;
                    }
                    inner += wwt * psum * psum;
                }
                total += wt * inner * wx * 0.5 * wtau;
            }
        }
        assert!((total - 0.5).abs() < 1.5e-3, "half-space norm {total}");
    }
}
