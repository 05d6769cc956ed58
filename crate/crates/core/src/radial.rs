//! Radial problem in the spherical system: solutions of
//!
//!   f'' + [ l(l+1)/cosh^2(tau) + 2 alpha R (tanh(tau) - 1) + Lambda ] f = 0
//!
//! (a Rosen-Morse form), their Wronskians and conjugation/connection
//! relations, the discrete spectrum, and eigenfunctions normalized for the
//! continuous (delta in Lambda) and discrete (unit integral) spectra.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ModelParams, SphericalCoords};
use crate::specfun::{hyp2f1_xw, ln_gamma, spherical_harmonic};

/// Relative distance to Lambda = 0 or Lambda = 4 alpha R below which band
/// classification refuses to choose.
pub const BAND_BOUNDARY_TOL: f64 = 1e-12;

/// Lambda = 2 E R^2 + 2 alpha R - 1.
pub fn lambda_from_energy(energy: f64, m: &ModelParams) -> f64 {
    2.0 * energy * m.r * m.r + 2.0 * m.alpha_r() - 1.0
}

pub fn energy_from_lambda(lambda: f64, m: &ModelParams) -> f64 {
    (lambda + 1.0 - 2.0 * m.alpha_r()) / (2.0 * m.r * m.r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectralBand {
    BelowZero,
    LowContinuum,
    HighContinuum,
    BoundState,
}

/// Spectral parameters p = sqrt(Lambda), q = sqrt(Lambda - 4 alpha R),
/// nu = -i(p+q)/2, on the branch obtained from the upper half Lambda plane:
/// positive real square roots above the cut, i*sqrt(|.|) below it.
#[derive(Debug, Clone, Copy)]
pub struct SpectralPoint {
    pub lambda: Complex64,
    pub alpha_r: f64,
    pub p: Complex64,
    pub q: Complex64,
    pub nu: Complex64,
}

fn branch_sqrt(z: Complex64) -> Complex64 {
    // principal sqrt with the negative real axis approached from above
    if z.im == 0.0 && z.re < 0.0 {
        Complex64::new(0.0, (-z.re).sqrt())
    } else {
        z.sqrt()
    }
}

impl SpectralPoint {
    pub fn new(lambda: f64, m: &ModelParams) -> Result<Self> {
        Self::new_complex(Complex64::new(lambda, 0.0), m)
    }

    pub fn new_complex(lambda: Complex64, m: &ModelParams) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::Domain("spectral parameter must be finite".into()));
        }
        let ar = m.alpha_r();
        let p = branch_sqrt(lambda);
        let q = branch_sqrt(lambda - 4.0 * ar);
        let nu = -Complex64::i() * (p + q) / 2.0;
        Ok(Self { lambda, alpha_r: ar, p, q, nu })
    }

    /// r = sqrt(4 alpha R - Lambda), defined for real Lambda < 4 alpha R.
    pub fn r_param(&self) -> Option<f64> {
        if self.lambda.im == 0.0 && self.lambda.re < 4.0 * self.alpha_r {
            Some((4.0 * self.alpha_r - self.lambda.re).sqrt())
        } else {
            None
        }
    }

    /// Continuous-spectrum band of a real Lambda; errors on the boundaries.
    pub fn band(&self) -> Result<SpectralBand> {
        if self.lambda.im != 0.0 {
            return Err(Error::Domain("band classification needs real Lambda".into()));
        }
        let l = self.lambda.re;
        let edge = 4.0 * self.alpha_r;
        let scale = edge.abs().max(1.0);
        if l.abs() < BAND_BOUNDARY_TOL * scale || (l - edge).abs() < BAND_BOUNDARY_TOL * scale {
            return Err(Error::BandBoundary(l));
        }
        Ok(if l < 0.0 {
            SpectralBand::BelowZero
        } else if l < edge {
            SpectralBand::LowContinuum
        } else {
            SpectralBand::HighContinuum
        })
    }
}

/// Bound-state labels: delta <= n <= l with n^2 > alpha R, sigma = alpha R/n.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RadialQuantum {
    pub n: u32,
    pub ell: u32,
    pub sigma: f64,
    pub alpha_r: f64,
}

impl RadialQuantum {
    pub fn new(n: u32, ell: u32, m: &ModelParams) -> Result<Self> {
        let ar = m.alpha_r();
        if n < 1 || n > ell {
            return Err(Error::QuantumNumbers(format!("need 1 <= n <= l, got n={n}, l={ell}")));
        }
        if (n * n) as f64 <= ar {
            return Err(Error::QuantumNumbers(format!(
                "state n={n} is not normalizable: n^2 <= alpha R = {ar}"
            )));
        }
        Ok(Self { n, ell, sigma: ar / n as f64, alpha_r: ar })
    }

    pub fn lambda(&self) -> f64 {
        let d = self.n as f64 - self.sigma;
        -d * d
    }
}

/// ln(1 + e^{2 tau}) without overflow.
fn ln_1p_exp2(tau: f64) -> f64 {
    if tau > 18.0 {
        2.0 * tau + (-2.0 * tau).exp().ln_1p()
    } else {
        (2.0 * tau).exp().ln_1p()
    }
}

/// Hypergeometric argument x = (1 + e^{-2 tau})^{-1} and its complement
/// 1 - x, both to full relative accuracy.
fn arg_x_w(tau: f64) -> (f64, f64) {
    if tau >= 0.0 {
        let em = (-2.0 * tau).exp();
        (1.0 / (1.0 + em), em / (1.0 + em))
    } else {
        let ep = (2.0 * tau).exp();
        (ep / (1.0 + ep), 1.0 / (1.0 + ep))
    }
}

fn f_eval(tau: f64, ell: u32, sp: &SpectralPoint, second: bool) -> Result<Complex64> {
    let i = Complex64::i();
    let lf = ell as f64;
    // common prefactor (1+e^{-2tau})^{iq/2} (1+e^{2tau})^{ip/2} in log space
    let ln_pref =
        i * sp.q / 2.0 * ln_1p_exp2(-tau) + i * sp.p / 2.0 * ln_1p_exp2(tau);
    let a = sp.nu + (lf + 1.0);
    let b = sp.nu - lf;
    let (x, w) = if second { arg_x_w(-tau) } else { arg_x_w(tau) };
    let c = if second { 1.0 - i * sp.p } else { 1.0 - i * sp.q };
    let f = hyp2f1_xw(a, b, c, x, w)?;
    Ok(ln_pref.exp() * f)
}

/// f1: L^2 towards tau -> -infinity (for Im Lambda > 0).
pub fn f1_coulomb(tau: f64, ell: u32, sp: &SpectralPoint) -> Result<Complex64> {
    f_eval(tau, ell, sp, false)
}

/// f2: L^2 towards tau -> +infinity; equals the f1 form with tau -> -tau
/// and p <-> q.
pub fn f2_coulomb(tau: f64, ell: u32, sp: &SpectralPoint) -> Result<Complex64> {
    f_eval(tau, ell, sp, true)
}

pub fn f1_free(tau: f64, ell: u32, sp: &SpectralPoint) -> Result<Complex64> {
    f_eval(tau, ell, sp, false)
}

pub fn f2_free(tau: f64, ell: u32, sp: &SpectralPoint) -> Result<Complex64> {
    f_eval(tau, ell, sp, true)
}

/// Product of Gamma factors evaluated through log-gamma; a pole in a
/// denominator factor yields zero, a pole in a numerator factor is an error.
fn gamma_ratio(nums: &[Complex64], dens: &[Complex64]) -> Result<Complex64> {
    fn pole(z: Complex64) -> bool {
        z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
    }
    if dens.iter().any(|&d| pole(d)) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut ln = Complex64::new(0.0, 0.0);
    for &n in nums {
        ln += ln_gamma(n)?;
    }
    for &d in dens {
        ln -= ln_gamma(d)?;
    }
    Ok(ln.exp())
}

/// W(f1, f2) = -2 Gamma(1-ip)^2 / (Gamma(l+1-ip) Gamma(-l-ip)).
pub fn wronskian_free(ell: u32, sp: &SpectralPoint) -> Result<Complex64> {
    let i = Complex64::i();
    let lf = ell as f64;
    let g1 = Complex64::new(1.0, 0.0) - i * sp.p;
    Ok(-2.0 * gamma_ratio(&[g1, g1], &[lf + 1.0 - i * sp.p, -lf - i * sp.p])?)
}

/// W(f1, f2) = -2 Gamma(1-ip) Gamma(1-iq) / (Gamma(nu+l+1) Gamma(nu-l)).
/// Vanishes at the bound-state points nu = n <= l.
pub fn wronskian_coulomb(ell: u32, sp: &SpectralPoint) -> Result<Complex64> {
    let i = Complex64::i();
    let lf = ell as f64;
    Ok(-2.0
        * gamma_ratio(
            &[Complex64::new(1.0, 0.0) - i * sp.p, Complex64::new(1.0, 0.0) - i * sp.q],
            &[sp.nu + (lf + 1.0), sp.nu - lf],
        )?)
}

/// Conjugation relation of the free solutions on real Lambda.
#[derive(Debug, Clone, Copy)]
pub enum FreeConnection {
    /// Lambda < 0: f1 and f2 are real.
    Real,
    /// Lambda > 0: conj(f1) = mu f2 and conj(f2) = mu f1.
    ConjugateSwap(Complex64),
}

pub fn connection_free(ell: u32, sp: &SpectralPoint) -> Result<FreeConnection> {
    let band = sp.band()?;
    let i = Complex64::i();
    let lf = ell as f64;
    match band {
        SpectralBand::BelowZero => Ok(FreeConnection::Real),
        _ => {
            let mu = gamma_ratio(
                &[lf + 1.0 - i * sp.p, -lf - i * sp.p],
                &[Complex64::new(1.0, 0.0) - i * sp.p, -i * sp.p],
            )?;
            Ok(FreeConnection::ConjugateSwap(mu))
        }
    }
}

/// Conjugation/connection relations of the Coulomb solutions on real
/// Lambda, per band.
#[derive(Debug, Clone, Copy)]
pub enum CoulombConnection {
    /// Lambda < 0: f1 and f2 are real.
    Real,
    /// 0 < Lambda < 4 alpha R: f1 (real) = c1 f2 + c2 conj(f2).
    Low { c1: Complex64, c2: Complex64 },
    /// Lambda > 4 alpha R: f1 = c1 f2 + c2 conj(f2) and
    /// f2 = d1 f1 + d2 conj(f1).
    High { c1: Complex64, c2: Complex64, d1: Complex64, d2: Complex64 },
}

pub fn connection_coulomb(ell: u32, sp: &SpectralPoint) -> Result<CoulombConnection> {
    let band = sp.band()?;
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    let lf = ell as f64;
    let ip = i * sp.p;
    let iq = i * sp.q;
    match band {
        SpectralBand::BelowZero => Ok(CoulombConnection::Real),
        SpectralBand::LowContinuum => {
            // 1 - iq = 1 + r here
            let c1 = gamma_ratio(
                &[ip, one - iq],
                &[lf + 1.0 + (ip - iq) / 2.0, -lf + (ip - iq) / 2.0],
            )?;
            let c2 = gamma_ratio(
                &[-ip, one - iq],
                &[lf + 1.0 - (ip + iq) / 2.0, -lf - (ip + iq) / 2.0],
            )?;
            Ok(CoulombConnection::Low { c1, c2 })
        }
        SpectralBand::HighContinuum => {
            let c1 = gamma_ratio(
                &[ip, one - iq],
                &[lf + 1.0 + (ip - iq) / 2.0, -lf + (ip - iq) / 2.0],
            )?;
            let c2 = gamma_ratio(
                &[-ip, one - iq],
                &[lf + 1.0 - (ip + iq) / 2.0, -lf - (ip + iq) / 2.0],
            )?;
            let d1 = gamma_ratio(
                &[one - ip, iq],
                &[lf + 1.0 - (ip - iq) / 2.0, -lf - (ip - iq) / 2.0],
            )?;
            let d2 = gamma_ratio(
                &[one - ip, -iq],
                &[lf + 1.0 - (ip + iq) / 2.0, -lf - (ip + iq) / 2.0],
            )?;
            Ok(CoulombConnection::High { c1, c2, d1, d2 })
        }
        SpectralBand::BoundState => Err(Error::BandMismatch),
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DiscreteLevel {
    pub n: u32,
    pub lambda: f64,
    pub energy: f64,
    pub sigma: f64,
}

/// All bound levels for given l: Lambda_n = -(n - sigma)^2 with
/// E_n = -alpha^2/(2n^2) - (n^2-1)/(2R^2), n running from the smallest
/// integer with n^2 > alpha R up to l. Free case (alpha = 0): n = 1..l,
/// Lambda_n = -n^2.
pub fn discrete_spectrum(m: &ModelParams, ell: u32) -> Vec<DiscreteLevel> {
    let ar = m.alpha_r();
    let mut delta = 1u32;
    while (delta * delta) as f64 <= ar {
        delta += 1;
    }
    (delta..=ell)
        .map(|n| {
            let sigma = ar / n as f64;
            let d = n as f64 - sigma;
            let lambda = -d * d;
            DiscreteLevel { n, lambda, energy: energy_from_lambda(lambda, m), sigma }
        })
        .collect()
}

/// Unnormalized bound radial function
/// e^{sigma tau} (2 cosh tau)^{-n} 2F1(n+l+1, n-l; n+sigma+1; x).
///
/// The terminating 2F1 of degree k = l-n is proportional to the Jacobi
/// polynomial P_k^{(n+sigma, n-sigma)}(-tanh tau); the three-term recurrence
/// stays accurate at degrees where the alternating series loses every digit.
pub fn bound_state_radial(tau: f64, rq: &RadialQuantum) -> Result<f64> {
    let nf = rq.n as f64;
    let s = rq.sigma;
    let k = rq.ell - rq.n;
    let ln2cosh = tau.abs() + (-2.0 * tau.abs()).exp().ln_1p();
    let (x, _) = arg_x_w(tau);
    let alpha = nf + s;
    let beta = nf - s;
    let z = -tau.tanh();
    let mut p = 1.0f64;
    if k >= 1 {
        // z - 1 = -2x without cancellation at large negative tau
        let mut pm1 = 1.0;
        p = (alpha + 1.0) - (alpha + beta + 2.0) * x;
        for j in 2..=k {
            let jf = j as f64;
            let c0 = 2.0 * jf + alpha + beta;
            let a1 = 2.0 * jf * (jf + alpha + beta) * (c0 - 2.0);
            let a2 = (c0 - 1.0) * ((c0 - 2.0) * c0 * z + alpha * alpha - beta * beta);
            let a3 = 2.0 * (jf + alpha - 1.0) * (jf + beta - 1.0) * c0;
            let next = (a2 * p - a3 * pm1) / a1;
            pm1 = p;
            p = next;
        }
    }
    let re = |v: f64| ln_gamma(Complex64::new(v, 0.0)).map(|g| g.re);
    // k! / (n+sigma+1)_k restores the hypergeometric normalization
    let ln_scale = re(k as f64 + 1.0)? + re(nf + s + 1.0)? - re(nf + s + 1.0 + k as f64)?;
    Ok((rq.sigma * tau - nf * ln2cosh + ln_scale).exp() * p)
}

/// Squared normalization constant, also the residue weight of the
/// eigenfunction expansion:
/// (l+n)! Gamma(l+sigma+1) (n^2-sigma^2) /
/// ((l-n)! Gamma(l-sigma+1) Gamma(n+sigma+1)^2 n).
pub fn residue_weight(rq: &RadialQuantum) -> Result<f64> {
    let nf = rq.n as f64;
    let lf = rq.ell as f64;
    let s = rq.sigma;
    let re = |x: f64| ln_gamma(Complex64::new(x, 0.0)).map(|v| v.re);
    let ln = re(lf + nf + 1.0)? + re(lf + s + 1.0)? + (nf * nf - s * s).ln()
        - re(lf - nf + 1.0)?
        - re(lf - s + 1.0)?
        - 2.0 * re(nf + s + 1.0)?
        - nf.ln();
    Ok(ln.exp())
}

pub fn bound_norm_constant(rq: &RadialQuantum) -> Result<f64> {
    Ok(residue_weight(rq)?.sqrt())
}

/// N_{nl} f_{nl}(tau), normalized so the tau-integral of its square is 1.
pub fn normalized_bound_state(tau: f64, rq: &RadialQuantum) -> Result<f64> {
    Ok(bound_norm_constant(rq)? * bound_state_radial(tau, rq)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ContinuumKind {
    /// Low-band eigenfunction built on f1 (the only one entering the
    /// expansion there).
    Zero,
    /// High-band eigenfunction built on f1.
    One,
    /// High-band eigenfunction built on f2.
    Two,
}

fn ln_sinh(x: f64) -> f64 {
    // x > 0
    x + (-(-2.0 * x).exp()).ln_1p() - std::f64::consts::LN_2
}

/// Normalization constant of the requested continuum family, computed in
/// log space.
pub fn continuum_norm_constant(ell: u32, sp: &SpectralPoint, kind: ContinuumKind) -> Result<f64> {
    let band = sp.band()?;
    let p = sp.p.re;
    match kind {
        ContinuumKind::Zero => {
            if band != SpectralBand::LowContinuum {
                return Err(Error::BandMismatch);
            }
            let r = sp.r_param().expect("low band has r");
            let lf = ell as f64;
            let g1 = ln_gamma(Complex64::new(lf + 1.0 + r / 2.0, -p / 2.0))?.re;
            let g2 = ln_gamma(Complex64::new(-lf + r / 2.0, -p / 2.0))?.re;
            let g3 = ln_gamma(Complex64::new(1.0 + r, 0.0))?.re;
            let ln = 0.5 * ln_sinh(std::f64::consts::PI * p) + g1 + g2 - g3
                - (2.0 * std::f64::consts::PI).ln();
            Ok(ln.exp())
        }
        ContinuumKind::One | ContinuumKind::Two => {
            if band != SpectralBand::HighContinuum {
                return Err(Error::BandMismatch);
            }
            let q = sp.q.re;
            let pi = std::f64::consts::PI;
            let denom_p = if kind == ContinuumKind::Two { p } else { q };
            let ln = 0.5 * (ln_sinh(pi * p) + ln_sinh(pi * q))
                - std::f64::consts::LN_2
                - 0.5 * (pi * denom_p).ln()
                - ln_sinh(pi / 2.0 * (p + q));
            Ok(ln.exp())
        }
    }
}

/// Continuum eigenfunction normalized to delta(Lambda - Lambda').
pub fn normalized_continuum(
    tau: f64,
    ell: u32,
    sp: &SpectralPoint,
    kind: ContinuumKind,
) -> Result<Complex64> {
    let n = continuum_norm_constant(ell, sp, kind)?;
    let f = match kind {
        ContinuumKind::Zero | ContinuumKind::One => f1_coulomb(tau, ell, sp)?,
        ContinuumKind::Two => f2_coulomb(tau, ell, sp)?,
    };
    Ok(n * f)
}

/// Full bound-state wave function
/// Psi = N_{nl} R^{-3/2} (cosh tau)^{-1} f_{nl}(tau) Y_{lm}(theta, phi),
/// normalized to 1 in the R^3 cosh^2(tau) sin(theta) volume element.
pub fn full_wavefunction(
    c: &SphericalCoords,
    rq: &RadialQuantum,
    m_quantum: i32,
    mp: &ModelParams,
) -> Result<Complex64> {
    if m_quantum.unsigned_abs() > rq.ell {
        return Err(Error::QuantumNumbers(format!(
            "|m| = {} exceeds l = {}",
            m_quantum.unsigned_abs(),
            rq.ell
        )));
    }
    let radial = normalized_bound_state(c.tau, rq)?;
    let y = spherical_harmonic(rq.ell, m_quantum, c.theta, c.phi)?;
    Ok(mp.r.powf(-1.5) / c.tau.cosh() * radial * y)
}
