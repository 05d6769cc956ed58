//! Eigenfunction expansion of a square-integrable function over the mixed
//! spectrum of the radial problem: a low continuum band (one state per
//! Lambda), a high band (two states), and the finitely many bound states.
//! The free case (alpha = 0) has no low band and its continuum states are
//! plane-wave-like; it is handled by the same engine.
//!
//! Band integrals are discretized in the variables that remove the edge
//! singularities: r with Lambda = 4 alpha R - r^2 on the low band and q with
//! Lambda = 4 alpha R + q^2 on the high band, so the 1/q spectral weight is
//! absorbed by the Jacobian.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::ModelParams;
use crate::quad::{self, gauss_legendre_nodes, QuadratureSpec};
use crate::radial::{
    discrete_spectrum, normalized_bound_state, normalized_continuum, ContinuumKind, RadialQuantum,
    SpectralPoint,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Smoothness {
    Smooth,
    /// Narrow or kinked profiles; doubles the inner-product panel density.
    Peaked,
}

/// A real-valued square-integrable profile phi(tau) with a support hint used
/// to truncate inner products.
#[derive(Clone)]
pub struct TestFunction {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub support: (f64, f64),
    pub smoothness: Smoothness,
}

impl TestFunction {
    /// Checks square-integrability numerically: the tail integrals of phi^2
    /// beyond the support hint must be below 1e-10.
    pub fn new(
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        support: (f64, f64),
        smoothness: Smoothness,
    ) -> Result<Self> {
        if !(support.0 < support.1) || !support.0.is_finite() || !support.1.is_finite() {
            return Err(Error::InvalidInput(format!("bad support interval {support:?}")));
        }
        let tf = Self { f, support, smoothness };
        let spec = QuadratureSpec::volume();
        for (a, b) in [(support.1, support.1 + 30.0), (support.0 - 30.0, support.0)] {
            let tail = quad::tanh_sinh(
                &mut |x| Complex64::new(tf.eval(x).powi(2), 0.0),
                a,
                b,
                &spec,
            )
            .re();
            if !(tail.abs() < 1e-10) {
                return Err(Error::InvalidInput(format!(
                    "tail integral {tail:e} beyond the support hint; not square-integrable there"
                )));
            }
        }
        Ok(tf)
    }

    /// exp(-(tau-mu)^2 / (2 s^2))
    pub fn gaussian(mu: f64, s: f64) -> Result<Self> {
        if !(s > 0.0) {
            return Err(Error::InvalidInput(format!("gaussian width must be positive, got {s}")));
        }
        let half = (7.0 * s).max(1.0);
        Self::new(
            Arc::new(move |t: f64| (-(t - mu) * (t - mu) / (2.0 * s * s)).exp()),
            (mu - half, mu + half),
            Smoothness::Smooth,
        )
    }

    /// Piecewise-linear interpolant of (tau, value) samples, zero outside.
    pub fn from_samples(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidInput("need at least two samples".into()));
        }
        if !samples.windows(2).all(|w| w[0].0 < w[1].0) {
            return Err(Error::InvalidInput("sample abscissae must increase strictly".into()));
        }
        let support = (samples[0].0, samples[samples.len() - 1].0);
        let ev = move |t: f64| -> f64 {
            if t < samples[0].0 || t > samples[samples.len() - 1].0 {
                return 0.0;
            }
            let i = samples.partition_point(|&(x, _)| x <= t).min(samples.len() - 1).max(1);
            let (x0, y0) = samples[i - 1];
            let (x1, y1) = samples[i];
            y0 + (y1 - y0) * (t - x0) / (x1 - x0)
        };
        Self::new(Arc::new(ev), support, Smoothness::Peaked)
    }

    pub fn eval(&self, tau: f64) -> f64 {
        (self.f)(tau)
    }

    /// L2 norm squared over the support (plus a margin).
    pub fn norm_sq(&self) -> f64 {
        let (a, b) = (self.support.0 - 2.0, self.support.1 + 2.0);
        let panels = (((b - a) * 4.0).ceil() as usize).max(40);
        quad::gauss_legendre_panels(
            &mut |t| Complex64::new(self.eval(t).powi(2), 0.0),
            a,
            b,
            panels,
            10,
        )
        .re
    }
}

/// One continuum quadrature node: Lambda, its weight in the dLambda measure,
/// and the coefficients of the (up to two) states living there.
#[derive(Debug, Clone, Copy)]
pub struct BandSample {
    pub lambda: f64,
    pub weight: f64,
    pub c1: Complex64,
    pub c2: Complex64,
}

#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub ell: u32,
    pub model: ModelParams,
    pub lambda_max: f64,
    pub low_band: Vec<BandSample>,
    pub high_band: Vec<BandSample>,
    /// (n, coefficient) against the unit-normalized bound states.
    pub discrete: Vec<(u32, f64)>,
}

#[derive(Debug, Clone, Copy)]
pub struct ExpansionConfig {
    pub lambda_max: f64,
    pub low_panels: usize,
    pub high_panels: usize,
    /// Gauss-Legendre order of each band panel.
    pub band_order: usize,
    /// Inner products run over the support widened by this margin.
    pub tau_margin: f64,
    /// Gauss-Legendre order of each inner-product panel.
    pub tau_order: usize,
}

impl Default for ExpansionConfig {
    fn default() -> Self {
        Self {
            lambda_max: 150.0,
            low_panels: 8,
            high_panels: 40,
            band_order: 10,
            tau_margin: 8.0,
            tau_order: 8,
        }
    }
}

/// Oscillation-aware inner product int phi(tau) g(tau) dtau over a finite
/// range; the panel count tracks the frequency of g.
fn overlap(
    phi: &TestFunction,
    range: (f64, f64),
    freq: f64,
    order: usize,
    mut g: impl FnMut(f64) -> Result<Complex64>,
) -> Result<Complex64> {
    let (a, b) = range;
    let len = b - a;
    let mut panels = ((len * (1.0 + freq) / 4.0).ceil() as usize).max(8);
    if phi.smoothness == Smoothness::Peaked {
        panels *= 2;
    }
    let nodes = gauss_legendre_nodes(order);
    let w = len / panels as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..panels {
        let mid = a + (i as f64 + 0.5) * w;
        for &(x, wt) in &nodes {
            let tau = mid + 0.5 * w * x;
            let ph = phi.eval(tau);
            if ph != 0.0 {
                acc += 0.5 * w * wt * ph * g(tau)?;
            }
        }
    }
    Ok(acc)
}

/// Substitution-variable nodes (value, weight) over (0, vmax).
fn band_nodes(vmax: f64, panels: usize, order: usize) -> Vec<(f64, f64)> {
    let nodes = gauss_legendre_nodes(order);
    let w = vmax / panels as f64;
    let mut out = Vec::with_capacity(panels * order);
    for i in 0..panels {
        for &(x, wt) in &nodes {
            out.push(((i as f64 + 0.5 + 0.5 * x) * w, 0.5 * w * wt));
        }
    }
    out
}

/// Decompose phi over the mixed spectrum at orbital number ell.
pub fn expand(
    phi: &TestFunction,
    ell: u32,
    mp: &ModelParams,
    cfg: &ExpansionConfig,
) -> Result<SpectralDecomposition> {
    let ar = mp.alpha_r();
    if !(cfg.lambda_max > 4.0 * ar) {
        return Err(Error::InvalidInput(format!(
            "lambda_max = {} must exceed the band edge {}",
            cfg.lambda_max,
            4.0 * ar
        )));
    }
    let range = (phi.support.0 - cfg.tau_margin, phi.support.1 + cfg.tau_margin);

    let mut low_band = Vec::new();
    if ar > 0.0 && cfg.low_panels > 0 {
        let rs = band_nodes(2.0 * ar.sqrt(), cfg.low_panels, cfg.band_order);
        let samples = quad::par_map(rs.len(), |i| -> Result<BandSample> {
            let (r, wr) = rs[i];
            let lambda = 4.0 * ar - r * r;
            let sp = SpectralPoint::new(lambda, mp)?;
            let c = overlap(phi, range, sp.p.re, cfg.tau_order, |tau| {
                normalized_continuum(tau, ell, &sp, ContinuumKind::Zero)
            })?;
            Ok(BandSample { lambda, weight: 2.0 * r * wr, c1: c, c2: Complex64::new(0.0, 0.0) })
        });
        for s in samples {
            low_band.push(s?);
        }
    }

    let qs = band_nodes((cfg.lambda_max - 4.0 * ar).sqrt(), cfg.high_panels, cfg.band_order);
    let samples = quad::par_map(qs.len(), |i| -> Result<BandSample> {
        let (q, wq) = qs[i];
        let lambda = 4.0 * ar + q * q;
        let sp = SpectralPoint::new(lambda, mp)?;
        let c1 = overlap(phi, range, sp.p.re, cfg.tau_order, |tau| {
            normalized_continuum(tau, ell, &sp, ContinuumKind::One)
        })?;
        let c2 = overlap(phi, range, sp.p.re, cfg.tau_order, |tau| {
            normalized_continuum(tau, ell, &sp, ContinuumKind::Two)
        })?;
        Ok(BandSample { lambda, weight: 2.0 * q * wq, c1, c2 })
    });
    let mut high_band = Vec::new();
    for s in samples {
        high_band.push(s?);
    }

    let mut discrete = Vec::new();
    for lev in discrete_spectrum(mp, ell) {
        let rq = RadialQuantum::new(lev.n, ell, mp)?;
        let d = overlap(phi, range, 0.0, cfg.tau_order, |tau| {
            Ok(Complex64::new(normalized_bound_state(tau, &rq)?, 0.0))
        })?;
        discrete.push((lev.n, d.re));
    }

    Ok(SpectralDecomposition {
        ell,
        model: *mp,
        lambda_max: cfg.lambda_max,
        low_band,
        high_band,
        discrete,
    })
}

pub fn expand_coulomb(
    phi: &TestFunction,
    ell: u32,
    mp: &ModelParams,
    cfg: &ExpansionConfig,
) -> Result<SpectralDecomposition> {
    expand(phi, ell, mp, cfg)
}

/// alpha = 0: no low band; the high band starts at Lambda = 0.
pub fn expand_free(phi: &TestFunction, ell: u32, cfg: &ExpansionConfig) -> Result<SpectralDecomposition> {
    expand(phi, ell, &ModelParams::new(1.0, 0.0)?, cfg)
}

/// Pointwise synthesis of the decomposition.
pub fn reconstruct(d: &SpectralDecomposition, tau: f64) -> Result<f64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for s in &d.low_band {
        let sp = SpectralPoint::new(s.lambda, &d.model)?;
        let f = normalized_continuum(tau, d.ell, &sp, ContinuumKind::Zero)?;
        acc += s.weight * f.conj() * s.c1;
    }
    for s in &d.high_band {
        let sp = SpectralPoint::new(s.lambda, &d.model)?;
        acc += s.weight
            * (normalized_continuum(tau, d.ell, &sp, ContinuumKind::One)?.conj() * s.c1
                + normalized_continuum(tau, d.ell, &sp, ContinuumKind::Two)?.conj() * s.c2);
    }
    for &(n, dn) in &d.discrete {
        let rq = RadialQuantum::new(n, d.ell, &d.model)?;
        acc += dn * normalized_bound_state(tau, &rq)?;
    }
    Ok(acc.re)
}

/// Spectral content: sum of band integrals of |c|^2 plus discrete squares.
pub fn spectral_norm_sq(d: &SpectralDecomposition) -> f64 {
    let low: f64 = d.low_band.iter().map(|s| s.weight * s.c1.norm_sqr()).sum();
    let high: f64 =
        d.high_band.iter().map(|s| s.weight * (s.c1.norm_sqr() + s.c2.norm_sqr())).sum();
    let disc: f64 = d.discrete.iter().map(|&(_, c)| c * c).sum();
    low + high + disc
}

pub fn parseval_defect(d: &SpectralDecomposition, phi: &TestFunction) -> f64 {
    (phi.norm_sq() - spectral_norm_sq(d)).abs()
}

/// L2 distance between phi and its reconstruction over the support.
pub fn reconstruction_error(d: &SpectralDecomposition, phi: &TestFunction) -> Result<f64> {
    let (a, b) = (phi.support.0 - 2.0, phi.support.1 + 2.0);
    let panels = (((b - a) * 1.5).ceil() as usize).max(16);
    let order = 6;
    let nodes = gauss_legendre_nodes(order);
    let w = (b - a) / panels as f64;
    let partial = quad::par_map(panels, |i| -> Result<f64> {
        let mid = a + (i as f64 + 0.5) * w;
        let mut acc = 0.0;
        for &(x, wt) in &nodes {
            let tau = mid + 0.5 * w * x;
            let diff = phi.eval(tau) - reconstruct(d, tau)?;
            acc += 0.5 * w * wt * diff * diff;
        }
        Ok(acc)
    });
    let mut total = 0.0;
    for p in partial {
        total += p?;
    }
    Ok(total.sqrt())
}
