//! Coordinates on the single-sheeted hyperboloid x1^2+x2^2+x3^2 - x0^2 = R^2:
//! ambient pseudo-Euclidean points, spherical coordinates (tau, theta, phi),
//! and the elliptic-parabolic pair (t1, t2, phi) that covers one half of the
//! surface at a time.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distance from the chart boundary below which EP conversions are refused.
pub const CHART_BOUNDARY_TOL: f64 = 1e-12;

/// Physical setup: curvature radius and Coulomb coupling.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ModelParams {
    pub r: f64,
    pub alpha: f64,
}

impl ModelParams {
    pub fn new(r: f64, alpha: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::InvalidInput(format!("curvature radius must be positive, got {r}")));
        }
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidInput(format!("coupling must be nonnegative, got {alpha}")));
        }
        Ok(Self { r, alpha })
    }

    /// The dimensionless combination alpha*R that controls the spectrum.
    pub fn alpha_r(&self) -> f64 {
        self.alpha * self.r
    }
}

/// Point of the ambient pseudo-Euclidean space lying on the hyperboloid.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AmbientPoint {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl AmbientPoint {
    /// x1^2 + x2^2 + x3^2 - x0^2, which must equal R^2.
    pub fn quadratic_form(&self) -> f64 {
        self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3 - self.x0 * self.x0
    }

    /// |x| = sqrt(x1^2+x2^2+x3^2).
    pub fn space_norm(&self) -> f64 {
        (self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3).sqrt()
    }

    pub fn constraint_residual(&self, m: &ModelParams) -> f64 {
        (self.quadratic_form() - m.r * m.r).abs() / (m.r * m.r)
    }
}

/// Spherical coordinates: tau real, theta in [0,pi], phi in [0,2pi).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SphericalCoords {
    pub tau: f64,
    pub theta: f64,
    pub phi: f64,
}

impl SphericalCoords {
    pub fn new(tau: f64, theta: f64, phi: f64) -> Result<Self> {
        if !tau.is_finite() {
            return Err(Error::Domain(format!("tau must be finite, got {tau}")));
        }
        if !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(Error::Domain(format!("theta must lie in [0,pi], got {theta}")));
        }
        if !(0.0..2.0 * std::f64::consts::PI).contains(&phi) {
            return Err(Error::Domain(format!("phi must lie in [0,2pi), got {phi}")));
        }
        Ok(Self { tau, theta, phi })
    }
}

/// Which half of the hyperboloid the EP chart covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Half {
    /// x0 + x3 > 0: 0 <= t1 < 1, t2 > 1.
    PlusHalf,
    /// x0 + x3 < 0: t1 > 1, 0 <= t2 < 1.
    MinusHalf,
}

/// Elliptic-parabolic coordinates t1, t2 with the azimuthal angle.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EPCoords {
    pub t1: f64,
    pub t2: f64,
    pub phi: f64,
    pub half: Half,
}

impl EPCoords {
    pub fn new(t1: f64, t2: f64, phi: f64, half: Half) -> Result<Self> {
        let ok = match half {
            Half::PlusHalf => (0.0..1.0).contains(&t1) && t2 > 1.0,
            Half::MinusHalf => t1 > 1.0 && (0.0..1.0).contains(&t2),
        };
        if !ok {
            return Err(Error::Domain(format!(
                "EP ranges violated for {half:?}: t1={t1}, t2={t2}"
            )));
        }
        if (t1 - 1.0).abs() < CHART_BOUNDARY_TOL || (t2 - 1.0).abs() < CHART_BOUNDARY_TOL {
            return Err(Error::ChartBoundary(format!("t1={t1}, t2={t2} too close to 1")));
        }
        Ok(Self { t1, t2, phi, half })
    }
}

pub fn spherical_to_ambient(c: &SphericalCoords, m: &ModelParams) -> AmbientPoint {
    let (st, ct) = (c.tau.sinh(), c.tau.cosh());
    let (sth, cth) = c.theta.sin_cos();
    let (sph, cph) = c.phi.sin_cos();
    AmbientPoint {
        x0: m.r * st,
        x1: m.r * ct * sth * cph,
        x2: m.r * ct * sth * sph,
        x3: m.r * ct * cth,
    }
}

pub fn ambient_to_spherical(p: &AmbientPoint, m: &ModelParams) -> Result<SphericalCoords> {
    if p.constraint_residual(m) > 1e-8 {
        return Err(Error::Domain("point is off the hyperboloid".into()));
    }
    let tau = (p.x0 / m.r).asinh();
    let ct = m.r * tau.cosh();
    let theta = (p.x3 / ct).clamp(-1.0, 1.0).acos();
    let mut phi = p.x2.atan2(p.x1);
    if phi < 0.0 {
        phi += 2.0 * std::f64::consts::PI;
    }
    if phi >= 2.0 * std::f64::consts::PI {
        phi = 0.0;
    }
    Ok(SphericalCoords { tau, theta, phi })
}

pub fn ep_to_ambient(c: &EPCoords, m: &ModelParams) -> Result<AmbientPoint> {
    let (t1, t2) = (c.t1, c.t2);
    if (t1 - 1.0).abs() < CHART_BOUNDARY_TOL || (t2 - 1.0).abs() < CHART_BOUNDARY_TOL {
        return Err(Error::ChartBoundary(format!("t1={t1} or t2={t2} at the chart singularity")));
    }
    // (1-t1)(t2-1) is positive on both halves
    let den = 2.0 * ((1.0 - t1) * (t2 - 1.0)).sqrt();
    let (sph, cph) = c.phi.sin_cos();
    let rho = m.r * (t1 * t2).sqrt();
    let mut x0 = m.r * (t1 + t2 - 2.0) / den;
    let mut x3 = m.r * (t1 + t2 - 2.0 * t1 * t2) / den;
    if c.half == Half::MinusHalf {
        x0 = -x0;
        x3 = -x3;
    }
    Ok(AmbientPoint { x0, x1: rho * cph, x2: rho * sph, x3 })
}

pub fn spherical_to_ep(c: &SphericalCoords) -> Result<EPCoords> {
    let tt = c.tau.tanh();
    let cth = c.theta.cos();
    let gate = tt + cth; // sign of x0 + x3
    if gate.abs() < CHART_BOUNDARY_TOL {
        return Err(Error::ChartBoundary(format!(
            "tanh(tau) + cos(theta) = {gate:e} is on the dividing surface"
        )));
    }
    let t1 = (1.0 - cth) / (1.0 + tt);
    let t2 = (1.0 + cth) / (1.0 - tt);
    let half = if gate > 0.0 { Half::PlusHalf } else { Half::MinusHalf };
    EPCoords::new(t1, t2, c.phi, half)
}

pub fn ep_to_spherical(c: &EPCoords, m: &ModelParams) -> Result<SphericalCoords> {
    let p = ep_to_ambient(c, m)?;
    ambient_to_spherical(&p, m)
}

/// R^3 cosh^2(tau) sin(theta): density of dV in spherical coordinates.
pub fn volume_weight_spherical(c: &SphericalCoords, m: &ModelParams) -> f64 {
    let ct = c.tau.cosh();
    m.r.powi(3) * ct * ct * c.theta.sin()
}

/// (R^3/4) (1/(1-t1) + 1/(t2-1)): density of dV in EP coordinates
/// (PlusHalf chart).
pub fn volume_weight_ep(c: &EPCoords, m: &ModelParams) -> Result<f64> {
    if c.half != Half::PlusHalf {
        return Err(Error::ChartBoundary("volume weight defined on the PlusHalf chart".into()));
    }
    if (c.t1 - 1.0).abs() < CHART_BOUNDARY_TOL || (c.t2 - 1.0).abs() < CHART_BOUNDARY_TOL {
        return Err(Error::ChartBoundary("chart singular at t1=1 or t2=1".into()));
    }
    Ok(m.r.powi(3) / 4.0 * (1.0 / (1.0 - c.t1) + 1.0 / (c.t2 - 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit() -> ModelParams {
        ModelParams::new(1.0, 0.0).unwrap()
    }

    #[test]
    fn spherical_origin() {
        let p = spherical_to_ambient(&SphericalCoords { tau: 0.0, theta: 0.0, phi: 0.0 }, &unit());
        assert!((p.x0, p.x1, p.x2) == (0.0, 0.0, 0.0) && (p.x3 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn spherical_equator_sample() {
        let m = ModelParams::new(2.0, 0.0).unwrap();
        let c = SphericalCoords { tau: 1.0, theta: std::f64::consts::FRAC_PI_2, phi: 0.0 };
        let p = spherical_to_ambient(&c, &m);
        assert!((p.x0 - 2.0 * 1f64.sinh()).abs() < 1e-14);
        assert!((p.x1 - 2.0 * 1f64.cosh()).abs() < 1e-14);
        assert!(p.x2.abs() < 1e-14 && p.x3.abs() < 1e-13);
    }

    #[test]
    fn constraint_on_random_points() {
        let m = ModelParams::new(1.7, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let c = SphericalCoords {
                tau: rng.gen_range(-3.0..3.0),
                theta: rng.gen_range(0.0..std::f64::consts::PI),
                phi: rng.gen_range(0.0..std::f64::consts::TAU),
            };
            let p = spherical_to_ambient(&c, &m);
            // cosh^2 - sinh^2 cancellation grows with |tau|; stays well
            // inside 1e-12 on this range
            assert!(p.constraint_residual(&m) < 1e-12);
        }
    }

    #[test]
    fn ep_axis_point() {
        let m = unit();
        let c = EPCoords::new(0.0, 2.0, 0.0, Half::PlusHalf).unwrap();
        let p = ep_to_ambient(&c, &m).unwrap();
        assert!(p.x0.abs() < 1e-15 && p.x1.abs() < 1e-15 && p.x2.abs() < 1e-15);
        assert!((p.x3 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ep_constraint_random() {
        let m = ModelParams::new(0.8, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..500 {
            let c = EPCoords::new(
                rng.gen_range(0.0..0.999),
                rng.gen_range(1.001..50.0),
                rng.gen_range(0.0..std::f64::consts::TAU),
                Half::PlusHalf,
            )
            .unwrap();
            let p = ep_to_ambient(&c, &m).unwrap();
            assert!(p.constraint_residual(&m) < 1e-10);
            assert!(p.x0 + p.x3 > 0.0);
        }
    }

    #[test]
    fn minus_half_flips_signs() {
        let m = unit();
        let plus = ep_to_ambient(&EPCoords::new(0.3, 1.7, 0.4, Half::PlusHalf).unwrap(), &m).unwrap();
        let minus =
            ep_to_ambient(&EPCoords::new(1.7, 0.3, 0.4, Half::MinusHalf).unwrap(), &m).unwrap();
        // swapping t1 <-> t2 and flipping signs lands on the mirror point
        assert!(minus.x0 + minus.x3 < 0.0);
        assert!(minus.constraint_residual(&m) < 1e-12);
        assert!(plus.constraint_residual(&m) < 1e-12);
    }

    #[test]
    fn chart_boundary_rejected() {
        let c = SphericalCoords { tau: 0.0, theta: std::f64::consts::FRAC_PI_2, phi: 0.0 };
        assert!(matches!(spherical_to_ep(&c), Err(Error::ChartBoundary(_))));
    }

    #[test]
    fn spherical_ep_round_trip() {
        let m = ModelParams::new(1.3, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut count = 0;
        while count < 10_000 {
            let c = SphericalCoords {
                tau: rng.gen_range(-4.0..4.0),
                theta: rng.gen_range(0.0..std::f64::consts::PI),
                phi: rng.gen_range(0.0..std::f64::consts::TAU),
            };
            let ep = match spherical_to_ep(&c) {
                Ok(ep) => ep,
                Err(_) => continue, // on/near the dividing surface
            };
            let back = ep_to_spherical(&ep, &m).unwrap();
            assert!((back.tau - c.tau).abs() < 1e-9, "tau {} vs {}", back.tau, c.tau);
            assert!((back.theta - c.theta).abs() < 1e-9);
            let dphi = (back.phi - c.phi).abs();
            assert!(dphi < 1e-9 || (dphi - std::f64::consts::TAU).abs() < 1e-9);
            count += 1;
        }
    }

    #[test]
    fn ep_matches_spherical_embedding() {
        let m = ModelParams::new(2.2, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..200 {
            let c = SphericalCoords {
                tau: rng.gen_range(-3.0..3.0),
                theta: rng.gen_range(0.0..std::f64::consts::PI),
                phi: rng.gen_range(0.0..std::f64::consts::TAU),
            };
            if let Ok(ep) = spherical_to_ep(&c) {
                let a = spherical_to_ambient(&c, &m);
                let b = ep_to_ambient(&ep, &m).unwrap();
                let d = ((a.x0 - b.x0).powi(2)
                    + (a.x1 - b.x1).powi(2)
                    + (a.x2 - b.x2).powi(2)
                    + (a.x3 - b.x3).powi(2))
                .sqrt();
                assert!(d < 1e-10 * m.r, "embedding mismatch {d:e}");
            }
        }
    }

    #[test]
    fn weight_values() {
        let m = unit();
        let c = SphericalCoords { tau: 0.0, theta: std::f64::consts::FRAC_PI_2, phi: 0.0 };
        assert!((volume_weight_spherical(&c, &m) - 1.0).abs() < 1e-15);
        let m2 = ModelParams::new(2.0, 0.0).unwrap();
        let c2 = SphericalCoords { tau: 1.0, theta: std::f64::consts::FRAC_PI_2, phi: 0.0 };
        assert!((volume_weight_spherical(&c2, &m2) - 8.0 * 1f64.cosh().powi(2)).abs() < 1e-12);
        let ep = EPCoords::new(0.5, 2.0, 0.0, Half::PlusHalf).unwrap();
        assert!((volume_weight_ep(&ep, &m).unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn ep_weight_matches_induced_metric() {
        // sqrt|det g| of the embedding, by central differences
        let m = ModelParams::new(1.4, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let h = 1e-6;
        let dot = |a: &AmbientPoint, b: &AmbientPoint| {
            a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3 - a.x0 * b.x0
        };
        for _ in 0..100 {
            let t1 = rng.gen_range(0.05..0.95);
            let t2 = rng.gen_range(1.05..6.0);
            let phi = rng.gen_range(0.1..6.0);
            let at = |t1: f64, t2: f64, phi: f64| {
                ep_to_ambient(&EPCoords { t1, t2, phi, half: Half::PlusHalf }, &m).unwrap()
            };
            let diff = |f: &dyn Fn(f64) -> AmbientPoint| {
                let a = f(h);
                let b = f(-h);
                AmbientPoint {
                    x0: (a.x0 - b.x0) / (2.0 * h),
                    x1: (a.x1 - b.x1) / (2.0 * h),
                    x2: (a.x2 - b.x2) / (2.0 * h),
                    x3: (a.x3 - b.x3) / (2.0 * h),
                }
            };
            let d1 = diff(&|e| at(t1 + e, t2, phi));
            let d2 = diff(&|e| at(t1, t2 + e, phi));
            let d3 = diff(&|e| at(t1, t2, phi + e));
            let g = [
                [dot(&d1, &d1), dot(&d1, &d2), dot(&d1, &d3)],
                [dot(&d2, &d1), dot(&d2, &d2), dot(&d2, &d3)],
                [dot(&d3, &d1), dot(&d3, &d2), dot(&d3, &d3)],
            ];
            let det = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1])
                - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
                + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
            let metric_weight = det.abs().sqrt();
            let w = volume_weight_ep(&EPCoords { t1, t2, phi, half: Half::PlusHalf }, &m).unwrap();
            assert!(
                (metric_weight - w).abs() < 1e-5 * w,
                "t1={t1} t2={t2}: {metric_weight} vs {w}"
            );
        }
    }
}
