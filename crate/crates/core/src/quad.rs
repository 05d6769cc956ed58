//! Integration primitives: adaptive Gauss-Kronrod, tanh-sinh for endpoint
//! singularities, exponentially mapped infinite ranges, fixed Gauss-Legendre
//! panels for uniformly oscillatory inner products, and a fixed-step RK4
//! utility for ODE cross-checks.
//!
//! All routines are deterministic: identical inputs give bitwise-identical
//! results.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    AdaptiveGK,
    TanhSinh,
    ExpMapped,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    pub scheme: Scheme,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl QuadratureSpec {
    pub fn new(scheme: Scheme, rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(rel_tol > 0.0) || !(abs_tol > 0.0) {
            return Err(Error::InvalidInput("quadrature tolerances must be positive".into()));
        }
        Ok(Self { scheme, rel_tol, abs_tol, max_subdivisions })
    }

    /// Default for 1D validation integrals.
    pub fn validation() -> Self {
        Self { scheme: Scheme::AdaptiveGK, rel_tol: 1e-10, abs_tol: 1e-13, max_subdivisions: 4000 }
    }

    /// Looser default for 3D normalization integrals.
    pub fn volume() -> Self {
        Self { scheme: Scheme::AdaptiveGK, rel_tol: 1e-8, abs_tol: 1e-11, max_subdivisions: 2000 }
    }
}

/// Integral value with an error estimate; `converged` is false when the
/// requested tolerance was not certified (best value still returned).
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub converged: bool,
}

impl QuadResult {
    pub fn re(&self) -> f64 {
        self.value.re
    }

    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::ToleranceNotMet {
                estimate: self.error_estimate,
                requested: f64::NAN,
            })
        }
    }
}

// 7-point Gauss / 15-point Kronrod nodes and weights on [-1,1].
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One G7K15 panel: returns (kronrod value, |K15 - G7| error proxy).
fn gk15<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let f1 = f(c - x);
        let f2 = f(c + x);
        kron += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    kron *= h;
    gauss *= h;
    // |K15 - G7| overestimates the Kronrod error on smooth panels, which is
    // what the never-underestimate guarantee wants
    (kron, (kron - gauss).norm())
}

/// Adaptive bisection on [a,b] driven by the Kronrod error proxy.
pub fn adaptive_gk<F: FnMut(f64) -> Complex64>(
    f: &mut F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> QuadResult {
    struct Seg {
        a: f64,
        b: f64,
        val: Complex64,
        err: f64,
    }
    let (v0, e0) = gk15(f, a, b);
    let mut segs = vec![Seg { a, b, val: v0, err: e0 }];
    for _ in 0..spec.max_subdivisions {
        let total: Complex64 = segs.iter().map(|s| s.val).sum();
        let err: f64 = segs.iter().map(|s| s.err).sum();
        let tol = spec.abs_tol.max(spec.rel_tol * total.norm());
        if err <= tol {
            return QuadResult { value: total, error_estimate: err, converged: true };
        }
        // split the worst segment; first index on ties keeps determinism
        let mut worst = 0;
        for (i, s) in segs.iter().enumerate() {
            if s.err > segs[worst].err {
                worst = i;
            }
        }
        let Seg { a, b, .. } = segs[worst];
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break; // interval exhausted at f64 resolution
        }
        let (vl, el) = gk15(f, a, m);
        let (vr, er) = gk15(f, m, b);
        segs[worst] = Seg { a, b: m, val: vl, err: el };
        segs.push(Seg { a: m, b, val: vr, err: er });
    }
    let total: Complex64 = segs.iter().map(|s| s.val).sum();
    let err: f64 = segs.iter().map(|s| s.err).sum();
    let tol = spec.abs_tol.max(spec.rel_tol * total.norm());
    QuadResult { value: total, error_estimate: err, converged: err <= tol }
}

/// Tanh-sinh (double-exponential) rule on [a,b]; tolerates integrable
/// endpoint singularities.
pub fn tanh_sinh<F: FnMut(f64) -> Complex64>(
    f: &mut F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> QuadResult {
    let h0 = 0.5 * (b - a);
    let pi_2 = std::f64::consts::FRAC_PI_2;
    // node at parameter t: x = a/b -+ h0 (1 -+ tanh(pi/2 sinh t)); the
    // distance to the nearer endpoint is formed stably, so singularities
    // sitting at an endpoint (best: at zero) are sampled accurately
    let eval = |f: &mut F, t: f64| -> Complex64 {
        let w_big = pi_2 * t.sinh();
        let e = (-2.0 * w_big.abs()).exp();
        let dist = h0 * 2.0 * e / (1.0 + e); // h0 (1 - |tanh w|)
        let sech2 = 4.0 * e / ((1.0 + e) * (1.0 + e));
        let w = pi_2 * t.cosh() * sech2;
        let x = if t >= 0.0 { b - dist } else { a + dist };
        if x <= a || x >= b || w < 1e-300 {
            return Complex64::new(0.0, 0.0);
        }
        h0 * w * f(x)
    };
    let t_max = 4.0;
    let mut h = 1.0;
    // level 0
    let mut sum = eval(f, 0.0);
    let mut k = 1;
    while (k as f64) * h <= t_max {
        let t = k as f64 * h;
        sum += eval(f, t) + eval(f, -t);
        k += 1;
    }
    let mut prev = sum * h;
    let max_level = 12;
    for level in 1..=max_level {
        h *= 0.5;
        // add the odd nodes of the refined mesh
        let mut k = 1;
        while (k as f64) * h <= t_max {
            let t = k as f64 * h;
            sum += eval(f, t) + eval(f, -t);
            k += 2;
        }
        let cur = sum * h;
        let diff = (cur - prev).norm();
        let tol = spec.abs_tol.max(spec.rel_tol * cur.norm());
        if diff <= tol && level >= 3 {
            return QuadResult { value: cur, error_estimate: diff, converged: true };
        }
        prev = cur;
        if level == max_level {
            return QuadResult { value: cur, error_estimate: diff, converged: diff <= tol };
        }
    }
    unreachable!()
}

/// Dispatch on the requested scheme for a finite interval.
pub fn integrate_finite<F: FnMut(f64) -> Complex64>(
    f: &mut F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    if !(a < b) {
        return Err(Error::Domain(format!("integration bounds must satisfy a < b, got [{a}, {b}]")));
    }
    Ok(match spec.scheme {
        Scheme::TanhSinh => tanh_sinh(f, a, b, spec),
        _ => adaptive_gk(f, a, b, spec),
    })
}

/// Largest |u| for the double-exponential maps below; keeps exp(2 sinh u)
/// clear of f64 overflow while reaching |x| ~ 1e274.
const DE_U_MAX: f64 = 6.45;

/// Checks the mapped integrand at the clip boundary; convergent integrands
/// are double-exponentially small there.
fn check_tail_decay(samples: &[Complex64], spec: &QuadratureSpec) -> Result<()> {
    for v in samples {
        if !v.is_finite() || v.norm() > spec.abs_tol {
            return Err(Error::NonDecay);
        }
    }
    Ok(())
}

/// Integral over the whole real line through x = sinh(2 sinh u), which
/// compresses any integrable tail into a doubly-exponentially decaying
/// integrand on |u| <= DE_U_MAX.
pub fn integrate_real_line<F: FnMut(f64) -> Complex64>(
    f: &mut F,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    let mut g = |u: f64| {
        let s = 2.0 * u.sinh();
        let x = s.sinh();
        let fx = f(x);
        // NaN from internal overflow (e.g. x^2 * e^-x) deep in the tail is
        // an underflowing product; a genuinely growing f stays Inf and is
        // caught by the decay probes
        if (fx.re.is_nan() || fx.im.is_nan()) && x.abs() > 1e15 {
            return Complex64::new(0.0, 0.0);
        }
        fx * 2.0 * u.cosh() * s.cosh()
    };
    let probes: Vec<Complex64> =
        [-DE_U_MAX, -DE_U_MAX + 0.25, -DE_U_MAX + 0.5, DE_U_MAX - 0.5, DE_U_MAX - 0.25, DE_U_MAX]
            .iter()
            .map(|&u| g(u))
            .collect();
    check_tail_decay(&probes, spec)?;
    Ok(adaptive_gk(&mut g, -DE_U_MAX, DE_U_MAX, spec))
}

/// Integral over [a, infinity) through x = a + exp(2 sinh u). The map also
/// linearizes logarithmic oscillation near the finite endpoint; integrable
/// endpoint singularities are fine when a = 0 (the distance is then exact).
pub fn integrate_semi_infinite<F: FnMut(f64) -> Complex64>(
    f: &mut F,
    a: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    let mut g = |u: f64| {
        let e = (2.0 * u.sinh()).exp();
        let fx = f(a + e);
        if (fx.re.is_nan() || fx.im.is_nan()) && e > 1e15 {
            return Complex64::new(0.0, 0.0);
        }
        fx * 2.0 * u.cosh() * e
    };
    let probes: Vec<Complex64> =
        [-DE_U_MAX, -DE_U_MAX + 0.25, -DE_U_MAX + 0.5, DE_U_MAX - 0.5, DE_U_MAX - 0.25, DE_U_MAX]
            .iter()
            .map(|&u| g(u))
            .collect();
    check_tail_decay(&probes, spec)?;
    Ok(adaptive_gk(&mut g, -DE_U_MAX, DE_U_MAX, spec))
}

/// Gauss-Legendre nodes and weights on [-1,1] by Newton iteration.
pub fn gauss_legendre_nodes(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    let nf = n as f64;
    for i in 0..n {
        // Chebyshev initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            // Legendre P_n and derivative by recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        // weight 2 / ((1-x^2) P_n'(x)^2)
        let mut p0 = 1.0;
        let mut p1 = x;
        for k in 2..=n {
            let kf = k as f64;
            let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
            p0 = p1;
            p1 = p2;
        }
        let dp = nf * (x * p1 - p0) / (x * x - 1.0);
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

/// Fixed Gauss-Legendre panels over [a,b]: `panels` panels of `order` points
/// each. Deterministic cost, no error estimate; intended for uniformly
/// oscillatory integrands where adaptive bisection thrashes. Panel width
/// should resolve the oscillation period.
pub fn gauss_legendre_panels<F: FnMut(f64) -> Complex64>(
    f: &mut F,
    a: f64,
    b: f64,
    panels: usize,
    order: usize,
) -> Complex64 {
    let nodes = gauss_legendre_nodes(order);
    let w = (b - a) / panels as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..panels {
        let pa = a + i as f64 * w;
        let c = pa + 0.5 * w;
        for &(x, wt) in &nodes {
            acc += wt * f(c + 0.5 * w * x);
        }
    }
    acc * (0.5 * w)
}

/// Classic fixed-step RK4 for a first-order complex system of dimension N.
/// Returns the state at t1 after `steps` equal steps from (t0, y0).
pub fn rk4<const N: usize, F: FnMut(f64, &[Complex64; N]) -> [Complex64; N]>(
    deriv: &mut F,
    t0: f64,
    y0: [Complex64; N],
    t1: f64,
    steps: usize,
) -> [Complex64; N] {
    let h = (t1 - t0) / steps as f64;
    let mut t = t0;
    let mut y = y0;
    let add = |y: &[Complex64; N], k: &[Complex64; N], s: f64| {
        let mut out = *y;
        for i in 0..N {
            out[i] += s * k[i];
        }
        out
    };
    for _ in 0..steps {
        let k1 = deriv(t, &y);
        let k2 = deriv(t + 0.5 * h, &add(&y, &k1, 0.5 * h));
        let k3 = deriv(t + 0.5 * h, &add(&y, &k2, 0.5 * h));
        let k4 = deriv(t + h, &add(&y, &k3, h));
        for i in 0..N {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        t += h;
    }
    y
}

/// Parallelism cap: HYPKEP_THREADS if set, otherwise the hardware count.
pub fn thread_count() -> usize {
    std::env::var("HYPKEP_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

/// Map an index range in parallel, preserving order (so reductions over the
/// output are deterministic regardless of scheduling).
pub fn par_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let threads = thread_count().min(n.max(1));
    if threads <= 1 || n <= 1 {
        return (0..n).map(f).collect();
    }
    let chunk = n.div_ceil(threads);
    let mut out: Vec<Option<T>> = (0..n).map(|_| None).collect();
    let fr = &f;
    std::thread::scope(|s| {
        let mut handles = Vec::new();
        for (t, slot) in out.chunks_mut(chunk).enumerate() {
            handles.push(s.spawn(move || {
                for (j, cell) in slot.iter_mut().enumerate() {
                    *cell = Some(fr(t * chunk + j));
                }
            }));
        }
        for h in handles {
            h.join().expect("worker panicked");
        }
    });
    out.into_iter().map(|v| v.expect("filled")).collect()
}

/// Real-valued convenience wrappers.
pub fn integrate_finite_re<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    integrate_finite(&mut |x| Complex64::new(f(x), 0.0), a, b, spec)
}

pub fn integrate_real_line_re<F: FnMut(f64) -> f64>(
    f: &mut F,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    integrate_real_line(&mut |x| Complex64::new(f(x), 0.0), spec)
}

pub fn integrate_semi_infinite_re<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    integrate_semi_infinite(&mut |x| Complex64::new(f(x), 0.0), a, spec)
}
