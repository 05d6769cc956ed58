//! Python bindings for the hypkep library.
//!
//! Exposes the model parameters, the discrete spectrum, bound and
//! continuum radial states, the elliptic-parabolic basis, the
//! interbasis coefficients and the spectral expansion to Python.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use hypkep::epii::{self, EPDiscrete};
use hypkep::expansion::{self, ExpansionConfig, SpectralDecomposition, TestFunction};
use hypkep::geometry::{EPCoords, Half, ModelParams, SphericalCoords};
use hypkep::interbasis;
use hypkep::quad::QuadratureSpec;
use hypkep::radial::{self, ContinuumKind, RadialQuantum, SpectralPoint};
use hypkep::validate::{self, Suite};

fn err(e: hypkep::error::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Curvature radius and coupling strength of the model.
#[pyclass(from_py_object)]
#[derive(Clone)]
struct Model {
    inner: ModelParams,
}

#[pymethods]
impl Model {
    #[new]
    #[pyo3(signature = (r=1.0, alpha=0.0))]
    fn new(r: f64, alpha: f64) -> PyResult<Self> {
        Ok(Self { inner: ModelParams::new(r, alpha).map_err(err)? })
    }

    #[getter]
    fn r(&self) -> f64 {
        self.inner.r
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha
    }

    /// Dimensionless coupling alpha * R.
    #[getter]
    fn alpha_r(&self) -> f64 {
        self.inner.alpha_r()
    }

    fn __repr__(&self) -> String {
        format!("Model(r={}, alpha={})", self.inner.r, self.inner.alpha)
    }
}

/// One bound level of the discrete spectrum.
#[pyclass]
struct Level {
    #[pyo3(get)]
    n: u32,
    #[pyo3(get)]
    lambda: f64,
    #[pyo3(get)]
    energy: f64,
    #[pyo3(get)]
    sigma: f64,
}

#[pymethods]
impl Level {
    fn __repr__(&self) -> String {
        format!("Level(n={}, lambda={}, energy={})", self.n, self.lambda, self.energy)
    }
}

/// Bound levels below the continuum for the given angular momentum.
#[pyfunction]
fn discrete_spectrum(model: &Model, ell: u32) -> Vec<Level> {
    radial::discrete_spectrum(&model.inner, ell)
        .into_iter()
        .map(|d| Level { n: d.n, lambda: d.lambda, energy: d.energy, sigma: d.sigma })
        .collect()
}

/// A unit-normalized bound state in the spherical basis.
#[pyclass]
struct BoundState {
    rq: RadialQuantum,
    model: ModelParams,
}

#[pymethods]
impl BoundState {
    #[new]
    fn new(n: u32, ell: u32, model: &Model) -> PyResult<Self> {
        let rq = RadialQuantum::new(n, ell, &model.inner).map_err(err)?;
        Ok(Self { rq, model: model.inner })
    }

    #[getter]
    fn lambda(&self) -> f64 {
        self.rq.lambda()
    }

    #[getter]
    fn energy(&self) -> f64 {
        radial::energy_from_lambda(self.rq.lambda(), &self.model)
    }

    /// Normalized radial factor at tau.
    fn radial(&self, tau: f64) -> PyResult<f64> {
        radial::normalized_bound_state(tau, &self.rq).map_err(err)
    }

    /// Full wave function at (tau, theta, phi) for azimuthal number m.
    fn wavefunction(&self, tau: f64, theta: f64, phi: f64, m: i32) -> PyResult<Complex64> {
        let c = SphericalCoords::new(tau, theta, phi).map_err(err)?;
        radial::full_wavefunction(&c, &self.rq, m, &self.model).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("BoundState(n={}, ell={})", self.rq.n, self.rq.ell)
    }
}

fn parse_kind(kind: &str) -> PyResult<ContinuumKind> {
    match kind {
        "zero" => Ok(ContinuumKind::Zero),
        "one" => Ok(ContinuumKind::One),
        "two" => Ok(ContinuumKind::Two),
        _ => Err(PyValueError::new_err(format!(
            "unknown continuum kind {kind:?}, expected \"zero\", \"one\" or \"two\""
        ))),
    }
}

/// A delta-normalized continuum radial state.
#[pyclass]
struct ContinuumState {
    ell: u32,
    sp: SpectralPoint,
    kind: ContinuumKind,
}

#[pymethods]
impl ContinuumState {
    #[new]
    #[pyo3(signature = (lambda, ell, model, kind="one"))]
    fn new(lambda: f64, ell: u32, model: &Model, kind: &str) -> PyResult<Self> {
        let sp = SpectralPoint::new(lambda, &model.inner).map_err(err)?;
        let kind = parse_kind(kind)?;
        // reject band mismatches up front rather than on first eval
        radial::continuum_norm_constant(ell, &sp, kind).map_err(err)?;
        Ok(Self { ell, sp, kind })
    }

    /// Band label of the spectral point.
    #[getter]
    fn band(&self) -> PyResult<String> {
        Ok(format!("{:?}", self.sp.band().map_err(err)?))
    }

    fn eval(&self, tau: f64) -> PyResult<Complex64> {
        radial::normalized_continuum(tau, self.ell, &self.sp, self.kind).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("ContinuumState(lambda={}, ell={})", self.sp.lambda.re, self.ell)
    }
}

/// A discrete state of the elliptic-parabolic basis, normalized to 1/2
/// on its half-space chart.
#[pyclass]
struct EPState {
    ep: EPDiscrete,
    model: ModelParams,
}

#[pymethods]
impl EPState {
    #[new]
    fn new(n1: u32, n2: u32, m: i32, model: &Model) -> PyResult<Self> {
        let ep = EPDiscrete::new(n1, n2, m, &model.inner).map_err(err)?;
        Ok(Self { ep, model: model.inner })
    }

    #[getter]
    fn n(&self) -> u32 {
        self.ep.n
    }

    #[getter]
    fn sigma(&self) -> f64 {
        self.ep.sigma
    }

    #[getter]
    fn is_normalizable(&self) -> bool {
        self.ep.is_normalizable()
    }

    /// Wave function at chart coordinates (t1, t2, phi); half is
    /// "plus" or "minus".
    #[pyo3(signature = (t1, t2, phi, half="plus"))]
    fn eval(&self, t1: f64, t2: f64, phi: f64, half: &str) -> PyResult<Complex64> {
        let h = match half {
            "plus" => Half::PlusHalf,
            "minus" => Half::MinusHalf,
            _ => return Err(PyValueError::new_err("half must be \"plus\" or \"minus\"")),
        };
        let c = EPCoords::new(t1, t2, phi, h).map_err(err)?;
        epii::wavefunction_discrete(&c, &self.ep, &self.model).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("EPState(n1={}, n2={}, m={})", self.ep.n1, self.ep.n2, self.ep.m)
    }
}

/// Expansion coefficients of a separated state over the spherical basis,
/// as a list of (ell, w) pairs up to ell_max.
#[pyfunction]
fn interbasis_table(n1: u32, n2: u32, m: i32, ell_max: u32, model: &Model) -> PyResult<Vec<(u32, f64)>> {
    interbasis::coefficient_table(n1, n2, m, ell_max, &model.inner).map_err(err)
}

/// Same coefficients through the direct projection quadrature, for
/// cross-checking the closed form.
#[pyfunction]
fn interbasis_table_numeric(
    n1: u32,
    n2: u32,
    m: i32,
    ell_max: u32,
    model: &Model,
) -> PyResult<Vec<(u32, f64)>> {
    let spec = QuadratureSpec::validation();
    let ep = EPDiscrete::new(n1, n2, m, &model.inner).map_err(err)?;
    let lmin = ep.n.max(m.unsigned_abs());
    (lmin..=ell_max)
        .map(|l| {
            let key = interbasis::InterbasisKey::new(n1, n2, m, l, &model.inner).map_err(err)?;
            Ok((l, interbasis::coeff_w_numeric(&key, None, &spec).map_err(err)?))
        })
        .collect()
}

/// Spectral decomposition of a radial profile, kept together with the
/// profile so the reconstruction diagnostics stay available.
#[pyclass]
struct Expansion {
    phi: TestFunction,
    dec: SpectralDecomposition,
}

#[pymethods]
impl Expansion {
    /// Band samples as (lambda, weight, c1, c2) tuples.
    #[getter]
    fn low_band(&self) -> Vec<(f64, f64, Complex64, Complex64)> {
        self.dec.low_band.iter().map(|b| (b.lambda, b.weight, b.c1, b.c2)).collect()
    }

    #[getter]
    fn high_band(&self) -> Vec<(f64, f64, Complex64, Complex64)> {
        self.dec.high_band.iter().map(|b| (b.lambda, b.weight, b.c1, b.c2)).collect()
    }

    /// Bound-state coefficients as (n, c) pairs.
    #[getter]
    fn discrete(&self) -> Vec<(u32, f64)> {
        self.dec.discrete.clone()
    }

    /// Sum the decomposition back at a point.
    fn reconstruct(&self, tau: f64) -> PyResult<f64> {
        expansion::reconstruct(&self.dec, tau).map_err(err)
    }

    /// L2 distance between profile and reconstruction.
    fn reconstruction_error(&self) -> PyResult<f64> {
        expansion::reconstruction_error(&self.dec, &self.phi).map_err(err)
    }

    /// | spectral norm - profile norm | over the profile norm.
    fn parseval_defect(&self) -> f64 {
        expansion::parseval_defect(&self.dec, &self.phi)
    }

    fn __repr__(&self) -> String {
        format!(
            "Expansion(ell={}, low={}, high={}, discrete={})",
            self.dec.ell,
            self.dec.low_band.len(),
            self.dec.high_band.len(),
            self.dec.discrete.len()
        )
    }
}

fn run_expand(phi: TestFunction, ell: u32, model: &Model, lambda_max: f64) -> PyResult<Expansion> {
    let cfg = ExpansionConfig { lambda_max, ..ExpansionConfig::default() };
    let dec = expansion::expand(&phi, ell, &model.inner, &cfg).map_err(err)?;
    Ok(Expansion { phi, dec })
}

/// Expand a Gaussian profile exp(-(tau-mu)^2/(2 s^2)) over the spectrum.
#[pyfunction]
#[pyo3(signature = (mu, s, ell, model, lambda_max=150.0))]
fn expand_gaussian(mu: f64, s: f64, ell: u32, model: &Model, lambda_max: f64) -> PyResult<Expansion> {
    let phi = TestFunction::gaussian(mu, s).map_err(err)?;
    run_expand(phi, ell, model, lambda_max)
}

/// Expand a profile given as (tau, value) samples, linearly interpolated.
#[pyfunction]
#[pyo3(signature = (samples, ell, model, lambda_max=150.0))]
fn expand_samples(
    samples: Vec<(f64, f64)>,
    ell: u32,
    model: &Model,
    lambda_max: f64,
) -> PyResult<Expansion> {
    let phi = TestFunction::from_samples(samples).map_err(err)?;
    run_expand(phi, ell, model, lambda_max)
}

/// Run the self-check suites and return the report as a JSON string.
///
/// suite is one of "wronskian", "ode", "ortho", "connection",
/// "integrals", "interbasis" or "all".
#[pyfunction]
#[pyo3(signature = (suite="all", seed=0))]
fn run_validation(suite: &str, seed: u64) -> PyResult<String> {
    let suites = Suite::parse(suite)
        .ok_or_else(|| PyValueError::new_err(format!("unknown suite {suite:?}")))?;
    let report = validate::run(&suites, seed).map_err(err)?;
    serde_json::to_string(&report).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
fn hypkep_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Model>()?;
    m.add_class::<Level>()?;
    m.add_class::<BoundState>()?;
    m.add_class::<ContinuumState>()?;
    m.add_class::<EPState>()?;
    m.add_class::<Expansion>()?;
    m.add_function(wrap_pyfunction!(discrete_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(interbasis_table, m)?)?;
    m.add_function(wrap_pyfunction!(interbasis_table_numeric, m)?)?;
    m.add_function(wrap_pyfunction!(expand_gaussian, m)?)?;
    m.add_function(wrap_pyfunction!(expand_samples, m)?)?;
    m.add_function(wrap_pyfunction!(run_validation, m)?)?;
    Ok(())
}
