//! Command-line front end: discrete spectra, eigenfunction sampling,
//! validation suites, and spectral expansions, as JSON or CSV.

use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use hypkep::error::Error;
use hypkep::expansion::{
    self, expand_coulomb, ExpansionConfig, Smoothness, SpectralDecomposition, TestFunction,
};
use hypkep::geometry::{EPCoords, Half, ModelParams};
use hypkep::interbasis::{coeff_w_closed, coeff_w_numeric, InterbasisKey};
use hypkep::quad::QuadratureSpec;
use hypkep::radial::{
    discrete_spectrum, normalized_bound_state, normalized_continuum, ContinuumKind, RadialQuantum,
    SpectralPoint,
};
use hypkep::epii::{discrete_ep_states, wavefunction_continuous, wavefunction_discrete, EPContinuous, EPDiscrete};
use hypkep::validate::{self, Suite};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "hypkep", version, about = "Kepler-Coulomb eigenfunctions on the single-sheeted hyperboloid")]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    output: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Coupling strength alpha
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    /// Curvature radius R (all quantities in R = 1 units unless set)
    #[arg(long, default_value_t = 1.0)]
    r: f64,
}

impl ModelArgs {
    fn model(&self) -> Result<ModelParams, Error> {
        ModelParams::new(self.r, self.alpha)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Discrete energy levels at fixed orbital number
    Spectrum {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        ell: u32,
    },
    /// Sample an eigenfunction on a grid
    Eval(EvalArgs),
    /// Run self-check suites
    Validate {
        /// wronskian, ode, ortho, connection, integrals, interbasis, or all
        #[arg(long, default_value = "all")]
        suite: String,
        /// RNG seed for the randomized suites
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Expand a profile over the mixed spectrum and reconstruct it
    Expand(ExpandArgs),
    /// Interbasis coefficient table, closed form against projection quadrature
    Interbasis {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        n1: u32,
        #[arg(long)]
        n2: u32,
        #[arg(long)]
        m: i32,
        /// Largest orbital number in the table
        #[arg(long)]
        ell_max: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Basis {
    Spherical,
    Ep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Zero,
    One,
    Two,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, value_enum)]
    basis: Basis,
    /// Principal number of a spherical bound state
    #[arg(long)]
    n: Option<u32>,
    /// Orbital number (spherical basis)
    #[arg(long)]
    ell: Option<u32>,
    /// Spectral parameter of a spherical continuum state
    #[arg(long)]
    lambda: Option<f64>,
    /// Continuum family (with --lambda)
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    /// First parabolic number (ep basis)
    #[arg(long)]
    n1: Option<u32>,
    /// Second parabolic number (ep basis)
    #[arg(long)]
    n2: Option<u32>,
    /// Azimuthal number (ep basis)
    #[arg(long, default_value_t = 0)]
    m: i32,
    /// Separation parameter k of an ep continuum state (with --level)
    #[arg(long)]
    k: Option<f64>,
    /// Energy level n of an ep continuum state
    #[arg(long)]
    level: Option<u32>,
    #[arg(long, default_value_t = -3.0)]
    tau_min: f64,
    #[arg(long, default_value_t = 3.0)]
    tau_max: f64,
    #[arg(long, default_value_t = 61)]
    points: usize,
    /// t1 grid size (ep basis)
    #[arg(long, default_value_t = 9)]
    t1_points: usize,
    /// t2 grid size (ep basis)
    #[arg(long, default_value_t = 9)]
    t2_points: usize,
    /// Largest t2 sampled (ep basis)
    #[arg(long, default_value_t = 6.0)]
    t2_max: f64,
}

#[derive(Debug, Args)]
struct ExpandArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// gaussian:mu,s or a two-column (tau, value) sample file
    #[arg(long)]
    phi: String,
    #[arg(long)]
    ell: u32,
    #[arg(long, default_value_t = 150.0)]
    lambda_max: f64,
    /// Also expand a scaled copy and report the coefficient defect
    #[arg(long, default_value_t = false)]
    check_linearity: bool,
}

/// Distinguishes bad state labels or parameters (exit 2) from numerical
/// failures inside an evaluation (exit 3).
fn is_usage(e: &Error) -> bool {
    matches!(
        e,
        Error::QuantumNumbers(_) | Error::Domain(_) | Error::InvalidInput(_) | Error::ChartBoundary(_)
    )
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    if is_usage(&e) {
        ExitCode::from(2)
    } else {
        ExitCode::from(3)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Spectrum { model, ell } => {
            let mp = match model.model() {
                Ok(m) => m,
                Err(e) => return fail(e),
            };
            let rows = discrete_spectrum(&mp, ell);
            match cli.output {
                OutputFormat::Json => print_json(&json!({
                    "command": "spectrum",
                    "model": { "r": mp.r, "alpha": mp.alpha },
                    "ell": ell,
                    "rows": rows,
                })),
                OutputFormat::Csv => {
                    println!("n,energy,lambda,sigma");
                    for d in rows {
                        println!("{},{:.17e},{:.17e},{:.17e}", d.n, d.energy, d.lambda, d.sigma);
                    }
                }
            }
            ExitCode::SUCCESS
        }
        Command::Eval(args) => match run_eval(&args) {
            Ok(out) => {
                emit_eval(&out, cli.output);
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
        Command::Validate { suite, seed } => {
            let Some(suites) = Suite::parse(&suite) else {
                eprintln!("error: unknown suite '{suite}'");
                return ExitCode::from(2);
            };
            match validate::run(&suites, seed) {
                Ok(rep) => {
                    match cli.output {
                        OutputFormat::Json => print_json(&json!({
                            "command": "validate",
                            "seed": rep.seed,
                            "passed": rep.passed,
                            "suites": rep.suites,
                        })),
                        OutputFormat::Csv => {
                            println!("suite,check,residual,tolerance,passed");
                            for s in &rep.suites {
                                for c in &s.checks {
                                    println!(
                                        "{},{},{:.17e},{:.17e},{}",
                                        s.suite,
                                        c.name.replace(',', ";"),
                                        c.residual,
                                        c.tolerance,
                                        c.passed
                                    );
                                }
                            }
                        }
                    }
                    if rep.passed {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e) => fail(e),
            }
        }
        Command::Expand(args) => match run_expand(&args) {
            Ok((out, ok)) => {
                emit_expand(&out, cli.output);
                if ok {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                }
            }
            Err(e) => fail(e),
        },
        Command::Interbasis { model, n1, n2, m, ell_max } => {
            match run_interbasis(&model, n1, n2, m, ell_max) {
                Ok(rows) => {
                    match cli.output {
                        OutputFormat::Json => {
                            let max_dev = rows
                                .iter()
                                .map(|r| r.relative_deviation)
                                .fold(0.0f64, f64::max);
                            print_json(&json!({
                                "command": "interbasis",
                                "state": { "n1": n1, "n2": n2, "m": m },
                                "rows": rows,
                                "max_relative_deviation": max_dev,
                            }))
                        }
                        OutputFormat::Csv => {
                            println!("ell,w_closed,w_numeric,relative_deviation");
                            for r in rows {
                                println!(
                                    "{},{:.17e},{:.17e},{:.17e}",
                                    r.ell, r.w_closed, r.w_numeric, r.relative_deviation
                                );
                            }
                        }
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
    }
}

fn print_json<T: Serialize>(v: &T) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable output"));
}

#[derive(Serialize)]
struct Sample {
    #[serde(skip_serializing_if = "Option::is_none")]
    tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t2: Option<f64>,
    re: f64,
    im: f64,
}

struct EvalOutput {
    state: serde_json::Value,
    normalization: &'static str,
    band: String,
    samples: Vec<Sample>,
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![a];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn run_eval(args: &EvalArgs) -> Result<EvalOutput, Error> {
    let mp = args.model.model()?;
    if args.points < 1 || args.t1_points < 1 || args.t2_points < 1 {
        return Err(Error::InvalidInput("grids need at least one point".into()));
    }
    match args.basis {
        Basis::Spherical => {
            let ell = args
                .ell
                .ok_or_else(|| Error::InvalidInput("--ell is required for the spherical basis".into()))?;
            let taus = linspace(args.tau_min, args.tau_max, args.points);
            if let Some(lambda) = args.lambda {
                let kind = match args.kind {
                    Some(KindArg::Zero) | None => ContinuumKind::Zero,
                    Some(KindArg::One) => ContinuumKind::One,
                    Some(KindArg::Two) => ContinuumKind::Two,
                };
                let sp = SpectralPoint::new(lambda, &mp)?;
                let band = format!("{:?}", sp.band()?);
                let samples = taus
                    .iter()
                    .map(|&t| {
                        let v = normalized_continuum(t, ell, &sp, kind)?;
                        Ok(Sample { tau: Some(t), t1: None, t2: None, re: v.re, im: v.im })
                    })
                    .collect::<Result<_, Error>>()?;
                Ok(EvalOutput {
                    state: json!({ "basis": "spherical", "lambda": lambda, "ell": ell,
                                   "kind": format!("{kind:?}") }),
                    normalization: "delta(Lambda - Lambda')",
                    band,
                    samples,
                })
            } else {
                let n = args
                    .n
                    .ok_or_else(|| Error::InvalidInput("--n or --lambda is required".into()))?;
                let rq = RadialQuantum::new(n, ell, &mp)?;
                let samples = taus
                    .iter()
                    .map(|&t| {
                        let v = normalized_bound_state(t, &rq)?;
                        Ok(Sample { tau: Some(t), t1: None, t2: None, re: v, im: 0.0 })
                    })
                    .collect::<Result<_, Error>>()?;
                Ok(EvalOutput {
                    state: json!({ "basis": "spherical", "n": n, "ell": ell }),
                    normalization: "unit radial norm",
                    band: "BoundState".into(),
                    samples,
                })
            }
        }
        Basis::Ep => {
            let t1s: Vec<f64> =
                (1..=args.t1_points).map(|i| i as f64 / (args.t1_points + 1) as f64).collect();
            let t2s: Vec<f64> = (1..=args.t2_points)
                .map(|i| 1.0 + (args.t2_max - 1.0) * i as f64 / (args.t2_points + 1) as f64)
                .collect();
            if let (Some(k), Some(level)) = (args.k, args.level) {
                let s = EPContinuous::new(level, k, args.m, &mp)?;
                let mut samples = Vec::new();
                for &t1 in &t1s {
                    for &t2 in &t2s {
                        let c = EPCoords::new(t1, t2, 0.0, Half::PlusHalf)?;
                        let v = wavefunction_continuous(&c, &s, &mp)?;
                        samples.push(Sample { tau: None, t1: Some(t1), t2: Some(t2), re: v.re, im: v.im });
                    }
                }
                Ok(EvalOutput {
                    state: json!({ "basis": "ep", "level": level, "k": k, "m": args.m }),
                    normalization: "pi delta(k - k') on the chart",
                    band: "Continuum".into(),
                    samples,
                })
            } else {
                let (n1, n2) = match (args.n1, args.n2) {
                    (Some(a), Some(b)) => (a, b),
                    _ => {
                        return Err(Error::InvalidInput(
                            "--n1 and --n2 (or --k with --level) are required for the ep basis".into(),
                        ))
                    }
                };
                let d = EPDiscrete::new(n1, n2, args.m, &mp)?;
                if !d.is_normalizable() {
                    return Err(Error::QuantumNumbers(format!(
                        "state ({n1}, {n2}, {}) has sigma = {} >= n = {} and no finite norm",
                        args.m, d.sigma, d.n
                    )));
                }
                let mut samples = Vec::new();
                for &t1 in &t1s {
                    for &t2 in &t2s {
                        let c = EPCoords::new(t1, t2, 0.0, Half::PlusHalf)?;
                        let v = wavefunction_discrete(&c, &d, &mp)?;
                        samples.push(Sample { tau: None, t1: Some(t1), t2: Some(t2), re: v.re, im: v.im });
                    }
                }
                Ok(EvalOutput {
                    state: json!({ "basis": "ep", "n1": n1, "n2": n2, "m": args.m,
                                   "normalizable": d.is_normalizable() }),
                    normalization: "half-space norm 1/2",
                    band: "Discrete".into(),
                    samples,
                })
            }
        }
    }
}

fn emit_eval(out: &EvalOutput, fmt: OutputFormat) {
    match fmt {
        OutputFormat::Json => print_json(&json!({
            "command": "eval",
            "state": out.state,
            "normalization": out.normalization,
            "band": out.band,
            "samples": out.samples,
        })),
        OutputFormat::Csv => {
            if out.samples.first().is_some_and(|s| s.tau.is_some()) {
                println!("tau,re,im");
                for s in &out.samples {
                    println!("{:.17e},{:.17e},{:.17e}", s.tau.unwrap(), s.re, s.im);
                }
            } else {
                println!("t1,t2,re,im");
                for s in &out.samples {
                    println!(
                        "{:.17e},{:.17e},{:.17e},{:.17e}",
                        s.t1.unwrap(),
                        s.t2.unwrap(),
                        s.re,
                        s.im
                    );
                }
            }
        }
    }
}

fn parse_phi(spec: &str) -> Result<TestFunction, Error> {
    if let Some(rest) = spec.strip_prefix("gaussian:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 2 {
            return Err(Error::InvalidInput(format!("expected gaussian:mu,s, got '{spec}'")));
        }
        let mu: f64 = parts[0]
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad gaussian center '{}'", parts[0])))?;
        let s: f64 = parts[1]
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad gaussian width '{}'", parts[1])))?;
        return TestFunction::gaussian(mu, s);
    }
    let text = std::fs::read_to_string(spec)
        .map_err(|e| Error::InvalidInput(format!("cannot read profile file '{spec}': {e}")))?;
    let mut samples = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.split_whitespace();
        let (Some(a), Some(b)) = (cols.next(), cols.next()) else {
            return Err(Error::InvalidInput(format!("line {}: need two columns", i + 1)));
        };
        let tau: f64 = a
            .parse()
            .map_err(|_| Error::InvalidInput(format!("line {}: bad tau '{a}'", i + 1)))?;
        let val: f64 = b
            .parse()
            .map_err(|_| Error::InvalidInput(format!("line {}: bad value '{b}'", i + 1)))?;
        samples.push((tau, val));
    }
    TestFunction::from_samples(samples)
}

struct ExpandOutput {
    decomposition: SpectralDecomposition,
    reconstruction_error: f64,
    parseval_defect: f64,
    linearity_defect: Option<f64>,
}

fn run_expand(args: &ExpandArgs) -> Result<(ExpandOutput, bool), Error> {
    let mp = args.model.model()?;
    let phi = parse_phi(&args.phi)?;
    let cfg = ExpansionConfig { lambda_max: args.lambda_max, ..ExpansionConfig::default() };
    let d = expand_coulomb(&phi, args.ell, &mp, &cfg)?;
    let err = expansion::reconstruction_error(&d, &phi)?;
    let defect = expansion::parseval_defect(&d, &phi);
    let mut ok = true;
    let linearity_defect = if args.check_linearity {
        let phi2 = phi.clone();
        let scaled = TestFunction::new(
            Arc::new(move |t| 2.0 * phi2.eval(t)),
            phi.support,
            Smoothness::Smooth,
        )?;
        let d2 = expand_coulomb(&scaled, args.ell, &mp, &cfg)?;
        let mut worst = 0.0f64;
        for (a, b) in d.high_band.iter().chain(&d.low_band).zip(d2.high_band.iter().chain(&d2.low_band)) {
            worst = worst.max((b.c1 - 2.0 * a.c1).norm());
            worst = worst.max((b.c2 - 2.0 * a.c2).norm());
        }
        for (a, b) in d.discrete.iter().zip(&d2.discrete) {
            worst = worst.max((b.1 - 2.0 * a.1).abs());
        }
        ok = worst < 1e-10;
        Some(worst)
    } else {
        None
    };
    Ok((
        ExpandOutput {
            decomposition: d,
            reconstruction_error: err,
            parseval_defect: defect,
            linearity_defect,
        },
        ok,
    ))
}

fn emit_expand(out: &ExpandOutput, fmt: OutputFormat) {
    let d = &out.decomposition;
    match fmt {
        OutputFormat::Json => {
            let band = |v: &[expansion::BandSample]| -> Vec<serde_json::Value> {
                v.iter()
                    .map(|s| {
                        json!({ "lambda": s.lambda, "weight": s.weight,
                                "c1_re": s.c1.re, "c1_im": s.c1.im,
                                "c2_re": s.c2.re, "c2_im": s.c2.im })
                    })
                    .collect()
            };
            print_json(&json!({
                "command": "expand",
                "model": { "r": d.model.r, "alpha": d.model.alpha },
                "ell": d.ell,
                "lambda_max": d.lambda_max,
                "low_band": band(&d.low_band),
                "high_band": band(&d.high_band),
                "discrete": d.discrete.iter().map(|&(n, c)| json!({ "n": n, "coefficient": c })).collect::<Vec<_>>(),
                "reconstruction_error": out.reconstruction_error,
                "parseval_defect": out.parseval_defect,
                "linearity_defect": out.linearity_defect,
            }))
        }
        OutputFormat::Csv => {
            println!("band,lambda,weight,c1_re,c1_im,c2_re,c2_im");
            for s in &d.low_band {
                println!(
                    "low,{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
                    s.lambda, s.weight, s.c1.re, s.c1.im, s.c2.re, s.c2.im
                );
            }
            for s in &d.high_band {
                println!(
                    "high,{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
                    s.lambda, s.weight, s.c1.re, s.c1.im, s.c2.re, s.c2.im
                );
            }
            for &(n, c) in &d.discrete {
                println!("discrete,{n},1,{c:.17e},0,0,0");
            }
            eprintln!(
                "reconstruction_error={:.6e} parseval_defect={:.6e}",
                out.reconstruction_error, out.parseval_defect
            );
        }
    }
}

#[derive(Serialize)]
struct InterbasisRow {
    ell: u32,
    w_closed: f64,
    w_numeric: f64,
    relative_deviation: f64,
}

fn run_interbasis(
    model: &ModelArgs,
    n1: u32,
    n2: u32,
    m: i32,
    ell_max: u32,
) -> Result<Vec<InterbasisRow>, Error> {
    let mp = model.model()?;
    // surface the admissibility errors before any quadrature runs
    let states = discrete_ep_states(&mp, m);
    if !states.iter().any(|d| d.n1 == n1 && d.n2 == n2) {
        return Err(Error::QuantumNumbers(format!(
            "(n1, n2, m) = ({n1}, {n2}, {m}) is not admissible at alpha R = {}",
            mp.alpha_r()
        )));
    }
    let spec = QuadratureSpec::validation();
    let lmin = states
        .iter()
        .find(|d| d.n1 == n1 && d.n2 == n2)
        .map(|d| d.n.max(m.unsigned_abs()))
        .unwrap();
    let mut rows = Vec::new();
    for ell in lmin..=ell_max.max(lmin) {
        let key = InterbasisKey::new(n1, n2, m, ell, &mp)?;
        let closed = coeff_w_closed(&key)?;
        let numeric = coeff_w_numeric(&key, None, &spec)?;
        rows.push(InterbasisRow {
            ell,
            w_closed: closed,
            w_numeric: numeric,
            relative_deviation: (numeric - closed).abs() / closed.abs().max(1e-300),
        });
    }
    Ok(rows)
}
