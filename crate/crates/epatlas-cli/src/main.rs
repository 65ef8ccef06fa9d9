//! Command-line front end for the exceptional-point analysis library.
//!
//! One subcommand per analysis: spectrum, Jordan classification, transition
//! matrices, metric construction, the secular cubic and its region map,
//! parameter sweeps, EP localization, unfolding exponents, reality
//! experiments and 2-D spectral rasters. Reports go to stdout (or `--out`)
//! as JSON or CSV; errors print a one-line JSON reason to stderr.
//!
//! Exit codes: 0 success, 1 domain errors (EP obstruction, nothing found,
//! broken reality), 2 usage errors (unknown flags/models/parameters,
//! malformed matrix files).

mod output;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use epatlas_core::jordan::ep_classify;
use epatlas_core::linalg::{eigenvalues, matrix_from_csv, matrix_from_json, Mat};
use epatlas_core::metric::{construct_positive_metric, factor_metric, hermitize, metric_condition};
use epatlas_core::models::{ModelName, ModelSpec};
use epatlas_core::secular::{cardano_roots, classify_point, energies_from_s};
use epatlas_core::sweep::{
    locate_ep_1d, reality_experiment, spectral_locus_2d, sweep_1d, unfolding_exponent, RealityMode,
};
use epatlas_core::transition::{solve_transition, CanonicalJordanSpec};
use epatlas_core::{Error, ToleranceConfig};

use output::{complex_pair, fmt_f64, matrix_json, Sink};

#[derive(Parser)]
#[command(
    name = "epatlas",
    about = "Exceptional-point analysis of small non-Hermitian matrices",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Rank pivot tolerance (relative); env EPATLAS_TOL_RANK
    #[arg(long, global = true)]
    tol_rank: Option<f64>,
    /// Polynomial root residual tolerance; env EPATLAS_TOL_ROOT
    #[arg(long, global = true)]
    tol_root: Option<f64>,
    /// Linear-solve residual tolerance; env EPATLAS_TOL_RESIDUAL
    #[arg(long, global = true)]
    tol_residual: Option<f64>,
    /// Root-finder iteration cap; env EPATLAS_MAX_ITER
    #[arg(long, global = true)]
    max_iter: Option<usize>,
    /// Output format
    #[arg(long, global = true, value_parser = ["json", "csv"])]
    output: Option<String>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// RNG seed for randomized analyses
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Args)]
struct InputArgs {
    /// Built-in model name (h222_ep, h222_pert, h222_tilde, h42_ep, h6,
    /// h42_tilde, jordan_pert)
    #[arg(long)]
    model: Option<String>,
    /// Matrix file (.json per the matrix schema, anything else parsed as
    /// `i,j,re,im` CSV)
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Model parameters, e.g. `tau=0.25,beta=0`
    #[arg(long)]
    params: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues of a model or matrix file
    Spectrum {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Jordan/EP classification of the spectrum
    Jordan {
        #[command(flatten)]
        input: InputArgs,
        /// Eigenvalue cluster radius (default: adaptive, reported)
        #[arg(long)]
        cluster_radius: Option<f64>,
    },
    /// Solve H Q = Q J for an invertible transition matrix
    #[command(allow_negative_numbers = true)]
    Transition {
        #[command(flatten)]
        input: InputArgs,
        /// Jordan block sizes of J, e.g. `4,2`
        #[arg(long)]
        blocks: String,
        /// Eigenvalue η of J (real part)
        #[arg(long, default_value_t = 0.0)]
        eta: f64,
        /// Eigenvalue η of J (imaginary part)
        #[arg(long, default_value_t = 0.0)]
        eta_im: f64,
    },
    /// Construct a positive-definite metric and Hermitize
    Metric {
        #[command(flatten)]
        input: InputArgs,
        /// Projector weights c_n, comma-separated (default: all ones)
        #[arg(long)]
        weights: Option<String>,
    },
    /// Secular cubic roots, energies and unitarity at one (τ, β) point
    #[command(allow_negative_numbers = true)]
    Secular {
        #[arg(long)]
        tau: f64,
        #[arg(long)]
        beta: f64,
    },
    /// Unitarity classification over a (τ, β) grid
    #[command(allow_negative_numbers = true)]
    RegionMap {
        #[arg(long, default_value_t = 0.01)]
        tau_min: f64,
        #[arg(long, default_value_t = 1.0)]
        tau_max: f64,
        #[arg(long, default_value_t = -0.5)]
        beta_min: f64,
        #[arg(long, default_value_t = 0.5)]
        beta_max: f64,
        #[arg(long, default_value_t = 21)]
        steps: usize,
    },
    /// 1-D spectral sweep over one model parameter
    #[command(allow_negative_numbers = true)]
    Sweep {
        #[command(flatten)]
        input: InputArgs,
        /// The parameter to sweep
        #[arg(long)]
        param: String,
        #[arg(long)]
        min: f64,
        #[arg(long)]
        max: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Tie another parameter to the swept one, e.g. `c=5*b`
        #[arg(long)]
        tie: Option<String>,
    },
    /// Locate an EP by the vanishing of the discriminant
    #[command(allow_negative_numbers = true)]
    EpLocate {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        param: String,
        #[arg(long)]
        bracket_min: f64,
        #[arg(long)]
        bracket_max: f64,
        #[arg(long)]
        tie: Option<String>,
    },
    /// Fit the eigenvalue-splitting exponent at an EP
    #[command(allow_negative_numbers = true)]
    Unfold {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        param: String,
        /// EP location on the parameter axis
        #[arg(long)]
        ep: f64,
        /// Comma-separated decreasing g samples, e.g. `1e-3,1e-4,...`;
        /// default: 1e-3 … 1e-9 by decades
        #[arg(long)]
        g_values: Option<String>,
        /// Approach the EP from above (ep+g) or below (ep-g)
        #[arg(long, default_value = "above", value_parser = ["above", "below"])]
        approach: String,
        #[arg(long)]
        tie: Option<String>,
    },
    /// Real-spectrum fractions of perturbed Jordan blocks
    Reality {
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value = "generic", value_parser = ["generic", "scaled", "flat"])]
        mode: String,
        /// Comma-separated g samples
        #[arg(long, default_value = "1e-2,1e-4,1e-6")]
        g_values: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Prefactors for scaled/flat modes as `k,j=value;...`
        /// (default: all ones)
        #[arg(long)]
        prefactors: Option<String>,
    },
    /// Count real eigenvalues of a two-parameter family over a grid
    #[command(allow_negative_numbers = true)]
    Locus {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        param_x: String,
        #[arg(long)]
        param_y: String,
        #[arg(long)]
        x_min: f64,
        #[arg(long)]
        x_max: f64,
        #[arg(long)]
        y_min: f64,
        #[arg(long)]
        y_max: f64,
        #[arg(long, default_value_t = 41)]
        nx: usize,
        #[arg(long, default_value_t = 41)]
        ny: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!(
                "{}",
                serde_json::json!({"error": err.kind(), "reason": err.to_string()})
            );
            if err.is_usage() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn env_f64(name: &str) -> Option<f64> {
    std::env::var(name).ok().and_then(|v| v.parse().ok())
}

fn tolerances(cli: &Cli) -> epatlas_core::Result<ToleranceConfig> {
    let mut cfg = ToleranceConfig::default();
    if let Some(v) = env_f64("EPATLAS_TOL_RANK") {
        cfg.rank_rel_tol = v;
    }
    if let Some(v) = env_f64("EPATLAS_TOL_ROOT") {
        cfg.root_abs_tol = v;
    }
    if let Some(v) = env_f64("EPATLAS_TOL_RESIDUAL") {
        cfg.residual_tol = v;
    }
    if let Some(v) = std::env::var("EPATLAS_MAX_ITER")
        .ok()
        .and_then(|v| v.parse().ok())
    {
        cfg.max_iter = v;
    }
    if let Some(v) = cli.tol_rank {
        cfg.rank_rel_tol = v;
    }
    if let Some(v) = cli.tol_root {
        cfg.root_abs_tol = v;
    }
    if let Some(v) = cli.tol_residual {
        cfg.residual_tol = v;
    }
    if let Some(v) = cli.max_iter {
        cfg.max_iter = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn require_json(format: &Option<String>, command: &str) -> epatlas_core::Result<()> {
    if format.as_deref() == Some("csv") {
        return Err(Error::Parse(format!(
            "`{command}` emits a structured JSON report; csv is not available here"
        )));
    }
    Ok(())
}

fn parse_params(text: Option<&str>) -> epatlas_core::Result<BTreeMap<String, f64>> {
    let mut map = BTreeMap::new();
    let Some(text) = text else {
        return Ok(map);
    };
    for piece in text.split(',').filter(|p| !p.trim().is_empty()) {
        let Some((key, value)) = piece.split_once('=') else {
            return Err(Error::Parse(format!(
                "parameter `{piece}` is not of the form name=value"
            )));
        };
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numeric value in `{piece}`")))?;
        map.insert(key.trim().to_string(), value);
    }
    Ok(map)
}

/// `target=K*source` multiplicative tie for sweep-style commands.
struct Tie {
    target: String,
    factor: f64,
    source: String,
}

fn parse_tie(text: Option<&str>) -> epatlas_core::Result<Option<Tie>> {
    let Some(text) = text else { return Ok(None) };
    let parts: Option<(String, f64, String)> = (|| {
        let (target, rhs) = text.split_once('=')?;
        let (factor, source) = rhs.split_once('*')?;
        Some((
            target.trim().to_string(),
            factor.trim().parse().ok()?,
            source.trim().to_string(),
        ))
    })();
    match parts {
        Some((target, factor, source)) => Ok(Some(Tie {
            target,
            factor,
            source,
        })),
        None => Err(Error::Parse(format!(
            "tie `{text}` is not of the form target=K*param"
        ))),
    }
}

/// Either a bound model spec or a fixed matrix from file.
enum Input {
    Model(ModelSpec),
    File(PathBuf, Mat),
}

impl Input {
    fn describe(&self) -> serde_json::Value {
        match self {
            Input::Model(spec) => serde_json::json!({
                "model": spec.name.as_str(),
                "params": spec.params,
            }),
            Input::File(path, _) => serde_json::json!({
                "file": path.display().to_string(),
            }),
        }
    }

    fn build(&self) -> epatlas_core::Result<Mat> {
        match self {
            Input::Model(spec) => spec.build(),
            Input::File(_, m) => Ok(m.clone()),
        }
    }
}

fn resolve_input(args: &InputArgs) -> epatlas_core::Result<Input> {
    match (&args.model, &args.matrix) {
        (Some(_), Some(_)) => Err(Error::Parse(
            "give either --model or --matrix, not both".into(),
        )),
        (None, None) => Err(Error::Parse("one of --model or --matrix is required".into())),
        (Some(name), None) => {
            let model = ModelName::parse(name).ok_or_else(|| Error::Parse(format!(
                "unknown model `{name}`; expected one of {:?}",
                ModelName::all()
            )))?;
            Ok(Input::Model(ModelSpec::new(
                model,
                parse_params(args.params.as_deref())?,
            )))
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
            let m = if path.extension().is_some_and(|e| e == "json") {
                matrix_from_json(&text)?
            } else {
                matrix_from_csv(&text)?
            };
            Ok(Input::File(path.clone(), m))
        }
    }
}

/// Family closure over one free parameter, honoring an optional tie.
fn bind_one<'a>(
    input: &'a Input,
    free: &'a str,
    tie: &'a Option<Tie>,
) -> epatlas_core::Result<impl Fn(f64) -> epatlas_core::Result<Mat> + 'a> {
    let Input::Model(spec) = input else {
        return Err(Error::Parse(
            "parameter sweeps need --model (a matrix file has no parameters)".into(),
        ));
    };
    if let Some(tie) = tie {
        if tie.source != free {
            return Err(Error::Parse(format!(
                "tie source `{}` must be the swept parameter `{free}`",
                tie.source
            )));
        }
    }
    // validate names eagerly so typos surface before the sweep runs
    {
        let mut probe = spec.clone();
        probe.params.insert(free.to_string(), 0.0);
        if let Some(t) = tie {
            probe.params.insert(t.target.clone(), 0.0);
        }
        let _ = probe.bind(free)?;
    }
    Ok(move |x: f64| {
        let mut s = spec.clone();
        s.params.insert(free.to_string(), x);
        if let Some(t) = tie {
            s.params.insert(t.target.clone(), t.factor * x);
        }
        s.build()
    })
}

fn run(cli: Cli) -> epatlas_core::Result<()> {
    let cfg = tolerances(&cli)?;
    let mut sink = Sink::new(cli.out.clone())?;
    let format = cli.output.clone();
    let seed = cli.seed.unwrap_or(42);

    match &cli.command {
        Command::Spectrum { input } => {
            let input = resolve_input(input)?;
            let m = input.build()?;
            let mut eigs = eigenvalues(&m, &cfg)?;
            eigs.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
            let max_imag = eigs.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
            match format.as_deref() {
                Some("csv") => {
                    sink.line("index,re,im")?;
                    for (i, z) in eigs.iter().enumerate() {
                        sink.line(&format!("{},{},{}", i, fmt_f64(z.re), fmt_f64(z.im)))?;
                    }
                }
                _ => sink.json(&serde_json::json!({
                    "command": "spectrum",
                    "input": input.describe(),
                    "eigenvalues": eigs.iter().map(complex_pair).collect::<Vec<_>>(),
                    "max_imag": max_imag,
                }))?,
            }
        }

        Command::Jordan {
            input,
            cluster_radius,
        } => {
            require_json(&format, "jordan")?;
            let input = resolve_input(input)?;
            let m = input.build()?;
            let cls = ep_classify(&m, &cfg, *cluster_radius)?;
            sink.json(&serde_json::json!({
                "command": "jordan",
                "input": input.describe(),
                "cluster_radius": cls.cluster_radius,
                "diagonalizable": cls.diagonalizable(),
                "structures": cls.structures,
            }))?;
        }

        Command::Transition {
            input,
            blocks,
            eta,
            eta_im,
        } => {
            require_json(&format, "transition")?;
            let input = resolve_input(input)?;
            let m = input.build()?;
            let blocks: Vec<usize> = blocks
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad block size `{p}`")))
                })
                .collect::<epatlas_core::Result<_>>()?;
            let spec = CanonicalJordanSpec {
                eta: Complex64::new(*eta, *eta_im),
                blocks,
            };
            let sol = solve_transition(&m, &spec, &cfg)?;
            sink.json(&serde_json::json!({
                "command": "transition",
                "input": input.describe(),
                "spec": {"eta": [spec.eta.re, spec.eta.im], "blocks": spec.blocks},
                "q": matrix_json(&sol.q),
                "j": matrix_json(&sol.j),
                "residual": sol.residual,
                "det_q": [sol.det_q.re, sol.det_q.im],
                "invertible": sol.invertible,
            }))?;
        }

        Command::Metric { input, weights } => {
            require_json(&format, "metric")?;
            let input = resolve_input(input)?;
            let m = input.build()?;
            let weights: Vec<f64> = match weights {
                Some(text) => text
                    .split(',')
                    .map(|p| {
                        p.trim()
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad weight `{p}`")))
                    })
                    .collect::<epatlas_core::Result<_>>()?,
                None => vec![1.0; m.rows()],
            };
            let sol = construct_positive_metric(&m, &weights, &cfg)?;
            let theta = sol.chosen_theta.as_ref().expect("metric was constructed");
            let omega = factor_metric(theta, &cfg)?;
            let herm = hermitize(&m, &omega, &cfg)?;
            let condition = metric_condition(theta, &cfg)?;
            sink.json(&serde_json::json!({
                "command": "metric",
                "input": input.describe(),
                "weights": sol.weights,
                "theta": matrix_json(theta),
                "omega": matrix_json(&omega),
                "intertwining_residual": sol.intertwining_residual,
                "hermiticity_defect": herm.hermiticity_defect,
                "condition": condition,
                "positive_definite": sol.positive_definite,
                "definiteness_margin": sol.definiteness_margin,
            }))?;
        }

        Command::Secular { tau, beta } => {
            require_json(&format, "secular")?;
            let roots = cardano_roots(*tau, *beta);
            let energies = energies_from_s(&roots);
            let region = classify_point(*tau, *beta, &cfg);
            sink.json(&serde_json::json!({
                "command": "secular",
                "tau": tau,
                "beta": beta,
                "s": roots.s.iter().map(complex_pair).collect::<Vec<_>>(),
                "discriminant": roots.discriminant,
                "energies": energies.iter().map(complex_pair).collect::<Vec<_>>(),
                "region": {
                    "all_s_real": region.all_s_real,
                    "all_s_positive": region.all_s_positive,
                    "unitary": region.unitary,
                    "beta_sign": beta.signum() as i64,
                },
            }))?;
        }

        Command::RegionMap {
            tau_min,
            tau_max,
            beta_min,
            beta_max,
            steps,
        } => {
            if *steps < 2 {
                return Err(Error::Domain("region map needs at least 2 steps".into()));
            }
            let mut rows = Vec::new();
            for i in 0..*steps {
                let tau = tau_min + (tau_max - tau_min) * i as f64 / (*steps - 1) as f64;
                for j in 0..*steps {
                    let beta = beta_min + (beta_max - beta_min) * j as f64 / (*steps - 1) as f64;
                    let label = classify_point(tau, beta, &cfg);
                    rows.push((tau, beta, label));
                }
            }
            match format.as_deref() {
                Some("json") => sink.json(&serde_json::json!({
                    "command": "region-map",
                    "rows": rows.iter().map(|(t, b, l)| serde_json::json!({
                        "tau": t, "beta": b,
                        "real_flag": l.all_s_real, "positive_flag": l.all_s_positive,
                        "unitary_flag": l.unitary,
                    })).collect::<Vec<_>>(),
                }))?,
                _ => {
                    sink.line("tau,beta,real_flag,positive_flag,unitary_flag")?;
                    for (t, b, l) in rows {
                        sink.line(&format!(
                            "{},{},{},{},{}",
                            fmt_f64(t),
                            fmt_f64(b),
                            u8::from(l.all_s_real),
                            u8::from(l.all_s_positive),
                            u8::from(l.unitary)
                        ))?;
                    }
                }
            }
        }

        Command::Sweep {
            input,
            param,
            min,
            max,
            steps,
            tie,
        } => {
            let input = resolve_input(input)?;
            let tie = parse_tie(tie.as_deref())?;
            let family = bind_one(&input, param, &tie)?;
            let table = sweep_1d(param, family, (*min, *max), *steps, &cfg)?;
            match format.as_deref() {
                Some("json") => sink.json(&serde_json::json!({
                    "command": "sweep",
                    "input": input.describe(),
                    "param": param,
                    "points": table.points.iter().map(|p| serde_json::json!({
                        "value": p.params[0],
                        "eigenvalues": p.eigenvalues.iter().map(complex_pair).collect::<Vec<_>>(),
                        "max_imag": p.max_imag,
                    })).collect::<Vec<_>>(),
                }))?,
                _ => {
                    let n = table.points.first().map_or(0, |p| p.eigenvalues.len());
                    let mut header = String::from(param.as_str());
                    for k in 0..n {
                        header.push_str(&format!(",eig{k}_re,eig{k}_im"));
                    }
                    header.push_str(",max_imag");
                    sink.line(&header)?;
                    for p in &table.points {
                        let mut row = fmt_f64(p.params[0]);
                        for z in &p.eigenvalues {
                            row.push_str(&format!(",{},{}", fmt_f64(z.re), fmt_f64(z.im)));
                        }
                        row.push_str(&format!(",{}", fmt_f64(p.max_imag)));
                        sink.line(&row)?;
                    }
                }
            }
        }

        Command::EpLocate {
            input,
            param,
            bracket_min,
            bracket_max,
            tie,
        } => {
            require_json(&format, "ep-locate")?;
            let input = resolve_input(input)?;
            let tie = parse_tie(tie.as_deref())?;
            let family = bind_one(&input, param, &tie)?;
            let loc = locate_ep_1d(family, (*bracket_min, *bracket_max), &cfg)?;
            sink.json(&serde_json::json!({
                "command": "ep-locate",
                "input": input.describe(),
                "param": param,
                "bracket": [loc.bracket.0, loc.bracket.1],
                "param_value": loc.param_value,
                "discriminant": loc.discriminant_at,
                "jordan": loc.jordan,
            }))?;
        }

        Command::Unfold {
            input,
            param,
            ep,
            g_values,
            approach,
            tie,
        } => {
            let input = resolve_input(input)?;
            let tie = parse_tie(tie.as_deref())?;
            let family = bind_one(&input, param, &tie)?;
            let g_values: Vec<f64> = match g_values {
                Some(text) => text
                    .split(',')
                    .map(|p| {
                        p.trim()
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad g value `{p}`")))
                    })
                    .collect::<epatlas_core::Result<_>>()?,
                None => (3..=9).map(|k| 10.0_f64.powi(-k)).collect(),
            };
            let below = approach == "below";
            let oriented = |x: f64| {
                // map the fit's ep+g axis onto the requested approach side
                let lambda = if below { ep - (x - ep) } else { x };
                family(lambda)
            };
            let fit = unfolding_exponent(oriented, *ep, &g_values, &cfg)?;
            match format.as_deref() {
                Some("csv") => {
                    sink.line("g,distance")?;
                    for (g, d) in &fit.samples {
                        sink.line(&format!("{},{}", fmt_f64(*g), fmt_f64(*d)))?;
                    }
                }
                _ => sink.json(&serde_json::json!({
                    "command": "unfold",
                    "input": input.describe(),
                    "param": param,
                    "ep": fit.ep_value,
                    "approach": approach,
                    "samples": fit.samples,
                    "exponent": fit.exponent,
                    "r_squared": fit.r_squared,
                }))?,
            }
        }

        Command::Reality {
            n,
            mode,
            g_values,
            trials,
            prefactors,
        } => {
            let mode = match mode.as_str() {
                "generic" => RealityMode::Generic,
                "scaled" => RealityMode::Scaled,
                _ => RealityMode::Flat,
            };
            let g_values: Vec<f64> = g_values
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad g value `{p}`")))
                })
                .collect::<epatlas_core::Result<_>>()?;
            let prefactors = match prefactors {
                None => epatlas_core::models::ones_prefactors(*n),
                Some(text) => {
                    let mut map = BTreeMap::new();
                    for piece in text.split(';').filter(|p| !p.trim().is_empty()) {
                        let parsed: Option<((usize, usize), f64)> = (|| {
                            let (pos, value) = piece.split_once('=')?;
                            let (k, j) = pos.split_once(',')?;
                            Some((
                                (k.trim().parse().ok()?, j.trim().parse().ok()?),
                                value.trim().parse().ok()?,
                            ))
                        })();
                        let (key, value) = parsed.ok_or_else(|| {
                            Error::Parse(format!("bad prefactor `{piece}`; expected k,j=value"))
                        })?;
                        map.insert(key, value);
                    }
                    map
                }
            };
            let report = reality_experiment(*n, mode, &prefactors, &g_values, *trials, seed, &cfg)?;
            match format.as_deref() {
                Some("csv") => {
                    sink.line("g,fraction_real")?;
                    for (g, f) in &report.fractions {
                        sink.line(&format!("{},{}", fmt_f64(*g), fmt_f64(*f)))?;
                    }
                }
                _ => sink.json(&serde_json::json!({
                    "command": "reality",
                    "n": report.n,
                    "mode": report.mode,
                    "seed": report.seed,
                    "trials": report.trials,
                    "fractions": report.fractions,
                }))?,
            }
        }

        Command::Locus {
            input,
            param_x,
            param_y,
            x_min,
            x_max,
            y_min,
            y_max,
            nx,
            ny,
        } => {
            let input = resolve_input(input)?;
            let Input::Model(spec) = &input else {
                return Err(Error::Parse(
                    "locus needs --model (a matrix file has no parameters)".into(),
                ));
            };
            // validate both names before the grid run
            {
                let mut probe = spec.clone();
                probe.params.insert(param_x.clone(), 0.0);
                probe.params.insert(param_y.clone(), 0.0);
                let _ = probe.bind(param_x)?;
            }
            let family = |x: f64, y: f64| {
                let mut s = spec.clone();
                s.params.insert(param_x.clone(), x);
                s.params.insert(param_y.clone(), y);
                s.build()
            };
            let grid = spectral_locus_2d(family, (*x_min, *x_max), (*y_min, *y_max), *nx, *ny, &cfg)?;
            match format.as_deref() {
                Some("json") => sink.json(&serde_json::json!({
                    "command": "locus",
                    "input": input.describe(),
                    "param_x": param_x,
                    "param_y": param_y,
                    "points": grid,
                }))?,
                _ => {
                    sink.line(&format!("{param_x},{param_y},real_count,max_imag"))?;
                    for p in &grid {
                        sink.line(&format!("{},{},{},{}", fmt_f64(p.x), fmt_f64(p.y), p.real_count, fmt_f64(p.max_imag)))?;
                    }
                }
            }
        }
    }

    sink.finish()
}
