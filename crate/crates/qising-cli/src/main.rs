//! `qising`: command-line front end for the Fibonacci Ising toolkit.
//!
//! Exit codes: 0 success, 1 validation or computation failure, 2 usage error.

mod output;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use qising_core::classical::{
    free_energy_at_generation, free_energy_limit, FreeEnergyResult, MAX_LIMIT_GENERATION,
};
use qising_core::fractal::{box_counting, dimension_lower_bound, local_dimension_profile, thickness};
use qising_core::leeyang::{
    endpoint_margin, to_circle, zero_set, zero_set_oracle, FugacityParams, MAX_ORACLE_SITES,
};
use qising_core::parse::{parse_band_set_json, parse_config, Config};
use qising_core::quantum::{b_infty_approx, sigma_k, sigma_k_x_bands, SpectrumParams};
use qising_core::sequences::{fibonacci, CouplingMap};
use qising_core::sets::hausdorff_distance;
use qising_core::tracemap::{iterate_orbit, TraceTriple};
use qising_core::validation::{self, ValidationReport, CLASSICAL_CHECKS, DEFAULT_SEED};
use qising_core::Error as CoreError;

#[derive(Parser)]
#[command(name = "qising", version, about = "Numerical lab for quasi-periodic Fibonacci Ising chains")]
struct Cli {
    /// Flat key=value file; flags given on the command line take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "QISING_PARALLELISM")]
    parallelism: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Iterate the trace map from (x, y, z).
    Orbit(OrbitArgs),
    /// Band spectrum of the period-F_k approximant.
    Spectrum(SpectrumArgs),
    /// Free energy over a temperature grid.
    FreeEnergy(FreeEnergyArgs),
    /// Lee-Yang zeros of the period-F_k ring.
    LeeYang(LeeYangArgs),
    /// Box-counting dimension, thickness and local profile of a band set.
    Dims(DimsArgs),
    /// Run the acceptance suite.
    Validate(ValidateArgs),
    /// Run the classical-chain subset of the acceptance suite.
    ValidateClassical(ValidateArgs),
}

#[derive(Args)]
struct OrbitArgs {
    #[arg(long, allow_hyphen_values = true)]
    x: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    y: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    z: Option<f64>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    bound: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long)]
    pa: Option<f64>,
    #[arg(long)]
    pb: Option<f64>,
    #[arg(long)]
    gen: Option<u32>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    orbit_cap: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FreeEnergyArgs {
    #[arg(long)]
    pa: Option<f64>,
    #[arg(long)]
    pb: Option<f64>,
    #[arg(long)]
    qa: Option<f64>,
    #[arg(long)]
    qb: Option<f64>,
    #[arg(long)]
    tau_min: Option<f64>,
    #[arg(long)]
    tau_max: Option<f64>,
    #[arg(long)]
    tau_steps: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    offset: Option<f64>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LeeYangArgs {
    #[arg(long)]
    pa: Option<f64>,
    #[arg(long)]
    pb: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    gen: Option<u32>,
    #[arg(long)]
    grid: Option<usize>,
    /// Compare with the exhaustive partition-function roots (F_gen <= 16).
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    oracle: Option<bool>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DimsArgs {
    /// Band set JSON: a bare [[lo, hi], ...] array or an object with "bands".
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    eps_min: Option<f64>,
    #[arg(long)]
    eps_max: Option<f64>,
    #[arg(long)]
    levels: Option<usize>,
    #[arg(long)]
    windows: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated check ids (default: all).
    #[arg(long, value_delimiter = ',')]
    checks: Option<Vec<u32>>,
    /// Also write the report as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum CliError {
    Usage(String),
    Validation,
    Failure(anyhow::Error),
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Failure(e)
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Failure(e.into())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(e.into())
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage(flag: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("--{flag}: {msg}"))
}

/// Merges flags, config file and defaults, recording the effective values.
struct Resolver {
    config: Config,
    params: BTreeMap<String, Value>,
}

impl Resolver {
    fn new(config: Config) -> Self {
        Resolver {
            config,
            params: BTreeMap::new(),
        }
    }

    fn lookup<T>(&self, key: &str, flag: Option<T>) -> CliResult<Option<T>>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.config.get_parsed(key).map_err(|e| usage(key, e)),
        }
    }

    fn record<T: Serialize>(&mut self, key: &str, v: &T) {
        let value = serde_json::to_value(v).unwrap_or(Value::Null);
        self.params.insert(key.to_string(), value);
    }

    fn get<T>(&mut self, key: &str, flag: Option<T>, default: T) -> CliResult<T>
    where
        T: FromStr + Serialize,
        T::Err: std::fmt::Display,
    {
        let v = self.lookup(key, flag)?.unwrap_or(default);
        self.record(key, &v);
        Ok(v)
    }

    fn require<T>(&mut self, key: &str, flag: Option<T>) -> CliResult<T>
    where
        T: FromStr + Serialize,
        T::Err: std::fmt::Display,
    {
        let v = self
            .lookup(key, flag)?
            .ok_or_else(|| usage(key, "required (flag or config key)"))?;
        self.record(key, &v);
        Ok(v)
    }

    fn flag(&mut self, key: &str, flag: Option<bool>, default: bool) -> CliResult<bool> {
        let v = match flag {
            Some(v) => v,
            None => self
                .config
                .get_bool(key)
                .map_err(|e| usage(key, e))?
                .unwrap_or(default),
        };
        self.record(key, &v);
        Ok(v)
    }

    fn params(&self) -> Value {
        Value::Object(self.params.clone().into_iter().collect())
    }
}

fn positive(flag: &str, v: f64) -> CliResult<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(usage(flag, format!("must be positive and finite, got {v}")))
    }
}

fn couplings(r: &mut Resolver, pa: Option<f64>, pb: Option<f64>, qa: f64, qb: f64) -> CliResult<CouplingMap> {
    let pa = positive("pa", r.get("pa", pa, 1.0)?)?;
    let pb = positive("pb", r.get("pb", pb, 1.0)?)?;
    CouplingMap::new(pa, pb, qa, qb).map_err(|e| usage("pa/--pb", e))
}

fn write_json(out: Option<&Path>, value: &Value) -> CliResult<()> {
    output::emit(out, &output::to_json_bytes(value)?)?;
    Ok(())
}

fn run_orbit(a: OrbitArgs, mut r: Resolver) -> CliResult<()> {
    let x = r.require("x", a.x)?;
    let y = r.require("y", a.y)?;
    let z = r.require("z", a.z)?;
    let n_max = r.get("n-max", a.n_max, 1000)?;
    let bound = positive("bound", r.get("bound", a.bound, 1e6)?)?;
    let t = TraceTriple::new(x, y, z);
    if !t.is_finite() {
        return Err(usage("x/--y/--z", "coordinates must be finite"));
    }
    let o = iterate_orbit(t, n_max, bound);
    write_json(
        a.out.as_deref(),
        &json!({
            "params": r.params(),
            "status": o.status,
            "escape_index": o.escape_index,
            "rate": o.rate_estimate,
            "steps_used": o.steps_used,
            "magnitude_only": o.magnitude_only,
        }),
    )
}

fn run_spectrum(a: SpectrumArgs, mut r: Resolver) -> CliResult<()> {
    let c = couplings(&mut r, a.pa, a.pb, 0.0, 0.0)?;
    let gen = r.get("gen", a.gen, 8)?;
    if !(2..=30).contains(&gen) {
        return Err(usage("gen", format!("must lie in 2..=30, got {gen}")));
    }
    let grid = r.get("grid", a.grid, 2001)?;
    let mut p = SpectrumParams::new(c, gen, grid).map_err(|e| usage("grid", e))?;
    p.orbit_cap = r.get("orbit-cap", a.orbit_cap, p.orbit_cap)?;

    let x = sigma_k_x_bands(&p)?;
    let bands = sigma_k(&p)?;
    let b_inf = b_infty_approx(&p)?;
    let hdist = hausdorff_distance(&bands, &b_inf.bands)?;
    write_json(
        a.out.as_deref(),
        &json!({
            "params": r.params(),
            "bands": bands,
            "band_count": x.len(),
            "lambda_band_count": bands.len(),
            "x_bands": x,
            "grid_step": b_inf.grid_step,
            "b_infty": {"bands": b_inf.bands, "e_max": b_inf.e_max, "hausdorff_to_bands": hdist},
        }),
    )
}

fn free_energy_point(c: &CouplingMap, tau: f64, tol: f64, offset: f64) -> CliResult<FreeEnergyResult> {
    match free_energy_limit(c, tau, tol, offset) {
        Ok(v) => Ok(v),
        // report the longest chain; cauchy_gap > tol flags it
        Err(CoreError::NoConvergence { .. }) => {
            Ok(free_energy_at_generation(c, tau, offset, MAX_LIMIT_GENERATION)?)
        }
        Err(e) => Err(e.into()),
    }
}

fn run_free_energy(a: FreeEnergyArgs, mut r: Resolver) -> CliResult<()> {
    let qa = r.get("qa", a.qa, 0.0)?;
    let qb = r.get("qb", a.qb, 0.0)?;
    if !(qa >= 0.0 && qb >= 0.0) {
        return Err(usage("qa/--qb", "fields must be non-negative"));
    }
    let c = couplings(&mut r, a.pa, a.pb, qa, qb)?;
    let tau_min = positive("tau-min", r.get("tau-min", a.tau_min, 0.3)?)?;
    let tau_max = positive("tau-max", r.get("tau-max", a.tau_max, 5.0)?)?;
    if tau_max < tau_min {
        return Err(usage("tau-max", "must not be below --tau-min"));
    }
    let steps = r.get("tau-steps", a.tau_steps, 50)?;
    if steps < 1 || (steps == 1 && tau_max > tau_min) {
        return Err(usage("tau-steps", format!("too few points ({steps}) for the range")));
    }
    let tol = positive("tol", r.get("tol", a.tol, 1e-8)?)?;
    let offset = r.get("offset", a.offset, 0.0)?;
    if !offset.is_finite() {
        return Err(usage("offset", "must be finite"));
    }
    let format = r.get("format", a.format, "csv".to_string())?;
    if format != "csv" && format != "json" {
        return Err(usage("format", format!("expected csv or json, got {format:?}")));
    }

    let taus: Vec<f64> = (0..steps)
        .map(|i| match steps {
            1 => tau_min,
            _ => tau_min + (tau_max - tau_min) * i as f64 / (steps - 1) as f64,
        })
        .collect();
    let rows: Vec<FreeEnergyResult> = taus
        .par_iter()
        .map(|&tau| free_energy_point(&c, tau, tol, offset))
        .collect::<CliResult<_>>()?;

    let bytes = if format == "json" {
        let data: Vec<Value> = taus
            .iter()
            .zip(&rows)
            .map(|(t, f)| json!({"tau": t, "F": f.value, "n_used": f.n_used, "cauchy_gap": f.cauchy_gap}))
            .collect();
        output::to_json_bytes(&json!({"params": r.params(), "rows": data}))?
    } else {
        let params = String::from_utf8(output::to_json_bytes(&r.params())?).unwrap_or_default();
        let mut text = format!("# params {params}tau,F,n_used,cauchy_gap\n");
        for (t, f) in taus.iter().zip(&rows) {
            text.push_str(&format!(
                "{},{},{},{}\n",
                output::fmt_f64(*t),
                output::fmt_f64(f.value),
                f.n_used,
                output::fmt_f64(f.cauchy_gap)
            ));
        }
        text.into_bytes()
    };
    output::emit(a.out.as_deref(), &bytes)?;
    Ok(())
}

fn run_lee_yang(a: LeeYangArgs, mut r: Resolver) -> CliResult<()> {
    let pa = positive("pa", r.get("pa", a.pa, 1.0)?)?;
    let pb = positive("pb", r.get("pb", a.pb, 1.5)?)?;
    let tau = positive("tau", r.get("tau", a.tau, 1.0)?)?;
    let gen = r.get("gen", a.gen, 8)?;
    if !(3..=30).contains(&gen) {
        return Err(usage("gen", format!("must lie in 3..=30, got {gen}")));
    }
    let grid = r.get("grid", a.grid, 10_000)?;
    if grid < 10_000 {
        return Err(usage("grid", format!("must be at least 10000, got {grid}")));
    }
    let oracle = r.flag("oracle", a.oracle, false)?;
    if oracle && fibonacci(gen as usize)? > MAX_ORACLE_SITES {
        return Err(usage("oracle", format!("needs F_gen <= {MAX_ORACLE_SITES} (gen <= 6)")));
    }
    let c = CouplingMap::couplings(pa, pb).map_err(|e| usage("pa/--pb", e))?;
    let f = FugacityParams::from_couplings(&c, tau).map_err(|e| usage("tau", e))?;

    let zeros = zero_set(gen, &f, grid)?;
    let oracle_hdist = if oracle {
        Some(hausdorff_distance(&zeros, &zero_set_oracle(gen, &f)?)?)
    } else {
        None
    };
    write_json(
        a.out.as_deref(),
        &json!({
            "params": r.params(),
            "zeros_eta_tilde": zeros.points(),
            "angles": to_circle(&zeros)?,
            "flagged_tangencies": zeros.flagged_points(),
            "endpoint_margin": endpoint_margin(&zeros),
            "oracle_hdist": oracle_hdist,
        }),
    )
}

fn run_dims(a: DimsArgs, mut r: Resolver) -> CliResult<()> {
    let input: String = r.require("in", a.input.map(|p| p.display().to_string()))?;
    let text = std::fs::read_to_string(&input).map_err(|e| usage("in", format!("{input}: {e}")))?;
    let set = parse_band_set_json(&text).map_err(|e| usage("in", e))?;
    if set.is_empty() {
        return Err(usage("in", "band set is empty"));
    }
    let eps_min = positive("eps-min", r.get("eps-min", a.eps_min, 1e-3)?)?;
    let eps_max = positive("eps-max", r.get("eps-max", a.eps_max, 1e-1)?)?;
    if eps_max <= eps_min {
        return Err(usage("eps-max", "must exceed --eps-min"));
    }
    let levels = r.get("levels", a.levels, 16)?;
    if levels < 3 {
        return Err(usage("levels", "need at least 3 scales"));
    }
    let windows = r.get("windows", a.windows, 8)?;
    if windows < 3 {
        return Err(usage("windows", "need at least 3 windows"));
    }

    let dimension = box_counting(&set, eps_min, eps_max, levels)?;
    let t = thickness(&set)?;
    let lower = dimension_lower_bound(&t).ok();
    let profile = local_dimension_profile(&set, windows, eps_min, eps_max, levels)?;
    write_json(
        a.out.as_deref(),
        &json!({
            "params": r.params(),
            "dimension": dimension,
            "thickness": {"tau": t.tau, "nu": t.nu, "gap_count": t.gaps.len(), "gaps": t.gaps},
            "lower_bound": lower,
            "profile": profile,
        }),
    )
}

fn run_validate(a: ValidateArgs, mut r: Resolver, default_ids: &[u32]) -> CliResult<()> {
    let seed = r.get("seed", a.seed, DEFAULT_SEED)?;
    let ids = a.checks.unwrap_or_else(|| default_ids.to_vec());
    let known = validation::check_ids();
    if let Some(bad) = ids.iter().find(|id| !known.contains(id)) {
        return Err(usage("checks", format!("unknown check id {bad}")));
    }
    let report: ValidationReport = validation::run_checks(&ids, seed);
    for c in &report.checks {
        println!(
            "[{}] {:>2} {}: {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            c.detail
        );
    }
    let passed = report.checks.iter().filter(|c| c.pass).count();
    println!("{passed}/{} checks passed (seed {seed})", report.checks.len());
    if let Some(out) = a.out.as_deref() {
        // timings vary run to run and stay out of the file
        let checks: Vec<Value> = report
            .checks
            .iter()
            .map(|c| json!({"id": c.id, "name": c.name, "pass": c.pass, "detail": c.detail}))
            .collect();
        write_json(
            Some(out),
            &json!({"params": r.params(), "checks": checks, "all_passed": report.all_passed()}),
        )?;
    }
    if report.all_passed() {
        Ok(())
    } else {
        Err(CliError::Validation)
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let threads = match cli.parallelism {
        Some(0) => return Err(usage("parallelism", "must be at least 1")),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Failure(e.into()))?;

    let config = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage("config", format!("{}: {e}", path.display())))?;
            parse_config(&text).map_err(|e| usage("config", e))?
        }
        None => Config::new(),
    };
    let r = Resolver::new(config);
    match cli.command {
        Command::Orbit(a) => run_orbit(a, r),
        Command::Spectrum(a) => run_spectrum(a, r),
        Command::FreeEnergy(a) => run_free_energy(a, r),
        Command::LeeYang(a) => run_lee_yang(a, r),
        Command::Dims(a) => run_dims(a, r),
        Command::Validate(a) => run_validate(a, r, &validation::check_ids()),
        Command::ValidateClassical(a) => run_validate(a, r, &CLASSICAL_CHECKS),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
