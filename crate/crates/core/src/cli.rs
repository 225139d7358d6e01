//! Command-line front end: `spectrum`, `wavefunction`, `verify`, `sweep`.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::potentials::{registry, FamilyModel, PotentialSpec};
use crate::spectra::{eckart_self_consistency, levels_with, BoundLevel, CLOSED_FORM};
use crate::verify::{solver, verify_family, ContourGrid, Tolerances, DEFAULT_SOLVER};
use crate::wavefun::{eigenfunction_for, level_with_index, normalize};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_EMPTY: i32 = 3;
pub const EXIT_UNSUPPORTED: i32 = 4;
pub const EXIT_VERIFY_FAILED: i32 = 5;

#[derive(Parser, Debug)]
#[command(name = "dirac-spectra", version, about = "Bound states of a Dirac particle in complex hyperbolic potentials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Closed-form bound-state energies.
    Spectrum(SpectrumArgs),
    /// Normalized analytic upper component of one level, sampled on the grid.
    Wavefunction(WavefunctionArgs),
    /// Compare closed forms with the discretized Hamiltonian.
    Verify(VerifyArgs),
    /// Tabulate the spectrum while one parameter varies.
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Clone, Default)]
pub struct SpecArgs {
    /// Potential family (eckart, rosen-morse2, scarf, poschl-teller).
    #[arg(long)]
    pub family: Option<String>,
    /// JSON file holding a spec, or an earlier output whose "spec" field is used.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub m: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub kappa: Option<i32>,
    #[arg(long, allow_negative_numbers = true)]
    pub zeta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub eta: Option<f64>,
    #[arg(long = "eta-r", allow_negative_numbers = true)]
    pub eta_r: Option<f64>,
    #[arg(long = "eta-i", allow_negative_numbers = true)]
    pub eta_i: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: Option<i32>,
    #[arg(long, allow_negative_numbers = true)]
    pub tau: Option<i32>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GridArgs {
    /// Grid spacing.
    #[arg(long)]
    pub h: Option<f64>,
    /// Half-width of the grid, which spans [-L, L].
    #[arg(long = "L")]
    pub half_width: Option<f64>,
    /// Imaginary offset of the contour, z = x - i*shift.
    #[arg(long)]
    pub shift: Option<f64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone, Default)]
pub struct OutputArgs {
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Omit run metadata (timestamps, timings) so output is reproducible.
    #[arg(long)]
    pub stable_output: bool,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    /// Named spectral formula.
    #[arg(long, default_value = CLOSED_FORM)]
    pub formula: String,
    /// Also list levels that fail a window.
    #[arg(long)]
    pub all_levels: bool,
}

#[derive(Args, Debug)]
pub struct WavefunctionArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    /// Level index.
    #[arg(long)]
    pub n: u32,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    /// Eigensolver (tridiagonal, dense).
    #[arg(long, default_value = DEFAULT_SOLVER)]
    pub solver: String,
    #[arg(long = "tol-rel", default_value_t = crate::verify::DEFAULT_TOL_REL)]
    pub tol_rel: f64,
    #[arg(long = "tol-imag", default_value_t = crate::verify::DEFAULT_TOL_IMAG)]
    pub tol_imag: f64,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    /// Parameter to vary, by flag or JSON name (e.g. zeta, eta-i, epsilon).
    #[arg(long)]
    pub param: String,
    #[arg(long, allow_negative_numbers = true)]
    pub from: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub to: f64,
    /// Number of intervals; the table has steps + 1 rows.
    #[arg(long)]
    pub steps: usize,
    #[arg(long, default_value = CLOSED_FORM)]
    pub formula: String,
}

/// Failure carrying the process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn invalid(message: impl Into<String>) -> Self {
        CliError { code: EXIT_INVALID, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::UnsupportedFamily(_) => EXIT_UNSUPPORTED,
            Error::Io(_) | Error::Solver(_) => EXIT_FAILURE,
            _ => EXIT_INVALID,
        };
        CliError { code, message: err.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses arguments, runs the command, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match execute(&cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {}", err.message);
            err.code
        }
    }
}

pub fn execute(command: &Command) -> CliResult<i32> {
    match command {
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Wavefunction(args) => cmd_wavefunction(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Sweep(args) => cmd_sweep(args),
    }
}

fn load_config(path: &Path) -> CliResult<PotentialSpec> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::invalid(format!("cannot read config {}: {e}", path.display())))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| CliError::invalid(format!("config is not valid JSON: {e}")))?;
    let spec_value = match value.get("spec") {
        Some(inner) if value.get("family").is_none() => inner.clone(),
        _ => value,
    };
    serde_json::from_value(spec_value).map_err(|e| CliError::invalid(format!("invalid spec in config: {e}")))
}

/// Builds the spec from `--config` (if any) overlaid with explicit flags.
pub fn resolve_spec(args: &SpecArgs) -> CliResult<PotentialSpec> {
    let mut spec = match &args.config {
        Some(path) => load_config(path)?,
        None => {
            let family = args.family.as_deref().ok_or_else(|| CliError::invalid("--family is required"))?;
            let m = args.m.ok_or_else(|| CliError::invalid("--m is required (mass must be positive)"))?;
            PotentialSpec::new(family, m)
        }
    };
    if let Some(family) = &args.family {
        spec.family = family.clone();
    }
    if let Some(m) = args.m {
        spec.m = m;
    }
    if let Some(kappa) = args.kappa {
        spec.kappa = kappa;
    }
    let overrides = [
        (&mut spec.zeta, args.zeta),
        (&mut spec.eta, args.eta),
        (&mut spec.eta_r, args.eta_r),
        (&mut spec.eta_i, args.eta_i),
        (&mut spec.epsilon, args.epsilon),
        (&mut spec.a, args.a),
        (&mut spec.b, args.b),
    ];
    for (slot, value) in overrides {
        if value.is_some() {
            *slot = value;
        }
    }
    if args.sigma.is_some() {
        spec.sigma = args.sigma;
    }
    if args.tau.is_some() {
        spec.tau = args.tau;
    }
    Ok(spec)
}

fn resolve_model(args: &SpecArgs) -> CliResult<Box<dyn FamilyModel>> {
    let spec = resolve_spec(args)?;
    Ok(registry().resolve(&spec)?)
}

fn resolve_grid(model: &dyn FamilyModel, args: &GridArgs) -> CliResult<ContourGrid> {
    let defaults = model.grid_defaults();
    Ok(ContourGrid::symmetric(
        args.half_width.unwrap_or(defaults.half_width),
        args.h.unwrap_or(defaults.h),
        args.shift.unwrap_or(defaults.shift),
    )?)
}

fn check_format(out: &OutputArgs, default: Format, allowed: &[Format], command: &str) -> CliResult<Format> {
    let format = out.format.unwrap_or(default);
    if !allowed.contains(&format) {
        return Err(CliError::invalid(format!("--format {format:?} is not available for `{command}`").to_lowercase()));
    }
    Ok(format)
}

fn emit(out: &OutputArgs, bytes: &[u8]) -> CliResult<()> {
    let result = match &out.output {
        Some(path) => fs::write(path, bytes),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(bytes).and_then(|_| stdout.flush())
        }
    };
    result.map_err(|e| CliError { code: EXIT_FAILURE, message: format!("cannot write output: {e}") })
}

fn meta(started: Instant) -> Value {
    let unix_ms = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis() as u64).unwrap_or(0);
    json!({
        "version": env!("CARGO_PKG_VERSION"),
        "generated_unix_ms": unix_ms,
        "elapsed_ms": started.elapsed().as_secs_f64() * 1e3,
    })
}

/// Pretty JSON with the metadata envelope unless output must be stable.
fn json_document(mut payload: Value, out: &OutputArgs, started: Instant) -> CliResult<Vec<u8>> {
    if !out.stable_output {
        if let Value::Object(map) = &mut payload {
            map.insert("meta".into(), meta(started));
        }
    }
    let mut bytes = serde_json::to_vec_pretty(&payload).map_err(Error::from)?;
    bytes.push(b'\n');
    Ok(bytes)
}

#[derive(Serialize)]
struct DefectEntry {
    n: u32,
    defect: f64,
}

pub fn cmd_spectrum(args: &SpectrumArgs) -> CliResult<i32> {
    let started = Instant::now();
    check_format(&args.out, Format::Json, &[Format::Json], "spectrum")?;
    let model = resolve_model(&args.spec)?;
    let spec = model.spec();
    let levels = levels_with(model.as_ref(), &args.formula)?;
    let admissible_count = levels.iter().filter(|l| l.admissible).count();
    let shown: Vec<&BoundLevel> = levels.iter().filter(|l| args.all_levels || l.admissible).collect();
    let mut payload = json!({
        "spec": spec,
        "formula": args.formula,
        "levels": shown,
    });
    if model.energy_dependent() {
        let defects = shown
            .iter()
            .map(|l| Ok(DefectEntry { n: l.n, defect: eckart_self_consistency(&spec, l)? }))
            .collect::<crate::Result<Vec<_>>>()?;
        payload["self_consistency"] = serde_json::to_value(defects).map_err(Error::from)?;
    }
    emit(&args.out, &json_document(payload, &args.out, started)?)?;
    Ok(if admissible_count > 0 { EXIT_OK } else { EXIT_EMPTY })
}

pub fn cmd_wavefunction(args: &WavefunctionArgs) -> CliResult<i32> {
    let started = Instant::now();
    let format = check_format(&args.out, Format::Csv, &[Format::Csv, Format::Json], "wavefunction")?;
    let model = resolve_model(&args.spec)?;
    let grid = resolve_grid(model.as_ref(), &args.grid)?;
    let level = level_with_index(model.as_ref(), args.n)?;
    let sampled = eigenfunction_for(model.as_ref(), &level, &grid)?;
    let (normalized, _) = normalize(&sampled)?;
    let bytes = match format {
        Format::Csv => {
            let mut buf = Vec::new();
            normalized.write_csv(&mut buf).map_err(Error::from)?;
            buf
        }
        Format::Json => {
            let rows: Vec<[f64; 4]> =
                normalized.points.iter().zip(&normalized.values).map(|(z, v)| [z.re, z.im, v.re, v.im]).collect();
            let payload = json!({
                "spec": model.spec(),
                "level": level,
                "grid": grid,
                "columns": ["x_re", "x_im", "phi_re", "phi_im"],
                "rows": rows,
            });
            json_document(payload, &args.out, started)?
        }
    };
    emit(&args.out, &bytes)?;
    Ok(EXIT_OK)
}

pub fn cmd_verify(args: &VerifyArgs) -> CliResult<i32> {
    let started = Instant::now();
    check_format(&args.out, Format::Json, &[Format::Json], "verify")?;
    if !(args.tol_rel >= 0.0 && args.tol_imag >= 0.0) {
        return Err(CliError::invalid("tolerances must be non-negative"));
    }
    let model = resolve_model(&args.spec)?;
    let grid = resolve_grid(model.as_ref(), &args.grid)?;
    let eigensolver = solver(&args.solver)?;
    let tol = Tolerances { rel: args.tol_rel, imag: args.tol_imag };
    let report = verify_family(&model.spec(), &grid, tol, eigensolver.as_ref())?;
    let payload = serde_json::to_value(&report).map_err(Error::from)?;
    emit(&args.out, &json_document(payload, &args.out, started)?)?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub level_count: usize,
    pub min_energy: Option<f64>,
    pub max_energy: Option<f64>,
    pub all_real: bool,
}

fn sweep_row(base: &PotentialSpec, key: &str, value: f64, formula: &str) -> CliResult<SweepRow> {
    let mut spec = base.clone();
    spec.set(key, value)?;
    let model = registry().resolve(&spec)?;
    let formulas = model.formulas();
    let chosen = formulas
        .iter()
        .find(|f| f.name() == formula)
        .ok_or_else(|| CliError::invalid(format!("the {} family has no formula `{formula}`", model.family())))?;
    let levels: Vec<BoundLevel> = chosen.levels()?.into_iter().filter(|l| l.admissible).collect();
    let window = chosen.nominal_window()?;
    let energies: Vec<f64> = levels.iter().map(|l| l.energy).collect();
    Ok(SweepRow {
        value,
        level_count: levels.len(),
        min_energy: energies.iter().copied().reduce(f64::min),
        max_energy: energies.iter().copied().reduce(f64::max),
        all_real: window.iter().all(|n| levels.iter().any(|l| l.n == *n && l.energy.is_finite())),
    })
}

fn sweep_key(model: &dyn FamilyModel, param: &str) -> CliResult<&'static str> {
    let key = param.trim().trim_start_matches("--").replace('-', "_");
    if key == "m" {
        return Ok("m");
    }
    let family = registry().get(model.family())?;
    let allowed: Vec<&'static str> = family.keys().iter().copied().filter(|k| !matches!(*k, "sigma" | "tau")).collect();
    allowed.iter().copied().find(|k| *k == key).ok_or_else(|| {
        CliError::invalid(format!(
            "cannot sweep `{param}` for the {} family (sweepable: m, {})",
            model.family(),
            allowed.join(", ")
        ))
    })
}

pub fn cmd_sweep(args: &SweepArgs) -> CliResult<i32> {
    let started = Instant::now();
    let format = check_format(&args.out, Format::Csv, &[Format::Csv, Format::Json], "sweep")?;
    if args.steps == 0 {
        return Err(CliError::invalid("--steps must be at least 1"));
    }
    if !(args.from.is_finite() && args.to.is_finite()) {
        return Err(CliError::invalid("sweep bounds must be finite"));
    }
    let model = resolve_model(&args.spec)?;
    let key = sweep_key(model.as_ref(), &args.param)?;
    let base = model.spec();
    let values: Vec<f64> =
        (0..=args.steps).map(|k| args.from + (args.to - args.from) * k as f64 / args.steps as f64).collect();
    let rows = values.par_iter().map(|&v| sweep_row(&base, key, v, &args.formula)).collect::<CliResult<Vec<_>>>()?;
    let bytes = match format {
        Format::Csv => {
            let mut text = format!("{key},level_count,min_energy,max_energy,all_real\n");
            let cell = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            for row in &rows {
                text.push_str(&format!(
                    "{},{},{},{},{}\n",
                    row.value,
                    row.level_count,
                    cell(row.min_energy),
                    cell(row.max_energy),
                    row.all_real
                ));
            }
            text.into_bytes()
        }
        Format::Json => {
            let payload = json!({ "spec": base, "param": key, "formula": args.formula, "rows": rows });
            json_document(payload, &args.out, started)?
        }
    };
    emit(&args.out, &bytes)?;
    Ok(EXIT_OK)
}
