//! The `chisq-predictive` command line.
//!
//! | subcommand | output |
//! |---|---|
//! | `density` | JSON record with the log-density and the evaluator used |
//! | `check` | JSON dominance verdict |
//! | `risk` | CSV, one row per theta |
//! | `figure1` | CSV for the four-panel simulation grid |
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid input, 3 numerical failure.
//! [`run`] is the whole program; the binary only forwards `std::env::args`.

mod args;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::Parser;
use serde::Serialize;

pub use args::{BModeArg, CheckArgs, Cli, Command, DensityArgs, Figure1Args, Method, PriorKind, RiskArgs};
pub use output::{RunManifest, CSV_HEADER};

use crate::dominance::{dominance_report, Condition, Verdict};
use crate::model::{ModelConfig, Observation};
use crate::predictive::{log_predictive_with, BMode, HyperParams, PriorChoice, PriorSpec};
use crate::risk::{
    paper_grid, ref_risk_constant, riskdiff_b1, riskdiff_n2eq2, run_experiment, ExperimentConfig, ExperimentRow,
    RiskEstimate,
};
use crate::specfn::QuadSettings;
use crate::Error;

/// Seed used when `--seed` is absent.
pub const DEFAULT_SEED: u64 = 20_240_601;
/// Replications per cell when `--reps` is absent.
pub const DEFAULT_REPS: usize = 20_000;
/// Replications per cell under `--paper-scale`.
pub const PAPER_SCALE_REPS: usize = 100_000;

/// A failed command, carrying its exit code.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

/// Library field names that differ from their flag.
fn flag_name(field: &str) -> String {
    match field {
        "x_norm_sq" => "xnormsq".to_string(),
        other => other.replace('_', "-"),
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            return CliError::Numerical(e.to_string());
        }
        match e {
            Error::Validation { field, detail } => {
                CliError::Validation(format!("invalid --{}: {detail}", flag_name(field)))
            }
            other => CliError::Validation(other.to_string()),
        }
    }
}

fn required<T>(value: Option<T>, flag: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Validation(format!("missing --{flag}")))
}

fn model_from(n1: Option<f64>, n2: Option<f64>, p: Option<u32>) -> Result<ModelConfig, CliError> {
    Ok(ModelConfig::new(
        required(p, "p")?,
        required(n1, "n1")?,
        required(n2, "n2")?,
    )?)
}

fn quad_settings(tol: Option<f64>) -> Result<QuadSettings, CliError> {
    match tol {
        None => Ok(QuadSettings::default()),
        Some(t) => QuadSettings::with_rel_tol(t).map_err(|_| CliError::Validation(format!("invalid --tol: {t}"))),
    }
}

/// `--b-mode` and `--b` together: a bare `--b` means an explicit value.
fn b_mode_from(mode: Option<BModeArg>, b: Option<f64>) -> Result<BMode, CliError> {
    match (mode, b) {
        (Some(BModeArg::Half), None) => Ok(BMode::Half),
        (Some(BModeArg::One), None) => Ok(BMode::One),
        (Some(BModeArg::General) | None, Some(b)) => Ok(BMode::General(b)),
        (Some(BModeArg::General), None) => Err(CliError::Validation("--b-mode general needs --b".into())),
        (Some(_), Some(_)) => Err(CliError::Validation("--b is only used with --b-mode general".into())),
        (None, None) => Err(CliError::Validation("missing --b-mode (or --b)".into())),
    }
}

fn prior_choice(
    kind: PriorKind,
    mode: Option<BModeArg>,
    b: Option<f64>,
    a: Option<f64>,
) -> Result<PriorChoice, CliError> {
    match kind {
        PriorKind::Ref => Ok(PriorChoice::Reference),
        PriorKind::Hier => Ok(PriorChoice::Hierarchical {
            b_mode: b_mode_from(mode, b)?,
            a: required(a, "a")?,
        }),
    }
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).unwrap_or_else(|_| unreachable!("records always serialize"));
    s.push('\n');
    s
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// What a successful command prints, and its exit code.
struct Report {
    stdout: String,
    code: i32,
}

impl Report {
    fn ok(stdout: String) -> Self {
        Report { stdout, code: 0 }
    }
}

#[derive(Serialize)]
struct DensityRecord {
    evaluator: &'static str,
    log_density: f64,
    density: f64,
    prior: PriorKind,
    b: Option<f64>,
    a: Option<f64>,
    n1: f64,
    n2: f64,
    p: u32,
    v: f64,
    w: f64,
    xnormsq: f64,
}

fn cmd_density(flags: DensityArgs) -> Result<Report, CliError> {
    let flags = args::merge_config(flags.clone(), flags.config.as_ref())?;
    let config = model_from(flags.n1, flags.n2, flags.p)?;
    let kind = required(flags.prior, "prior")?;
    let choice = prior_choice(kind, flags.b_mode, flags.b, flags.a)?;
    let prior = choice.resolve(&config)?;
    let (v, w, xnormsq) = (
        required(flags.v, "v")?,
        required(flags.w, "w")?,
        required(flags.xnormsq, "xnormsq")?,
    );
    let obs = Observation::new(xnormsq, v)?;
    if !(w > 0.0 && w.is_finite()) {
        return Err(CliError::Validation(format!("invalid --w: {w} must be positive")));
    }
    let settings = quad_settings(flags.tol)?;
    let (log_density, path) = log_predictive_with(w, &obs, &prior, &config, &settings)?;
    let (b, a) = match prior {
        PriorSpec::Hierarchical(hp) => (Some(hp.b), Some(hp.a)),
        PriorSpec::Reference => (None, None),
    };
    let record = DensityRecord {
        evaluator: path.as_str(),
        log_density,
        density: log_density.exp(),
        prior: kind,
        b,
        a,
        n1: config.n1,
        n2: config.n2,
        p: config.p,
        v,
        w,
        xnormsq,
    };
    emit(json_line(&record), flags.out.as_deref())
}

#[derive(Serialize)]
struct CheckRecord {
    condition: Option<Condition>,
    holds: Verdict,
    margin: Option<f64>,
    tolerance: f64,
    note: String,
    b: f64,
    a: f64,
    n1: f64,
    n2: f64,
    p: u32,
}

fn cmd_check(flags: CheckArgs) -> Result<Report, CliError> {
    let flags = args::merge_config(flags.clone(), flags.config.as_ref())?;
    let config = model_from(flags.n1, flags.n2, flags.p)?;
    let b = b_mode_from(flags.b_mode, flags.b)?.resolve(&config);
    let hp = HyperParams::new(b, required(flags.a, "a")?, &config)?;
    let settings = quad_settings(flags.tol)?;
    let verdict = dominance_report(&PriorSpec::Hierarchical(hp), &config, &settings)?;
    let record = CheckRecord {
        condition: verdict.fired_by,
        holds: verdict.holds,
        margin: verdict.margin,
        tolerance: verdict.tolerance,
        note: verdict.note,
        b: hp.b,
        a: hp.a,
        n1: config.n1,
        n2: config.n2,
        p: config.p,
    };
    emit(json_line(&record), flags.out.as_deref())
}

/// Prints to stdout, or writes to `out` and prints nothing.
fn emit(text: String, out: Option<&Path>) -> Result<Report, CliError> {
    match out {
        Some(path) => {
            write_file(path, &text)?;
            Ok(Report::ok(String::new()))
        }
        None => Ok(Report::ok(text)),
    }
}

/// Writes the CSV (and a manifest next to it, when going to a file).
fn emit_table<C: Serialize>(
    command: &str,
    rows: &[ExperimentRow],
    seed: u64,
    resolved: &C,
    out: Option<&Path>,
) -> Result<Report, CliError> {
    let csv = output::rows_to_csv(rows)?;
    let code = if !rows.is_empty() && rows.iter().all(|r| r.error.is_some()) {
        3
    } else {
        0
    };
    let stdout = match out {
        Some(path) => {
            write_file(path, &csv)?;
            let manifest = RunManifest::new(command, seed, resolved);
            write_file(&output::manifest_path(path), &json_line(&manifest))?;
            String::new()
        }
        None => csv,
    };
    Ok(Report { stdout, code })
}

fn semi_analytic_rows(exp: &ExperimentConfig) -> Vec<ExperimentRow> {
    let config = exp.configs[0];
    let choice = exp.priors[0];
    let ref_risk = ref_risk_constant(&config);
    let resolved = choice.resolve(&config);
    let verdict = match &resolved {
        Ok(prior @ PriorSpec::Hierarchical(_)) => dominance_report(prior, &config, &exp.settings).ok(),
        _ => None,
    };
    exp.theta_grid
        .iter()
        .map(|&theta| {
            let diff = match &resolved {
                Ok(PriorSpec::Reference) => Ok(0.0),
                Ok(PriorSpec::Hierarchical(hp)) => match choice {
                    PriorChoice::Hierarchical { b_mode: BMode::One, .. } => {
                        riskdiff_b1(&config, hp.a, theta, &exp.settings)
                    }
                    PriorChoice::Hierarchical {
                        b_mode: BMode::Half, ..
                    } => riskdiff_n2eq2(&config, hp.a, theta, &exp.settings),
                    _ => Err(Error::validation(
                        "b-mode",
                        "semi-analytic risk needs --b-mode one or half",
                    )),
                },
                Err(e) => Err(e.clone()),
            };
            let (b, a) = match &resolved {
                Ok(PriorSpec::Hierarchical(hp)) => (Some(hp.b), Some(hp.a)),
                _ => (None, None),
            };
            let (estimate, error) = match diff {
                Ok(d) => (
                    Some(RiskEstimate {
                        mean: ref_risk + d,
                        std_error: None,
                        reps: 0,
                        seed: exp.seed,
                    }),
                    None,
                ),
                Err(e) => (None, Some(e.to_string())),
            };
            ExperimentRow {
                config,
                prior: choice,
                b,
                a,
                theta,
                reps: 0,
                seed: exp.seed,
                estimate,
                ref_risk,
                verdict: verdict.clone(),
                error,
            }
        })
        .collect()
}

fn cmd_risk(flags: RiskArgs) -> Result<Report, CliError> {
    let flags = args::merge_config(flags.clone(), flags.config.as_ref())?;
    let config = model_from(flags.n1, flags.n2, flags.p)?;
    let kind = required(flags.prior, "prior")?;
    let choice = prior_choice(kind, flags.b_mode, flags.b, flags.a)?;
    choice.resolve(&config)?;
    let theta_grid = required(flags.theta.clone(), "theta")?;
    let seed = flags.seed.unwrap_or(DEFAULT_SEED);
    let exp = ExperimentConfig {
        configs: vec![config],
        priors: vec![choice],
        theta_grid,
        reps: flags.reps.unwrap_or(DEFAULT_REPS),
        seed,
        baseline: false,
        settings: quad_settings(flags.tol)?,
    };
    exp.validate()?;
    let method = flags.method.unwrap_or(Method::Mc);
    let rows = match method {
        Method::Mc => run_experiment(&exp)?,
        Method::Semi => {
            if kind == PriorKind::Hier && matches!(flags.b_mode, None | Some(BModeArg::General)) {
                return Err(CliError::Validation("--method semi needs --b-mode one or half".into()));
            }
            if flags.b_mode == Some(BModeArg::Half) && config.n2 != 2.0 {
                return Err(CliError::Validation(
                    "--method semi with --b-mode half needs --n2 2".into(),
                ));
            }
            semi_analytic_rows(&exp)
        }
    };
    #[derive(Serialize)]
    struct Resolved<'a> {
        method: Method,
        experiment: &'a ExperimentConfig,
    }
    emit_table(
        "risk",
        &rows,
        seed,
        &Resolved {
            method,
            experiment: &exp,
        },
        flags.out.as_deref(),
    )
}

fn cmd_figure1(flags: Figure1Args) -> Result<Report, CliError> {
    let flags = args::merge_config(flags.clone(), flags.config.as_ref())?;
    let reps = match (flags.paper_scale, flags.reps) {
        (true, Some(_)) => return Err(CliError::Validation("--paper-scale and --reps are exclusive".into())),
        (true, None) => PAPER_SCALE_REPS,
        (false, reps) => reps.unwrap_or(DEFAULT_REPS),
    };
    let seed = flags.seed.unwrap_or(DEFAULT_SEED);
    let mut exp = paper_grid(reps, seed);
    exp.settings = quad_settings(flags.tol)?;
    let rows = run_experiment(&exp)?;
    emit_table("figure1", &rows, seed, &exp, flags.out.as_deref())
}

fn execute(command: Command) -> Result<Report, CliError> {
    match command {
        Command::Density(a) => cmd_density(a),
        Command::Check(a) => cmd_check(a),
        Command::Risk(a) => cmd_risk(a),
        Command::Figure1(a) => cmd_figure1(a),
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = match cli.threads {
        None => execute(cli.command),
        Some(0) => Err(CliError::Validation("invalid --threads: must be at least 1".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(cli.command)),
            Err(e) => Err(CliError::Io(format!("cannot start {n} worker threads: {e}"))),
        },
    };
    match result {
        Ok(report) => {
            if out
                .write_all(report.stdout.as_bytes())
                .and_then(|_| out.flush())
                .is_err()
            {
                return 1;
            }
            report.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
