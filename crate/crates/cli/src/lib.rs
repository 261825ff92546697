//! Command-line front end: `eval`, `simulate`, `verify` and `grid`.

pub mod eval;
pub mod grid;
pub mod params;
pub mod simulate;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};
use twistloop::mc::TimeGrid;
use twistloop::verify::{self, Suite, DEFAULT_KAPPAS};

use crate::eval::Formula;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_QUALITY: i32 = 4;
pub const EXIT_VERIFY: i32 = 5;
pub const EXIT_IO: i32 = 6;
pub const EXIT_NUMERIC: i32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Domain(String),
    Numeric(String),
    Io(String),
    /// A report was produced but failed its check; it is still printed.
    Quality { message: String, report: Value },
    Verify { report: Value },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Domain(_) => EXIT_DOMAIN,
            CliError::Numeric(_) => EXIT_NUMERIC,
            CliError::Io(_) => EXIT_IO,
            CliError::Quality { .. } => EXIT_QUALITY,
            CliError::Verify { .. } => EXIT_VERIFY,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Domain(_) => "domain",
            CliError::Numeric(_) => "numeric",
            CliError::Io(_) => "io",
            CliError::Quality { .. } => "quality",
            CliError::Verify { .. } => "verification",
        }
    }

    /// Report that still belongs on stdout, if any.
    pub fn report(&self) -> Option<&Value> {
        match self {
            CliError::Quality { report, .. } | CliError::Verify { report } => Some(report),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let message = match self {
            CliError::Usage(m) | CliError::Domain(m) | CliError::Numeric(m) | CliError::Io(m) => m.clone(),
            CliError::Quality { message, .. } => message.clone(),
            CliError::Verify { .. } => "one or more checks failed".into(),
        };
        json!({"error": {"kind": self.kind(), "exit_code": self.exit_code(), "message": message}})
    }
}

impl From<twistloop::Error> for CliError {
    fn from(e: twistloop::Error) -> Self {
        use twistloop::Error as E;
        match &e {
            E::Domain { .. } => CliError::Domain(e.to_string()),
            E::Contract { .. } => CliError::Usage(e.to_string()),
            E::Numeric { .. } => CliError::Numeric(e.to_string()),
            E::Quality { .. } => CliError::Quality {
                message: e.to_string(),
                report: Value::Null,
            },
        }
    }
}

/// Provenance block embedded in every output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub params: Value,
    pub seed: Option<u64>,
    pub version: String,
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(command: &str, params: Value, seed: Option<u64>) -> Self {
        RunManifest {
            command: command.into(),
            params,
            seed,
            version: concat!("twistloop ", env!("CARGO_PKG_VERSION")).into(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("manifest serializes")
    }
}

pub(crate) fn with_manifest(mut body: Value, manifest: &RunManifest) -> Value {
    if let Value::Object(m) = &mut body {
        m.insert("manifest".into(), manifest.to_json());
    }
    body
}

#[derive(Debug, Parser)]
#[command(name = "twistloop", version, about = "Twist-operator correlators, winding probabilities and SLE Monte Carlo")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a closed form at one point, e.g. `eval schramm v=pi/3`.
    Eval {
        formula: Formula,
        /// key=value parameters; complex values as re,im or r@theta.
        params: Vec<String>,
    },
    /// Monte Carlo estimate compared with the closed form.
    Simulate(SimulateArgs),
    /// Run a verification suite.
    Verify {
        suite: SuiteArg,
        /// κ values (repeatable); defaults to 2.5, 3 and 3.7.
        #[arg(long = "kappa", value_parser = parse_real_arg)]
        kappa: Vec<f64>,
    },
    /// Tabulate a formula over one or two parameter axes into CSV.
    Grid(GridArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Ode,
    Monodromy,
    Crossing,
    Pde,
    Identities,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Ode => Suite::Ode,
            SuiteArg::Monodromy => Suite::Monodromy,
            SuiteArg::Crossing => Suite::Crossing,
            SuiteArg::Pde => Suite::Pde,
            SuiteArg::Identities => Suite::Identities,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimMode {
    LeftPassage,
    Winding,
    DrivingLaw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GridArg {
    Uniform,
    Quadratic,
}

fn parse_real_arg(s: &str) -> Result<f64, String> {
    params::parse_real(s).map_err(|e| format!("{e:?}"))
}

fn parse_complex_arg(s: &str) -> Result<twistloop::Complex64, String> {
    params::parse_complex(s).map_err(|e| format!("{e:?}"))
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    pub mode: SimMode,
    /// Point for left-passage (re,im or r@theta).
    #[arg(long, value_parser = parse_complex_arg, allow_hyphen_values = true)]
    pub z: Option<twistloop::Complex64>,
    #[arg(long = "za", value_parser = parse_complex_arg, allow_hyphen_values = true)]
    pub za: Option<twistloop::Complex64>,
    #[arg(long = "zb", value_parser = parse_complex_arg, allow_hyphen_values = true)]
    pub zb: Option<twistloop::Complex64>,
    #[arg(long, default_value = "8/3", value_parser = parse_real_arg)]
    pub kappa: f64,
    #[arg(long, default_value_t = 20000)]
    pub samples: u64,
    #[arg(long, default_value_t = 5000)]
    pub steps: usize,
    /// Defaults to 400·max|z|².
    #[arg(long, value_parser = parse_real_arg)]
    pub total_time: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Defaults to 10·max|z|.
    #[arg(long, value_parser = parse_real_arg)]
    pub escape_radius: Option<f64>,
    #[arg(long, default_value_t = 0.03)]
    pub angle_tolerance: f64,
    #[arg(long, default_value_t = 4.0)]
    pub max_extension: f64,
    #[arg(long, value_enum, default_value_t = GridArg::Uniform)]
    pub time_grid: GridArg,
    #[arg(long, default_value_t = 0.1)]
    pub refinement: f64,
    /// Also rerun with twice the steps and report the difference.
    #[arg(long)]
    pub step_halving: bool,
    #[arg(long)]
    pub threads: Option<usize>,
}

impl SimulateArgs {
    pub fn time_grid(&self) -> TimeGrid {
        match self.time_grid {
            GridArg::Uniform => TimeGrid::Uniform,
            GridArg::Quadratic => TimeGrid::Quadratic,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    pub formula: Formula,
    /// Axis NAME=START:STOP:COUNT; NAME.re / NAME.im address one component
    /// of a complex parameter. One or two axes.
    #[arg(long = "axis", required = true, allow_hyphen_values = true)]
    pub axes: Vec<String>,
    /// Fixed key=value parameters.
    #[arg(long = "set", allow_hyphen_values = true)]
    pub set: Vec<String>,
    #[arg(long, short)]
    pub out: PathBuf,
}

/// Runs a parsed command; `Ok` holds the JSON for stdout.
pub fn execute(cli: Cli) -> Result<Value, CliError> {
    match cli.command {
        Command::Eval { formula, params } => {
            let p = params::Params::parse(&params)?;
            let e = eval::evaluate(formula, p)?;
            let manifest = RunManifest::new("eval", json!({"formula": formula.name(), "params": params}), None);
            Ok(with_manifest(e.to_json(), &manifest))
        }
        Command::Simulate(args) => simulate::run(&args),
        Command::Verify { suite, kappa } => run_verify(suite.into(), &kappa),
        Command::Grid(args) => grid::run(&args),
    }
}

fn run_verify(suite: Suite, kappa: &[f64]) -> Result<Value, CliError> {
    let kappas = if kappa.is_empty() { DEFAULT_KAPPAS.to_vec() } else { kappa.to_vec() };
    for &k in &kappas {
        if !(k > 2.0 && k < 4.0) {
            return Err(CliError::Usage(format!("κ = {k}: the verification suites need κ in (2, 4)")));
        }
    }
    let reports = verify::run(suite, &kappas);
    let passed = reports.iter().all(|r| r.passed);
    let manifest = RunManifest::new("verify", json!({"suite": suite.name(), "kappa": kappas}), None);
    let mut body = Map::new();
    body.insert("suite".into(), json!(suite.name()));
    body.insert("passed".into(), json!(passed));
    body.insert("reports".into(), serde_json::to_value(&reports).expect("reports serialize"));
    let out = with_manifest(Value::Object(body), &manifest);
    if passed {
        Ok(out)
    } else {
        Err(CliError::Verify { report: out })
    }
}
