//! Command-line front end. Exit codes: 0 clean, 1 mathematical violation, 2 input error.

pub mod document;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::comodule::validate_bicomodule;
use crate::hopf::validate_hopf;
use crate::lattice::{
    check_operators, check_site_independence, check_straightening_representation, ground_space_dimension,
    CheckOptions, EdgeConvention, GroundMethod, LatticeError, StateSpace,
};
use crate::linalg::{max_total_dimension, LinalgError, MAX_DIM_ENV};
use crate::report::Report;
use crate::surface::{regularity_check, validate_labeling};
pub use document::{Model, ModelDocument};

pub const EXIT_CLEAN: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

const DEFAULT_KERNEL_LIMIT: usize = 4096;

#[derive(Debug, Parser)]
#[command(name = "kitaev", version, about = "Exact verification of Kitaev lattice models with defects")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate every algebra, the surface and the labeling.
    Validate { file: PathBuf },
    /// Verify idempotence, commutation, site independence and straightening.
    Check {
        file: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        max_dim: Option<usize>,
    },
    /// Compute the ground-space dimension.
    GroundDim {
        file: PathBuf,
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
        /// Skip the preliminary check suite.
        #[arg(long)]
        force: bool,
        #[arg(long)]
        max_dim: Option<usize>,
    },
    /// Run everything and write a JSON report.
    Report {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        max_dim: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Trace,
    Kernel,
    Both,
}

impl From<MethodArg> for GroundMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Trace => GroundMethod::Trace,
            MethodArg::Kernel => GroundMethod::Kernel,
            MethodArg::Both => GroundMethod::Both,
        }
    }
}

/// Result of one command: a JSON document and an exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub body: Value,
}

impl Outcome {
    fn input_error(msg: impl Into<String>) -> Self {
        Outcome { code: EXIT_INPUT, body: json!({ "error": msg.into() }) }
    }
}

fn report_json(r: &Report) -> Value {
    serde_json::to_value(r).expect("reports serialize")
}

fn violations(reports: &[&Report]) -> usize {
    reports.iter().map(|r| r.failures().count()).sum()
}

fn load(path: &Path) -> Result<Model, Outcome> {
    let text = std::fs::read_to_string(path).map_err(|e| Outcome::input_error(format!("{}: {e}", path.display())))?;
    let doc = ModelDocument::parse(&text).map_err(|e| Outcome::input_error(format!("schema: {e}")))?;
    doc.resolve().map_err(|e| Outcome::input_error(format!("resolution: {e}")))
}

/// Guard limit: the flag, then the environment, then the document, then the default.
fn guard_limit(flag: Option<usize>, model: &Model) -> usize {
    flag.or_else(|| std::env::var(MAX_DIM_ENV).ok().and_then(|s| s.trim().parse().ok()))
        .or(model.options.max_dim)
        .unwrap_or_else(max_total_dimension)
}

fn check_options(model: &Model, seed: Option<u64>) -> CheckOptions {
    let d = CheckOptions::default();
    CheckOptions {
        full_limit: model.options.full_limit.unwrap_or(d.full_limit),
        samples: model.options.samples.unwrap_or(d.samples),
        seed: seed.or(model.options.seed).unwrap_or(d.seed),
    }
}

/// Runs every algebra, surface, labeling and module validator.
pub fn validate_model(model: &Model) -> Outcome {
    let hopf: Vec<(String, Report)> = model.hopf.iter().map(|(n, h)| (n.clone(), validate_hopf(h))).collect();
    let bicomodules: Vec<(String, Report)> =
        model.bicomodules.iter().map(|(n, k)| (n.clone(), validate_bicomodule(k))).collect();
    let regularity = regularity_check(&model.cells);
    let labeling = match model.labeled_surface() {
        Ok(s) => validate_labeling(&s),
        Err(e) => {
            let mut r = Report::new();
            r.fail("labeled surface", e);
            r
        }
    };
    let mut all: Vec<&Report> = hopf.iter().chain(&bicomodules).map(|(_, r)| r).collect();
    all.push(&labeling);
    let n = violations(&all);
    let body = json!({
        "command": "validate",
        "hopf": hopf.iter().map(|(k, r)| (k.clone(), report_json(r))).collect::<serde_json::Map<_, _>>(),
        "bicomodules": bicomodules.iter().map(|(k, r)| (k.clone(), report_json(r))).collect::<serde_json::Map<_, _>>(),
        "surface": {
            "vertices": model.cells.n_vertices(),
            "edges": model.cells.n_edges(),
            "faces": model.cells.n_faces(),
            "euler_characteristic": model.cells.euler_characteristic(),
            "regular": regularity.all_passed(),
            "regularity": report_json(&regularity),
        },
        "labeling": report_json(&labeling),
        "violations": n,
    });
    Outcome { code: if n == 0 { EXIT_CLEAN } else { EXIT_VIOLATION }, body }
}

fn lattice_failure(e: LatticeError) -> Outcome {
    let code = match e {
        LatticeError::Linalg(LinalgError::DimensionGuardExceeded { .. }) | LatticeError::Unsupported(_) => EXIT_INPUT,
        _ => EXIT_VIOLATION,
    };
    Outcome { code, body: json!({ "error": e.to_string() }) }
}

fn build(model: &Model, max_dim: Option<usize>) -> Result<StateSpace, Outcome> {
    let s = model.labeled_surface().map_err(|e| Outcome { code: EXIT_VIOLATION, body: json!({ "error": e }) })?;
    StateSpace::build_limited(&s, EdgeConvention::Standard, guard_limit(max_dim, model)).map_err(lattice_failure)
}

/// The operator identity suite on a built state space.
pub fn check_space(space: &StateSpace, opts: &CheckOptions) -> Outcome {
    let run = || -> Result<[Report; 3], LatticeError> {
        Ok([
            check_operators(space, opts)?,
            check_site_independence(space, opts)?,
            check_straightening_representation(space, opts)?,
        ])
    };
    let [ops, sites, straight] = match run() {
        Ok(r) => r,
        Err(e) => return lattice_failure(e),
    };
    let n = violations(&[&ops, &sites, &straight]);
    let body = json!({
        "command": "check",
        "total_dimension": space.total_dim(),
        "factor_dimensions": space.factor_dims(),
        "seed": opts.seed,
        "operators": report_json(&ops),
        "site_independence": report_json(&sites),
        "straightening": report_json(&straight),
        "violations": n,
    });
    Outcome { code: if n == 0 { EXIT_CLEAN } else { EXIT_VIOLATION }, body }
}

pub fn check_model(model: &Model, seed: Option<u64>, max_dim: Option<usize>) -> Outcome {
    match build(model, max_dim) {
        Ok(space) => check_space(&space, &check_options(model, seed)),
        Err(o) => o,
    }
}

/// Ground-space dimension; without `force` the check suite must pass first.
pub fn ground_dim_model(model: &Model, method: Option<MethodArg>, force: bool, max_dim: Option<usize>) -> Outcome {
    let space = match build(model, max_dim) {
        Ok(s) => s,
        Err(o) => return o,
    };
    if !force {
        let checked = check_space(&space, &check_options(model, None));
        if checked.code != EXIT_CLEAN {
            return Outcome {
                code: checked.code,
                body: json!({ "command": "ground-dim", "error": "check suite not clean; rerun with --force to skip it", "check": checked.body }),
            };
        }
    }
    let kernel_limit = model.options.kernel_limit.unwrap_or(DEFAULT_KERNEL_LIMIT);
    let method = method.map(GroundMethod::from).unwrap_or(if space.total_dim() <= kernel_limit {
        GroundMethod::Both
    } else {
        GroundMethod::Trace
    });
    match ground_space_dimension(&space, method, kernel_limit) {
        Ok(g) => Outcome {
            code: EXIT_CLEAN,
            body: json!({
                "command": "ground-dim",
                "total_dimension": space.total_dim(),
                "dimension": g.dimension,
                "method": g.method.name(),
            }),
        },
        Err(e) => lattice_failure(e),
    }
}

/// Validation, checks and, when both are clean, the ground dimension.
pub fn report_model(model: &Model, seed: Option<u64>, max_dim: Option<usize>) -> Outcome {
    let validated = validate_model(model);
    let mut body = json!({ "command": "report", "validate": validated.body });
    if validated.code != EXIT_CLEAN {
        return Outcome { code: validated.code, body };
    }
    let space = match build(model, max_dim) {
        Ok(s) => s,
        Err(o) => {
            body["check"] = o.body;
            return Outcome { code: o.code, body };
        }
    };
    let checked = check_space(&space, &check_options(model, seed));
    body["check"] = checked.body;
    if checked.code != EXIT_CLEAN {
        return Outcome { code: checked.code, body };
    }
    let ground = ground_dim_model(model, None, true, max_dim);
    body["ground_dim"] = ground.body;
    Outcome { code: ground.code, body }
}

pub fn execute(cli: &Cli) -> Outcome {
    let file = match &cli.command {
        Command::Validate { file } | Command::Check { file, .. } | Command::GroundDim { file, .. } | Command::Report { file, .. } => file,
    };
    let model = match load(file) {
        Ok(m) => m,
        Err(o) => return o,
    };
    match &cli.command {
        Command::Validate { .. } => validate_model(&model),
        Command::Check { seed, max_dim, .. } => check_model(&model, *seed, *max_dim),
        Command::GroundDim { method, force, max_dim, .. } => ground_dim_model(&model, *method, *force, *max_dim),
        Command::Report { out, seed, max_dim, .. } => {
            let o = report_model(&model, *seed, *max_dim);
            let text = serde_json::to_string_pretty(&o.body).expect("JSON values serialize") + "\n";
            if let Err(e) = std::fs::write(out, text) {
                return Outcome::input_error(format!("{}: {e}", out.display()));
            }
            Outcome { code: o.code, body: json!({ "command": "report", "out": out.display().to_string(), "exit": o.code }) }
        }
    }
}

/// Parses `args`, runs the command and prints its JSON to `out`; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_CLEAN };
            let _ = if code == EXIT_CLEAN { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let o = execute(&cli);
    let text = serde_json::to_string_pretty(&o.body).expect("JSON values serialize");
    if writeln!(out, "{text}").is_err() {
        return EXIT_INPUT;
    }
    o.code
}
