//! Command-line front end. Every command is a thin wrapper over the library:
//! files it writes are exactly the library's canonical serializations.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};

use crate::arith::bits_string;
use crate::constructions::{
    build_covering, build_majority_bnn, build_parity_bnn, build_symmetric, build_threshold,
};
use crate::error::Error;
use crate::experiment::{run_experiment, ExperimentConfig, ExperimentKind};
use crate::function::FunctionSpec;
use crate::ldt::{ldt_disagreements, max_mono_rectangle, LinearDecisionTree};
use crate::minimize::{
    default_grid, exact_bnn_with, exact_knn_bnn_with, grid_nn_upper_with, SearchLimits,
};
use crate::ptf::{compile_ptf, margin_holds, term_count_report, verify_ptf};
use crate::representation::{
    classify, verify_knn, verify_nn, NNRepresentation, VerificationReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CUTOFF: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "nnrep",
    version,
    about = "Nearest-neighbor representations of Boolean functions"
)]
pub struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized experiments.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest candidate size tried by searches.
    #[arg(long, global = true)]
    pub max_size: Option<usize>,
    /// Wall-clock limit for searches, in seconds.
    #[arg(long, global = true)]
    pub time_limit: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Method {
    Symmetric,
    Threshold,
    MajorityBnn,
    ParityBnn,
    Covering,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Model {
    Bnn,
    Knn,
    Grid,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Kind {
    RandomBnn,
    CoveringSize,
    CompileSweep,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a representation with one of the explicit constructions.
    Construct {
        function: String,
        #[arg(value_enum)]
        method: Method,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check a representation file against a function on every input.
    Verify {
        function: String,
        rep: PathBuf,
        #[arg(short, long)]
        k: Option<usize>,
    },
    /// Classify one input, given as a bit string x_1 x_2 ... x_n.
    Classify {
        rep: PathBuf,
        point: String,
        #[arg(short, long, default_value_t = 1)]
        k: usize,
    },
    /// Exhaustive minimum-size search.
    Minimize {
        function: String,
        #[arg(value_enum)]
        model: Model,
        #[arg(short, long, default_value_t = 1)]
        k: usize,
        /// Where to write the witness representation.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Compile a representation into a sign polynomial over {1,2}^n.
    CompilePtf {
        function: String,
        rep: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Where to write the compiler parameters.
        #[arg(long)]
        params: Option<PathBuf>,
        /// Check the sign of the polynomial on every input.
        #[arg(long)]
        verify: bool,
    },
    /// Check a linear decision tree file against a function.
    LdtCheck { function: String, tree: PathBuf },
    /// Largest monochromatic rectangle of the inner-product matrix.
    Rect { n: usize },
    /// Run a seeded experiment.
    Experiment {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long)]
        arity: usize,
        #[arg(long)]
        samples: u64,
        /// Where to write the table; CSV unless --json.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

/// Text for stdout plus the process exit status.
pub struct CommandOutput {
    pub stdout: String,
    pub code: i32,
}

impl CommandOutput {
    fn new(stdout: String, code: i32) -> Self {
        CommandOutput { stdout, code }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), Error> {
    std::fs::write(path, contents).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

fn report_text(report: &VerificationReport, n: usize) -> String {
    if report.ok {
        return "ok\n".into();
    }
    let mut s = format!(
        "FAILED: {} counterexamples, {} tie points\n",
        report.counterexamples.len(),
        report.tie_points.len()
    );
    for c in &report.counterexamples {
        let _ = writeln!(
            s,
            "  {} expected {} got {}",
            bits_string(c.point, n),
            c.expected,
            c.observed
        );
    }
    s
}

/// Builds a representation of `spec` with the named construction.
pub fn construct(spec: &FunctionSpec, method: Method) -> Result<NNRepresentation, Error> {
    let not_applicable = |reason: &str| Error::NotApplicable {
        method: format!("{method:?}").to_lowercase(),
        reason: reason.to_string(),
    };
    match method {
        Method::Symmetric => spec
            .symmetric_spec()
            .map(|s| build_symmetric(&s))
            .ok_or_else(|| not_applicable("not a symmetric function")),
        Method::Threshold => spec
            .threshold_spec()
            .map(|t| build_threshold(&t))
            .ok_or_else(|| not_applicable("not a threshold spec (use th:... or maj:...)")),
        Method::MajorityBnn => match spec {
            FunctionSpec::Majority(n) => build_majority_bnn(*n),
            _ => Err(not_applicable("requires maj:n")),
        },
        Method::ParityBnn => match spec {
            FunctionSpec::Parity(n) => build_parity_bnn(*n),
            _ => Err(not_applicable("requires parity:n")),
        },
        Method::Covering => build_covering(&spec.function()),
    }
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> Result<CommandOutput, Error> {
    let limits = SearchLimits {
        max_size: cli.max_size,
        deadline: cli
            .time_limit
            .map(|s| Instant::now() + Duration::from_secs_f64(s.max(0.0))),
    };
    match &cli.command {
        Command::Construct {
            function,
            method,
            out,
        } => {
            let spec: FunctionSpec = function.parse()?;
            let rep = construct(&spec, *method)?;
            let report = verify_nn(&spec.function(), &rep)?;
            let json = rep.to_json();
            if let Some(path) = out {
                write(path, &json)?;
            }
            let code = if report.ok { EXIT_OK } else { EXIT_FAILED };
            let stdout = if cli.json {
                format!(
                    "{{\"size\":{},\"ok\":{},\"representation\":{}}}\n",
                    rep.size(),
                    report.ok,
                    json
                )
            } else {
                let mut s = format!("size {}\n{}", rep.size(), report_text(&report, rep.dim()));
                if out.is_none() {
                    s.push_str(&json);
                    s.push('\n');
                }
                s
            };
            Ok(CommandOutput::new(stdout, code))
        }
        Command::Verify { function, rep, k } => {
            let f = function.parse::<FunctionSpec>()?.function();
            let rep = NNRepresentation::from_json(&read(rep)?)?;
            let report = match k {
                None => verify_nn(&f, &rep)?,
                Some(k) => verify_knn(&f, &rep, *k)?,
            };
            let stdout = if cli.json {
                serde_json::to_string(&report).unwrap() + "\n"
            } else {
                report_text(&report, rep.dim())
            };
            Ok(CommandOutput::new(
                stdout,
                if report.ok { EXIT_OK } else { EXIT_FAILED },
            ))
        }
        Command::Classify { rep, point, k } => {
            let rep = NNRepresentation::from_json(&read(rep)?)?;
            let bits = point
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(Error::Format(format!(
                        "point `{point}` is not a bit string"
                    ))),
                })
                .collect::<Result<Vec<bool>, _>>()?;
            match classify(&rep, &bits, *k) {
                Ok(label) => Ok(CommandOutput::new(format!("{label}\n"), EXIT_OK)),
                Err(e @ (Error::Tie | Error::NotWellDefined)) => {
                    Ok(CommandOutput::new(format!("{e}\n"), EXIT_FAILED))
                }
                Err(e) => Err(e),
            }
        }
        Command::Minimize {
            function,
            model,
            k,
            out,
        } => {
            let f = function.parse::<FunctionSpec>()?.function();
            let start = Instant::now();
            let result = match model {
                Model::Bnn => exact_bnn_with(&f, limits)?,
                Model::Knn => exact_knn_bnn_with(&f, *k, limits)?,
                Model::Grid => {
                    let limits = SearchLimits {
                        max_size: limits.max_size.or(Some(f.arity() + 1)),
                        ..limits
                    };
                    grid_nn_upper_with(&f, &default_grid(f.arity()), limits)?
                }
            };
            let summary = result.summary(start.elapsed().as_millis());
            if let (Some(path), Some(w)) = (out, &result.witness) {
                write(path, &w.to_json())?;
            }
            let code = if result.optimum.is_some() {
                EXIT_OK
            } else if result.timed_out || !result.is_infeasible() {
                EXIT_CUTOFF
            } else {
                EXIT_FAILED
            };
            let stdout = if cli.json {
                serde_json::to_string(&summary).unwrap() + "\n"
            } else {
                let mut s = match result.optimum {
                    Some(o) => format!("optimum {o}\n"),
                    None if code == EXIT_FAILED => "no representation in the search space\n".into(),
                    None => format!("unknown (exhausted up to {})\n", result.exhausted_up_to),
                };
                let _ = writeln!(
                    s,
                    "explored {} exhausted_up_to {} wall_time_ms {}",
                    summary.explored, summary.exhausted_up_to, summary.wall_time_ms
                );
                if let (None, Some(w)) = (out, &result.witness) {
                    s.push_str(&w.to_json());
                    s.push('\n');
                }
                s
            };
            Ok(CommandOutput::new(stdout, code))
        }
        Command::CompilePtf {
            function,
            rep,
            out,
            params,
            verify,
        } => {
            let spec: FunctionSpec = function.parse()?;
            let f = spec.function();
            let rep = NNRepresentation::from_json(&read(rep)?)?;
            let (poly, p) = compile_ptf(&f, &rep)?;
            if let Some(path) = out {
                write(path, &poly.to_json())?;
            }
            if let Some(path) = params {
                write(path, &p.to_json())?;
            }
            let checked = if *verify {
                Some(verify_ptf(&f, &poly) && margin_holds(&f, &poly))
            } else {
                None
            };
            let terms = term_count_report(&spec.to_string(), &poly)?;
            let code = if checked == Some(false) {
                EXIT_FAILED
            } else {
                EXIT_OK
            };
            let stdout = if cli.json {
                format!(
                    "{{\"params\":{},\"terms\":{},\"verified\":{}}}\n",
                    p.to_json(),
                    serde_json::to_string(&terms).unwrap(),
                    checked.map_or("null".to_string(), |c| c.to_string())
                )
            } else {
                let mut s = format!(
                    "terms {}  B {} M {} A {}\n",
                    poly.term_count(),
                    p.b,
                    p.m,
                    p.a
                );
                if let Some(bound) = terms.lower_bound {
                    let _ = writeln!(
                        s,
                        "lower bound {bound}: {}",
                        if terms.meets_bound { "met" } else { "VIOLATED" }
                    );
                }
                if let Some(c) = checked {
                    s.push_str(if c {
                        "sign check ok\n"
                    } else {
                        "sign check FAILED\n"
                    });
                }
                if out.is_none() {
                    s.push_str(&poly.to_json());
                    s.push('\n');
                }
                s
            };
            Ok(CommandOutput::new(stdout, code))
        }
        Command::LdtCheck { function, tree } => {
            let f = function.parse::<FunctionSpec>()?.function();
            let tree = LinearDecisionTree::from_json(&read(tree)?)?;
            let bad = ldt_disagreements(&tree, &f)?;
            let stdout = if cli.json {
                format!(
                    "{{\"ok\":{},\"disagreements\":{:?}}}\n",
                    bad.is_empty(),
                    bad
                )
            } else if bad.is_empty() {
                "ok\n".into()
            } else {
                let pts: Vec<String> = bad.iter().map(|&x| bits_string(x, f.arity())).collect();
                format!("FAILED at {}\n", pts.join(" "))
            };
            Ok(CommandOutput::new(
                stdout,
                if bad.is_empty() { EXIT_OK } else { EXIT_FAILED },
            ))
        }
        Command::Rect { n } => {
            let r = max_mono_rectangle(*n)?;
            let stdout = if cli.json {
                serde_json::to_string(&r).unwrap() + "\n"
            } else {
                format!(
                    "area {} rows {:?} cols {:?} value {}\n",
                    r.area, r.rows, r.cols, r.value as u8
                )
            };
            Ok(CommandOutput::new(stdout, EXIT_OK))
        }
        Command::Experiment {
            kind,
            arity,
            samples,
            out,
        } => {
            let config = ExperimentConfig {
                kind: match kind {
                    Kind::RandomBnn => ExperimentKind::RandomBnn,
                    Kind::CoveringSize => ExperimentKind::CoveringSize,
                    Kind::CompileSweep => ExperimentKind::CompileSweep,
                },
                arity: *arity,
                samples: *samples,
                seed: cli.seed,
                max_size: cli.max_size,
                time_limit: cli.time_limit.map(|s| Duration::from_secs_f64(s.max(0.0))),
            };
            let output = run_experiment(&config)?;
            let body = if cli.json {
                output.to_json()
            } else {
                output.to_csv()
            };
            let stdout = match out {
                Some(path) => {
                    write(path, &body)?;
                    serde_json::to_string(&output.summary).unwrap() + "\n"
                }
                None => body,
            };
            Ok(CommandOutput::new(
                stdout,
                if output.all_ok() {
                    EXIT_OK
                } else {
                    EXIT_FAILED
                },
            ))
        }
    }
}

/// Parses `args`, runs the command and returns the exit status, writing to
/// stdout/stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            out.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::ArityTooLarge { .. } | Error::SearchLimit(_) => EXIT_CUTOFF,
                Error::RepresentationInvalid | Error::Construction(_) => EXIT_FAILED,
                _ => EXIT_USAGE,
            }
        }
    }
}
