use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::thread;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use curve_recon::canonical::ProblemInput;
use curve_recon::hyper::verify;
use curve_recon::model::CurveModel;
use curve_recon::oracle::{generate, OracleSpec};
use curve_recon::pipeline::{parse_point, reconstruct, ReconstructOptions, RunReport};
use curve_recon::precision::precision_table;
use curve_recon::Error;

#[derive(Parser)]
#[command(name = "curve-recon", version, about = "Equations of curves from expansions of their 1-forms at a point")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reconstruct a model from one or more ProblemInput files.
    Reconstruct {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Accept B below 19g + 48.
        #[arg(long)]
        allow_low_precision: bool,
        /// Rational point a:b:c on the output conic (odd genus); adds a
        /// Weierstrass model to the report.
        #[arg(long, value_name = "A:B:C")]
        rational_point: Option<String>,
        /// Diagonalize the output conic.
        #[arg(long)]
        diagonalize: bool,
        /// Also print the precision conformance report to stderr.
        #[arg(long)]
        emit_precision_report: bool,
        /// Print per-stage timings to stderr.
        #[arg(long)]
        timings: bool,
        /// Inputs processed in parallel; each run is single-threaded.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Expand the 1-forms of an oracle curve into a ProblemInput.
    Generate { spec: PathBuf },
    /// Check a model (or a reconstruct report) against an input.
    Verify { input: PathBuf, model: PathBuf },
    /// Expected valuation and precision of every intermediate.
    PrecisionTable { genus: i64, precision: i64 },
}

enum Failure {
    Error(Error),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::Error(e)
    }
}

fn read_json(path: &Path) -> Result<Value, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn print(v: &Value) {
    // a closed pipe (`| head`) is not an error worth reporting
    let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn run_reconstruct(paths: &[PathBuf], opts: &ReconstructOptions, jobs: usize) -> Vec<Result<RunReport, Error>> {
    let next = AtomicUsize::new(0);
    let run = |path: &Path| {
        let input = ProblemInput::from_json(&read_json(path)?)?;
        reconstruct(&input, opts)
    };
    let mut done: Vec<(usize, Result<RunReport, Error>)> = thread::scope(|s| {
        let workers: Vec<_> = (0..jobs.clamp(1, paths.len().max(1)))
            .map(|_| {
                s.spawn(|| {
                    let mut out = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::SeqCst);
                        if i >= paths.len() {
                            return out;
                        }
                        out.push((i, run(&paths[i])));
                    }
                })
            })
            .collect();
        workers.into_iter().flat_map(|w| w.join().expect("worker panicked")).collect()
    });
    done.sort_by_key(|(i, _)| *i);
    done.into_iter().map(|(_, r)| r).collect()
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Reconstruct {
            inputs,
            allow_low_precision,
            rational_point,
            diagonalize,
            emit_precision_report,
            timings,
            jobs,
        } => {
            let opts = ReconstructOptions {
                allow_low_precision,
                rational_point: rational_point.as_deref().map(parse_point).transpose()?,
                diagonalize,
            };
            let mut first_error = None;
            let mut outputs = Vec::new();
            for (path, result) in inputs.iter().zip(run_reconstruct(&inputs, &opts, jobs)) {
                match result {
                    Ok(report) => {
                        if emit_precision_report {
                            let rows = serde_json::to_value(&report.precision_report).expect("serializable");
                            eprintln!("{}", serde_json::to_string_pretty(&rows).expect("serializable"));
                        }
                        if timings {
                            eprintln!("{}: {}", path.display(), report.timings_json());
                        }
                        outputs.push(report.to_json());
                    }
                    Err(e) => {
                        eprintln!("{}: {e}", path.display());
                        first_error.get_or_insert(e);
                    }
                }
            }
            match outputs.len() {
                0 => {}
                1 if inputs.len() == 1 => print(&outputs[0]),
                _ => print(&Value::Array(outputs)),
            }
            first_error.map_or(Ok(()), |e| Err(e.into()))
        }
        Command::Generate { spec } => {
            let spec = OracleSpec::from_json(&read_json(&spec)?)?;
            print(&generate(&spec)?.to_json());
            Ok(())
        }
        Command::Verify { input, model } => {
            let input = ProblemInput::from_json(&read_json(&input)?)?;
            let doc = read_json(&model)?;
            let mut models = vec![CurveModel::from_json(doc.get("model").unwrap_or(&doc))?];
            if let Some(reduced) = doc.get("reduced_model") {
                models.push(CurveModel::from_json(reduced)?);
            }
            let mut passed = true;
            let mut reports = Vec::new();
            for m in &models {
                let v = verify(&input, m)?;
                passed &= v.passed();
                let checks: Vec<Value> =
                    v.checks.iter().map(|c| json!({"check": c.name, "passed": c.passed, "detail": c.detail})).collect();
                reports.push(json!({"branch": m.branch(), "passed": v.passed(), "checks": checks}));
            }
            print(&json!({"passed": passed, "models": reports}));
            if passed {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::PrecisionTable { genus, precision } => {
            if genus < 2 {
                return Err(Error::InvalidInput("genus must be at least 2".into()).into());
            }
            print(&serde_json::to_value(precision_table(genus, precision)).expect("serializable"));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(4),
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
