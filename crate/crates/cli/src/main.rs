use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use symcone_core::cone::parse_model_spec;
use symcone_core::suite::{emit_geodesic, list_suites, run_suite_on, run_suite_timed, SuiteReport};
use symcone_core::{Element, Error, Tolerance};

/// Run numerical verification suites on cone models, or trace a Thompson geodesic.
#[derive(Debug, Parser)]
#[command(name = "symcone", version)]
struct Args {
    /// Model spec: orthant:N, sym:N, spin:N, poly:square, poly:<file.json> or sum:<a>+<b>.
    #[arg(long)]
    model: Option<String>,
    /// Suite to run (see --list-suites).
    #[arg(long)]
    suite: Option<String>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Relative equality tolerance for the checks.
    #[arg(long)]
    tol: Option<f64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write a geodesic trace from --x to --y as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Geodesic start, comma-separated coordinates.
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    /// Geodesic end, comma-separated coordinates.
    #[arg(long, allow_hyphen_values = true)]
    y: Option<String>,
    /// Number of rows in the geodesic trace.
    #[arg(long, default_value_t = 11)]
    points: usize,
    /// Record wall time in the report (makes reports run-dependent).
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    list_suites: bool,
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Input(_) | Error::Unsupported(_) | Error::Domain(_) | Error::Precondition(_) => {
                Failure::Usage(e.to_string())
            }
            Error::Singular(_) | Error::Internal(_) => Failure::Internal(e.to_string()),
        }
    }
}

fn parse_point(raw: &str) -> Result<Element, Failure> {
    raw.split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map(Element::from)
        .map_err(|e| Failure::Usage(format!("cannot parse point {raw:?}: {e}")))
}

fn write_or_print(path: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(args: Args) -> Result<bool, Failure> {
    if args.list_suites {
        for s in list_suites() {
            println!("{s}");
        }
        return Ok(true);
    }
    let spec = args
        .model
        .as_deref()
        .ok_or_else(|| Failure::Usage("--model is required".into()))?;
    let model = parse_model_spec(spec)?;
    let mut tol = Tolerance::default();
    if let Some(t) = args.tol {
        tol = tol.with_eq_rtol(t);
        tol.validate()?;
    }

    if let Some(csv) = &args.csv {
        let (Some(x), Some(y)) = (&args.x, &args.y) else {
            return Err(Failure::Usage("--csv needs --x and --y".into()));
        };
        let (x, y) = (parse_point(x)?, parse_point(y)?);
        model.check_dim(&x)?;
        model.check_dim(&y)?;
        let trace = emit_geodesic(&model, &x, &y, args.points, &tol)?;
        write_or_print(Some(csv), &trace)?;
        if args.suite.is_none() {
            return Ok(true);
        }
    }

    let suite = args
        .suite
        .as_deref()
        .ok_or_else(|| Failure::Usage("--suite is required (or --csv with --x/--y)".into()))?;
    let report = if args.timing {
        run_suite_timed(&model, suite, args.seed, args.samples, &tol)?
    } else {
        run_suite_on(&model, suite, args.seed, args.samples, &tol)?
    };
    let report = SuiteReport {
        model: spec.trim().to_string(),
        ..report
    };
    let mut json =
        serde_json::to_string_pretty(&report).map_err(|e| Failure::Internal(e.to_string()))?;
    json.push('\n');
    write_or_print(args.out.as_ref(), &json)?;
    for c in report.failures() {
        eprintln!(
            "FAIL {}: {} (threshold {})",
            c.name, c.max_residual, c.threshold
        );
    }
    Ok(report.pass)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
