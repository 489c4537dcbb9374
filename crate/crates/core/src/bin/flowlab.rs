use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use flowlab::diagnostics::Verdict;
use flowlab::exact::{sample_exact, ClipBox, ExactFamily, FamilyKind};
use flowlab::io::{polyline_csv, polyline_header};
use flowlab::scenario::{default_output_root, list_audits, run_scenario, RunReport, ScenarioError};

#[derive(Parser)]
#[command(name = "flowlab", version, about = "Curve shortening flow experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one or more scenario files.
    Run {
        #[arg(required = true)]
        scenarios: Vec<PathBuf>,
        /// Scenarios run concurrently.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Output root (default: $FLOWLAB_OUT, else ./flowlab_out).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the registered audits.
    Audits,
    /// Print an exact curve as polyline CSV.
    Sample {
        /// line, circle, grim, oval or a full family name.
        family: String,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, default_value_t = 256)]
        n: usize,
        /// Clip box `x_min,x_max,y_min,y_max` for noncompact families.
        #[arg(long, value_delimiter = ',', num_args = 4, allow_hyphen_values = true)]
        clip: Option<Vec<f64>>,
    },
}

fn family_kind(name: &str) -> Option<FamilyKind> {
    match name {
        "line" => Some(FamilyKind::StationaryLine),
        "circle" => Some(FamilyKind::ShrinkingCircle),
        "grim" => Some(FamilyKind::GrimReaper),
        "oval" => Some(FamilyKind::AngenentOval),
        other => FamilyKind::from_name(other),
    }
}

fn print_report(r: &RunReport) {
    println!("{}: {}", r.scenario, if r.passed { "PASS" } else { "FAIL" });
    for a in &r.audits {
        let verdict = match a.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Info => "INFO",
        };
        let value = a.value.map_or_else(|| "-".to_string(), |v| format!("{v:.6e}"));
        println!("  {verdict} {:<20} value {value:>14} tol {:.1e}  {}", a.name, a.tolerance, a.detail);
    }
    if let Some(t) = r.truncated_at {
        println!("  extinction reached; trace ends at t = {t}");
    }
}

fn run(scenarios: Vec<PathBuf>, jobs: usize, out: Option<PathBuf>) -> u8 {
    let root = out.unwrap_or_else(default_output_root);
    let go = || -> Vec<Result<RunReport, ScenarioError>> { scenarios.par_iter().map(|p| run_scenario(p, &root)).collect() };
    let results = match rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build() {
        Ok(pool) => pool.install(go),
        Err(e) => {
            eprintln!("flowlab: cannot start worker pool: {e}");
            return 3;
        }
    };
    let mut code = 0;
    for (path, r) in scenarios.iter().zip(results) {
        let c = match r {
            Ok(report) => {
                print_report(&report);
                report.exit_code()
            }
            Err(e) => {
                eprintln!("flowlab: {}: {e}", path.display());
                e.exit_code()
            }
        };
        code = code.max(c);
    }
    code as u8
}

fn sample(family: &str, t: f64, n: usize, clip: Option<Vec<f64>>) -> u8 {
    let Some(kind) = family_kind(family) else {
        eprintln!("flowlab: unknown family `{family}`");
        return 2;
    };
    let fam = ExactFamily::canonical(kind);
    let clip = match clip {
        Some(c) => Some(ClipBox::new(c[0], c[1], c[2], c[3])),
        None if !kind.is_compact() => Some(ClipBox::new(-10.0, 10.0, t.min(0.0) - 10.0, t.max(0.0) + 10.0)),
        None => None,
    };
    match sample_exact(&fam, t, n, clip.as_ref()) {
        Ok(p) => {
            print!("{}", polyline_csv(&p, &polyline_header(Some(&fam), Some(t), p.closed)));
            0
        }
        Err(e) => {
            eprintln!("flowlab: {e}");
            2
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run { scenarios, jobs, out } => run(scenarios, jobs, out),
        Command::Audits => {
            for a in list_audits() {
                println!("{:<20} tol {:<8.1e} {:?}  {}", a.name, a.default_tolerance, a.bound, a.statement);
            }
            0
        }
        Command::Sample { family, t, n, clip } => sample(&family, t, n, clip),
    };
    ExitCode::from(code)
}
