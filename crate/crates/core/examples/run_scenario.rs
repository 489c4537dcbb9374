//! Runs bundled scenarios through the same path as `flowlab run` and prints
//! each audit. Artifacts land under `$FLOWLAB_OUT` (default `./flowlab_out`).
//!
//! ```text
//! cargo run --example run_scenario -- scenarios/oval_support.json
//! ```

use std::path::PathBuf;

use flowlab::scenario::{default_output_root, run_scenario};

fn main() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let paths: Vec<PathBuf> = match std::env::args().skip(1).map(PathBuf::from).collect::<Vec<_>>() {
        p if p.is_empty() => vec![dir.join("circle_selfsimilar.json"), dir.join("oval_support.json")],
        p => p,
    };
    let out = default_output_root();
    for path in paths {
        match run_scenario(&path, &out) {
            Ok(report) => {
                println!("{} ({:?}, {:.2} s)", report.scenario, report.integrator, report.wall_time_s);
                for a in &report.audits {
                    let value = a.value.map_or("-".to_string(), |v| format!("{v:.3e}"));
                    println!("  {:<22} {:?} {value:>10} (tol {:.1e}) {}", a.name, a.verdict, a.tolerance, a.detail);
                }
            }
            Err(e) => {
                eprintln!("{}: {e}", path.display());
                std::process::exit(e.exit_code());
            }
        }
    }
}
