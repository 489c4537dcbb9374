//! Writes an evolved trace to disk (JSON metadata, per-snapshot CSV,
//! diagnostics CSV) and reads it back.

use flowlab::diagnostics::annotate;
use flowlab::evolver::evolve_support;
use flowlab::exact::exact_support_curve;
use flowlab::io::{read_polyline_csv, read_trace_dir, write_trace_dir};
use flowlab::{ExactFamily, StepControl, TimeWindow};

fn main() -> flowlab::Result<()> {
    let dir = std::env::args().nth(1).map_or_else(|| std::env::temp_dir().join("flowlab_trace_io"), Into::into);

    let oval = ExactFamily::oval();
    let w = TimeWindow::new(-2.0, -1.0)?;
    let mut tr = evolve_support(&exact_support_curve(&oval, w.t_start, 128)?, &w, &StepControl::explicit(0.4).with_uniform_outputs(&w, 4))?;
    tr.meta = tr.meta.clone().with_family(oval.kind);
    annotate(&mut tr)?;

    let files = write_trace_dir(&tr, &dir, Some(&oval))?;
    println!("wrote {} files to {}", files.len(), dir.display());

    let back = read_trace_dir(&dir)?;
    println!("read back {} snapshots at t = {:?}", back.len(), back.times);
    let last = read_polyline_csv(&dir.join(flowlab::io::curve_file_name(tr.len() - 1)))?;
    println!("last curve: {} points, area {:.6} (expected {:.6})", last.len(), last.signed_area(), -2.0 * std::f64::consts::PI * w.t_end);
    Ok(())
}
