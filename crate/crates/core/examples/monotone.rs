//! Harnack and displacement monotonicity along exact ancient solutions and a
//! numerically evolved oval.

use flowlab::diagnostics::{displacement_series, harnack_check};
use flowlab::evolver::evolve_support;
use flowlab::exact::{exact_support_curve, exact_trace, exact_turning_trace};
use flowlab::scenario::turning_from_support;
use flowlab::{ExactFamily, FlowTrace, Snapshot, StepControl, TimeWindow};

fn log_times(from: f64, to: f64, n: usize) -> Vec<f64> {
    let (a, b) = ((-from).ln(), (-to).ln());
    (0..n).map(|k| -(a + (b - a) * k as f64 / (n - 1) as f64).exp()).collect()
}

fn main() -> flowlab::Result<()> {
    let times = log_times(-100.0, -1.0, 60);
    let oval = exact_turning_trace(&ExactFamily::oval(), &times, 1024, None)?;
    let grim = exact_turning_trace(&ExactFamily::grim_reaper(), &log_times(-100.0, -0.5, 60), 1024, Some(1.5))?;

    let w = TimeWindow::new(-4.0, -1.0)?;
    let h0 = exact_support_curve(&ExactFamily::oval(), w.t_start, 256)?;
    let support = evolve_support(&h0, &w, &StepControl::explicit(0.4).with_uniform_outputs(&w, 12))?;
    let snaps = support.snapshots.iter().map(|s| match s {
        Snapshot::Support(h) => Ok(Snapshot::Turning(turning_from_support(h).expect("strictly convex"))),
        _ => unreachable!(),
    });
    let numeric = FlowTrace::new(support.meta.clone(), support.times.clone(), snaps.collect::<flowlab::Result<_>>()?);

    for (name, tr) in [("oval", &oval), ("grim", &grim), ("oval (support)", &numeric)] {
        let h = harnack_check(tr, 1e-6)?;
        println!("{name:<15} harnack max violation {:+.2e}  {:?}", h.max_violation, h.verdict);
    }

    // The lowest point is a node of the exact polyline, so its height is exact.
    let polyline = exact_trace(&ExactFamily::oval(), &times, 2048, None)?;
    for (name, tr) in [("oval", &polyline), ("grim", &grim)] {
        let d = displacement_series(tr, 1e-6)?;
        let (t0, _, y0) = d.points[0];
        let (t1, _, y1) = d.points[d.points.len() - 1];
        println!("{name:<15} displacement {y0:+.4e} at t = {t0:.1} -> {y1:+.4e} at t = {t1:.1}, max increase {:.2e}", d.max_increase);
    }
    Ok(())
}
