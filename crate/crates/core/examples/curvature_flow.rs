//! Runs the curvature-by-turning-angle integrator on an Angenent oval and
//! compares each output against the exact solution.

use flowlab::curve::hausdorff_distance;
use flowlab::evolver::evolve_kappa;
use flowlab::exact::{exact_turning_curve, sample_exact};
use flowlab::{ExactFamily, Snapshot, StepControl, TimeWindow};

fn main() -> flowlab::Result<()> {
    let oval = ExactFamily::oval();
    let w = TimeWindow::new(-3.0, -0.5)?;
    for n in [128, 256] {
        let c0 = exact_turning_curve(&oval, w.t_start, n, None)?;
        let tr = evolve_kappa(&c0, &w, &StepControl::semi_implicit(0.5, 1e-3).with_uniform_outputs(&w, 5))?;
        println!("n = {n}");
        for (t, s) in tr.times.iter().zip(&tr.snapshots) {
            let Snapshot::Turning(c) = s else { unreachable!() };
            let exact = sample_exact(&oval, *t, 2048, None)?;
            let d = hausdorff_distance(&c.reconstruct_positions()?, &exact);
            println!("  t = {t:+.3}  length {:.6}  hausdorff {d:.2e}", c.length());
        }
    }
    Ok(())
}
