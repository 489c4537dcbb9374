//! Splits an oval into its two graph branches over the vertical axis,
//! evolves each branch with free ends and merges them back.

use flowlab::curve::{hausdorff_distance, merge_graphs};
use flowlab::evolver::{evolve_graph, GraphBoundary};
use flowlab::exact::{exact_graph_branches, sample_exact};
use flowlab::{ExactFamily, Snapshot, StepControl, TimeWindow};

fn main() -> flowlab::Result<()> {
    let oval = ExactFamily::oval();
    let w = TimeWindow::new(-3.0, -1.0)?;
    let ctl = StepControl::explicit(0.2).with_uniform_outputs(&w, 4);
    let (plus, minus) = exact_graph_branches(&oval, w.t_start, 129)?;
    let a = evolve_graph(&plus, &w, &ctl, GraphBoundary::FreeVerticalTangent)?;
    let b = evolve_graph(&minus, &w, &ctl, GraphBoundary::FreeVerticalTangent)?;
    for ((t, sa), sb) in a.times.iter().zip(&a.snapshots).zip(&b.snapshots) {
        let (Snapshot::Graph(gp), Snapshot::Graph(gm)) = (sa, sb) else { unreachable!() };
        let merged = merge_graphs(gp, gm);
        let d = hausdorff_distance(&merged, &sample_exact(&oval, *t, 4096, None)?);
        println!("t = {t:+.2}  y in [{:+.4}, {:+.4}]  hausdorff {d:.2e}", gp.a_minus(), gp.a_plus());
    }
    Ok(())
}
