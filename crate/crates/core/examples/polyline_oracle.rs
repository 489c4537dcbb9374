//! Evolves a rounded random polygon two independent ways: the support
//! integrator and the front-tracking polyline oracle.

use std::f64::consts::PI;

use flowlab::curve::hausdorff_distance;
use flowlab::evolver::{evolve_polyline_oracle, evolve_support};
use flowlab::scenario::{random_convex_polygon, rounded_polygon_points, rounded_polygon_support};
use flowlab::{StepControl, TimeWindow};

fn main() -> flowlab::Result<()> {
    let polygon = random_convex_polygon(9, 1.0, 7);
    let h0 = rounded_polygon_support(&polygon, 0.25, 256).expect("rounded polygon is strictly convex");
    let w = TimeWindow::new(0.0, 0.5 * h0.area() / (2.0 * PI))?;
    let support = evolve_support(&h0, &w, &StepControl::explicit(0.4).with_uniform_outputs(&w, 6))?;
    let oracle = evolve_polyline_oracle(&rounded_polygon_points(&polygon, 0.25, 256), &w, &StepControl::explicit(0.2).with_uniform_outputs(&w, 6))?;
    for (i, t) in support.times.iter().enumerate() {
        let a = support.snapshots[i].to_polyline()?;
        let b = oracle.snapshots[i].to_polyline()?;
        println!("t = {t:.4}  area {:.5} vs {:.5}  hausdorff {:.2e}", a.signed_area(), b.signed_area(), hausdorff_distance(&a, &b));
    }
    Ok(())
}
