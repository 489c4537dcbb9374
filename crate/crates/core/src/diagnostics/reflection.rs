use serde::{Deserialize, Serialize};

use crate::curve::{hausdorff_distance, Polyline, SegmentIndex};
use crate::Point;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReflectionReport {
    pub alpha: f64,
    /// Hausdorff distance between the curve and its mirror image.
    pub symmetry_defect: f64,
    /// Smallest signed distance from the mirrored part `{x > α}` to the
    /// curve: positive while the mirror image stays inside, negative by
    /// the penetration depth otherwise.
    pub disjointness_gap: f64,
}

/// Orients a convex polyline so that its interior lies to the left.
fn interior_left(p: &Polyline) -> Polyline {
    let turning: f64 = p.menger_curvatures().iter().sum();
    let flip = if p.closed { p.signed_area() < 0.0 } else { turning < 0.0 };
    if flip {
        p.reversed()
    } else {
        p.clone()
    }
}

/// Compares a convex curve with its reflection `R_α(x, y) = (2α - x, y)`.
///
/// Vertices within one mean segment length of the line `x = α` are left
/// out of the gap, since their mirror images touch the curve by
/// construction.
pub fn reflection_defect(p: &Polyline, alpha: f64) -> ReflectionReport {
    let mirror = |q: Point| Point::new(2.0 * alpha - q.x, q.y);
    let reflected = p.map(mirror);
    let symmetry_defect = hausdorff_distance(p, &reflected);
    let oriented = SegmentIndex::new(&interior_left(p));
    let margin = p.length() / p.segments().count().max(1) as f64;
    let disjointness_gap = p
        .points
        .iter()
        .filter(|q| q.x > alpha + margin)
        .map(|&q| oriented.signed_distance(mirror(q)))
        .fold(f64::INFINITY, f64::min);
    ReflectionReport { alpha, symmetry_defect, disjointness_gap }
}
