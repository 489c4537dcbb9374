//! Arrival-time fields `u` with `Γ_t = {u = t}` and the audits run on them.

mod audit;

pub use audit::{
    concavity_audit, concavity_symbolic, level_set_residual, level_set_symbolic, rectangle_claim_audit, w_transform_audit,
    HessianAudit, LevelSetReport, RectanglePoint, RectangleReport,
};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{CurveError, Polyline};
use crate::diagnostics::DiagnosticsError;
use crate::evolver::FlowTrace;
use crate::exact::{exact_arrival_time, ExactError, ExactFamily};
use crate::Point;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ArrivalError {
    #[error("snapshot {index} is not contained in its predecessor")]
    NotNested { index: usize },
    #[error("trace has no snapshots")]
    EmptyTrace,
    #[error("only {0} nodes have a full stencil")]
    TooFewInteriorNodes(usize),
    #[error("shift {t} is not below min u = {u_min}")]
    InvalidShift { t: f64, u_min: f64 },
    #[error("trace is not in strip pose: {0}")]
    NotStripPose(String),
    #[error("bad grid: {0}")]
    BadGrid(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Diagnostics(#[from] DiagnosticsError),
}

/// Uniform rectangular lattice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x_min: f64,
    pub y_min: f64,
    pub hx: f64,
    pub hy: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Grid {
    /// Lattice covering `[x_min, x_max] × [y_min, y_max]` with spacing close to `h`.
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64, h: f64) -> Result<Self, ArrivalError> {
        if !(h > 0.0) || !(x_max > x_min) || !(y_max > y_min) {
            return Err(ArrivalError::BadGrid(format!("[{x_min}, {x_max}]×[{y_min}, {y_max}] with h = {h}")));
        }
        let nx = ((x_max - x_min) / h).round() as usize + 1;
        let ny = ((y_max - y_min) / h).round() as usize + 1;
        if nx < 3 || ny < 3 {
            return Err(ArrivalError::BadGrid(format!("{nx}×{ny} nodes")));
        }
        Ok(Self { x_min, y_min, hx: (x_max - x_min) / (nx - 1) as f64, hy: (y_max - y_min) / (ny - 1) as f64, nx, ny })
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn node(&self, i: usize, j: usize) -> Point {
        Point::new(self.x_min + i as f64 * self.hx, self.y_min + j as f64 * self.hy)
    }

    pub fn spacing(&self) -> f64 {
        self.hx.max(self.hy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldSource {
    ClosedForm,
    Reconstructed,
}

/// Arrival time sampled on a lattice; `mask` marks nodes inside the swept region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrivalTimeField {
    pub grid: Grid,
    pub u: Vec<f64>,
    pub mask: Vec<bool>,
    pub source: FieldSource,
}

impl ArrivalTimeField {
    pub fn at(&self, i: usize, j: usize) -> Option<f64> {
        let k = self.grid.index(i, j);
        self.mask[k].then(|| self.u[k])
    }

    /// Smallest value over masked-in nodes.
    pub fn u_min(&self) -> f64 {
        self.u.iter().zip(&self.mask).filter(|(_, &m)| m).map(|(u, _)| *u).fold(f64::INFINITY, f64::min)
    }

    pub fn masked_count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    /// Whether the masked-in nodes of every row and every column are contiguous.
    pub fn mask_is_lattice_convex(&self) -> bool {
        let contiguous = |it: &mut dyn Iterator<Item = bool>| {
            let mut state = 0;
            for m in it {
                state = match (state, m) {
                    (0, true) => 1,
                    (1, false) => 2,
                    (2, true) => return false,
                    (s, _) => s,
                };
            }
            true
        };
        let g = self.grid;
        (0..g.ny).all(|j| contiguous(&mut (0..g.nx).map(|i| self.mask[g.index(i, j)])))
            && (0..g.nx).all(|i| contiguous(&mut (0..g.ny).map(|j| self.mask[g.index(i, j)])))
    }
}

/// Evaluates `f(i, j)` at every node, in parallel.
pub(crate) fn par_rows<T: Send, F: Fn(usize, usize) -> T + Sync>(grid: &Grid, f: F) -> Vec<T> {
    (0..grid.len()).into_par_iter().map(|k| f(k % grid.nx, k / grid.nx)).collect()
}

/// Closed-form field of an exact family; nodes outside the swept region or
/// with `u` below `t_floor` are masked out.
pub fn closed_form_field(family: &ExactFamily, grid: &Grid, t_floor: Option<f64>) -> ArrivalTimeField {
    let floor = t_floor.unwrap_or(f64::NEG_INFINITY);
    let values = par_rows(grid, |i, j| match exact_arrival_time(family, grid.node(i, j)) {
        Ok(u) if u.is_finite() && u >= floor => Some(u),
        _ => None,
    });
    ArrivalTimeField {
        grid: *grid,
        u: values.iter().map(|v| v.unwrap_or(f64::NAN)).collect(),
        mask: values.iter().map(Option::is_some).collect(),
        source: FieldSource::ClosedForm,
    }
}

/// Convex region bounded by a snapshot, oriented with its interior on the left.
struct Region {
    poly: Polyline,
}

impl Region {
    fn new(p: Polyline) -> Self {
        let turning: f64 = p.menger_curvatures().iter().sum();
        let flip = if p.closed { p.signed_area() < 0.0 } else { turning < 0.0 };
        Self { poly: if flip { p.reversed() } else { p } }
    }

    fn cross(a: Point, b: Point) -> f64 {
        a.x * b.y - a.y * b.x
    }

    /// Membership; fan binary search for closed polygons.
    fn contains(&self, q: Point) -> bool {
        let pts = &self.poly.points;
        let n = pts.len();
        if !self.poly.closed || n < 3 {
            return self.poly.contains(q);
        }
        let p0 = pts[0];
        let d = q - p0;
        if Self::cross(pts[1] - p0, d) < 0.0 || Self::cross(pts[n - 1] - p0, d) > 0.0 {
            return false;
        }
        let (mut lo, mut hi) = (1, n - 1);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if Self::cross(pts[mid] - p0, d) >= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Self::cross(pts[hi] - pts[lo], q - pts[lo]) >= 0.0
    }

    fn signed_distance(&self, q: Point) -> f64 {
        let d = self.poly.distance_to_point(q);
        if self.contains(q) {
            d
        } else {
            -d
        }
    }
}

/// Value at `d = 0` of the polynomial through `(d_k, t_k)`.
fn interpolate_at_zero(d: &[f64], t: &[f64]) -> f64 {
    let distinct = (0..d.len()).all(|a| (a + 1..d.len()).all(|b| (d[a] - d[b]).abs() > 1e-14));
    if !distinct || d.len() < 2 {
        return t[0];
    }
    (0..d.len())
        .map(|a| {
            let w: f64 = (0..d.len()).filter(|&b| b != a).map(|b| d[b] / (d[b] - d[a])).product();
            w * t[a]
        })
        .sum()
}

/// Arrival time on `grid` from a trace of nested convex curves.
///
/// A node lying in `Ω_{t_j}` but not in `Ω_{t_{j+1}}` gets the time at which
/// the signed distance to the snapshots vanishes, interpolated through three
/// consecutive snapshots around the bracket (two when only two exist). Nodes
/// inside the last snapshot are extrapolated from the last three and kept
/// when the result is not earlier than the last time; nodes outside the first
/// snapshot are masked out.
pub fn reconstruct_arrival(trace: &FlowTrace, grid: &Grid) -> Result<ArrivalTimeField, ArrivalError> {
    if trace.is_empty() {
        return Err(ArrivalError::EmptyTrace);
    }
    let regions: Vec<Region> = trace.polylines()?.into_iter().map(Region::new).collect();
    for (j, pair) in regions.windows(2).enumerate() {
        let outer = &pair[0].poly;
        let seg = outer.segments().map(|(a, b)| (b - a).norm()).fold(0.0, f64::max);
        let kmax = outer.menger_curvatures().iter().fold(0.0f64, |m, k| m.max(k.abs()));
        let slack = 0.25 * seg * seg * kmax + 1e-12;
        if pair[1].poly.points.iter().any(|&q| pair[0].signed_distance(q) < -slack) {
            return Err(ArrivalError::NotNested { index: j + 1 });
        }
    }
    let m = regions.len();
    let times = &trace.times;
    let values = par_rows(grid, |i, jj| {
        let q = grid.node(i, jj);
        if m < 2 || !regions[0].contains(q) {
            return None;
        }
        if regions[m - 1].contains(q) {
            // Inside the last curve: extrapolate from the last snapshots and
            // keep the value only if it is consistent with the ordering.
            let idx: Vec<usize> = (m.saturating_sub(3)..m).collect();
            let d: Vec<f64> = idx.iter().map(|&k| regions[k].signed_distance(q)).collect();
            let t: Vec<f64> = idx.iter().map(|&k| times[k]).collect();
            let u = interpolate_at_zero(&d, &t);
            return (u >= times[m - 1]).then_some(u);
        }
        // Largest j with q ∈ Ω_j.
        let (mut lo, mut hi) = (0, m - 1);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if regions[mid].contains(q) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let idx: Vec<usize> = if m == 2 {
            vec![0, 1]
        } else if lo >= 1 {
            vec![lo - 1, lo, lo + 1]
        } else {
            vec![0, 1, 2]
        };
        let d: Vec<f64> = idx.iter().map(|&k| regions[k].signed_distance(q)).collect();
        let t: Vec<f64> = idx.iter().map(|&k| times[k]).collect();
        Some(interpolate_at_zero(&d, &t))
    });
    Ok(ArrivalTimeField {
        grid: *grid,
        u: values.iter().map(|v| v.unwrap_or(f64::NAN)).collect(),
        mask: values.iter().map(Option::is_some).collect(),
        source: FieldSource::Reconstructed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{exact_trace, sample_exact};
    use crate::Snapshot;

    fn times(a: f64, b: f64, dt: f64) -> Vec<f64> {
        let n = ((b - a) / dt).round() as usize;
        (0..=n).map(|k| a + k as f64 * dt).collect()
    }

    #[test]
    fn circle_field_is_exact_for_quadratic_time_interpolation() {
        let tr = exact_trace(&ExactFamily::circle(), &times(-2.0, -0.02, 0.02), 2048, None).unwrap();
        let g = Grid::new(-1.5, 1.5, -1.5, 1.5, 0.05).unwrap();
        let f = reconstruct_arrival(&tr, &g).unwrap();
        assert!(f.masked_count() > 1000);
        for j in 0..g.ny {
            for i in 0..g.nx {
                if let Some(u) = f.at(i, j) {
                    let p = g.node(i, j);
                    assert!((u + 0.5 * p.norm_squared()).abs() < 1e-4, "{u} at {p}");
                }
            }
        }
        assert!(f.mask_is_lattice_convex());
    }

    #[test]
    fn oval_field_matches_closed_form() {
        let tr = exact_trace(&ExactFamily::oval(), &times(-4.0, -0.1, 0.05), 1024, None).unwrap();
        let g = Grid::new(-1.5, 1.5, -4.0, 4.0, 0.1).unwrap();
        let f = reconstruct_arrival(&tr, &g).unwrap();
        let mut worst: f64 = 0.0;
        for j in 0..g.ny {
            for i in 0..g.nx {
                // Nodes bracketed by two snapshots; the rest are extrapolated.
                if let Some(u) = f.at(i, j).filter(|&u| u <= -0.1) {
                    let p = g.node(i, j);
                    worst = worst.max((u - (p.x.cos().ln() - p.y.cosh().ln())).abs());
                }
            }
        }
        assert!(worst < 2e-3, "{worst}");
        assert!(f.mask_is_lattice_convex());
    }

    #[test]
    fn nodes_outside_every_snapshot_are_masked() {
        let tr = exact_trace(&ExactFamily::circle(), &times(-1.0, -0.1, 0.1), 256, None).unwrap();
        let g = Grid::new(-3.0, 3.0, -3.0, 3.0, 0.5).unwrap();
        let f = reconstruct_arrival(&tr, &g).unwrap();
        assert!(f.at(0, 0).is_none());
        assert!((f.at(g.nx / 2, g.ny / 2).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn growing_curves_are_not_nested() {
        let a = sample_exact(&ExactFamily::circle(), -1.0, 256, None).unwrap();
        let b = sample_exact(&ExactFamily::circle(), -2.0, 256, None).unwrap();
        let tr = FlowTrace::new(
            crate::evolver::TraceMeta::new("test", "none", 256),
            vec![-1.0, -0.5],
            vec![Snapshot::Polyline(a), Snapshot::Polyline(b)],
        );
        let g = Grid::new(-1.0, 1.0, -1.0, 1.0, 0.1).unwrap();
        assert!(matches!(reconstruct_arrival(&tr, &g), Err(ArrivalError::NotNested { index: 1 })));
    }

    #[test]
    fn fan_containment_agrees_with_half_planes() {
        let p = sample_exact(&ExactFamily::oval(), -2.0, 300, None).unwrap();
        let r = Region::new(p.clone());
        let g = Grid::new(-2.0, 2.0, -3.0, 3.0, 0.07).unwrap();
        for j in 0..g.ny {
            for i in 0..g.nx {
                let q = g.node(i, j);
                assert_eq!(r.contains(q), r.poly.contains(q));
            }
        }
    }
}
