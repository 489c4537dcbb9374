use serde::{Deserialize, Serialize};

use super::{par_rows, ArrivalError, ArrivalTimeField, Grid};
use crate::curve::split_graphs;
use crate::diagnostics::{clipped_area_below_axis, width_and_strip, DiagnosticsConfig, StripVerdict};
use crate::evolver::FlowTrace;
use crate::exact::{arrival_derivatives, ExactFamily};
use crate::numerics::sym2_eigenvalues;
use crate::Point;

/// Gradient norm below which the level-set residual is not evaluated.
pub const GRADIENT_FLOOR: f64 = 1e-6;

/// Extremal Hessian eigenvalue over the audited nodes and where it occurs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HessianAudit {
    pub value: f64,
    pub at: Point,
    pub nodes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelSetReport {
    /// `sup |-|Du| div(Du/|Du|) - 1|`.
    pub residual: f64,
    pub at: Point,
    pub nodes: usize,
    /// Nodes skipped because `|Du|` fell below [`GRADIENT_FLOOR`].
    pub degenerate: usize,
}

/// Values on the `(2r+1)²` block around `(i, j)` if all are masked in.
fn block(f: &ArrivalTimeField, i: usize, j: usize, r: usize) -> Option<Vec<f64>> {
    let g = f.grid;
    if i < r || j < r || i + r >= g.nx || j + r >= g.ny {
        return None;
    }
    let mut out = Vec::with_capacity((2 * r + 1) * (2 * r + 1));
    for b in j - r..=j + r {
        for a in i - r..=i + r {
            out.push(f.at(a, b)?);
        }
    }
    Some(out)
}

/// Three-point Hessian `[u_xx, u_xy, u_yy]` from a 3×3 block.
fn hessian3(v: &[f64], g: &Grid) -> [f64; 3] {
    let at = |a: usize, b: usize| v[b * 3 + a];
    let uxx = (at(2, 1) - 2.0 * at(1, 1) + at(0, 1)) / (g.hx * g.hx);
    let uyy = (at(1, 2) - 2.0 * at(1, 1) + at(1, 0)) / (g.hy * g.hy);
    let uxy = (at(2, 2) - at(2, 0) - at(0, 2) + at(0, 0)) / (4.0 * g.hx * g.hy);
    [uxx, uxy, uyy]
}

/// Fourth-order gradient and Hessian from a 5×5 block.
fn derivatives5(v: &[f64], g: &Grid) -> (Point, [f64; 3]) {
    let at = |a: usize, b: usize| v[b * 5 + a];
    let d1 = |f: [f64; 5], h: f64| (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * h);
    let d2 = |f: [f64; 5], h: f64| (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h);
    let row = |b: usize| [at(0, b), at(1, b), at(2, b), at(3, b), at(4, b)];
    let col = |a: usize| [at(a, 0), at(a, 1), at(a, 2), at(a, 3), at(a, 4)];
    let ux = d1(row(2), g.hx);
    let uy = d1(col(2), g.hy);
    let uxx = d2(row(2), g.hx);
    let uyy = d2(col(2), g.hy);
    let dy = [0, 1, 2, 3, 4].map(|a| d1(col(a), g.hy));
    let uxy = d1(dy, g.hx);
    (Point::new(ux, uy), [uxx, uxy, uyy])
}

fn level_set_operator(grad: Point, h: [f64; 3]) -> f64 {
    let [uxx, uxy, uyy] = h;
    -(uxx * grad.y * grad.y - 2.0 * grad.x * grad.y * uxy + uyy * grad.x * grad.x) / grad.norm_squared()
}

/// Reduces per-node `(value, at)` pairs to the extreme one under `better`.
fn extreme(values: Vec<Option<(f64, Point)>>, better: fn(f64, f64) -> bool) -> Result<HessianAudit, ArrivalError> {
    let mut best: Option<(f64, Point)> = None;
    let mut nodes = 0;
    for (v, p) in values.into_iter().flatten() {
        nodes += 1;
        if best.map_or(true, |(b, _)| better(v, b)) {
            best = Some((v, p));
        }
    }
    match best {
        Some((value, at)) => Ok(HessianAudit { value, at, nodes }),
        None => Err(ArrivalError::TooFewInteriorNodes(0)),
    }
}

/// Largest Hessian eigenvalue over nodes with a full 3×3 masked neighbourhood.
pub fn concavity_audit(f: &ArrivalTimeField) -> Result<HessianAudit, ArrivalError> {
    let g = f.grid;
    let values = par_rows(&g, |i, j| {
        let v = block(f, i, j, 1)?;
        let [a, b, c] = hessian3(&v, &g);
        Some((sym2_eigenvalues(a, b, c).1, g.node(i, j)))
    });
    extreme(values, |a, b| a > b)
}

/// Largest eigenvalue of the closed-form Hessian at the masked-in nodes of `grid`.
pub fn concavity_symbolic(family: &ExactFamily, grid: &Grid, t_floor: Option<f64>) -> Result<HessianAudit, ArrivalError> {
    let floor = t_floor.unwrap_or(f64::NEG_INFINITY);
    let values = par_rows(grid, |i, j| {
        let p = grid.node(i, j);
        let (u, _, [a, b, c]) = arrival_derivatives(family, p).ok()?;
        (u.is_finite() && u >= floor).then(|| (sym2_eigenvalues(a, b, c).1, p))
    });
    extreme(values, |a, b| a > b)
}

/// Smallest Hessian eigenvalue of `w = -log(u - t)`.
pub fn w_transform_audit(f: &ArrivalTimeField, t: f64) -> Result<HessianAudit, ArrivalError> {
    let u_min = f.u_min();
    if !(t < u_min) {
        return Err(ArrivalError::InvalidShift { t, u_min });
    }
    let g = f.grid;
    let values = par_rows(&g, |i, j| {
        let v: Vec<f64> = block(f, i, j, 1)?.iter().map(|u| -(u - t).ln()).collect();
        let [a, b, c] = hessian3(&v, &g);
        Some((sym2_eigenvalues(a, b, c).0, g.node(i, j)))
    });
    extreme(values, |a, b| a < b)
}

fn residual_report(values: Vec<Option<(Option<f64>, Point)>>) -> Result<LevelSetReport, ArrivalError> {
    let (mut residual, mut at, mut nodes, mut degenerate) = (0.0f64, Point::zeros(), 0, 0);
    for (r, p) in values.into_iter().flatten() {
        match r {
            Some(r) => {
                nodes += 1;
                if r > residual {
                    residual = r;
                    at = p;
                }
            }
            None => degenerate += 1,
        }
    }
    if nodes == 0 {
        return Err(ArrivalError::TooFewInteriorNodes(0));
    }
    Ok(LevelSetReport { residual, at, nodes, degenerate })
}

/// Residual of `-|Du| div(Du/|Du|) = 1` with fourth-order central
/// differences at nodes with a full 5×5 masked neighbourhood.
pub fn level_set_residual(f: &ArrivalTimeField) -> Result<LevelSetReport, ArrivalError> {
    let g = f.grid;
    let values = par_rows(&g, |i, j| {
        let v = block(f, i, j, 2)?;
        let (grad, h) = derivatives5(&v, &g);
        let r = (grad.norm() >= GRADIENT_FLOOR).then(|| (level_set_operator(grad, h) - 1.0).abs());
        Some((r, g.node(i, j)))
    });
    residual_report(values)
}

/// Level-set residual of the closed-form derivatives at the nodes of `grid`.
pub fn level_set_symbolic(family: &ExactFamily, grid: &Grid, t_floor: Option<f64>) -> Result<LevelSetReport, ArrivalError> {
    let floor = t_floor.unwrap_or(f64::NEG_INFINITY);
    let values = par_rows(grid, |i, j| {
        let p = grid.node(i, j);
        let (u, grad, h) = arrival_derivatives(family, p).ok()?;
        if !(u.is_finite() && u >= floor) {
            return None;
        }
        let r = (grad.norm() >= GRADIENT_FLOOR).then(|| (level_set_operator(grad, h) - 1.0).abs());
        Some((r, p))
    });
    residual_report(values)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RectanglePoint {
    pub t: f64,
    /// `v⁻(0, t) - v⁺(0, t)`.
    pub width: f64,
    pub a_minus: f64,
    /// Infinite for noncompact curves.
    pub a_plus: f64,
    pub lhs_minus: f64,
    pub lhs_plus: f64,
    pub rhs: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RectangleReport {
    pub points: Vec<RectanglePoint>,
    /// Latest time up to which every earlier point passes.
    pub t0: Option<f64>,
    pub pass: bool,
}

/// `|a^±_t|·(v⁻(0,t) - v⁺(0,t))` against `-πt/4` for a trace in strip pose
/// (strip across `x`, graphs over the y-axis).
pub fn rectangle_claim_audit(trace: &FlowTrace) -> Result<RectangleReport, ArrivalError> {
    let strip = width_and_strip(trace, &DiagnosticsConfig::default())?;
    if strip.verdict != StripVerdict::Strip || strip.axis.x.abs() < 0.99 {
        return Err(ArrivalError::NotStripPose(format!("verdict {:?}, axis ({:.3}, {:.3})", strip.verdict, strip.axis.x, strip.axis.y)));
    }
    let mut points = Vec::with_capacity(trace.len());
    for (&t, s) in trace.times.iter().zip(&trace.snapshots) {
        let p = s.to_polyline()?;
        let (width, a_minus, a_plus) = if p.closed {
            let (plus, minus) = split_graphs(&p, None, 4097)?;
            (minus.value_at(0.0) - plus.value_at(0.0), plus.a_minus(), plus.a_plus())
        } else {
            let c = clipped_area_below_axis(&p, 0.0)?;
            (c.a.x - c.b.x, p.bounds().2, f64::INFINITY)
        };
        let rhs = -std::f64::consts::PI * t / 4.0;
        let (lhs_minus, lhs_plus) = (a_minus.abs() * width, a_plus.abs() * width);
        let slack = 1e-9 * rhs.abs();
        let pass = lhs_minus >= rhs - slack && lhs_plus >= rhs - slack;
        points.push(RectanglePoint { t, width, a_minus, a_plus, lhs_minus, lhs_plus, rhs, pass });
    }
    let t0 = points.iter().take_while(|p| p.pass).last().map(|p| p.t);
    let pass = points.iter().all(|p| p.pass);
    Ok(RectangleReport { points, t0, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrival::{closed_form_field, reconstruct_arrival};
    use crate::exact::exact_trace;
    use std::f64::consts::PI;

    #[test]
    fn grim_closed_form_is_concave_and_solves_level_set_flow() {
        let fam = ExactFamily::grim_reaper();
        let g = Grid::new(-1.2, 1.2, -3.0, 3.0, 0.02).unwrap();
        assert!(concavity_symbolic(&fam, &g, None).unwrap().value <= 1e-8);
        assert!(level_set_symbolic(&fam, &g, None).unwrap().residual < 1e-12);
        let f = closed_form_field(&fam, &g, None);
        assert!(level_set_residual(&f).unwrap().residual <= 1e-6);
        assert!(concavity_audit(&f).unwrap().value <= 1e-8);
    }

    #[test]
    fn oval_symbolic_hessian_is_negative_definite() {
        let g = Grid::new(-1.4, 1.4, -4.0, 4.0, 0.05).unwrap();
        let a = concavity_symbolic(&ExactFamily::oval(), &g, None).unwrap();
        assert!(a.value < 0.0);
        let f = closed_form_field(&ExactFamily::oval(), &g, None);
        let r = level_set_residual(&f).unwrap();
        assert!(r.residual < 1e-3, "{}", r.residual);
    }

    #[test]
    fn circle_field_audits() {
        let g = Grid::new(-2.0, 2.0, -2.0, 2.0, 0.05).unwrap();
        let f = closed_form_field(&ExactFamily::circle(), &g, Some(-1.9));
        assert!((concavity_audit(&f).unwrap().value + 1.0).abs() < 1e-9);
        let lv = level_set_residual(&f).unwrap();
        assert!(lv.residual <= 1e-6 && lv.degenerate == 1);
        assert!(w_transform_audit(&f, -10.0).unwrap().value > 0.0);
        assert!(matches!(w_transform_audit(&f, 0.0), Err(ArrivalError::InvalidShift { .. })));
    }

    #[test]
    fn reconstructed_circle_field_is_concave() {
        let times: Vec<f64> = (0..200).map(|k| -2.0 + 0.01 * k as f64).collect();
        let tr = exact_trace(&ExactFamily::circle(), &times, 2048, None).unwrap();
        let g = Grid::new(-2.0, 2.0, -2.0, 2.0, 0.02).unwrap();
        let f = reconstruct_arrival(&tr, &g).unwrap();
        let a = concavity_audit(&f).unwrap();
        assert!(a.value <= -1.0 + 5.0 * 0.02, "{}", a.value);
    }

    #[test]
    fn oval_rectangle_claim() {
        let times: Vec<f64> = (0..=9).map(|k| -100.0 + 10.0 * k as f64).collect();
        let tr = exact_trace(&ExactFamily::oval(), &times, 2048, None).unwrap();
        let r = rectangle_claim_audit(&tr).unwrap();
        assert!(r.pass);
        let p = r.points.last().unwrap();
        assert!((p.width - 2.0 * (-10f64).exp().acos()).abs() < 1e-3);
        assert!((p.a_minus.abs() - 10f64.exp().acosh()).abs() < 1e-6);
        assert!((p.lhs_minus - 33.6).abs() < 0.1 && (p.rhs - 2.5 * PI).abs() < 1e-12);
    }

    #[test]
    fn circle_is_not_in_strip_pose() {
        let times: Vec<f64> = (0..20).map(|k| -100.0 + 5.0 * k as f64).collect();
        let tr = exact_trace(&ExactFamily::circle(), &times, 256, None).unwrap();
        assert!(matches!(rectangle_claim_audit(&tr), Err(ArrivalError::NotStripPose(_))));
    }
}
