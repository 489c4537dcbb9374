use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{drive, EvolveError, FlowTrace, Scheme, Snapshot, StepControl, TraceMeta};
use crate::curve::{cosine_grid, second_divided_difference, GraphCurve};
use crate::exact::TimeWindow;
use crate::numerics::solve_tridiagonal;
use crate::Point;

/// Bound on `|v_y|` beyond which a fixed-end branch is no longer a graph.
const SLOPE_BOUND: f64 = 1e6;

/// Boundary treatment for [`evolve_graph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphBoundary {
    /// `v` held at its initial end values.
    Fixed,
    /// The branch ends are the points where the curve turns horizontal and
    /// move with the flow; the branch meets its mirror image there.
    FreeVerticalTangent,
}

/// Evolves one graph branch by `vₜ = v_yy/(1 + v_y²)`.
///
/// With fixed ends the update is linearly implicit in `v_yy`
/// (`(I - Δt·a·D²)v = v_old`, `a = 1/(1 + v_y²)` frozen at the old time) for
/// the semi-implicit scheme, or forward Euler with `Δt = cfl·Δy²` for the
/// explicit one.
///
/// With free ends the branch must sit on the cosine grid of
/// [`GraphCurve::cosine`]. Nodes `(-v, y)` are moved by the curvature vector
/// (Heun, `Δt = cfl·min|Δp|²`), computed in the grid parameter `σ` with the
/// branch reflected across the vertical line through each end, and then
/// re-interpolated onto the cosine grid of the new interval.
pub fn evolve_graph(g0: &GraphCurve, window: &TimeWindow, ctl: &StepControl, boundary: GraphBoundary) -> Result<FlowTrace, EvolveError> {
    let n = g0.len();
    let side = g0.side();
    let meta = TraceMeta::new("graph", ctl.scheme.name(), n);
    match boundary {
        GraphBoundary::Fixed => {
            let y = g0.y().to_vec();
            let ys = y.clone();
            let scheme = ctl.scheme;
            let hmin = y.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
            let step = move |v: &mut Vec<f64>, t: f64, cap: f64| -> Result<f64, Option<EvolveError>> {
                let dt = ctl.step(hmin * hmin).min(cap);
                let mut a = vec![0.0; n];
                for i in 1..n - 1 {
                    let vy = (v[i + 1] - v[i - 1]) / (y[i + 1] - y[i - 1]);
                    if vy.abs() > SLOPE_BOUND {
                        return Err(Some(EvolveError::BranchDegenerate { t }));
                    }
                    a[i] = 1.0 / (1.0 + vy * vy);
                }
                match scheme {
                    Scheme::Explicit => {
                        let inc: Vec<f64> = (1..n - 1).map(|i| dt * a[i] * second_divided_difference(&y, v, i)).collect();
                        for (i, d) in (1..n - 1).zip(inc) {
                            v[i] += d;
                        }
                    }
                    Scheme::SemiImplicit => {
                        let mut lower = vec![0.0; n];
                        let mut diag = vec![1.0; n];
                        let mut upper = vec![0.0; n];
                        for i in 1..n - 1 {
                            let (hm, hp) = (y[i] - y[i - 1], y[i + 1] - y[i]);
                            let c = dt * a[i] * 2.0 / (hm + hp);
                            lower[i] = -c / hm;
                            upper[i] = -c / hp;
                            diag[i] = 1.0 + c / hm + c / hp;
                        }
                        *v = solve_tridiagonal(&lower, &diag, &upper, v);
                    }
                }
                Ok(dt)
            };
            let snap = move |v: &Vec<f64>| Snapshot::Graph(GraphCurve::from_parts_unchecked(ys.clone(), v.clone(), side));
            drive(window, ctl, FlowTrace::empty(meta), g0.v().to_vec(), step, snap)
        }
        GraphBoundary::FreeVerticalTangent => {
            if !g0.is_cosine_grid() {
                return Err(EvolveError::BadInitialData("free-end graph flow needs a cosine grid".into()));
            }
            let ds = PI / (n - 1) as f64;
            let start: Vec<Point> = g0.y().iter().zip(g0.v()).map(|(&y, &v)| Point::new(-v, y)).collect();
            let step = move |p: &mut Vec<Point>, t: f64, cap: f64| -> Result<f64, Option<EvolveError>> {
                let hmin = p.windows(2).map(|w| (w[1] - w[0]).norm()).fold(f64::INFINITY, f64::min);
                if !(hmin > 0.0) {
                    return Err(Some(EvolveError::BranchDegenerate { t }));
                }
                let dt = (ctl.cfl.min(0.5) * hmin * hmin).min(ctl.dt_max).min(cap);
                let k0 = curvature_vectors(p, ds);
                let p1: Vec<Point> = p.iter().zip(&k0).map(|(a, k)| a + k * dt).collect();
                let k1 = curvature_vectors(&p1, ds);
                let moved: Vec<Point> = p.iter().zip(k0.iter().zip(&k1)).map(|(a, (u, w))| a + (u + w) * (0.5 * dt)).collect();
                *p = regrid(&moved, ds).ok_or(Some(EvolveError::BranchDegenerate { t: t + dt }))?;
                Ok(dt)
            };
            let snap = move |p: &Vec<Point>| {
                Snapshot::Graph(GraphCurve::from_parts_unchecked(
                    p.iter().map(|q| q.y).collect(),
                    p.iter().map(|q| -q.x).collect(),
                    side,
                ))
            };
            drive(window, ctl, FlowTrace::empty(meta), start, step, snap)
        }
    }
}

/// Node `i` with the end reflections `p₋₁ = (2x₀ - x₁, y₁)` and its mirror
/// at the far end.
fn node(p: &[Point], i: isize) -> Point {
    let n = p.len() as isize;
    if i < 0 {
        Point::new(2.0 * p[0].x - p[1].x, p[1].y)
    } else if i >= n {
        let l = p.len() - 1;
        Point::new(2.0 * p[l].x - p[l - 1].x, p[l - 1].y)
    } else {
        p[i as usize]
    }
}

fn curvature_vectors(p: &[Point], ds: f64) -> Vec<Point> {
    (0..p.len() as isize)
        .map(|i| {
            let (a, b, c) = (node(p, i - 1), node(p, i), node(p, i + 1));
            let d1 = (c - a) / (2.0 * ds);
            let d2 = (c - 2.0 * b + a) / (ds * ds);
            let g = d1.norm_squared();
            (d2 - d1 * (d2.dot(&d1) / g)) / g
        })
        .collect()
}

/// Hermite interpolation on the uniform σ grid with slopes from central
/// differences that see the end reflections.
fn hermite_sigma(vals: &[f64], slopes: &[f64], ds: f64, s: f64) -> f64 {
    let n = vals.len();
    let k = ((s / ds).floor() as usize).min(n - 2);
    let u = (s - k as f64 * ds) / ds;
    let h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
    let h10 = u * (1.0 - u) * (1.0 - u);
    let h01 = u * u * (3.0 - 2.0 * u);
    let h11 = u * u * (u - 1.0);
    h00 * vals[k] + h10 * ds * slopes[k] + h01 * vals[k + 1] + h11 * ds * slopes[k + 1]
}

fn regrid(p: &[Point], ds: f64) -> Option<Vec<Point>> {
    let n = p.len();
    let xs: Vec<f64> = p.iter().map(|q| q.x).collect();
    let ys: Vec<f64> = p.iter().map(|q| q.y).collect();
    if ys.windows(2).any(|w| !(w[1] > w[0])) {
        return None;
    }
    let slope = |i: isize, f: fn(&Point) -> f64| (f(&node(p, i + 1)) - f(&node(p, i - 1))) / (2.0 * ds);
    let sx: Vec<f64> = (0..n as isize).map(|i| slope(i, |q| q.x)).collect();
    let sy: Vec<f64> = (0..n as isize).map(|i| slope(i, |q| q.y)).collect();
    let target = cosine_grid(ys[0], ys[n - 1], n);
    let mut out = Vec::with_capacity(n);
    out.push(p[0]);
    for &yt in &target[1..n - 1] {
        let k = ys.partition_point(|&y| y <= yt).clamp(1, n - 1) - 1;
        let (mut lo, mut hi) = (k as f64 * ds, (k + 1) as f64 * ds);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if hermite_sigma(&ys, &sy, ds, mid) < yt {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let s = 0.5 * (lo + hi);
        out.push(Point::new(hermite_sigma(&xs, &sx, ds, s), yt));
    }
    out.push(p[n - 1]);
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Branch;

    #[test]
    fn stationary_line_stays_put() {
        let g = GraphCurve::uniform(-1.0, 1.0, 41, Branch::Plus, |_| 0.0).unwrap();
        let w = TimeWindow::new(0.0, 1.0).unwrap();
        let tr = evolve_graph(&g, &w, &StepControl::semi_implicit(1.0, 1e-2), GraphBoundary::Fixed).unwrap();
        let Snapshot::Graph(last) = tr.snapshots.last().unwrap() else { panic!() };
        assert!(last.v().iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn parabola_initial_speed() {
        let eps = 0.05;
        let g = GraphCurve::uniform(-1.0, 1.0, 81, Branch::Plus, |y| eps * y * y).unwrap();
        let dt = 1e-4;
        let w = TimeWindow::new(0.0, dt).unwrap();
        let tr = evolve_graph(&g, &w, &StepControl::explicit(0.2), GraphBoundary::Fixed).unwrap();
        let Snapshot::Graph(last) = tr.snapshots.last().unwrap() else { panic!() };
        let rate = last.v()[40] / dt;
        assert!((rate - 2.0 * eps).abs() < 1e-3 * eps, "{rate}");
    }

    #[test]
    fn circle_branch_with_free_ends_follows_radius_law() {
        let r0: f64 = 2.0;
        let g = GraphCurve::cosine(-r0, r0, 129, Branch::Plus, |y| -(r0 * r0 - y * y).max(0.0).sqrt()).unwrap();
        let w = TimeWindow::new(-2.0, -1.0).unwrap();
        let tr = evolve_graph(&g, &w, &StepControl::explicit(0.4), GraphBoundary::FreeVerticalTangent).unwrap();
        let Snapshot::Graph(last) = tr.snapshots.last().unwrap() else { panic!() };
        let r = 2f64.sqrt();
        assert!((last.a_plus() - r).abs() < 2e-3, "{}", last.a_plus());
        for (y, v) in last.y().iter().zip(last.v()) {
            assert!(((y * y + v * v).sqrt() - r).abs() < 2e-3);
        }
    }

    #[test]
    fn free_ends_need_cosine_grid() {
        let g = GraphCurve::uniform(-1.0, 1.0, 21, Branch::Plus, |y| y * y).unwrap();
        let w = TimeWindow::new(0.0, 0.1).unwrap();
        assert!(matches!(
            evolve_graph(&g, &w, &StepControl::explicit(0.2), GraphBoundary::FreeVerticalTangent),
            Err(EvolveError::BadInitialData(_))
        ));
    }
}
