use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::DiagnosticsError;
use crate::curve::Polyline;
use crate::numerics::golden_section;
use crate::Point;

/// Which tip to centre: turning angle 0 (lowest point) or π (highest point).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TipSide {
    Theta0,
    ThetaPi,
}

/// Snapshot translated so that a tip sits at the origin, opening upward.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TipFrame {
    pub polyline: Polyline,
    /// Tip location in the original coordinates.
    pub tip: Point,
    /// Direction in which the tip points into the curve (the motion direction
    /// of a translating tip).
    pub direction: Point,
    pub kappa_tip: f64,
}

/// Centres the chosen tip. The tip is located by a parabola through the
/// extremal vertex and its neighbours.
pub fn tip_frame(p: &Polyline, side: TipSide) -> Result<TipFrame, DiagnosticsError> {
    let q = match side {
        TipSide::Theta0 => p.clone(),
        TipSide::ThetaPi => p.rotated(PI),
    };
    let n = q.len();
    let i = (0..n)
        .min_by(|&a, &b| q.points[a].y.total_cmp(&q.points[b].y))
        .ok_or(DiagnosticsError::TooFewSnapshots("empty polyline".into()))?;
    let (im, ip) = if q.closed {
        ((i + n - 1) % n, (i + 1) % n)
    } else if i == 0 || i + 1 == n {
        return Err(DiagnosticsError::TipNotResolved { spacing: f64::INFINITY, kappa: f64::NAN });
    } else {
        (i - 1, i + 1)
    };
    let (a, b, c) = (q.points[im], q.points[i], q.points[ip]);
    let spacing = (b - a).norm().max((c - b).norm());
    let kappa = q.menger_curvatures()[i].abs();
    if !(kappa > 0.0) || spacing > 0.05 / kappa {
        return Err(DiagnosticsError::TipNotResolved { spacing, kappa });
    }
    // Parabola y = α(x - b.x)² + β(x - b.x) + b.y through the three vertices.
    let (da, dc) = (a.x - b.x, c.x - b.x);
    let (ya, yc) = (a.y - b.y, c.y - b.y);
    let det = da * dc * (da - dc);
    let alpha = (ya * dc - yc * da) / det;
    let beta = (yc * da * da - ya * dc * dc) / det;
    let tip_local = if alpha > 0.0 {
        let x = -beta / (2.0 * alpha);
        Point::new(b.x + x, b.y + alpha * x * x + beta * x)
    } else {
        b
    };
    let (tip, direction) = match side {
        TipSide::Theta0 => (tip_local, Point::new(0.0, 1.0)),
        TipSide::ThetaPi => (-tip_local, Point::new(0.0, -1.0)),
    };
    Ok(TipFrame { polyline: q.translated(-tip_local), tip, direction, kappa_tip: kappa })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrimFit {
    /// Fitted scale: the tip matches `r·(x, -ln cos x)` rescaled.
    pub r: f64,
    /// Independent estimate `1/κ` at the tip.
    pub r_curvature: f64,
    /// Largest distance from a windowed tip vertex to the fitted profile.
    pub residual: f64,
    pub tip: Point,
    pub direction: Point,
}

/// Distance from `q` to the canonical profile `y = -ln cos x`, whose
/// arc-length parametrization is `(gd s, ln cosh s)`.
fn distance_to_grim(q: Point) -> f64 {
    let point = |s: f64| Point::new(s.sinh().atan(), s.cosh().ln());
    let x = q.x.clamp(-FRAC_PI_2 + 1e-12, FRAC_PI_2 - 1e-12);
    let mut s = x.tan().asinh();
    for _ in 0..50 {
        let p = point(s);
        let (sech, tanh) = (1.0 / s.cosh(), s.tanh());
        let tangent = Point::new(sech, tanh);
        let normal = Point::new(-tanh, sech);
        let g = (p - q).dot(&tangent);
        let h = 1.0 + (p - q).dot(&normal) * sech;
        let step = if h > 0.1 { g / h } else { g };
        s -= step;
        if step.abs() < 1e-15 {
            break;
        }
    }
    (point(s) - q).norm()
}

/// Fits a Grim Reaper of width `πr` to the part of a tip frame inside
/// `window_radius`. The misfit is the largest distance from windowed
/// vertices to `r·profile`; it is minimized over `r` by a logarithmic scan
/// followed by golden-section refinement.
pub fn fit_grim_reaper(frame: &TipFrame, window_radius: f64) -> Result<GrimFit, DiagnosticsError> {
    let pts: Vec<Point> = frame.polyline.points.iter().copied().filter(|q| q.norm() <= window_radius).collect();
    if pts.len() < 11 {
        return Err(DiagnosticsError::TipNotResolved { spacing: window_radius / pts.len().max(1) as f64, kappa: frame.kappa_tip });
    }
    let misfit = |r: f64| pts.iter().map(|&q| r * distance_to_grim(q / r)).fold(0.0, f64::max);
    let r_curvature = 1.0 / frame.kappa_tip;
    let (lo, hi) = ((0.2 * r_curvature).ln(), (5.0 * r_curvature).ln());
    let m = 81;
    let grid: Vec<f64> = (0..m).map(|i| lo + (hi - lo) * i as f64 / (m - 1) as f64).collect();
    let best = (0..m).min_by(|&a, &b| misfit(grid[a].exp()).total_cmp(&misfit(grid[b].exp()))).unwrap_or(0);
    let (a, b) = (grid[best.saturating_sub(1)], grid[(best + 1).min(m - 1)]);
    let (lr, residual) = golden_section(|lr| misfit(lr.exp()), a, b, 1e-12);
    if residual > 0.1 * window_radius {
        return Err(DiagnosticsError::PoorFit { residual });
    }
    Ok(GrimFit { r: lr.exp(), r_curvature, residual, tip: frame.tip, direction: frame.direction })
}
