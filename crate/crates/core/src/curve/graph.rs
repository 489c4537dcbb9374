use serde::{Deserialize, Serialize};

use super::{CurveError, Polyline};
use crate::Point;

/// Which half of a convex curve a graph over the y-axis describes.
///
/// The curve is `{(-v⁺(y), y)} ∪ {(-v⁻(y), y)}` with `v⁺` convex (the right
/// half, `x = -v⁺`) and `v⁻` concave (the left half), so `v⁻ - v⁺` is the
/// horizontal width at height `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

/// One branch of a convex curve written as a graph `x = -v(y)`.
///
/// The ordinate grid is stored explicitly. [`GraphCurve::uniform`] builds the
/// usual uniform grid on `[a⁻, a⁺]`; the free-endpoint integrator uses a
/// grid clustered at the ends.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphCurve {
    y: Vec<f64>,
    v: Vec<f64>,
    side: Branch,
}

/// Slack allowed on the sign of second divided differences.
const CONVEXITY_SLACK: f64 = 1e-9;

impl GraphCurve {
    pub fn new(y: Vec<f64>, v: Vec<f64>, side: Branch) -> Result<Self, CurveError> {
        if y.len() < 3 || y.len() != v.len() {
            return Err(CurveError::BadNodeCount(y.len()));
        }
        if y.iter().chain(&v).any(|a| !a.is_finite()) {
            return Err(CurveError::NonFinite);
        }
        if y.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(CurveError::BadGrid);
        }
        let g = Self { y, v, side };
        if let Some(node) = g.convexity_violation() {
            return Err(CurveError::BranchNotConvex { node });
        }
        Ok(g)
    }

    /// Uniform grid on `[a_minus, a_plus]` sampled from `f`.
    pub fn uniform<F: Fn(f64) -> f64>(a_minus: f64, a_plus: f64, n: usize, side: Branch, f: F) -> Result<Self, CurveError> {
        let y = uniform_grid(a_minus, a_plus, n);
        let v = y.iter().map(|&s| f(s)).collect();
        Self::new(y, v, side)
    }

    /// Grid `y = a⁻ + (a⁺ - a⁻)(1 - cos σ)/2` on uniform `σ ∈ [0, π]`, which
    /// clusters nodes where the branch turns horizontal at its ends.
    pub fn cosine<F: Fn(f64) -> f64>(a_minus: f64, a_plus: f64, n: usize, side: Branch, f: F) -> Result<Self, CurveError> {
        let y = cosine_grid(a_minus, a_plus, n);
        let v = y.iter().map(|&s| f(s)).collect();
        Self::new(y, v, side)
    }

    /// Whether the grid is the cosine grid of [`Self::cosine`].
    pub fn is_cosine_grid(&self) -> bool {
        let g = cosine_grid(self.a_minus(), self.a_plus(), self.len());
        let tol = 1e-9 * (self.a_plus() - self.a_minus());
        g.iter().zip(&self.y).all(|(a, b)| (a - b).abs() <= tol)
    }

    pub(crate) fn from_parts_unchecked(y: Vec<f64>, v: Vec<f64>, side: Branch) -> Self {
        Self { y, v, side }
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn side(&self) -> Branch {
        self.side
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn a_minus(&self) -> f64 {
        self.y[0]
    }

    pub fn a_plus(&self) -> f64 {
        self.y[self.y.len() - 1]
    }

    /// Piecewise-linear value at `y` (clamped to the grid).
    pub fn value_at(&self, y: f64) -> f64 {
        crate::numerics::linear_interpolate(&self.y, &self.v, y)
    }

    /// First interior node whose second divided difference has the wrong sign.
    pub fn convexity_violation(&self) -> Option<usize> {
        let sign = match self.side {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        };
        let scale = self.v.iter().fold(1.0f64, |m, a| m.max(a.abs()));
        (1..self.y.len() - 1).find(|&i| {
            let d2 = second_divided_difference(&self.y, &self.v, i);
            let h = 0.5 * (self.y[i + 1] - self.y[i - 1]);
            sign * d2 * h * h < -CONVEXITY_SLACK * scale
        })
    }

    /// Points `(-v, y)` in order of increasing `y`.
    pub fn to_polyline(&self) -> Polyline {
        Polyline::open(self.y.iter().zip(&self.v).map(|(&y, &v)| Point::new(-v, y)).collect())
    }
}

pub(crate) fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

pub(crate) fn cosine_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let s = std::f64::consts::PI * i as f64 / (n - 1) as f64;
            a + (b - a) * 0.5 * (1.0 - s.cos())
        })
        .collect()
}

pub(crate) fn second_divided_difference(y: &[f64], v: &[f64], i: usize) -> f64 {
    let (hm, hp) = (y[i] - y[i - 1], y[i + 1] - y[i]);
    2.0 * ((v[i + 1] - v[i]) / hp - (v[i] - v[i - 1]) / hm) / (hm + hp)
}

/// Extremes of `x` on the horizontal slice `{y = level}` of a closed convex polyline.
fn slice(p: &Polyline, level: f64) -> Option<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (a, b) in p.segments() {
        let (ymin, ymax) = (a.y.min(b.y), a.y.max(b.y));
        if level < ymin || level > ymax {
            continue;
        }
        if a.y == b.y {
            lo = lo.min(a.x.min(b.x));
            hi = hi.max(a.x.max(b.x));
        } else {
            let s = (level - a.y) / (b.y - a.y);
            let x = a.x + s * (b.x - a.x);
            lo = lo.min(x);
            hi = hi.max(x);
        }
    }
    (lo <= hi).then_some((lo, hi))
}

/// Writes a closed convex polyline as two graphs over the direction `axis`
/// (default the y-axis), sampled on `n` uniform ordinates spanning the
/// curve's extent along `axis`.
///
/// The polyline is first rotated so that `axis` points along `+y`; branch
/// values refer to that rotated frame. Returns `(v⁺, v⁻)`.
pub fn split_graphs(p: &Polyline, axis: Option<Point>, n: usize) -> Result<(GraphCurve, GraphCurve), CurveError> {
    if !p.closed || p.len() < 3 || !p.is_convex() {
        return Err(CurveError::NotConvex);
    }
    if n < 3 {
        return Err(CurveError::BadNodeCount(n));
    }
    let axis = axis.unwrap_or_else(|| Point::new(0.0, 1.0));
    let rotation = std::f64::consts::FRAC_PI_2 - axis.y.atan2(axis.x);
    let q = if rotation.abs() > 0.0 { p.rotated(rotation) } else { p.clone() };
    let (_, _, ymin, ymax) = q.bounds();
    let y = uniform_grid(ymin, ymax, n);
    let mut plus = Vec::with_capacity(n);
    let mut minus = Vec::with_capacity(n);
    for &level in &y {
        let (lo, hi) = slice(&q, level.clamp(ymin, ymax)).ok_or(CurveError::NotConvex)?;
        plus.push(-hi);
        minus.push(-lo);
    }
    // A near-flat top or bottom edge leaves the end slices with a sliver of
    // rounding width; the branches meet at its midpoint. Genuine flat edges
    // are kept.
    let sliver = 1e-9 * (ymax - ymin);
    for k in [0, n - 1] {
        if (plus[k] - minus[k]).abs() <= sliver {
            let mid = 0.5 * (plus[k] + minus[k]);
            plus[k] = mid;
            minus[k] = mid;
        }
    }
    Ok((
        GraphCurve::new(y.clone(), plus, Branch::Plus)?,
        GraphCurve::new(y, minus, Branch::Minus)?,
    ))
}

/// Joins a `(v⁺, v⁻)` pair back into a counterclockwise closed polyline.
pub fn merge_graphs(plus: &GraphCurve, minus: &GraphCurve) -> Polyline {
    let mut pts: Vec<Point> = plus.to_polyline().points;
    let mut left = minus.to_polyline().points;
    left.reverse();
    let close = |a: &Point, b: &Point| (a - b).norm() <= 1e-12 * (1.0 + a.norm());
    if let (Some(a), Some(b)) = (pts.last(), left.first()) {
        if close(a, b) {
            left.remove(0);
        }
    }
    if let (Some(a), Some(b)) = (left.last(), pts.first()) {
        if close(a, b) {
            left.pop();
        }
    }
    pts.extend(left);
    Polyline::closed(pts)
}
