use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{CurveError, Polyline};
use crate::numerics::{periodic_first_derivative4, periodic_second_difference};
use crate::Point;

/// Clamps `h'` so every point stays behind the neighbouring support lines:
/// `(h_k cos d - h_{k-1})/sin d ≤ h'_k ≤ (h_{k+1} - h_k cos d)/sin d`. The
/// interval is never empty when the discrete `ρ` is nonnegative, and the
/// resulting polygon is convex.
fn convex_clamped(h: &[f64], mut dh: Vec<f64>, d: f64) -> Vec<f64> {
    let n = h.len();
    let (s, c) = d.sin_cos();
    for k in 0..n {
        let lo = (h[k] * c - h[(k + n - 1) % n]) / s;
        let hi = (h[(k + 1) % n] - h[k] * c) / s;
        if lo <= hi {
            dh[k] = dh[k].clamp(lo, hi);
        }
    }
    dh
}

/// `h'` by the fourth-order central stencil where the discrete `ρ = h + h''`
/// it spans agrees within a factor of four, otherwise by the second-order
/// stencil (left, central or right) with the smallest `ρ`. Kinks of `h'` at
/// flat edges are positive atoms of `ρ`, so they are not differenced across.
fn nonoscillatory_derivative(h: &[f64], d: f64) -> Vec<f64> {
    let n = h.len();
    let at = |k: isize| h[k.rem_euclid(n as isize) as usize];
    let rho = |k: isize| at(k) + (at(k + 1) - 2.0 * at(k) + at(k - 1)) / (d * d);
    let smooth = periodic_first_derivative4(h, d);
    (0..n as isize)
        .map(|k| {
            let (l, c, r) = (rho(k - 1), rho(k), rho(k + 1));
            if l.max(c).max(r) <= 4.0 * l.min(c).min(r) {
                smooth[k as usize]
            } else if l < c && l <= r {
                (3.0 * at(k) - 4.0 * at(k - 1) + at(k - 2)) / (2.0 * d)
            } else if r < c {
                (-3.0 * at(k) + 4.0 * at(k + 1) - at(k + 2)) / (2.0 * d)
            } else {
                (at(k + 1) - at(k - 1)) / (2.0 * d)
            }
        })
        .collect()
}

/// Support function of a strictly convex closed curve.
///
/// `h[k]` is the support value in the outward-normal direction
/// `(cos φ_k, sin φ_k)`, `φ_k = 2πk/N`, measured from `center`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportCurve {
    h: Vec<f64>,
    center: Point,
}

impl SupportCurve {
    /// Validates the node count (power of two, at least 16) and strict
    /// convexity of the discrete radius of curvature.
    pub fn new(h: Vec<f64>, center: Point) -> Result<Self, CurveError> {
        let n = h.len();
        if n < 16 || !n.is_power_of_two() {
            return Err(CurveError::BadNodeCount(n));
        }
        if h.iter().any(|v| !v.is_finite()) {
            return Err(CurveError::NonFinite);
        }
        let curve = Self { h, center };
        if let Some((node, rho)) = curve
            .radius_of_curvature()
            .into_iter()
            .enumerate()
            .find(|(_, r)| !(*r > 0.0))
        {
            return Err(CurveError::NotStrictlyConvex { node, rho });
        }
        Ok(curve)
    }

    /// Samples `f(φ)` on the uniform normal-angle grid.
    pub fn from_fn<F: Fn(f64) -> f64>(n: usize, center: Point, f: F) -> Result<Self, CurveError> {
        let d = 2.0 * PI / n as f64;
        Self::new((0..n).map(|k| f(k as f64 * d)).collect(), center)
    }

    pub(crate) fn from_parts_unchecked(h: Vec<f64>, center: Point) -> Self {
        Self { h, center }
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn dtheta(&self) -> f64 {
        2.0 * PI / self.h.len() as f64
    }

    /// Normal angle of node `k`.
    pub fn theta(&self, k: usize) -> f64 {
        k as f64 * self.dtheta()
    }

    /// Discrete `ρ = h_θθ + h` by periodic central differences.
    pub fn radius_of_curvature(&self) -> Vec<f64> {
        periodic_second_difference(&self.h, self.dtheta())
            .iter()
            .zip(&self.h)
            .map(|(d2, h)| d2 + h)
            .collect()
    }

    /// Boundary points `center + h ν + h' ν⊥`, counterclockwise.
    pub fn to_polyline(&self) -> Polyline {
        let dh = convex_clamped(&self.h, nonoscillatory_derivative(&self.h, self.dtheta()), self.dtheta());
        let pts = (0..self.h.len())
            .map(|k| {
                let (s, c) = self.theta(k).sin_cos();
                self.center + Point::new(c, s) * self.h[k] + Point::new(-s, c) * dh[k]
            })
            .collect();
        Polyline::closed(pts)
    }

    /// Width of the curve in the normal direction of node `k`.
    pub fn width(&self, k: usize) -> f64 {
        let n = self.h.len();
        self.h[k] + self.h[(k + n / 2) % n]
    }

    /// Enclosed area `½∮ h ρ dθ` with the discrete `ρ`.
    pub fn area(&self) -> f64 {
        0.5 * self.h.iter().zip(self.radius_of_curvature()).map(|(h, r)| h * r).sum::<f64>() * self.dtheta()
    }

    /// Perimeter `∮ h dθ` (Cauchy's formula), trapezoid rule.
    pub fn perimeter(&self) -> f64 {
        self.h.iter().sum::<f64>() * self.dtheta()
    }
}

/// Support function of a closed convex polyline about its vertex centroid.
pub fn support_from_polyline(p: &Polyline, n: usize) -> Result<SupportCurve, CurveError> {
    if !p.closed || p.len() < 3 || !p.is_convex() {
        return Err(CurveError::NotConvex);
    }
    let center = p.centroid();
    let d = 2.0 * PI / n as f64;
    let h = (0..n)
        .map(|k| {
            let (s, c) = (k as f64 * d).sin_cos();
            let nu = Point::new(c, s);
            p.points
                .iter()
                .map(|v| (v - center).dot(&nu))
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();
    SupportCurve::new(h, center)
}
