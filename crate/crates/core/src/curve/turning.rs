use std::f64::consts::PI;

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use super::{CurveError, Polyline};
use crate::Point;

/// Tolerance on the closure gap, relative to length, above which
/// reconstruction refuses to repair a closed curve.
pub const CLOSURE_REPAIR_LIMIT: f64 = 1e-5;

/// Curve given by its curvature as a function of turning angle, on a
/// uniform angle grid.
///
/// Closed curves use `N` nodes `θ_k = θ₀ + 2πk/N`. Open curves use `N`
/// nodes spanning `[θ₀, θ₀ + (N-1)Δθ]` with total Gauss range at most π.
/// `base_point` is the position of the node at `θ₀`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurningAngleCurve {
    theta0: f64,
    dtheta: f64,
    kappa: Vec<f64>,
    base_point: Point,
    closed: bool,
}

impl TurningAngleCurve {
    pub fn closed(kappa: Vec<f64>, theta0: f64, base_point: Point) -> Result<Self, CurveError> {
        if kappa.len() < 8 {
            return Err(CurveError::BadNodeCount(kappa.len()));
        }
        check_positive(&kappa)?;
        let dtheta = 2.0 * PI / kappa.len() as f64;
        Ok(Self { theta0, dtheta, kappa, base_point, closed: true })
    }

    /// Open curve on `[theta0, theta1]` (nodes include both ends).
    pub fn open(kappa: Vec<f64>, theta0: f64, theta1: f64, base_point: Point) -> Result<Self, CurveError> {
        if kappa.len() < 3 {
            return Err(CurveError::BadNodeCount(kappa.len()));
        }
        if !(theta1 > theta0) || theta1 - theta0 > PI + 1e-12 {
            return Err(CurveError::GaussRangeTooLarge(theta1 - theta0));
        }
        check_positive(&kappa)?;
        let dtheta = (theta1 - theta0) / (kappa.len() - 1) as f64;
        Ok(Self { theta0, dtheta, kappa, base_point, closed: false })
    }

    pub(crate) fn with_kappa(&self, kappa: Vec<f64>, base_point: Point) -> Self {
        Self { kappa, base_point, ..self.clone() }
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn kappa(&self) -> &[f64] {
        &self.kappa
    }

    pub fn base_point(&self) -> Point {
        self.base_point
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    pub fn dtheta(&self) -> f64 {
        self.dtheta
    }

    pub fn len(&self) -> usize {
        self.kappa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kappa.is_empty()
    }

    pub fn thetas(&self) -> Vec<f64> {
        (0..self.kappa.len()).map(|k| self.theta0 + k as f64 * self.dtheta).collect()
    }

    /// `∫ κ⁻¹ dθ`: periodic sum for closed curves, trapezoid for open ones.
    pub fn length(&self) -> f64 {
        let rho: Vec<f64> = self.kappa.iter().map(|k| 1.0 / k).collect();
        if self.closed {
            rho.iter().sum::<f64>() * self.dtheta
        } else {
            let n = rho.len();
            (rho.iter().sum::<f64>() - 0.5 * (rho[0] + rho[n - 1])) * self.dtheta
        }
    }

    /// Closure defect `∮ κ⁻¹ (cos θ, sin θ) dθ` of a closed curve.
    pub fn closure_gap(&self) -> Point {
        let rho: Vec<f64> = self.kappa.iter().map(|k| 1.0 / k).collect();
        self.gap_of(&rho)
    }

    fn gap_of(&self, rho: &[f64]) -> Point {
        let w = self.cell_weights();
        let node_weight = w.0 + w.1 * Complex::from_polar(1.0, -self.dtheta);
        let sum = rho
            .iter()
            .enumerate()
            .fold(Complex::new(0.0, 0.0), |acc, (k, r)| {
                acc + Complex::from_polar(*r, self.theta0 + k as f64 * self.dtheta)
            });
        let g = node_weight * sum;
        Point::new(g.re, g.im)
    }

    /// Removes the closure defect by subtracting the least-norm combination of
    /// `cos θ` and `sin θ` from `κ⁻¹`. Returns the gap before repair.
    pub fn enforce_closure(&mut self) -> Result<Point, CurveError> {
        let mut rho: Vec<f64> = self.kappa.iter().map(|k| 1.0 / k).collect();
        let gap = project_closure(&mut rho, self.theta0, self.dtheta);
        check_positive(&rho)?;
        self.kappa = rho.iter().map(|r| 1.0 / r).collect();
        Ok(gap)
    }

    /// Exact integrals over one cell `[0, δ]` of the hat functions times `e^{iu}`:
    /// `(∫(1 - u/δ)e^{iu}du, ∫(u/δ)e^{iu}du)`.
    fn cell_weights(&self) -> (Complex<f64>, Complex<f64>) {
        let d = self.dtheta;
        let (s, c) = d.sin_cos();
        let half = (0.5 * d).sin();
        let total = Complex::new(s, 2.0 * half * half);
        let w1 = Complex::new(s - 2.0 * half * half / d, (s - d * c) / d);
        (total - w1, w1)
    }

    /// Positions `γ(θ) = base + ∫_{θ₀}^{θ} κ⁻¹(cos φ, sin φ) dφ`.
    ///
    /// `κ⁻¹` is taken piecewise linear in θ and the trigonometric factor is
    /// integrated exactly, so constant-curvature arcs are reproduced to
    /// rounding. Closed curves with a small closure gap are repaired by the
    /// projection of [`Self::enforce_closure`] before integration.
    pub fn reconstruct_positions(&self) -> Result<Polyline, CurveError> {
        let mut rho: Vec<f64> = self.kappa.iter().map(|k| 1.0 / k).collect();
        if self.closed {
            let length = rho.iter().sum::<f64>() * self.dtheta;
            let gap = self.gap_of(&rho).norm();
            if gap > CLOSURE_REPAIR_LIMIT * length {
                return Err(CurveError::ClosureViolation { gap, length });
            }
            project_closure(&mut rho, self.theta0, self.dtheta);
        }
        let (w0, w1) = self.cell_weights();
        let n = rho.len();
        let mut pts = Vec::with_capacity(n);
        let mut acc = Complex::new(self.base_point.x, self.base_point.y);
        pts.push(self.base_point);
        for k in 0..n - 1 {
            let e = Complex::from_polar(1.0, self.theta0 + k as f64 * self.dtheta);
            acc += e * (w0 * rho[k] + w1 * rho[k + 1]);
            pts.push(Point::new(acc.re, acc.im));
        }
        Ok(Polyline::new(pts, self.closed))
    }
}

fn check_positive(kappa: &[f64]) -> Result<(), CurveError> {
    match kappa.iter().position(|k| !(*k > 0.0) || !k.is_finite()) {
        Some(node) => Err(CurveError::NonPositiveCurvature { node }),
        None => Ok(()),
    }
}

/// Subtracts `a cos θ + b sin θ` from `rho` so that its first discrete Fourier
/// mode vanishes. Returns the removed mode as a vector.
fn project_closure(rho: &mut [f64], theta0: f64, dtheta: f64) -> Point {
    let n = rho.len() as f64;
    let (mut sc, mut ss) = (0.0, 0.0);
    for (k, r) in rho.iter().enumerate() {
        let (s, c) = (theta0 + k as f64 * dtheta).sin_cos();
        sc += r * c;
        ss += r * s;
    }
    let a = 2.0 * sc / n;
    let b = 2.0 * ss / n;
    for (k, r) in rho.iter_mut().enumerate() {
        let (s, c) = (theta0 + k as f64 * dtheta).sin_cos();
        *r -= a * c + b * s;
    }
    Point::new(sc, ss) * dtheta
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_curvature_reconstructs_circle() {
        // Counterclockwise circle of radius 2: at the rightmost point (2, 0)
        // the tangent points up, turning angle π/2.
        let c = TurningAngleCurve::closed(vec![0.5; 256], PI / 2.0, Point::new(2.0, 0.0)).unwrap();
        let p = c.reconstruct_positions().unwrap();
        assert!(p.closed);
        for q in &p.points {
            assert!((q.norm() - 2.0).abs() < 1e-10, "{}", q.norm());
        }
        assert!((c.length() - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn grim_reaper_profile_from_cosine_curvature() {
        let n = 2001;
        let t0 = -1.4;
        let t1 = 1.4;
        let d = (t1 - t0) / (n - 1) as f64;
        let kappa: Vec<f64> = (0..n).map(|k| (t0 + k as f64 * d).cos()).collect();
        // Start at the point with turning angle t0 on y = -log cos x.
        let base = Point::new(t0, -(t0.cos()).ln());
        let c = TurningAngleCurve::open(kappa, t0, t1, base).unwrap();
        let p = c.reconstruct_positions().unwrap();
        // 1/κ = sec θ is interpolated linearly in θ, so the error is O(Δθ²·sec³).
        for q in &p.points {
            let y = -(q.x.cos()).ln();
            assert!((q.y - y).abs() < 1e-4, "{} vs {}", q.y, y);
        }
    }

    #[test]
    fn closure_projection_removes_translation_mode() {
        let n = 128;
        let d = 2.0 * PI / n as f64;
        let kappa: Vec<f64> = (0..n).map(|k| 1.0 / (1.0 + 0.01 * (k as f64 * d).cos())).collect();
        let mut c = TurningAngleCurve::closed(kappa, 0.0, Point::zeros()).unwrap();
        assert!(c.closure_gap().norm() > 1e-3);
        c.enforce_closure().unwrap();
        assert!(c.closure_gap().norm() < 1e-13);
    }

    #[test]
    fn large_gap_is_a_closure_violation() {
        let n = 128;
        let d = 2.0 * PI / n as f64;
        let kappa: Vec<f64> = (0..n).map(|k| 1.0 / (1.0 + 0.5 * (k as f64 * d).cos())).collect();
        let c = TurningAngleCurve::closed(kappa, 0.0, Point::zeros()).unwrap();
        assert!(matches!(c.reconstruct_positions(), Err(CurveError::ClosureViolation { .. })));
    }

    #[test]
    fn open_gauss_range_is_limited_to_pi() {
        assert!(matches!(
            TurningAngleCurve::open(vec![1.0; 10], 0.0, 4.0, Point::zeros()),
            Err(CurveError::GaussRangeTooLarge(_))
        ));
    }

    #[test]
    fn curvature_must_be_positive() {
        let mut k = vec![1.0; 16];
        k[3] = 0.0;
        assert!(matches!(
            TurningAngleCurve::closed(k, 0.0, Point::zeros()),
            Err(CurveError::NonPositiveCurvature { node: 3 })
        ));
    }
}
