use serde::{Deserialize, Serialize};
use statrs::function::erf::{erf, erfc};

use super::DiagnosticsError;
use crate::curve::Polyline;
use crate::numerics::golden_section;
use crate::Point;

/// Weight below which a segment is dropped from the Gaussian integrals.
const WEIGHT_FLOOR: f64 = 1e-16;

/// Scaled Gaussian mass of a straight line, `√π`.
pub const GAUSSIAN_LINE_ENTROPY: f64 = 1.772_453_850_905_516;

/// `erf(z1) - erf(z0)` without cancellation in the tails.
fn erf_diff(z0: f64, z1: f64) -> f64 {
    if z0 >= 0.0 {
        erfc(z0) - erfc(z1)
    } else if z1 <= 0.0 {
        erfc(-z1) - erfc(-z0)
    } else {
        erf(z1) - erf(z0)
    }
}

/// `(4πτ)^{-1/2} ∫ exp(-|p|²/(4τ)) ds` over the segment `[a, b]`, integrated
/// in closed form.
fn segment_mass(a: Point, b: Point, four_tau: f64) -> f64 {
    let d = b - a;
    let len = d.norm();
    if len == 0.0 {
        return 0.0;
    }
    let u = d / len;
    let along = a.dot(&u);
    let closest = (-along).clamp(0.0, len);
    let nearest2 = (a + u * closest).norm_squared();
    if (-nearest2 / four_tau).exp() < WEIGHT_FLOOR {
        return 0.0;
    }
    let perp2 = (a.norm_squared() - along * along).max(0.0);
    let w = four_tau.sqrt();
    (-perp2 / four_tau).exp() * 0.5 * erf_diff(along / w, (along + len) / w)
}

fn total_mass(p: &Polyline, center: Point, four_tau: f64) -> f64 {
    p.segments().map(|(a, b)| segment_mass(a - center, b - center, four_tau)).sum()
}

/// Gaussian area `Θ = (-4πt)^{-1/2} ∫ exp(|p|²/(4t)) ds` about the origin.
pub fn gaussian_area(p: &Polyline, t: f64) -> Result<f64, DiagnosticsError> {
    gaussian_area_about(p, t, Point::zeros())
}

/// Gaussian area with the kernel centred at `center`.
///
/// Each segment is integrated exactly, so the only truncation is the
/// dropped segments with weight below `1e-16`. Open curves whose ends still
/// carry weight above that floor are rejected.
pub fn gaussian_area_about(p: &Polyline, t: f64, center: Point) -> Result<f64, DiagnosticsError> {
    if !(t < 0.0) {
        return Err(DiagnosticsError::NonNegativeTime(t));
    }
    let four_tau = -4.0 * t;
    if !p.closed {
        for end in [p.points.first(), p.points.last()].into_iter().flatten() {
            let w = (-(end - center).norm_squared() / four_tau).exp();
            if w >= WEIGHT_FLOOR {
                return Err(DiagnosticsError::InsufficientExtent(w));
            }
        }
    }
    Ok(total_mass(p, center, four_tau))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub sup: f64,
    pub k_at_sup: f64,
    pub ceiling: f64,
    pub pass: bool,
}

/// `sup_k k^{-1/2} ∫ exp(-|p|²/k) ds` over a logarithmic grid of `k` spanning
/// `[1e-4 d², 1e4 d²]` (`d` the diameter of the bounding box), refined by a
/// golden-section search around the best grid point.
pub fn entropy_bound_check(p: &Polyline, ceiling: f64) -> EntropyReport {
    let (xmin, xmax, ymin, ymax) = p.bounds();
    let d = ((xmax - xmin).powi(2) + (ymax - ymin).powi(2)).sqrt().max(1e-12);
    let value = |lk: f64| GAUSSIAN_LINE_ENTROPY * total_mass(p, Point::zeros(), lk.exp());
    let (lo, hi) = ((1e-4 * d * d).ln(), (1e4 * d * d).ln());
    let m = 161;
    let grid: Vec<f64> = (0..m).map(|i| lo + (hi - lo) * i as f64 / (m - 1) as f64).collect();
    let (best, _) = grid
        .iter()
        .enumerate()
        .map(|(i, &lk)| (i, value(lk)))
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    let a = grid[best.saturating_sub(1)];
    let b = grid[(best + 1).min(m - 1)];
    let (lk, neg) = golden_section(|x| -value(x), a, b, 1e-10);
    let sup = (-neg).max(value(grid[best]));
    EntropyReport { sup, k_at_sup: lk.exp(), ceiling, pass: sup <= ceiling }
}
