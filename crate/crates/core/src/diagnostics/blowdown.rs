use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use super::{gaussian_area, DiagnosticsConfig, DiagnosticsError};
use crate::curve::Polyline;
use crate::evolver::{FlowTrace, Snapshot};
use crate::numerics::sym2_eigenvalues;
use crate::Point;

/// Rescaled times `[a, b]` at which blow-downs are compared.
pub const REFERENCE_WINDOW: (f64, f64) = (-2.0, -1.0);

/// Rescaled time at which the Gaussian area is read off.
const REFERENCE_TIME: f64 = -1.0;

/// Snapshots per rescaled trace.
const REFERENCE_SAMPLES: usize = 11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlowDownKind {
    Circle,
    LineMult1,
    LineMult2,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationVerdict {
    pub kind: BlowDownKind,
    /// Θ at the smallest scale.
    pub gaussian_area_limit: f64,
    /// Principal direction of the rescaled curve for line limits.
    pub axis: Option<Point>,
    /// Distance of the limit from the target value of `kind`.
    pub confidence: f64,
    /// `(λ, Θ)` for every scale, ordered by decreasing `λ`.
    pub thetas: Vec<(f64, f64)>,
}

/// Point on `b` matched to `a` by nearest-point correspondence.
fn blend(a: &Polyline, b: &Polyline, w: f64) -> Polyline {
    if w == 0.0 {
        return a.clone();
    }
    if w == 1.0 {
        return b.clone();
    }
    if a.len() == b.len() {
        return Polyline::new(a.points.iter().zip(&b.points).map(|(p, q)| p * (1.0 - w) + q * w).collect(), a.closed);
    }
    a.map(|p| p * (1.0 - w) + b.closest_point(p).1 * w)
}

/// Polyline at time `s`, linear in time between stored snapshots.
fn at_time(trace: &FlowTrace, s: f64, polys: &[Polyline]) -> Result<Polyline, DiagnosticsError> {
    let (first, last) = match (trace.first_time(), trace.last_time()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(DiagnosticsError::WindowNotCovered(s)),
    };
    let slack = 1e-9 * (1.0 + s.abs());
    if s < first - slack || s > last + slack {
        return Err(DiagnosticsError::WindowNotCovered(s));
    }
    let s = s.clamp(first, last);
    let j = trace.times.partition_point(|&t| t <= s);
    if j == 0 {
        return Ok(polys[0].clone());
    }
    if j == trace.len() {
        return Ok(polys[j - 1].clone());
    }
    let (t0, t1) = (trace.times[j - 1], trace.times[j]);
    Ok(blend(&polys[j - 1], &polys[j], (s - t0) / (t1 - t0)))
}

/// Parabolic rescalings `λ(Γ_{T₀ + λ⁻²τ} - x₀)` for `τ` in [`REFERENCE_WINDOW`],
/// one trace per scale. `x₀, T₀` are the trace's Gaussian centre and time.
pub fn blow_down(trace: &FlowTrace, lambdas: &[f64]) -> Result<Vec<FlowTrace>, DiagnosticsError> {
    let polys = trace.polylines()?;
    let (a, b) = REFERENCE_WINDOW;
    let taus: Vec<f64> = (0..REFERENCE_SAMPLES).map(|i| a + (b - a) * i as f64 / (REFERENCE_SAMPLES - 1) as f64).collect();
    let (x0, t0) = (trace.meta.gaussian_center, trace.meta.gaussian_time);
    lambdas
        .iter()
        .map(|&lambda| {
            let snaps = taus
                .iter()
                .map(|&tau| {
                    let p = at_time(trace, t0 + tau / (lambda * lambda), &polys)?;
                    Ok(Snapshot::Polyline(p.map(|q| (q - x0) * lambda)))
                })
                .collect::<Result<Vec<_>, DiagnosticsError>>()?;
            let mut meta = trace.meta.clone().with_gaussian_center(Point::zeros(), 0.0);
            meta.blow_down_scale = Some(lambda);
            Ok(FlowTrace::new(meta, taus.clone(), snaps))
        })
        .collect()
}

/// Principal direction of the length-weighted vertex cloud within `radius`
/// of the origin, normalized to a non-negative `y` component.
fn principal_axis(p: &Polyline, radius: f64) -> Option<Point> {
    let (mut sxx, mut sxy, mut syy, mut w) = (0.0, 0.0, 0.0, 0.0);
    for (a, b) in p.segments() {
        let m = (a + b) * 0.5;
        if m.norm() > radius {
            continue;
        }
        let l = (b - a).norm();
        sxx += l * m.x * m.x;
        sxy += l * m.x * m.y;
        syy += l * m.y * m.y;
        w += l;
    }
    if w == 0.0 {
        return None;
    }
    let (_, big) = sym2_eigenvalues(sxx, sxy, syy);
    let v = if sxy.abs() > 1e-300 {
        Point::new(sxy, big - sxx)
    } else if sxx >= syy {
        Point::new(1.0, 0.0)
    } else {
        Point::new(0.0, 1.0)
    };
    let v = v.normalize();
    Some(if v.y < 0.0 || (v.y == 0.0 && v.x < 0.0) { -v } else { v })
}

/// Number of times `p` crosses the segment of the line through the origin
/// orthogonal to `axis`, within `reach` of the origin.
fn branch_count(p: &Polyline, axis: Point, reach: f64) -> usize {
    let normal = Point::new(-axis.y, axis.x);
    p.segments()
        .filter(|(a, b)| {
            let (sa, sb) = (a.dot(&axis), b.dot(&axis));
            if (sa > 0.0) == (sb > 0.0) {
                return false;
            }
            let w = sa / (sa - sb);
            (a + (b - a) * w).dot(&normal).abs() <= reach
        })
        .count()
}

/// Reads the blow-down limit off the Gaussian area at `τ = -1`.
///
/// Fewer than three scales, or scales spanning less than a decade, give
/// an undetermined verdict.
///
/// Θ near `√(2π/e)`, 1 or 2 selects the circle, a line or a doubled line.
/// Between 1.1 and 1.9 the number of branches near the origin decides
/// between the two line cases.
pub fn classify_blow_down(rescaled: &[FlowTrace], cfg: &DiagnosticsConfig) -> Result<ClassificationVerdict, DiagnosticsError> {
    let mut scaled: Vec<(f64, &FlowTrace)> = rescaled
        .iter()
        .map(|tr| (tr.meta.blow_down_scale.unwrap_or(1.0), tr))
        .collect();
    scaled.sort_by(|a, b| b.0.total_cmp(&a.0));
    let (lmax, lmin) = match (scaled.first(), scaled.last()) {
        (Some(a), Some(b)) => (a.0, b.0),
        _ => (1.0, 1.0),
    };
    if scaled.len() < 3 || lmax < 10.0 * lmin * (1.0 - 1e-12) {
        return Ok(ClassificationVerdict {
            kind: BlowDownKind::Undetermined,
            gaussian_area_limit: f64::NAN,
            axis: None,
            confidence: f64::NAN,
            thetas: Vec::new(),
        });
    }
    let mut thetas = Vec::with_capacity(scaled.len());
    let mut last_curve = None;
    for (lambda, tr) in &scaled {
        let i = tr.nearest_index(REFERENCE_TIME).ok_or(DiagnosticsError::WindowNotCovered(REFERENCE_TIME))?;
        let p = tr.snapshots[i].to_polyline()?;
        let theta = gaussian_area(&p, tr.times[i]).unwrap_or(f64::NAN);
        thetas.push((*lambda, theta));
        last_curve = Some(p);
    }
    let limit = thetas.last().map_or(f64::NAN, |t| t.1);
    let p = last_curve.expect("at least three scales");
    let radius = 2.0 * (-4.0 * REFERENCE_TIME).sqrt();
    let axis = principal_axis(&p, radius);
    let tol = cfg.theta_tolerance;
    let circle = (2.0 * PI / E).sqrt();
    let near = |target: f64| (limit - target).abs() <= tol;
    let (kind, target) = if near(circle) {
        (BlowDownKind::Circle, circle)
    } else if near(1.0) {
        (BlowDownKind::LineMult1, 1.0)
    } else if near(2.0) {
        (BlowDownKind::LineMult2, 2.0)
    } else if limit > 1.0 + tol && limit < 2.0 - tol && axis.is_some() {
        match branch_count(&p, axis.unwrap_or_default(), tol) {
            1 => (BlowDownKind::LineMult1, 1.0),
            2 => (BlowDownKind::LineMult2, 2.0),
            _ => (BlowDownKind::Undetermined, f64::NAN),
        }
    } else {
        (BlowDownKind::Undetermined, f64::NAN)
    };
    let axis = match kind {
        BlowDownKind::LineMult1 | BlowDownKind::LineMult2 => axis,
        _ => None,
    };
    Ok(ClassificationVerdict { kind, gaussian_area_limit: limit, axis, confidence: (limit - target).abs(), thetas })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::hausdorff_distance;
    use crate::exact::{exact_trace, sample_exact, ClipBox, ExactFamily};

    fn times(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    }

    /// Negative times from `a` to `b` with a constant ratio.
    fn log_times(a: f64, b: f64, n: usize) -> Vec<f64> {
        let (la, lb) = ((-a).ln(), (-b).ln());
        (0..n).map(|i| -(la + (lb - la) * i as f64 / (n - 1) as f64).exp()).collect()
    }

    #[test]
    fn circle_is_self_similar() {
        let tr = exact_trace(&ExactFamily::circle(), &log_times(-250.0, -0.5, 200), 1024, None).unwrap();
        let bd = blow_down(&tr, &[1.0, 0.3, 0.1]).unwrap();
        for r in &bd {
            for (t, s) in r.times.iter().zip(&r.snapshots) {
                let exact = sample_exact(&ExactFamily::circle(), *t, 1024, None).unwrap();
                let p = s.to_polyline().unwrap();
                let radius = (-2.0 * t).sqrt();
                assert!(p.points.iter().all(|q| (q.norm() - radius).abs() < 2e-3 * radius));
                assert!(hausdorff_distance(&p, &exact) < 2e-2);
            }
        }
        let v = classify_blow_down(&bd, &DiagnosticsConfig::default()).unwrap();
        assert_eq!(v.kind, BlowDownKind::Circle);
        assert!(v.axis.is_none());
    }

    #[test]
    fn stationary_line_has_multiplicity_one() {
        let clip = ClipBox::new(-300.0, 300.0, -300.0, 300.0);
        let tr = exact_trace(&ExactFamily::line(), &times(-250.0, -0.5, 50), 2001, Some(&clip)).unwrap();
        let v = classify_blow_down(&blow_down(&tr, &[1.0, 0.3, 0.1]).unwrap(), &DiagnosticsConfig::default()).unwrap();
        assert_eq!(v.kind, BlowDownKind::LineMult1);
        assert!((v.gaussian_area_limit - 1.0).abs() < 1e-8);
        assert!((v.axis.unwrap() - Point::new(0.0, 1.0)).norm() < 1e-9);
    }

    #[test]
    fn oval_collapses_onto_a_doubled_segment() {
        let tr = exact_trace(&ExactFamily::oval(), &log_times(-200.0, -1.0, 200), 1024, None).unwrap();
        let bd = blow_down(&tr, &[1.0, 0.3, 0.1]).unwrap();
        let last = &bd[2];
        let i = last.nearest_index(-1.0).unwrap();
        let p = last.snapshots[i].to_polyline().unwrap();
        let (xmin, xmax, _, _) = p.bounds();
        assert!(xmax - xmin <= 0.1 * PI + 1e-9);
        let v = classify_blow_down(&bd, &DiagnosticsConfig::default()).unwrap();
        assert_eq!(v.kind, BlowDownKind::LineMult2);
        assert!((v.axis.unwrap() - Point::new(0.0, 1.0)).norm() < 1e-6);
        // Θ does not increase as the scale shrinks toward the backward limit.
        assert!(v.thetas.windows(2).all(|w| w[1].1 >= w[0].1 - 1e-9));
    }

    #[test]
    fn uncovered_window_is_reported() {
        let tr = exact_trace(&ExactFamily::circle(), &times(-10.0, -0.5, 20), 256, None).unwrap();
        assert!(matches!(blow_down(&tr, &[0.1]), Err(DiagnosticsError::WindowNotCovered(_))));
    }

    #[test]
    fn scales_must_span_a_decade() {
        let tr = exact_trace(&ExactFamily::circle(), &times(-10.0, -0.5, 20), 256, None).unwrap();
        let bd = blow_down(&tr, &[1.0, 0.8, 0.6]).unwrap();
        let v = classify_blow_down(&bd, &DiagnosticsConfig::default()).unwrap();
        assert_eq!(v.kind, BlowDownKind::Undetermined);
    }
}
