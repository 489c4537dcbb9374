use serde::{Deserialize, Serialize};

use super::DiagnosticsError;
use crate::evolver::{FlowTrace, Snapshot};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    /// Computed outside the hypotheses of the property; never a failure.
    Info,
}

impl Verdict {
    pub fn from_check(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_fail(self) -> bool {
        self == Verdict::Fail
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarnackReport {
    /// `max (κ(θ, t_j) - κ(θ, t_{j+1}))` over grid angles and steps.
    pub max_violation: f64,
    pub kappa_mean: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

/// Checks that curvature at fixed turning angle does not decrease in time.
///
/// The property holds for ancient solutions, so it is enforced only on traces
/// whose metadata names an exact family (traces built from, or started at,
/// exact data). Other traces get an informational verdict.
pub fn harnack_check(trace: &FlowTrace, relative_tolerance: f64) -> Result<HarnackReport, DiagnosticsError> {
    let curves = trace
        .snapshots
        .iter()
        .map(|s| match s {
            Snapshot::Turning(c) => Ok(c),
            other => Err(DiagnosticsError::WrongRepresentation(other.representation())),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let first = curves.first().ok_or_else(|| DiagnosticsError::TooFewSnapshots("empty trace".into()))?;
    let same_grid = |c: &&crate::curve::TurningAngleCurve| {
        c.len() == first.len() && c.theta0() == first.theta0() && c.dtheta() == first.dtheta()
    };
    if !curves.iter().all(same_grid) {
        return Err(DiagnosticsError::GridMismatch);
    }
    let mut max_violation = f64::NEG_INFINITY;
    for w in curves.windows(2) {
        for (a, b) in w[0].kappa().iter().zip(w[1].kappa()) {
            max_violation = max_violation.max(a - b);
        }
    }
    let count = (curves.len() * first.len()) as f64;
    let kappa_mean = curves.iter().flat_map(|c| c.kappa()).sum::<f64>() / count;
    let tolerance = relative_tolerance * kappa_mean;
    let verdict = if trace.meta.family.is_some() { Verdict::from_check(max_violation <= tolerance) } else { Verdict::Info };
    Ok(HarnackReport { max_violation, kappa_mean, tolerance, verdict })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisplacementSeries {
    /// `(t, ℓ(t), ℓ(t) + t)` with `ℓ(t) = max(-y)` over the snapshot.
    pub points: Vec<(f64, f64, f64)>,
    /// Largest increase of `ℓ + t` between consecutive snapshots.
    pub max_increase: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

/// Displacement `ℓ(t)` of the lowest point and the monotonicity of `ℓ(t) + t`.
///
/// Enforced on exact-family traces only, like [`harnack_check`].
pub fn displacement_series(trace: &FlowTrace, tolerance: f64) -> Result<DisplacementSeries, DiagnosticsError> {
    let mut points = Vec::with_capacity(trace.len());
    for (&t, s) in trace.times.iter().zip(&trace.snapshots) {
        let p = s.to_polyline()?;
        let ell = p.points.iter().map(|q| -q.y).fold(f64::NEG_INFINITY, f64::max);
        points.push((t, ell, ell + t));
    }
    let max_increase = points.windows(2).map(|w| w[1].2 - w[0].2).fold(f64::NEG_INFINITY, f64::max);
    let verdict = if trace.meta.family.is_some() { Verdict::from_check(max_increase <= tolerance) } else { Verdict::Info };
    Ok(DisplacementSeries { points, max_increase, tolerance, verdict })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    /// Largest increase of `Θ` between consecutive snapshots.
    pub max_increase: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

/// `Θ(t_{j+1}) ≤ Θ(t_j) + tol` along an annotated trace. Records without a
/// finite `Θ` are skipped.
pub fn theta_monotonicity(trace: &FlowTrace, tolerance: f64) -> Result<MonotonicityReport, DiagnosticsError> {
    if trace.diagnostics.len() != trace.len() {
        return Err(DiagnosticsError::TooFewSnapshots("trace is not annotated".into()));
    }
    let theta: Vec<f64> = trace.diagnostics.iter().map(|r| r.theta_gauss).filter(|v| v.is_finite()).collect();
    if theta.len() < 2 {
        return Err(DiagnosticsError::TooFewSnapshots("fewer than two Gaussian areas".into()));
    }
    let max_increase = theta.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
    Ok(MonotonicityReport { max_increase, tolerance, verdict: Verdict::from_check(max_increase <= tolerance) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolver::TraceMeta;
    use crate::exact::{exact_trace, exact_turning_trace, ClipBox, ExactFamily};

    #[test]
    fn circle_curvature_increases() {
        let tr = exact_turning_trace(&ExactFamily::circle(), &[-4.0, -3.0, -2.0, -1.0], 64, None).unwrap();
        let r = harnack_check(&tr, 1e-6).unwrap();
        assert!(r.max_violation < 0.0);
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn decreasing_curvature_is_informational_without_family() {
        let mut tr = exact_turning_trace(&ExactFamily::circle(), &[-1.0, -2.0 + 1.5], 32, None).unwrap();
        tr.snapshots.reverse();
        tr.meta = TraceMeta::new("test", "none", 32);
        let r = harnack_check(&tr, 1e-6).unwrap();
        assert!(r.max_violation > 0.0);
        assert_eq!(r.verdict, Verdict::Info);
    }

    #[test]
    fn grim_displacement_is_constant() {
        let clip = ClipBox::new(-2.0, 2.0, -30.0, 5.0);
        let times: Vec<f64> = (0..6).map(|k| -20.0 + 3.0 * k as f64).collect();
        let tr = exact_trace(&ExactFamily::grim_reaper(), &times, 801, Some(&clip)).unwrap();
        let d = displacement_series(&tr, 1e-6).unwrap();
        for (_, _, s) in &d.points {
            assert!(s.abs() < 1e-9);
        }
        assert_eq!(d.verdict, Verdict::Pass);
    }

    #[test]
    fn circle_displacement_is_radius() {
        let tr = exact_trace(&ExactFamily::circle(), &[-3.0, -2.0, -1.0], 64, None).unwrap();
        let d = displacement_series(&tr, 1e-6).unwrap();
        for (t, ell, _) in &d.points {
            assert!((ell - (-2.0 * t).sqrt()).abs() < 1e-12);
        }
    }
}
