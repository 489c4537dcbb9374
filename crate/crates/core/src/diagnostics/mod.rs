//! Monitored quantities and asymptotic probes for flow traces.

mod area;
mod blowdown;
mod gaussian;
mod monotone;
mod reflection;
mod strip;
mod tip;

pub use area::{clipped_area_below_axis, enclosed_area, trapezium_lower_bound, ClippedArea};
pub use blowdown::{blow_down, classify_blow_down, BlowDownKind, ClassificationVerdict, REFERENCE_WINDOW};
pub use gaussian::{entropy_bound_check, gaussian_area, gaussian_area_about, EntropyReport, GAUSSIAN_LINE_ENTROPY};
pub use monotone::{displacement_series, harnack_check, theta_monotonicity, DisplacementSeries, HarnackReport, MonotonicityReport, Verdict};
pub use reflection::{reflection_defect, ReflectionReport};
pub use strip::{width_and_strip, StripReport, StripVerdict};
pub use tip::{fit_grim_reaper, tip_frame, GrimFit, TipFrame, TipSide};

use serde::{Deserialize, Serialize};

use crate::curve::CurveError;
use crate::evolver::{FlowTrace, Snapshot, TraceMeta};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DiagnosticsError {
    #[error("polyline is not closed")]
    NotClosed,
    #[error("curve does not cross the axis twice")]
    NoCrossing,
    #[error("curve touches the axis tangentially or crosses it more than twice")]
    TangentCrossing,
    #[error("Gaussian area needs t < 0, got {0}")]
    NonNegativeTime(f64),
    #[error("open curve ends while the Gaussian weight is still {0:e}")]
    InsufficientExtent(f64),
    #[error("snapshots do not share a grid")]
    GridMismatch,
    #[error("tip is under-resolved: spacing {spacing} against curvature {kappa}")]
    TipNotResolved { spacing: f64, kappa: f64 },
    #[error("Grim Reaper fit residual {residual} is too large")]
    PoorFit { residual: f64 },
    #[error("points do not form a trapezium with horizontal sides")]
    NotTrapezium,
    #[error("trace does not cover time {0}")]
    WindowNotCovered(f64),
    #[error("not enough snapshots or scales: {0}")]
    TooFewSnapshots(String),
    #[error("snapshot representation {0} is not supported here")]
    WrongRepresentation(&'static str),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// Verdict tolerances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiagnosticsConfig {
    /// Distance of the Gaussian-area limit from 1, 2 or `√(2π/e)`.
    pub theta_tolerance: f64,
    /// Band for the width growth exponent of entire solutions.
    pub exponent_band: (f64, f64),
    /// Relative width growth below which a trace lies in a strip.
    pub strip_growth: f64,
    /// Ceiling for the entropy bound.
    pub entropy_ceiling: f64,
    /// Harnack slack relative to the mean curvature.
    pub harnack_tolerance: f64,
    /// Slack for `ℓ(t) + t` to increase between snapshots.
    pub displacement_tolerance: f64,
    /// Slack for `Θ` to increase between snapshots.
    pub theta_monotone_tolerance: f64,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        Self {
            theta_tolerance: 0.1,
            exponent_band: (0.4, 0.6),
            strip_growth: 0.05,
            entropy_ceiling: 10.0,
            harnack_tolerance: 1e-6,
            displacement_tolerance: 1e-6,
            theta_monotone_tolerance: 1e-6,
        }
    }
}

/// Per-time monitored quantities.
///
/// For open curves `area` is the area cut off below the x-axis and
/// `iso_ratio` is not defined (NaN). `ell_minus` and `ell_plus` are the
/// largest displacements `max(-y)` and `max(y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub area: f64,
    pub length: f64,
    pub theta_gauss: f64,
    pub ell_minus: f64,
    pub ell_plus: f64,
    pub width: f64,
    pub kappa_min: f64,
    pub kappa_max: f64,
    pub iso_ratio: f64,
}

impl DiagnosticsRecord {
    pub const COLUMNS: [&'static str; 10] =
        ["t", "area", "length", "theta_gauss", "ell_minus", "ell_plus", "width", "kappa_min", "kappa_max", "iso_ratio"];

    pub fn values(&self) -> [f64; 10] {
        [
            self.t,
            self.area,
            self.length,
            self.theta_gauss,
            self.ell_minus,
            self.ell_plus,
            self.width,
            self.kappa_min,
            self.kappa_max,
            self.iso_ratio,
        ]
    }
}

fn curvature_range(s: &Snapshot) -> Result<(f64, f64), CurveError> {
    let ks: Vec<f64> = match s {
        Snapshot::Support(c) => c.radius_of_curvature().iter().map(|r| 1.0 / r).collect(),
        Snapshot::Turning(c) => c.kappa().to_vec(),
        Snapshot::Polyline(_) | Snapshot::Graph(_) => {
            let p = s.to_polyline()?;
            let k = p.menger_curvatures();
            if p.closed || k.len() < 3 {
                k
            } else {
                k[1..k.len() - 1].to_vec()
            }
        }
    };
    Ok(ks.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &k| (a.min(k), b.max(k))))
}

/// Diagnostics of one snapshot at time `t`.
pub fn record(snapshot: &Snapshot, t: f64, meta: &TraceMeta) -> Result<DiagnosticsRecord, DiagnosticsError> {
    let p = snapshot.to_polyline()?;
    let (xmin, xmax, ymin, ymax) = p.bounds();
    let (area, length) = match snapshot {
        Snapshot::Support(h) => (h.area(), h.perimeter()),
        _ => (p.signed_area().abs(), p.length()),
    };
    let (area, iso_ratio) = if p.closed {
        (area, length * length / (4.0 * std::f64::consts::PI * area))
    } else {
        (clipped_area_below_axis(&p, 0.0).map_or(f64::NAN, |c| c.area), f64::NAN)
    };
    let s = t - meta.gaussian_time;
    let theta_gauss = if s < 0.0 {
        gaussian_area_about(&p, s, meta.gaussian_center).unwrap_or(f64::NAN)
    } else {
        f64::NAN
    };
    let (kappa_min, kappa_max) = curvature_range(snapshot)?;
    Ok(DiagnosticsRecord {
        t,
        area,
        length,
        theta_gauss,
        ell_minus: -ymin,
        ell_plus: ymax,
        width: xmax - xmin,
        kappa_min,
        kappa_max,
        iso_ratio,
    })
}

/// Fills `trace.diagnostics` with one record per snapshot.
pub fn annotate(trace: &mut FlowTrace) -> Result<(), DiagnosticsError> {
    trace.diagnostics = trace
        .times
        .iter()
        .zip(&trace.snapshots)
        .map(|(&t, s)| record(s, t, &trace.meta))
        .collect::<Result<_, _>>()?;
    Ok(())
}

/// Largest `|A(t) + 2π(t - t_ext)|/|t|` over compact records with the
/// extinction time `t_ext` fitted by least squares, together with `t_ext`.
pub fn area_law_residual(records: &[DiagnosticsRecord]) -> (f64, f64) {
    let pts: Vec<(f64, f64)> = records.iter().filter(|r| r.area.is_finite()).map(|r| (r.t, r.area)).collect();
    if pts.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let t_ext = pts.iter().map(|(t, a)| t + a / two_pi).sum::<f64>() / pts.len() as f64;
    let worst = pts
        .iter()
        .map(|(t, a)| (a + two_pi * (t - t_ext)).abs() / t.abs().max(1e-300))
        .fold(0.0, f64::max);
    (worst, t_ext)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{sample_exact, ExactFamily};

    #[test]
    fn oval_record_values() {
        let p = sample_exact(&ExactFamily::oval(), -1.0, 512, None).unwrap();
        let r = record(&Snapshot::Polyline(p), -1.0, &TraceMeta::new("exact", "closed_form", 512)).unwrap();
        assert!((r.area - 2.0 * std::f64::consts::PI).abs() < 1e-3);
        assert!(r.iso_ratio >= 1.0);
        assert!((r.ell_minus - 1f64.exp().acosh()).abs() < 1e-12);
        assert!(r.theta_gauss > 0.0 && r.length > 0.0);
    }
}
