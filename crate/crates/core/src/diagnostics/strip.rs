use serde::{Deserialize, Serialize};

use super::{DiagnosticsConfig, DiagnosticsError};
use crate::curve::Polyline;
use crate::evolver::FlowTrace;
use crate::numerics::golden_section;
use crate::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StripVerdict {
    Entire,
    Strip,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StripReport {
    /// `(t, width)` along `axis`.
    pub widths: Vec<(f64, f64)>,
    /// Unit direction across the strip: the direction of least extent at the
    /// earliest snapshot.
    pub axis: Point,
    /// Relative width change over the earliest decade of `|t|`.
    pub growth: f64,
    /// Least-squares slope of `log width` against `log |t|`.
    pub exponent: f64,
    pub verdict: StripVerdict,
}

fn direction(angle: f64) -> Point {
    Point::new(angle.cos(), angle.sin())
}

/// Direction of least extent of a polyline (coarse scan then golden section).
fn narrowest_direction(p: &Polyline) -> Point {
    let m = 360;
    let extent = |a: f64| p.extent_along(direction(a));
    let best = (0..m)
        .map(|i| std::f64::consts::PI * i as f64 / m as f64)
        .min_by(|a, b| extent(*a).total_cmp(&extent(*b)))
        .unwrap_or(0.0);
    let step = std::f64::consts::PI / m as f64;
    let (a, _) = golden_section(extent, best - step, best + step, 1e-10);
    let d = direction(a);
    // Fix the sign so that the reported axis is reproducible.
    if d.x < -1e-12 || (d.x.abs() <= 1e-12 && d.y < 0.0) {
        -d
    } else {
        d
    }
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Width history and the entire/strip dichotomy.
///
/// A trace lies in a strip when its width changes by less than
/// `strip_growth` (relative) over the earliest decade of `|t|` covered by
/// the trace (the whole trace when it spans less than a decade). It is
/// entire when the fitted growth exponent lies in `exponent_band`.
pub fn width_and_strip(trace: &FlowTrace, cfg: &DiagnosticsConfig) -> Result<StripReport, DiagnosticsError> {
    if trace.len() < 3 {
        return Err(DiagnosticsError::TooFewSnapshots(format!("{} snapshots", trace.len())));
    }
    let polys = trace.polylines()?;
    let axis = narrowest_direction(&polys[0]);
    let widths: Vec<(f64, f64)> = trace.times.iter().zip(&polys).map(|(&t, p)| (t, p.extent_along(axis))).collect();
    let t0 = trace.times[0];
    let decade_end = if t0 < 0.0 { t0 / 10.0 } else { f64::INFINITY };
    let early: Vec<&(f64, f64)> = widths.iter().filter(|(t, _)| *t <= decade_end).collect();
    let early = if early.len() >= 2 { early } else { widths.iter().collect() };
    let w_first = early[0].1;
    let w_last = early[early.len() - 1].1;
    let growth = (w_first - w_last).abs() / w_last;
    let negative: Vec<&(f64, f64)> = widths.iter().filter(|(t, w)| *t < 0.0 && *w > 0.0).collect();
    let exponent = if negative.len() >= 2 {
        let lx: Vec<f64> = negative.iter().map(|(t, _)| (-t).ln()).collect();
        let ly: Vec<f64> = negative.iter().map(|(_, w)| w.ln()).collect();
        slope(&lx, &ly)
    } else {
        f64::NAN
    };
    let verdict = if growth < cfg.strip_growth {
        StripVerdict::Strip
    } else if exponent >= cfg.exponent_band.0 && exponent <= cfg.exponent_band.1 {
        StripVerdict::Entire
    } else {
        StripVerdict::Undetermined
    };
    Ok(StripReport { widths, axis, growth, exponent, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{exact_trace, ClipBox, ExactFamily};

    fn log_times(t0: f64, t1: f64, n: usize) -> Vec<f64> {
        (0..n).map(|k| -((-t0).ln() + ((-t1).ln() - (-t0).ln()) * k as f64 / (n - 1) as f64).exp()).collect()
    }

    #[test]
    fn oval_lies_in_a_strip() {
        let tr = exact_trace(&ExactFamily::oval(), &log_times(-100.0, -1.0, 12), 512, None).unwrap();
        let r = width_and_strip(&tr, &DiagnosticsConfig::default()).unwrap();
        assert_eq!(r.verdict, StripVerdict::Strip);
        assert!((r.axis - Point::new(1.0, 0.0)).norm() < 1e-6);
        assert!((r.widths[0].1 - std::f64::consts::PI).abs() < 0.02 * std::f64::consts::PI);
    }

    #[test]
    fn circle_is_entire() {
        let tr = exact_trace(&ExactFamily::circle(), &log_times(-100.0, -1.0, 12), 256, None).unwrap();
        let r = width_and_strip(&tr, &DiagnosticsConfig::default()).unwrap();
        assert_eq!(r.verdict, StripVerdict::Entire);
        assert!((r.exponent - 0.5).abs() < 0.02);
    }

    #[test]
    fn grim_reaper_lies_in_a_strip() {
        let clip = ClipBox::new(-2.0, 2.0, -60.0, 20.0);
        let tr = exact_trace(&ExactFamily::grim_reaper(), &log_times(-50.0, -1.0, 8), 2001, Some(&clip)).unwrap();
        let r = width_and_strip(&tr, &DiagnosticsConfig::default()).unwrap();
        assert_eq!(r.verdict, StripVerdict::Strip);
        assert!((r.widths[0].1 - std::f64::consts::PI).abs() < 1e-3);
    }
}
