//! Curve shortening flow integrators.
//!
//! Three formulations of `∂ₜγ = κN` for convex curves plus a polyline
//! front-tracking oracle used to cross-check them:
//!
//! - [`evolve_support`]: `hₜ = -1/(h_θθ + h)` on the outward-normal angle.
//! - [`evolve_kappa`]: `κₜ = κ²κ_θθ + κ³` on the turning angle.
//! - [`evolve_graph`]: `vₜ = v_yy/(1 + v_y²)` for one branch over the y-axis.
//! - [`evolve_polyline_oracle`]: vertices moved by discrete curvature.

mod graph;
mod kappa;
mod oracle;
mod support;
mod trace;

pub use graph::{evolve_graph, GraphBoundary};
pub use kappa::evolve_kappa;
pub use oracle::evolve_polyline_oracle;
pub use support::evolve_support;
pub use trace::{FlowTrace, Snapshot, TraceMeta};

use serde::{Deserialize, Serialize};

use crate::curve::CurveError;
use crate::exact::TimeWindow;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Explicit,
    SemiImplicit,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Explicit => "explicit",
            Scheme::SemiImplicit => "semi_implicit",
        }
    }
}

/// Time-step policy.
///
/// Explicit steps use `cfl` times the parabolic stability limit of each
/// formulation. Semi-implicit steps use the same limit scaled up to `dt_max`
/// at most. Snapshots are stored at the window start, at each requested
/// output time inside the window, and at the window end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepControl {
    #[serde(default = "unbounded", skip_serializing_if = "is_unbounded")]
    pub dt_max: f64,
    pub cfl: f64,
    pub scheme: Scheme,
    #[serde(default)]
    pub t_grid_output: Vec<f64>,
}

fn unbounded() -> f64 {
    f64::INFINITY
}

fn is_unbounded(d: &f64) -> bool {
    d.is_infinite()
}

impl StepControl {
    pub fn explicit(cfl: f64) -> Self {
        Self { dt_max: f64::INFINITY, cfl, scheme: Scheme::Explicit, t_grid_output: Vec::new() }
    }

    pub fn semi_implicit(cfl: f64, dt_max: f64) -> Self {
        Self { dt_max, cfl, scheme: Scheme::SemiImplicit, t_grid_output: Vec::new() }
    }

    pub fn with_outputs(mut self, times: Vec<f64>) -> Self {
        self.t_grid_output = times;
        self
    }

    /// `count` equally spaced outputs over the window (including its end).
    pub fn with_uniform_outputs(self, window: &TimeWindow, count: usize) -> Self {
        let times = (1..=count)
            .map(|k| if k == count { window.t_end } else { window.t_start + window.duration() * k as f64 / count as f64 })
            .collect();
        self.with_outputs(times)
    }

    pub fn validate(&self) -> Result<(), EvolveError> {
        if !(self.dt_max > 0.0) {
            return Err(EvolveError::BadControl(format!("dt_max must be positive, got {}", self.dt_max)));
        }
        if !(self.cfl > 0.0) || (self.scheme == Scheme::Explicit && self.cfl > 0.5) {
            return Err(EvolveError::BadControl(format!("cfl {} outside (0, 0.5]", self.cfl)));
        }
        Ok(())
    }

    /// Step size from the stability limit `limit` (the step at `cfl = 1`).
    pub(crate) fn step(&self, limit: f64) -> f64 {
        (self.cfl * limit).min(self.dt_max)
    }

    /// Sorted output times inside `(t_start, t_end]`, always ending at `t_end`.
    /// Requested times within rounding of either end are dropped.
    pub(crate) fn outputs(&self, window: &TimeWindow) -> Vec<f64> {
        let eps = 1e-12 * window.duration().max(window.t_start.abs()).max(window.t_end.abs());
        let mut out: Vec<f64> = self
            .t_grid_output
            .iter()
            .copied()
            .filter(|&t| t > window.t_start + eps && t < window.t_end - eps)
            .collect();
        out.push(window.t_end);
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }
}

#[derive(Debug, thiserror::Error)]
pub enum EvolveError {
    #[error("extinction reached at t = {t}")]
    ExtinctionReached { t: f64, partial: Box<FlowTrace> },
    #[error("convexity lost at t = {t} (node {node})")]
    ConvexityLost { t: f64, node: usize },
    #[error("closure violated at t = {t}")]
    ClosureViolation { t: f64 },
    #[error("graph branch turned vertical at t = {t}")]
    BranchDegenerate { t: f64 },
    #[error("oracle polyline self-intersected at t = {t}")]
    SelfIntersection { t: f64 },
    #[error("invalid step control: {0}")]
    BadControl(String),
    #[error("invalid initial data: {0}")]
    BadInitialData(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

impl EvolveError {
    /// The partial trace carried by an extinction error.
    pub fn into_partial(self) -> Option<FlowTrace> {
        match self {
            EvolveError::ExtinctionReached { partial, .. } => Some(*partial),
            _ => None,
        }
    }
}

/// Runs `step` from `window.t_start` through every output time.
///
/// `step(state, t, dt_cap)` advances the state by at most `dt_cap` and
/// returns the step taken. `snap` stores the current state. Extinction
/// detected by `step` is reported through `Err(None)`.
pub(crate) fn drive<St, S, F>(
    window: &TimeWindow,
    ctl: &StepControl,
    mut trace: FlowTrace,
    mut state: St,
    mut step: S,
    snap: F,
) -> Result<FlowTrace, EvolveError>
where
    S: FnMut(&mut St, f64, f64) -> Result<f64, Option<EvolveError>>,
    F: Fn(&St) -> Snapshot,
{
    ctl.validate()?;
    let mut t = window.t_start;
    trace.push(t, snap(&state));
    for target in ctl.outputs(window) {
        while t < target {
            let remaining = target - t;
            match step(&mut state, t, remaining) {
                Ok(dt) => {
                    t = if dt >= remaining * (1.0 - 1e-12) { target } else { t + dt };
                }
                Err(None) => {
                    return Err(EvolveError::ExtinctionReached { t, partial: Box::new(trace) });
                }
                Err(Some(e)) => return Err(e),
            }
        }
        trace.push(t, snap(&state));
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_outputs_end_exactly_once() {
        // 0.9·(A/2π) for a perturbed circle: t_start + duration rounds below t_end.
        let w = TimeWindow::new(0.0, 0.447_188_203_498_573_3).unwrap();
        let out = StepControl::explicit(0.4).with_uniform_outputs(&w, 10).outputs(&w);
        assert_eq!(out.len(), 10);
        assert_eq!(*out.last().unwrap(), w.t_end);
        let w = TimeWindow::new(-3.0, -0.1).unwrap();
        let ctl = StepControl::explicit(0.4).with_outputs(vec![-3.0 + 1e-15, -1.0, -0.1 - 1e-16]);
        assert_eq!(ctl.outputs(&w), vec![-1.0, -0.1]);
    }
}
