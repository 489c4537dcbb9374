//! JSON scenarios: initial data, an integrator, a time window and a list of
//! audits, run end to end with artifacts written to an output directory.
//!
//! ```json
//! {
//!   "version": 1,
//!   "name": "circle_selfsimilar",
//!   "initial": { "kind": "exact", "family": { "kind": "shrinking_circle" }, "nodes": 256 },
//!   "integrator": "support",
//!   "window": { "t_start": -2.0, "t_end": -0.5 },
//!   "step": { "cfl": 0.4, "scheme": "explicit" },
//!   "audits": [ { "name": "radius_law", "tolerance": 1e-4 } ]
//! }
//! ```

mod audits;
mod initial;

pub use audits::{list_audits, AuditBound, AuditInfo, AUDITS};
pub use initial::{fourier_support, random_convex_polygon, rounded_polygon_points, rounded_polygon_support, turning_from_support, InitialData};

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::arrival::{closed_form_field, reconstruct_arrival, ArrivalTimeField, FieldSource, Grid};
use crate::curve::{merge_graphs, split_graphs, GraphCurve};
use crate::diagnostics::{annotate, DiagnosticsConfig, TipSide, Verdict};
use crate::evolver::{evolve_graph, evolve_kappa, evolve_polyline_oracle, evolve_support, EvolveError, FlowTrace, GraphBoundary, Snapshot, StepControl, TraceMeta};
use crate::exact::{exact_graph_branches, exact_support_curve, exact_trace, exact_turning_curve, sample_exact, ExactFamily, TimeWindow};
use crate::io::{write_arrival_csv, write_json, write_trace_dir, IoError};
use crate::Point;

/// Schema version accepted by [`Scenario::from_json`].
pub const SCENARIO_VERSION: u32 = 1;

/// Environment variable naming the default output root.
pub const OUTPUT_ENV: &str = "FLOWLAB_OUT";

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error("run failed: {0}")]
    Run(#[from] crate::Error),
}

impl ScenarioError {
    /// Process exit code: 2 for configuration, 3 for I/O, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            ScenarioError::Config(_) => 2,
            ScenarioError::Io(_) => 3,
            ScenarioError::Run(_) => 1,
        }
    }
}

impl From<EvolveError> for ScenarioError {
    fn from(e: EvolveError) -> Self {
        ScenarioError::Run(e.into())
    }
}

impl From<crate::exact::ExactError> for ScenarioError {
    fn from(e: crate::exact::ExactError) -> Self {
        ScenarioError::Run(e.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegratorKind {
    Support,
    Kappa,
    Graph,
    Oracle,
    /// Closed-form snapshots of the exact family named by the initial data.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputSpacing {
    #[default]
    Uniform,
    /// Geometric in `|t|`; both window ends must be negative.
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditRequest {
    pub name: String,
    #[serde(default)]
    pub tolerance: Option<f64>,
    /// Expected verdict of a classifying audit (`"Strip"`, `"LineMult2"`, ...).
    #[serde(default)]
    pub expect: Option<String>,
    /// Time of the snapshot examined by single-snapshot audits.
    #[serde(default)]
    pub t: Option<f64>,
    #[serde(default)]
    pub side: Option<TipSide>,
    /// Fit window of `grim_fit_r`, or reflection line `x = alpha` of
    /// `reflection_symmetry`.
    #[serde(default)]
    pub radius: Option<f64>,
    #[serde(default)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlowDownSpec {
    pub lambdas: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrivalSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub h: f64,
    /// Default: closed form for exact initial data, reconstruction otherwise.
    #[serde(default)]
    pub source: Option<FieldSource>,
    /// Closed-form nodes with `u` below this are masked (default: window start).
    #[serde(default)]
    pub t_floor: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub version: u32,
    pub name: String,
    pub initial: InitialData,
    pub integrator: IntegratorKind,
    pub window: TimeWindow,
    #[serde(default)]
    pub step: Option<StepControl>,
    #[serde(default)]
    pub output_count: Option<usize>,
    #[serde(default)]
    pub output_spacing: OutputSpacing,
    #[serde(default)]
    pub audits: Vec<AuditRequest>,
    #[serde(default)]
    pub diagnostics: DiagnosticsConfig,
    #[serde(default)]
    pub blow_down: Option<BlowDownSpec>,
    #[serde(default)]
    pub arrival: Option<ArrivalSpec>,
    #[serde(default)]
    pub graph_boundary: Option<GraphBoundary>,
    /// Output directory, relative to the output root (default: `name`).
    #[serde(default)]
    pub outputs: Option<PathBuf>,
}

const ARRIVAL_AUDITS: [&str; 3] = ["arrival_concavity", "level_set_residual", "w_transform"];

impl Scenario {
    /// Parses and validates a scenario document.
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| ScenarioError::Config(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path).map_err(|source| IoError::File { path: path.to_path_buf(), source })?;
        Self::from_json(&text).map_err(|e| match e {
            ScenarioError::Config(m) => ScenarioError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let bad = |m: String| Err(ScenarioError::Config(m));
        if self.version != SCENARIO_VERSION {
            return bad(format!("unsupported version {} (expected {SCENARIO_VERSION})", self.version));
        }
        if self.name.is_empty() {
            return bad("name is empty".into());
        }
        let w = self.window;
        if TimeWindow::new(w.t_start, w.t_end).is_err() {
            return bad(format!("window [{}, {}] is empty", w.t_start, w.t_end));
        }
        if self.output_spacing == OutputSpacing::Log && !(w.t_end < 0.0) {
            return bad("log output spacing needs a window inside t < 0".into());
        }
        if self.initial.nodes() < 8 {
            return bad(format!("{} nodes is too few", self.initial.nodes()));
        }
        if let Some(f) = self.initial.family() {
            w.check_for(f).or_else(|_| bad(format!("window ends after the extinction time of {}", f.kind.name())))?;
        }
        match (self.integrator, self.initial.family()) {
            (IntegratorKind::Exact, None) => return bad("the exact integrator needs exact initial data".into()),
            (IntegratorKind::Support | IntegratorKind::Graph, Some(f)) if !f.kind.is_compact() => {
                return bad(format!("{:?} integrator needs a closed curve, got {}", self.integrator, f.kind.name()))
            }
            _ => {}
        }
        if self.integrator != IntegratorKind::Exact {
            match &self.step {
                None => return bad("numerical integrators need `step`".into()),
                Some(s) => s.validate().or_else(|e| bad(e.to_string()))?,
            }
        }
        for a in &self.audits {
            if !AUDITS.iter().any(|spec| spec.name == a.name) {
                return bad(format!("unknown audit `{}`", a.name));
            }
            if let Some(t) = a.tolerance {
                if !(t > 0.0) || !t.is_finite() {
                    return bad(format!("audit `{}`: tolerance must be positive", a.name));
                }
            }
            if ARRIVAL_AUDITS.contains(&a.name.as_str()) && self.arrival.is_none() {
                return bad(format!("audit `{}` needs an `arrival` grid", a.name));
            }
        }
        if let Some(b) = &self.blow_down {
            if b.lambdas.is_empty() || b.lambdas.iter().any(|l| !(*l > 0.0)) {
                return bad("blow-down scales must be positive".into());
            }
        }
        if let Some(a) = &self.arrival {
            if let Err(e) = Grid::new(a.x_min, a.x_max, a.y_min, a.y_max, a.h) {
                return bad(e.to_string());
            }
            if a.source == Some(FieldSource::ClosedForm) && self.initial.family().is_none() {
                return bad("a closed-form arrival field needs exact initial data".into());
            }
        }
        Ok(())
    }

    /// Output times after the window start, always ending at the window end.
    pub fn output_times(&self) -> Vec<f64> {
        let w = self.window;
        let explicit = self.step.as_ref().map(|s| s.t_grid_output.clone()).unwrap_or_default();
        let mut out: Vec<f64> = if !explicit.is_empty() {
            explicit
        } else {
            let m = self.output_count.unwrap_or(10).max(1);
            (1..=m)
                .map(|k| {
                    let s = k as f64 / m as f64;
                    match self.output_spacing {
                        OutputSpacing::Uniform => w.t_start + w.duration() * s,
                        OutputSpacing::Log => -((-w.t_start).ln() * (1.0 - s) + (-w.t_end).ln() * s).exp(),
                    }
                })
                .collect()
        };
        out.retain(|&t| t > w.t_start && t < w.t_end);
        out.push(w.t_end);
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }
}

/// Result of one audit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditResult {
    pub name: String,
    pub verdict: Verdict,
    /// Measured value; absent when the audit could not be evaluated.
    pub value: Option<f64>,
    pub tolerance: f64,
    #[serde(default)]
    pub at: Option<Point>,
    #[serde(default)]
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario: String,
    pub integrator: IntegratorKind,
    pub passed: bool,
    pub audits: Vec<AuditResult>,
    pub wall_time_s: f64,
    pub artifacts: Vec<PathBuf>,
    /// Set when the flow reached extinction inside the window.
    #[serde(default)]
    pub truncated_at: Option<f64>,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

/// Output root: `FLOWLAB_OUT` when set, else `flowlab_out` in the working
/// directory.
pub fn default_output_root() -> PathBuf {
    std::env::var_os(OUTPUT_ENV).map_or_else(|| PathBuf::from("flowlab_out"), PathBuf::from)
}

/// Everything an audit may look at.
pub struct RunContext<'a> {
    pub scenario: &'a Scenario,
    pub trace: &'a FlowTrace,
    pub field: Option<&'a ArrivalTimeField>,
    /// Extinction time: exact for exact data, from the area law otherwise.
    pub extinction: Option<f64>,
}

/// Runs the scenario at `path`, writing artifacts under `out_root`.
///
/// The scenario is parsed and validated before anything is written.
pub fn run_scenario(path: &Path, out_root: &Path) -> Result<RunReport, ScenarioError> {
    let scenario = Scenario::load(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    run_loaded(&scenario, base, out_root)
}

/// Runs an already parsed scenario. Relative paths in the initial data are
/// resolved against `base`.
pub fn run_loaded(scenario: &Scenario, base: &Path, out_root: &Path) -> Result<RunReport, ScenarioError> {
    let start = Instant::now();
    let (mut trace, truncated_at) = integrate(scenario, base)?;
    annotate(&mut trace).map_err(crate::Error::from)?;
    let extinction = extinction_time(scenario, &trace);
    let field = match &scenario.arrival {
        Some(spec) => Some(arrival_field(scenario, spec, &trace)?),
        None => None,
    };
    let ctx = RunContext { scenario, trace: &trace, field: field.as_ref(), extinction };
    let audits: Vec<AuditResult> = scenario.audits.iter().map(|req| audits::run_audit(&ctx, req)).collect();
    let passed = audits.iter().all(|a| !a.verdict.is_fail());

    let dir = out_root.join(scenario.outputs.clone().unwrap_or_else(|| PathBuf::from(&scenario.name)));
    let mut artifacts = write_trace_dir(&trace, &dir, scenario.initial.family())?;
    if let Some(f) = &field {
        let p = dir.join("arrival.csv");
        write_arrival_csv(&p, f)?;
        artifacts.push(p);
    }
    let report_path = dir.join("report.json");
    artifacts.push(report_path.clone());
    let report = RunReport {
        scenario: scenario.name.clone(),
        integrator: scenario.integrator,
        passed,
        audits,
        wall_time_s: start.elapsed().as_secs_f64(),
        artifacts,
        truncated_at,
    };
    write_json(&report_path, &report)?;
    Ok(report)
}

fn extinction_time(scenario: &Scenario, trace: &FlowTrace) -> Option<f64> {
    if let Some(f) = scenario.initial.family() {
        return f.extinction_time();
    }
    let first = trace.diagnostics.first()?;
    (first.area.is_finite() && trace.snapshots[0].to_polyline().ok()?.closed)
        .then(|| first.t + first.area / (2.0 * std::f64::consts::PI))
}

fn arrival_field(scenario: &Scenario, spec: &ArrivalSpec, trace: &FlowTrace) -> Result<ArrivalTimeField, ScenarioError> {
    let grid = Grid::new(spec.x_min, spec.x_max, spec.y_min, spec.y_max, spec.h).map_err(crate::Error::from)?;
    let family = scenario.initial.family();
    let source = spec.source.unwrap_or(if family.is_some() { FieldSource::ClosedForm } else { FieldSource::Reconstructed });
    Ok(match (source, family) {
        (FieldSource::ClosedForm, Some(f)) => {
            closed_form_field(f, &grid, Some(spec.t_floor.unwrap_or(scenario.window.t_start)))
        }
        _ => reconstruct_arrival(trace, &grid).map_err(crate::Error::from)?,
    })
}

/// Gaussian centre and time of a trace started from non-exact data: the
/// initial centroid and the area-law extinction time.
fn estimated_center(p: &crate::curve::Polyline, t0: f64) -> (Point, f64) {
    (p.centroid(), t0 + p.signed_area().abs() / (2.0 * std::f64::consts::PI))
}

/// Builds the trace. Extinction inside the window keeps the partial trace
/// and reports the last stored time.
fn integrate(s: &Scenario, base: &Path) -> Result<(FlowTrace, Option<f64>), ScenarioError> {
    let w = s.window;
    let outputs = s.output_times();
    let n = s.initial.nodes();
    let ctl = || s.step.clone().expect("validated").with_outputs(outputs.clone());
    let exact = s.initial.family().copied();
    let t0 = match &s.initial {
        InitialData::Exact { t, .. } => t.unwrap_or(w.t_start),
        _ => w.t_start,
    };
    if (t0 - w.t_start).abs() > 1e-12 * (1.0 + w.t_start.abs()) {
        return Err(ScenarioError::Config(format!("initial time {t0} differs from the window start {}", w.t_start)));
    }
    let (clip, theta_max) = match &s.initial {
        InitialData::Exact { clip, theta_max, .. } => (*clip, *theta_max),
        _ => (None, None),
    };
    let result = match s.integrator {
        IntegratorKind::Exact => {
            let f = exact.expect("validated");
            let mut times = vec![w.t_start];
            times.extend(outputs.iter().copied());
            Ok(exact_trace(&f, &times, n, clip.as_ref())?)
        }
        IntegratorKind::Support => {
            let h = match &exact {
                Some(f) => exact_support_curve(f, t0, n)?,
                None => initial::non_exact_support(&s.initial, base)?,
            };
            evolve_support(&h, &w, &ctl())
        }
        IntegratorKind::Kappa => {
            let c = match &exact {
                Some(f) => exact_turning_curve(f, t0, n, theta_max)?,
                None => initial::turning_from_support(&initial::non_exact_support(&s.initial, base)?)?,
            };
            evolve_kappa(&c, &w, &ctl())
        }
        IntegratorKind::Oracle => {
            let p = match &exact {
                Some(f) => sample_exact(f, t0, n, clip.as_ref())?,
                None => initial::non_exact_polyline(&s.initial, base)?,
            };
            evolve_polyline_oracle(&p, &w, &ctl())
        }
        IntegratorKind::Graph => graph_run(s, exact.as_ref(), t0, n, base, &ctl()),
    };
    let (mut trace, truncated) = match result {
        Ok(tr) => (tr, None),
        Err(e @ EvolveError::ExtinctionReached { .. }) => {
            let tr = e.into_partial().expect("extinction carries a trace");
            let last = tr.last_time();
            (tr, last)
        }
        Err(e) => return Err(e.into()),
    };
    match &exact {
        Some(f) => {
            trace.meta.family = Some(f.kind);
            trace.meta.gaussian_center = f.translation;
            trace.meta.gaussian_time = f.extinction_time().unwrap_or(0.0);
        }
        None => {
            let p0 = trace.snapshots[0].to_polyline().map_err(crate::Error::from)?;
            let (c, t) = estimated_center(&p0, trace.times[0]);
            trace.meta = trace.meta.clone().with_gaussian_center(c, t);
        }
    }
    Ok((trace, truncated))
}

/// Evolves both graph branches and merges them into closed polylines.
fn graph_run(s: &Scenario, exact: Option<&ExactFamily>, t0: f64, n: usize, base: &Path, ctl: &StepControl) -> Result<FlowTrace, EvolveError> {
    let boundary = s.graph_boundary.unwrap_or(GraphBoundary::FreeVerticalTangent);
    let bad = |m: String| EvolveError::BadInitialData(m);
    let (plus, minus) = match (exact, boundary) {
        (Some(f), GraphBoundary::FreeVerticalTangent) if f.rotation == 0.0 => {
            exact_graph_branches(f, t0, n).map_err(|e| bad(e.to_string()))?
        }
        _ => {
            let p = match exact {
                Some(f) => sample_exact(f, t0, 8 * n, None).map_err(|e| bad(e.to_string()))?,
                None => initial::non_exact_polyline(&s.initial, base).map_err(|e| bad(e.to_string()))?,
            };
            let (plus, minus) = split_graphs(&p, None, 8 * n)?;
            match boundary {
                GraphBoundary::Fixed => (resample(&plus, n, false)?, resample(&minus, n, false)?),
                GraphBoundary::FreeVerticalTangent => (resample(&plus, n, true)?, resample(&minus, n, true)?),
            }
        }
    };
    let w = s.window;
    let (tp, tm) = rayon::join(|| evolve_graph(&plus, &w, ctl, boundary), || evolve_graph(&minus, &w, ctl, boundary));
    let finish = |r: Result<FlowTrace, EvolveError>| match r {
        Ok(tr) => Ok((tr, None)),
        Err(EvolveError::ExtinctionReached { t, partial }) => Ok((*partial, Some(t))),
        Err(e) => Err(e),
    };
    let (a, ta) = finish(tp)?;
    let (b, tb) = finish(tm)?;
    let merged = merge_traces(&a, &b);
    match ta.or(tb) {
        Some(t) => Err(EvolveError::ExtinctionReached { t, partial: Box::new(merged) }),
        None => Ok(merged),
    }
}

fn resample(g: &GraphCurve, n: usize, cosine: bool) -> Result<GraphCurve, crate::curve::CurveError> {
    let f = |y: f64| g.value_at(y);
    if cosine {
        GraphCurve::cosine(g.a_minus(), g.a_plus(), n, g.side(), f)
    } else {
        GraphCurve::uniform(g.a_minus(), g.a_plus(), n, g.side(), f)
    }
}

/// Joins the snapshots the two branch traces share.
fn merge_traces(plus: &FlowTrace, minus: &FlowTrace) -> FlowTrace {
    let k = plus.len().min(minus.len());
    let snaps = (0..k)
        .map(|i| match (&plus.snapshots[i], &minus.snapshots[i]) {
            (Snapshot::Graph(a), Snapshot::Graph(b)) => Snapshot::Polyline(merge_graphs(a, b)),
            _ => unreachable!("graph integrator stores graph snapshots"),
        })
        .collect();
    let mut meta = TraceMeta::new("graph", &plus.meta.scheme, plus.meta.nodes);
    meta.family = plus.meta.family;
    FlowTrace::new(meta, plus.times[..k].to_vec(), snaps)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CIRCLE: &str = r#"{
        "version": 1,
        "name": "circle",
        "initial": { "kind": "exact", "family": { "kind": "shrinking_circle" }, "nodes": 64 },
        "integrator": "support",
        "window": { "t_start": -2.0, "t_end": -1.0 },
        "step": { "cfl": 0.4, "scheme": "explicit" },
        "output_count": 4,
        "audits": [ { "name": "radius_law", "tolerance": 1e-3 }, { "name": "area_law", "tolerance": 0.05 } ]
    }"#;

    #[test]
    fn parses_and_runs_a_small_circle() {
        let s = Scenario::from_json(CIRCLE).unwrap();
        assert_eq!(s.output_times(), vec![-1.75, -1.5, -1.25, -1.0]);
        let dir = tempfile::tempdir().unwrap();
        let r = run_loaded(&s, Path::new("."), dir.path()).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(dir.path().join("circle/report.json").exists());
        assert!(dir.path().join("circle/curve_000004.csv").exists());
    }

    #[test]
    fn missing_window_is_a_config_error() {
        let text = CIRCLE.replace(r#""window": { "t_start": -2.0, "t_end": -1.0 },"#, "");
        let e = Scenario::from_json(&text).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn unknown_keys_and_audits_are_rejected() {
        let text = CIRCLE.replace(r#""version": 1,"#, r#""version": 1, "colour": "red","#);
        assert!(matches!(Scenario::from_json(&text), Err(ScenarioError::Config(_))));
        let text = CIRCLE.replace("radius_law", "radius_lore");
        assert!(matches!(Scenario::from_json(&text), Err(ScenarioError::Config(_))));
        let text = CIRCLE.replace("1e-3", "-1e-3");
        assert!(matches!(Scenario::from_json(&text), Err(ScenarioError::Config(_))));
    }

    #[test]
    fn window_past_extinction_is_rejected() {
        let text = CIRCLE.replace(r#""t_end": -1.0"#, r#""t_end": 0.5"#);
        assert!(matches!(Scenario::from_json(&text), Err(ScenarioError::Config(_))));
    }

    #[test]
    fn log_outputs_are_geometric() {
        let text = CIRCLE.replace(r#""output_count": 4,"#, r#""output_count": 2, "output_spacing": "log","#);
        let s = Scenario::from_json(&text).unwrap();
        let t = s.output_times();
        assert!((t[0] + 2f64.sqrt()).abs() < 1e-12 && t[1] == -1.0);
    }
}
