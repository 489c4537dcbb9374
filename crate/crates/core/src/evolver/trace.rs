use serde::{Deserialize, Serialize};

use crate::curve::{CurveError, GraphCurve, Polyline, SupportCurve, TurningAngleCurve};
use crate::diagnostics::DiagnosticsRecord;
use crate::exact::FamilyKind;
use crate::Point;

/// One stored curve of a trace, in the representation of its integrator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "representation", rename_all = "snake_case")]
pub enum Snapshot {
    Polyline(Polyline),
    Support(SupportCurve),
    Turning(TurningAngleCurve),
    Graph(GraphCurve),
}

impl Snapshot {
    pub fn representation(&self) -> &'static str {
        match self {
            Snapshot::Polyline(_) => "polyline",
            Snapshot::Support(_) => "support",
            Snapshot::Turning(_) => "turning",
            Snapshot::Graph(_) => "graph",
        }
    }

    /// Point samples of the snapshot. Graph branches come back as open
    /// polylines `(-v, y)`.
    pub fn to_polyline(&self) -> Result<Polyline, CurveError> {
        match self {
            Snapshot::Polyline(p) => Ok(p.clone()),
            Snapshot::Support(s) => Ok(s.to_polyline()),
            Snapshot::Turning(c) => c.reconstruct_positions(),
            Snapshot::Graph(g) => Ok(g.to_polyline()),
        }
    }
}

/// Metadata carried with a trace.
///
/// `gaussian_center` and `gaussian_time` locate the backward heat kernel used
/// for the Gaussian area: `Θ(t)` is evaluated for `p - x₀` at `t - T₀`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceMeta {
    pub integrator: String,
    pub scheme: String,
    pub nodes: usize,
    #[serde(default)]
    pub family: Option<FamilyKind>,
    #[serde(default = "Point::zeros")]
    pub gaussian_center: Point,
    #[serde(default)]
    pub gaussian_time: f64,
    /// Scale `λ` of a parabolically rescaled trace.
    #[serde(default)]
    pub blow_down_scale: Option<f64>,
}

impl TraceMeta {
    pub fn new(integrator: &str, scheme: &str, nodes: usize) -> Self {
        Self {
            integrator: integrator.to_string(),
            scheme: scheme.to_string(),
            nodes,
            family: None,
            gaussian_center: Point::zeros(),
            gaussian_time: 0.0,
            blow_down_scale: None,
        }
    }

    pub fn with_family(mut self, family: FamilyKind) -> Self {
        self.family = Some(family);
        self
    }

    pub fn with_gaussian_center(mut self, center: Point, time: f64) -> Self {
        self.gaussian_center = center;
        self.gaussian_time = time;
        self
    }
}

/// Time-stamped curves with one diagnostics record per time once annotated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowTrace {
    pub meta: TraceMeta,
    pub times: Vec<f64>,
    pub snapshots: Vec<Snapshot>,
    #[serde(default)]
    pub diagnostics: Vec<DiagnosticsRecord>,
}

impl FlowTrace {
    /// # Panics
    /// If lengths differ or times are not strictly increasing.
    pub fn new(meta: TraceMeta, times: Vec<f64>, snapshots: Vec<Snapshot>) -> Self {
        assert_eq!(times.len(), snapshots.len());
        assert!(times.windows(2).all(|w| w[1] > w[0]), "trace times must increase");
        Self { meta, times, snapshots, diagnostics: Vec::new() }
    }

    pub fn empty(meta: TraceMeta) -> Self {
        Self { meta, times: Vec::new(), snapshots: Vec::new(), diagnostics: Vec::new() }
    }

    pub(crate) fn push(&mut self, t: f64, s: Snapshot) {
        debug_assert!(self.times.last().map_or(true, |&l| t > l));
        self.times.push(t);
        self.snapshots.push(s);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn first_time(&self) -> Option<f64> {
        self.times.first().copied()
    }

    pub fn last_time(&self) -> Option<f64> {
        self.times.last().copied()
    }

    pub fn polylines(&self) -> Result<Vec<Polyline>, CurveError> {
        self.snapshots.iter().map(Snapshot::to_polyline).collect()
    }

    /// Index of the snapshot nearest to `t`.
    pub fn nearest_index(&self, t: f64) -> Option<usize> {
        (0..self.times.len()).min_by(|&a, &b| (self.times[a] - t).abs().total_cmp(&(self.times[b] - t).abs()))
    }
}
