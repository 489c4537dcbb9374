//! Convex-curve representations and conversions between them.

mod graph;
mod hausdorff;
mod polyline;
mod support;
mod turning;

pub use graph::{merge_graphs, split_graphs, Branch, GraphCurve};
pub use hausdorff::{directed_hausdorff, hausdorff_distance};
pub(crate) use hausdorff::SegmentIndex;
pub use polyline::{point_segment_distance, Polyline};
pub use support::{support_from_polyline, SupportCurve};
pub use turning::{TurningAngleCurve, CLOSURE_REPAIR_LIMIT};

pub(crate) use graph::{cosine_grid, second_divided_difference};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CurveError {
    #[error("unsupported node count {0}")]
    BadNodeCount(usize),
    #[error("non-finite input value")]
    NonFinite,
    #[error("grid is not strictly increasing")]
    BadGrid,
    #[error("radius of curvature {rho} at node {node} is not positive")]
    NotStrictlyConvex { node: usize, rho: f64 },
    #[error("curvature at node {node} is not positive")]
    NonPositiveCurvature { node: usize },
    #[error("polyline is not closed and convex")]
    NotConvex,
    #[error("graph branch has the wrong convexity at node {node}")]
    BranchNotConvex { node: usize },
    #[error("closure gap {gap:e} exceeds tolerance for length {length}")]
    ClosureViolation { gap: f64, length: f64 },
    #[error("Gauss range {0} exceeds π")]
    GaussRangeTooLarge(f64),
}
