//! Curve shortening flow laboratory.
//!
//! `flowlab` evolves convex planar curves by curve shortening flow and
//! measures the quantities that separate the four convex ancient solutions
//! (stationary line, shrinking circle, Grim Reaper, Angenent oval) from
//! everything else:
//!
//! - [`exact`]: closed forms for the four families (positions, curvature by
//!   turning angle, enclosed area, arrival time).
//! - [`curve`]: convex-curve representations (support function, curvature by
//!   turning angle, graphs over an axis, polylines) and their conversions.
//! - [`evolver`]: integrators for the support-function, curvature and graph
//!   formulations, plus a front-tracking polyline oracle.
//! - [`diagnostics`]: area laws, Gaussian area, Harnack and displacement
//!   monotonicity, strip detection, Grim Reaper tip fitting, blow-downs and
//!   reflection symmetry.
//! - [`arrival`]: arrival-time fields and their concavity and level-set audits.
//! - [`scenario`]: JSON scenario runner behind the `flowlab` binary.
//!
//! Conventions: curves are oriented counterclockwise, the turning angle is
//! the angle of the unit tangent, and the support function is indexed by the
//! angle of the outward normal (turning angle minus π/2).

pub mod arrival;
pub mod curve;
pub mod diagnostics;
pub mod evolver;
pub mod exact;
pub mod io;
pub mod scenario;

mod numerics;

/// A point (or vector) in the plane.
pub type Point = nalgebra::Vector2<f64>;

pub use curve::{GraphCurve, Polyline, SupportCurve, TurningAngleCurve};
pub use evolver::{FlowTrace, Snapshot, StepControl};
pub use exact::{ExactFamily, FamilyKind, TimeWindow};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Exact(#[from] exact::ExactError),
    #[error(transparent)]
    Curve(#[from] curve::CurveError),
    #[error(transparent)]
    Evolve(#[from] evolver::EvolveError),
    #[error(transparent)]
    Diagnostics(#[from] diagnostics::DiagnosticsError),
    #[error(transparent)]
    Arrival(#[from] arrival::ArrivalError),
    #[error(transparent)]
    Io(#[from] io::IoError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
