//! Closed forms for the four convex ancient solutions.
//!
//! Canonical poses, all extinct (or with tip) at time 0:
//!
//! | family | curve at time `t` |
//! |---|---|
//! | stationary line | the y-axis |
//! | shrinking circle | circle of radius `√(-2t)` about the origin |
//! | Grim Reaper | `y = t - ln cos x`, `|x| < π/2` |
//! | Angenent oval | `cos x = eᵗ cosh y` |
//!
//! A posed family maps canonical points by
//! `p = translation + scale·R(rotation)·q` and canonical times by
//! `t = scale²·τ`. Turning angles shift by `rotation`.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::curve::{Branch, CurveError, GraphCurve, Polyline, SupportCurve, TurningAngleCurve};
use crate::evolver::{FlowTrace, Snapshot, TraceMeta};
use crate::numerics::{ln_cosh, wrap_angle};
use crate::Point;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExactError {
    #[error("time {t} is outside the window of the family (extinct at {extinction})")]
    TimeOutOfWindow { t: f64, extinction: f64 },
    #[error("clip box does not cut a single arc of the curve")]
    DegenerateClip,
    #[error("noncompact family needs a clip box")]
    MissingClipBox,
    #[error("turning angle {0} is outside the Gauss image")]
    ThetaOutOfRange(f64),
    #[error("point is outside the swept region")]
    OutsideSweptRegion,
    #[error("operation is not supported for the stationary line")]
    Unsupported,
    #[error("family is not compact")]
    NoncompactFamily,
    #[error("scale must be positive, got {0}")]
    BadScale(f64),
    #[error("time window [{0}, {1}] is empty or crosses extinction")]
    BadWindow(f64, f64),
    #[error("node count {0} is too small")]
    TooFewNodes(usize),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    StationaryLine,
    ShrinkingCircle,
    GrimReaper,
    AngenentOval,
}

impl FamilyKind {
    pub fn is_compact(self) -> bool {
        matches!(self, FamilyKind::ShrinkingCircle | FamilyKind::AngenentOval)
    }

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::StationaryLine => "stationary_line",
            FamilyKind::ShrinkingCircle => "shrinking_circle",
            FamilyKind::GrimReaper => "grim_reaper",
            FamilyKind::AngenentOval => "angenent_oval",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [
            FamilyKind::StationaryLine,
            FamilyKind::ShrinkingCircle,
            FamilyKind::GrimReaper,
            FamilyKind::AngenentOval,
        ]
        .into_iter()
        .find(|k| k.name() == s)
    }
}

/// Axis-aligned clip box `(x_min, x_max, y_min, y_max)` for noncompact families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClipBox {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl ClipBox {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Self {
        Self { x_min, x_max, y_min, y_max }
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.y >= self.y_min && p.y <= self.y_max
    }

    fn farthest_corner_distance(&self, p: Point) -> f64 {
        [
            Point::new(self.x_min, self.y_min),
            Point::new(self.x_min, self.y_max),
            Point::new(self.x_max, self.y_min),
            Point::new(self.x_max, self.y_max),
        ]
        .iter()
        .map(|c| (c - p).norm())
        .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeWindow {
    pub t_start: f64,
    pub t_end: f64,
}

impl TimeWindow {
    pub fn new(t_start: f64, t_end: f64) -> Result<Self, ExactError> {
        if !(t_start < t_end) || !t_start.is_finite() || !t_end.is_finite() {
            return Err(ExactError::BadWindow(t_start, t_end));
        }
        Ok(Self { t_start, t_end })
    }

    /// Checks that the window ends before the family's extinction time.
    pub fn check_for(&self, family: &ExactFamily) -> Result<(), ExactError> {
        match family.extinction_time() {
            Some(e) if self.t_end >= e => Err(ExactError::BadWindow(self.t_start, self.t_end)),
            _ => Ok(()),
        }
    }

    pub fn duration(&self) -> f64 {
        self.t_end - self.t_start
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct FamilySpec {
    kind: FamilyKind,
    #[serde(default)]
    rotation: f64,
    #[serde(default = "origin")]
    translation: [f64; 2],
    #[serde(default = "unit")]
    scale: f64,
}

fn origin() -> [f64; 2] {
    [0.0, 0.0]
}

fn unit() -> f64 {
    1.0
}

/// A posed member of one of the four exact families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FamilySpec", into = "FamilySpec")]
pub struct ExactFamily {
    pub kind: FamilyKind,
    pub rotation: f64,
    pub translation: Point,
    pub scale: f64,
}

impl TryFrom<FamilySpec> for ExactFamily {
    type Error = ExactError;

    fn try_from(s: FamilySpec) -> Result<Self, ExactError> {
        ExactFamily::new(s.kind, s.rotation, Point::new(s.translation[0], s.translation[1]), s.scale)
    }
}

impl From<ExactFamily> for FamilySpec {
    fn from(f: ExactFamily) -> Self {
        let scale = if f.kind == FamilyKind::StationaryLine { 1.0 } else { f.scale };
        FamilySpec { kind: f.kind, rotation: f.rotation, translation: [f.translation.x, f.translation.y], scale }
    }
}

impl ExactFamily {
    pub fn new(kind: FamilyKind, rotation: f64, translation: Point, scale: f64) -> Result<Self, ExactError> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(ExactError::BadScale(scale));
        }
        Ok(Self { kind, rotation, translation, scale })
    }

    pub fn canonical(kind: FamilyKind) -> Self {
        Self { kind, rotation: 0.0, translation: Point::zeros(), scale: 1.0 }
    }

    pub fn line() -> Self {
        Self::canonical(FamilyKind::StationaryLine)
    }

    pub fn circle() -> Self {
        Self::canonical(FamilyKind::ShrinkingCircle)
    }

    pub fn grim_reaper() -> Self {
        Self::canonical(FamilyKind::GrimReaper)
    }

    pub fn oval() -> Self {
        Self::canonical(FamilyKind::AngenentOval)
    }

    pub fn with_scale(self, scale: f64) -> Result<Self, ExactError> {
        Self::new(self.kind, self.rotation, self.translation, scale)
    }

    pub fn with_rotation(self, rotation: f64) -> Self {
        Self { rotation, ..self }
    }

    pub fn with_translation(self, translation: Point) -> Self {
        Self { translation, ..self }
    }

    /// Extinction time of compact families (always 0 with this pose model).
    pub fn extinction_time(&self) -> Option<f64> {
        self.kind.is_compact().then_some(0.0)
    }

    fn tau(&self, t: f64) -> f64 {
        t / (self.scale * self.scale)
    }

    fn check_time(&self, t: f64) -> Result<f64, ExactError> {
        match self.extinction_time() {
            Some(e) if !(t < e) => Err(ExactError::TimeOutOfWindow { t, extinction: e }),
            _ => Ok(self.tau(t)),
        }
    }

    pub fn to_world(&self, q: Point) -> Point {
        let (s, c) = self.rotation.sin_cos();
        self.translation + Point::new(c * q.x - s * q.y, s * q.x + c * q.y) * self.scale
    }

    pub fn to_canonical(&self, p: Point) -> Point {
        let (s, c) = self.rotation.sin_cos();
        let d = (p - self.translation) / self.scale;
        Point::new(c * d.x + s * d.y, -s * d.x + c * d.y)
    }

    /// Point with world turning angle `theta` at time `t` (circle, oval,
    /// Grim Reaper).
    pub fn point_at_theta(&self, theta: f64, t: f64) -> Result<Point, ExactError> {
        let tau = self.check_time(t)?;
        let th = wrap_angle(theta - self.rotation);
        let q = match self.kind {
            FamilyKind::StationaryLine => return Err(ExactError::Unsupported),
            FamilyKind::ShrinkingCircle => {
                let r = (-2.0 * tau).sqrt();
                Point::new(r * th.sin(), -r * th.cos())
            }
            FamilyKind::GrimReaper => {
                if th.abs() >= FRAC_PI_2 {
                    return Err(ExactError::ThetaOutOfRange(theta));
                }
                Point::new(th, tau - th.cos().ln())
            }
            FamilyKind::AngenentOval => oval_point_at_theta(th, tau),
        };
        Ok(self.to_world(q))
    }
}

/// `asinh(a·e^{-τ})` without overflow for very negative `τ`.
fn asinh_scaled(a: f64, tau: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let lz = a.abs().ln() - tau;
    if lz < 700.0 {
        (a * (-tau).exp()).asinh()
    } else {
        a.signum() * (lz + (1.0 + (1.0 + (-2.0 * lz).exp()).sqrt()).ln())
    }
}

/// `√(1 - e^{2τ})`.
fn oval_c(tau: f64) -> f64 {
    (-(2.0 * tau).exp_m1()).sqrt()
}

/// Half-height `arccosh(e^{-τ})` of the canonical oval.
pub(crate) fn oval_half_height(tau: f64) -> f64 {
    -tau + (1.0 + oval_c(tau)).ln()
}

/// Canonical oval point at turning angle `θ` (θ = 0 at the bottom tip).
fn oval_point_at_theta(theta: f64, tau: f64) -> Point {
    let c = oval_c(tau);
    let (s, co) = theta.sin_cos();
    Point::new((c * s).asin(), -asinh_scaled(c * co, tau))
}

/// `ln sinh u` for `u ≥ 0`, finite for large `u`.
fn ln_sinh(u: f64) -> f64 {
    if u > 20.0 {
        u - LN_2 + (-(-2.0 * u).exp()).ln_1p()
    } else {
        u.sinh().ln()
    }
}

/// Canonical oval point at the smooth parameter `φ`: `y = -a cos φ`,
/// `x = ± arccos(e^τ cosh y)` with the sign of `sin φ`.
///
/// Uses `1 - e^τ cosh y = 2e^τ sinh(a sin²(φ/2)) sinh(a cos²(φ/2))`, so `x`
/// stays accurate near the tips where `arccos` is ill-conditioned.
fn oval_point_at_phi(phi: f64, tau: f64) -> Point {
    let a = oval_half_height(tau);
    let y = -a * phi.cos();
    let (s, c) = (0.5 * phi).sin_cos();
    let half = (0.5 * (tau + ln_sinh(a * s * s) + ln_sinh(a * c * c))).exp().min(1.0);
    let x = 2.0 * half.asin();
    Point::new(if phi.sin() < 0.0 { -x } else { x }, y)
}

fn oval_theta_at(q: Point, tau: f64) -> f64 {
    // e^τ sinh y in log form: e^τ underflows long before the product does.
    let e_sinh = if q.y == 0.0 { 0.0 } else { q.y.signum() * (tau + ln_sinh(q.y.abs())).exp() };
    q.x.sin().atan2(-e_sinh)
}

/// Curvature `κ(θ, τ)` of the canonical oval.
fn oval_curvature(theta: f64, tau: f64) -> f64 {
    let e2 = (2.0 * tau).exp();
    let (s, c) = theta.sin_cos();
    (c * c + e2 * s * s).sqrt() / oval_c(tau)
}

/// `n` points on `Γ_t`, counterclockwise (convex region on the left).
///
/// Compact families give closed polylines; the Grim Reaper and the line give
/// open polylines clipped to `clip`, with nodes uniform in arc length.
pub fn sample_exact(family: &ExactFamily, t: f64, n: usize, clip: Option<&ClipBox>) -> Result<Polyline, ExactError> {
    if n < 8 {
        return Err(ExactError::TooFewNodes(n));
    }
    let tau = family.check_time(t)?;
    match family.kind {
        FamilyKind::ShrinkingCircle => {
            let r = (-2.0 * tau).sqrt();
            let pts = (0..n)
                .map(|k| {
                    let th = 2.0 * PI * k as f64 / n as f64;
                    family.to_world(Point::new(r * th.sin(), -r * th.cos()))
                })
                .collect();
            Ok(Polyline::closed(pts))
        }
        FamilyKind::AngenentOval => {
            let phis = oval_node_parameters(tau, n);
            Ok(Polyline::closed(phis.into_iter().map(|p| family.to_world(oval_point_at_phi(p, tau))).collect()))
        }
        FamilyKind::GrimReaper => {
            let clip = clip.ok_or(ExactError::MissingClipBox)?;
            let curve = |s: f64| family.to_world(Point::new(s.sinh().atan(), tau + ln_cosh(s)));
            sample_clipped(curve, family.to_world(Point::new(0.0, tau)), family.scale, n, clip)
        }
        FamilyKind::StationaryLine => {
            let clip = clip.ok_or(ExactError::MissingClipBox)?;
            let curve = |s: f64| family.to_world(Point::new(0.0, s));
            sample_clipped(curve, family.to_world(Point::zeros()), family.scale, n, clip)
        }
    }
}

/// Oval nodes equidistributed in the measure `ds/L + dθ/2π`, which keeps
/// nodes on the flat sides and resolves the tips at every time.
fn oval_node_parameters(tau: f64, n: usize) -> Vec<f64> {
    let m = 16 * n + 4096;
    let fine: Vec<f64> = (0..=m).map(|j| 2.0 * PI * j as f64 / m as f64).collect();
    let pts: Vec<Point> = fine.iter().map(|&p| oval_point_at_phi(p, tau)).collect();
    let thetas: Vec<f64> = pts.iter().map(|&q| oval_theta_at(q, tau)).collect();
    let ds: Vec<f64> = pts.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    let dth: Vec<f64> = thetas.windows(2).map(|w| wrap_angle(w[1] - w[0]).abs()).collect();
    let length: f64 = ds.iter().sum();
    let turn: f64 = dth.iter().sum();
    let mut cum = vec![0.0; m + 1];
    for j in 0..m {
        cum[j + 1] = cum[j] + ds[j] / length + dth[j] / turn;
    }
    let total = cum[m];
    // Build the first half and mirror it so that the node set is exactly
    // symmetric under x -> -x.
    let target = |k: usize| total * k as f64 / n as f64;
    let invert = |m_target: f64| {
        let p = cum.partition_point(|&c| c <= m_target).clamp(1, m);
        let (c0, c1) = (cum[p - 1], cum[p]);
        let w = if c1 > c0 { (m_target - c0) / (c1 - c0) } else { 0.0 };
        fine[p - 1] + w * (fine[p] - fine[p - 1])
    };
    let mut phis = vec![0.0; n];
    for k in 1..=n / 2 {
        let phi = if 2 * k == n { PI } else { invert(target(k)) };
        phis[k] = phi;
        if 2 * k != n {
            phis[n - k] = 2.0 * PI - phi;
        }
    }
    phis
}

/// Samples an arc-length parametrized curve inside `clip`, where `curve(0)`
/// is `anchor` and arc length scales by `scale`.
fn sample_clipped<F: Fn(f64) -> Point>(curve: F, anchor: Point, scale: f64, n: usize, clip: &ClipBox) -> Result<Polyline, ExactError> {
    let reach = clip.farthest_corner_distance(anchor) / scale + 1.0;
    let m = 8192;
    let grid: Vec<f64> = (0..=m).map(|j| -reach + 2.0 * reach * j as f64 / m as f64).collect();
    let inside: Vec<bool> = grid.iter().map(|&s| clip.contains(curve(s))).collect();
    let first = inside.iter().position(|&b| b).ok_or(ExactError::DegenerateClip)?;
    let last = inside.iter().rposition(|&b| b).ok_or(ExactError::DegenerateClip)?;
    if inside[first..=last].iter().any(|&b| !b) || last == first {
        return Err(ExactError::DegenerateClip);
    }
    let refine = |mut a: f64, mut b: f64| {
        // `a` inside, `b` outside.
        for _ in 0..80 {
            let mid = 0.5 * (a + b);
            if clip.contains(curve(mid)) {
                a = mid;
            } else {
                b = mid;
            }
        }
        a
    };
    let s0 = if first == 0 { grid[0] } else { refine(grid[first], grid[first - 1]) };
    let s1 = if last == m { grid[m] } else { refine(grid[last], grid[last + 1]) };
    let pts = (0..n).map(|k| curve(s0 + (s1 - s0) * k as f64 / (n - 1) as f64)).collect();
    Ok(Polyline::open(pts))
}

/// Curvature at world turning angle `theta`. The line returns 0.
pub fn exact_curvature(family: &ExactFamily, theta: f64, t: f64) -> Result<f64, ExactError> {
    let tau = family.check_time(t)?;
    let th = wrap_angle(theta - family.rotation);
    let k = match family.kind {
        FamilyKind::StationaryLine => return Ok(0.0),
        FamilyKind::ShrinkingCircle => 1.0 / (-2.0 * tau).sqrt(),
        FamilyKind::GrimReaper => {
            if th.abs() >= FRAC_PI_2 {
                return Err(ExactError::ThetaOutOfRange(theta));
            }
            th.cos()
        }
        FamilyKind::AngenentOval => oval_curvature(th, tau),
    };
    Ok(k / family.scale)
}

/// Canonical arrival time `u(q)`.
fn canonical_arrival(kind: FamilyKind, q: Point) -> Result<f64, ExactError> {
    match kind {
        FamilyKind::StationaryLine => Err(ExactError::Unsupported),
        FamilyKind::ShrinkingCircle => Ok(-0.5 * q.norm_squared()),
        FamilyKind::GrimReaper | FamilyKind::AngenentOval if q.x.abs() >= FRAC_PI_2 => Err(ExactError::OutsideSweptRegion),
        FamilyKind::GrimReaper => Ok(q.y + q.x.cos().ln()),
        FamilyKind::AngenentOval => Ok(q.x.cos().ln() - ln_cosh(q.y)),
    }
}

/// The time `u(p)` at which `Γ_t` passes through `p`.
pub fn exact_arrival_time(family: &ExactFamily, p: Point) -> Result<f64, ExactError> {
    let u = canonical_arrival(family.kind, family.to_canonical(p))?;
    Ok(u * family.scale * family.scale)
}

/// Arrival time with gradient and Hessian `[u_xx, u_xy, u_yy]` in world coordinates.
pub fn arrival_derivatives(family: &ExactFamily, p: Point) -> Result<(f64, Point, [f64; 3]), ExactError> {
    let q = family.to_canonical(p);
    let u = canonical_arrival(family.kind, q)?;
    let (g, h) = match family.kind {
        FamilyKind::ShrinkingCircle => (-q, [-1.0, 0.0, -1.0]),
        FamilyKind::GrimReaper => {
            let tn = q.x.tan();
            (Point::new(-tn, 1.0), [-(1.0 + tn * tn), 0.0, 0.0])
        }
        FamilyKind::AngenentOval => {
            let tn = q.x.tan();
            let th = q.y.tanh();
            (Point::new(-tn, -th), [-(1.0 + tn * tn), 0.0, -(1.0 - th * th)])
        }
        FamilyKind::StationaryLine => unreachable!(),
    };
    // u_world(p) = s² u_c(Rᵀ(p - c)/s): gradient s·R g, Hessian R H Rᵀ.
    let (s, c) = family.rotation.sin_cos();
    let grad = Point::new(c * g.x - s * g.y, s * g.x + c * g.y) * family.scale;
    let [a, b, d] = h;
    let hxx = c * c * a - 2.0 * s * c * b + s * s * d;
    let hxy = s * c * (a - d) + (c * c - s * s) * b;
    let hyy = s * s * a + 2.0 * s * c * b + c * c * d;
    Ok((u * family.scale * family.scale, grad, [hxx, hxy, hyy]))
}

/// Enclosed area `-2πt` of the compact families.
pub fn exact_enclosed_area(family: &ExactFamily, t: f64) -> Result<f64, ExactError> {
    if !family.kind.is_compact() {
        return Err(ExactError::NoncompactFamily);
    }
    family.check_time(t)?;
    Ok(-2.0 * PI * t)
}

/// Curvature on a turning-angle grid.
///
/// Compact families give a closed curve with `n` nodes starting at the
/// world angle `rotation`. The Grim Reaper gives an open curve over
/// canonical angles `[-theta_max, theta_max]`.
pub fn exact_turning_curve(family: &ExactFamily, t: f64, n: usize, theta_max: Option<f64>) -> Result<TurningAngleCurve, ExactError> {
    let theta0 = family.rotation;
    match family.kind {
        FamilyKind::ShrinkingCircle | FamilyKind::AngenentOval => {
            let kappa = (0..n)
                .map(|k| exact_curvature(family, theta0 + 2.0 * PI * k as f64 / n as f64, t))
                .collect::<Result<Vec<_>, _>>()?;
            let base = family.point_at_theta(theta0, t)?;
            Ok(TurningAngleCurve::closed(kappa, theta0, base)?)
        }
        FamilyKind::GrimReaper => {
            let m = theta_max.unwrap_or(1.4);
            if !(m > 0.0 && m < FRAC_PI_2) {
                return Err(ExactError::ThetaOutOfRange(m));
            }
            let kappa = (0..n)
                .map(|k| exact_curvature(family, theta0 - m + 2.0 * m * k as f64 / (n - 1) as f64, t))
                .collect::<Result<Vec<_>, _>>()?;
            let base = family.point_at_theta(theta0 - m, t)?;
            Ok(TurningAngleCurve::open(kappa, theta0 - m, theta0 + m, base)?)
        }
        FamilyKind::StationaryLine => Err(ExactError::Unsupported),
    }
}

/// Support function about `translation` on `n` outward-normal angles.
pub fn exact_support_curve(family: &ExactFamily, t: f64, n: usize) -> Result<SupportCurve, ExactError> {
    if !family.kind.is_compact() {
        return Err(ExactError::NoncompactFamily);
    }
    let h = (0..n)
        .map(|k| {
            let phi = 2.0 * PI * k as f64 / n as f64;
            let p = family.point_at_theta(phi + FRAC_PI_2, t)?;
            Ok((p - family.translation).dot(&Point::new(phi.cos(), phi.sin())))
        })
        .collect::<Result<Vec<_>, ExactError>>()?;
    Ok(SupportCurve::new(h, family.translation)?)
}

/// The two graphs `x = -v^±(y)` of a compact family over the y-axis, on the
/// cosine grid used by the free-endpoint graph integrator. Needs an
/// unrotated pose.
pub fn exact_graph_branches(family: &ExactFamily, t: f64, n: usize) -> Result<(GraphCurve, GraphCurve), ExactError> {
    if family.rotation != 0.0 {
        return Err(ExactError::Unsupported);
    }
    if n < 3 {
        return Err(ExactError::TooFewNodes(n));
    }
    let tau = family.check_time(t)?;
    let (half, width): (f64, Box<dyn Fn(f64) -> f64>) = match family.kind {
        FamilyKind::ShrinkingCircle => {
            let r2 = -2.0 * tau;
            (r2.sqrt(), Box::new(move |y: f64| (r2 - y * y).max(0.0).sqrt()))
        }
        FamilyKind::AngenentOval => (
            oval_half_height(tau),
            Box::new(move |y: f64| (tau + ln_cosh(y)).exp().min(1.0).acos()),
        ),
        _ => return Err(ExactError::NoncompactFamily),
    };
    let (s, c) = (family.scale, family.translation);
    let (a, b) = (c.y - s * half, c.y + s * half);
    let x = |y: f64| s * width(((y - c.y) / s).clamp(-half, half));
    let plus = GraphCurve::cosine(a, b, n, Branch::Plus, |y| -(c.x + x(y)))?;
    let minus = GraphCurve::cosine(a, b, n, Branch::Minus, |y| -(c.x - x(y)))?;
    Ok((plus, minus))
}

/// Trace of exact polylines at the given times.
pub fn exact_trace(family: &ExactFamily, times: &[f64], n: usize, clip: Option<&ClipBox>) -> Result<FlowTrace, ExactError> {
    let snapshots = times
        .iter()
        .map(|&t| sample_exact(family, t, n, clip).map(Snapshot::Polyline))
        .collect::<Result<Vec<_>, _>>()?;
    let meta = TraceMeta::new("exact", "closed_form", n).with_family(family.kind);
    Ok(FlowTrace::new(meta, times.to_vec(), snapshots))
}

/// Trace of exact turning-angle curves at the given times.
pub fn exact_turning_trace(family: &ExactFamily, times: &[f64], n: usize, theta_max: Option<f64>) -> Result<FlowTrace, ExactError> {
    let snapshots = times
        .iter()
        .map(|&t| exact_turning_curve(family, t, n, theta_max).map(Snapshot::Turning))
        .collect::<Result<Vec<_>, _>>()?;
    let meta = TraceMeta::new("exact", "closed_form", n).with_family(family.kind);
    Ok(FlowTrace::new(meta, times.to_vec(), snapshots))
}
