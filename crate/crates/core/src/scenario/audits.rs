use serde::Serialize;

use super::{initial::turning_from_support, AuditRequest, AuditResult, RunContext};
use crate::arrival::{concavity_audit, concavity_symbolic, level_set_residual, level_set_symbolic, rectangle_claim_audit, w_transform_audit, FieldSource};
use crate::curve::{directed_hausdorff, hausdorff_distance, Polyline};
use crate::diagnostics::{
    blow_down, classify_blow_down, clipped_area_below_axis, displacement_series, entropy_bound_check, fit_grim_reaper, harnack_check, reflection_defect, theta_monotonicity, tip_frame,
    width_and_strip, BlowDownKind, TipSide, Verdict,
};
use crate::evolver::{FlowTrace, Snapshot};
use crate::exact::{exact_turning_trace, sample_exact, ClipBox, FamilyKind};
use crate::Point;

/// How a measured value is compared with the tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AuditBound {
    /// Passes when `value ≤ tol`.
    Upper,
    /// Passes when `value ≥ -tol`.
    Lower,
    /// Passes when the reported class equals `expect`; `value ≤ tol` is
    /// reported alongside.
    Class,
}

/// A registered audit.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AuditInfo {
    pub name: &'static str,
    /// The property checked.
    pub statement: &'static str,
    pub default_tolerance: f64,
    pub bound: AuditBound,
}

/// Outcome of an audit body before the verdict is applied.
struct Measured {
    value: f64,
    at: Option<Point>,
    detail: String,
    /// `Some` for class audits: whether the class matched.
    class_match: Option<bool>,
    /// Property outside its hypotheses: informational only.
    info: bool,
}

impl Measured {
    fn value(value: f64) -> Self {
        Self { value, at: None, detail: String::new(), class_match: None, info: false }
    }

    fn at(mut self, p: Point) -> Self {
        self.at = Some(p);
        self
    }

    fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = d.into();
        self
    }
}

enum Skip {
    NotApplicable(String),
    Failed(String),
}

impl<E: std::fmt::Display> From<E> for Skip {
    fn from(e: E) -> Self {
        Skip::Failed(e.to_string())
    }
}

type Body = fn(&RunContext, &AuditRequest, f64) -> Result<Measured, Skip>;

pub const AUDITS: [AuditInfo; 17] = [
    AuditInfo { name: "radius_law", statement: "shrinking circle has radius √(−2t)", default_tolerance: 1e-4, bound: AuditBound::Upper },
    AuditInfo { name: "area_law", statement: "compact solutions lose area at rate 2π: A(t) = −2π(t − T)", default_tolerance: 1e-2, bound: AuditBound::Upper },
    AuditInfo { name: "clipped_area_rate", statement: "area below the axis of a noncompact solution decreases at rate in (0, π]", default_tolerance: 1e-2, bound: AuditBound::Upper },
    AuditInfo { name: "exact_hausdorff", statement: "numerical trace stays Hausdorff-close to the exact family", default_tolerance: 5e-3, bound: AuditBound::Upper },
    AuditInfo { name: "theta_monotonicity", statement: "Gaussian area Θ(t) is nonincreasing (monotonicity formula)", default_tolerance: 1e-6, bound: AuditBound::Upper },
    AuditInfo { name: "entropy_bound", statement: "scaled Gaussian mass sup_k k^(−1/2)∫exp(−|p|²/k) stays below a universal constant", default_tolerance: 10.0, bound: AuditBound::Upper },
    AuditInfo { name: "harnack", statement: "curvature at fixed turning angle is nondecreasing in time on ancient solutions", default_tolerance: 1e-6, bound: AuditBound::Upper },
    AuditInfo { name: "displacement", statement: "ℓ(t) + t is nonincreasing on ancient solutions", default_tolerance: 1e-6, bound: AuditBound::Upper },
    AuditInfo { name: "strip_verdict", statement: "a convex ancient solution is entire or lies in a strip", default_tolerance: 5e-2, bound: AuditBound::Class },
    AuditInfo { name: "blow_down_class", statement: "the blow-down is a circle, a line, or a line of multiplicity two", default_tolerance: 1e-1, bound: AuditBound::Class },
    AuditInfo { name: "grim_fit_r", statement: "the tips of a solution in a strip of width π are asymptotic to unit Grim Reapers", default_tolerance: 5e-2, bound: AuditBound::Upper },
    AuditInfo { name: "reflection_symmetry", statement: "a solution in a strip is symmetric across the line through its tips", default_tolerance: 1e-8, bound: AuditBound::Upper },
    AuditInfo { name: "arrival_concavity", statement: "the arrival time is concave", default_tolerance: 1e-8, bound: AuditBound::Upper },
    AuditInfo { name: "level_set_residual", statement: "the arrival time solves −|Du| div(Du/|Du|) = 1", default_tolerance: 1e-6, bound: AuditBound::Upper },
    AuditInfo { name: "w_transform", statement: "w = −log(u − t) is convex for t below the arrival time", default_tolerance: 1e-8, bound: AuditBound::Lower },
    AuditInfo { name: "rectangle_claim", statement: "the half-width at the tip levels spans a rectangle of area at least −πt/4", default_tolerance: 1e-9, bound: AuditBound::Lower },
    AuditInfo { name: "convexity", statement: "convexity is preserved by the flow (count of nonconvex snapshots)", default_tolerance: 0.5, bound: AuditBound::Upper },
];

const BODIES: [Body; 17] = [
    radius_law,
    area_law,
    clipped_area_rate,
    exact_hausdorff,
    theta_monotone,
    entropy_bound,
    harnack,
    displacement,
    strip_verdict,
    blow_down_class,
    grim_fit_r,
    reflection_symmetry,
    arrival_concavity,
    level_set,
    w_transform,
    rectangle_claim,
    convexity,
];

/// The registry as printed by `flowlab audits`.
pub fn list_audits() -> &'static [AuditInfo] {
    &AUDITS
}

pub(super) fn run_audit(ctx: &RunContext, req: &AuditRequest) -> AuditResult {
    let k = AUDITS.iter().position(|a| a.name == req.name).expect("validated against the registry");
    let spec = AUDITS[k];
    let tolerance = req.tolerance.unwrap_or(match spec.name {
        "theta_monotonicity" => ctx.scenario.diagnostics.theta_monotone_tolerance,
        "harnack" => ctx.scenario.diagnostics.harnack_tolerance,
        "displacement" => ctx.scenario.diagnostics.displacement_tolerance,
        "entropy_bound" => ctx.scenario.diagnostics.entropy_ceiling,
        "blow_down_class" => ctx.scenario.diagnostics.theta_tolerance,
        "strip_verdict" => ctx.scenario.diagnostics.strip_growth,
        _ => spec.default_tolerance,
    });
    let result = |verdict, value, at, detail| AuditResult { name: spec.name.to_string(), verdict, value, tolerance, at, detail };
    match BODIES[k](ctx, req, tolerance) {
        Ok(m) => {
            let verdict = if m.info {
                Verdict::Info
            } else {
                match spec.bound {
                    AuditBound::Upper => Verdict::from_check(m.value <= tolerance),
                    AuditBound::Lower => Verdict::from_check(m.value >= -tolerance),
                    AuditBound::Class => m.class_match.map_or(Verdict::Info, Verdict::from_check),
                }
            };
            result(verdict, Some(m.value).filter(|v| v.is_finite()), m.at, m.detail)
        }
        Err(Skip::NotApplicable(why)) => result(Verdict::Info, None, None, format!("not applicable: {why}")),
        Err(Skip::Failed(why)) => result(Verdict::Fail, None, None, why),
    }
}

fn polylines(trace: &FlowTrace) -> Result<Vec<Polyline>, Skip> {
    Ok(trace.polylines()?)
}

/// Largest value of `f` over the snapshots, with its time.
fn worst<F: Fn(f64, &Polyline) -> Result<(f64, Option<Point>), Skip>>(trace: &FlowTrace, f: F) -> Result<Measured, Skip> {
    let mut best = (f64::NEG_INFINITY, None, f64::NAN);
    for (&t, p) in trace.times.iter().zip(polylines(trace)?.iter()) {
        let (v, at) = f(t, p)?;
        if v > best.0 || v.is_nan() {
            best = (v, at, t);
        }
    }
    let m = Measured::value(best.0).detail(format!("worst at t = {}", best.2));
    Ok(match best.1 {
        Some(p) => m.at(p),
        None => m,
    })
}

fn radius_law(ctx: &RunContext, _: &AuditRequest, _: f64) -> Result<Measured, Skip> {
    let f = match ctx.scenario.initial.family() {
        Some(f) if f.kind == FamilyKind::ShrinkingCircle => *f,
        _ => return Err(Skip::NotApplicable("needs shrinking-circle initial data".into())),
    };
    worst(ctx.trace, |t, p| {
        let r = (-2.0 * t).sqrt();
        let (d, q) = p
            .points
            .iter()
            .map(|q| (((q - f.translation).norm() - r).abs(), *q))
            .fold((0.0, Point::zeros()), |a, b| if b.0 > a.0 { b } else { a });
        Ok((d, Some(q)))
    })
}

fn area_law(ctx: &RunContext, _: &AuditRequest, _: f64) -> Result<Measured, Skip> {
    let t_ext = ctx.extinction.ok_or_else(|| Skip::NotApplicable("needs a compact trace".into()))?;
    let two_pi = 2.0 * std::f64::consts::PI;
    let worst_rec = ctx
        .trace
        .diagnostics
        .iter()
        .map(|r| ((r.area + two_pi * (r.t - t_ext)).abs(), r.t))
        .fold((f64::NEG_INFINITY, f64::NAN), |a, b| if b.0 > a.0 || b.0.is_nan() { b } else { a });
    Ok(Measured::value(worst_rec.0).detail(format!("extinction time {t_ext}, worst at t = {}", worst_rec.1)))
}

fn clipped_area_rate(ctx: &RunContext, _: &AuditRequest, _: f64) -> Result<Measured, Skip> {
    let ps = polylines(ctx.trace)?;
    if ps.iter().any(|p| p.closed) {
        return Err(Skip::NotApplicable("needs a noncompact trace".into()));
    }
    let areas = ps.iter().map(|p| clipped_area_below_axis(p, 0.0).map(|c| c.area)).collect::<Result<Vec<_>, _>>()?;
    let pi = std::f64::consts::PI;
    let mut worst_step = (f64::NEG_INFINITY, 0.0);
    for (w, a) in ctx.trace.times.windows(2).zip(areas.windows(2)) {
        let rate = -(a[1] - a[0]) / (w[1] - w[0]);
        let violation = (rate - pi).max(-rate);
        if violation > worst_step.0 {
            worst_step = (violation, rate);
        }
    }
    Ok(Measured::value(worst_step.0).detail(format!("rate {} against π", worst_step.1)))
}

fn exact_hausdorff(ctx: &RunContext, _: &AuditRequest, _: f64) -> Result<Measured, Skip> {
    let f = *ctx.scenario.initial.family().ok_or_else(|| Skip::NotApplicable("needs exact initial data".into()))?;
    let n = 4 * ctx.scenario.initial.nodes();
    worst(ctx.trace, |t, p| {
        if p.closed {
            return Ok((hausdorff_distance(p, &sample_exact(&f, t, n, None)?), None));
        }
        let (x0, x1, y0, y1) = p.bounds();
        let (dx, dy) = (0.1 * (x1 - x0) + 1e-6, 0.1 * (y1 - y0) + 1e-6);
        let clip = ClipBox::new(x0 - dx, x1 + dx, y0 - dy, y1 + dy);
        Ok((directed_hausdorff(p, &sample_exact(&f, t, n, Some(&clip))?), None))
    })
}

fn theta_monotone(ctx: &RunContext, _: &AuditRequest, tol: f64) -> Result<Measured, Skip> {
    let r = theta_monotonicity(ctx.trace, tol)?;
    Ok(Measured::value(r.max_increase))
}

fn entropy_bound(ctx: &RunContext, _: &AuditRequest, tol: f64) -> Result<Measured, Skip> {
    worst(ctx.trace, |_, p| {
        let centred = p.translated(-ctx.trace.meta.gaussian_center);
        Ok((entropy_bound_check(&centred, tol).sup, None))
    })
}

/// The trace in curvature form: as stored, from support snapshots, or
/// rebuilt from the exact family.
fn turning_trace(ctx: &RunContext) -> Result<FlowTrace, Skip> {
    let tr = ctx.trace;
    match tr.snapshots.first() {
        Some(Snapshot::Turning(_)) => Ok(tr.clone()),
        Some(Snapshot::Support(_)) => {
            let snaps = tr
                .snapshots
                .iter()
                .map(|s| match s {
                    Snapshot::Support(h) => turning_from_support(h).map(Snapshot::Turning).map_err(Skip::from),
                    _ => Err(Skip::Failed("mixed snapshot representations".into())),
                })
                .collect::<Result<Vec<_>, _>>()?;
            let mut out = FlowTrace::new(tr.meta.clone(), tr.times.clone(), snaps);
            out.diagnostics = tr.diagnostics.clone();
            Ok(out)
        }
        _ => match (ctx.scenario.initial.family(), &ctx.scenario.initial) {
            (Some(f), super::InitialData::Exact { theta_max, .. }) if f.kind != FamilyKind::StationaryLine => {
                let mut out = exact_turning_trace(f, &tr.times, ctx.scenario.initial.nodes(), *theta_max)?;
                out.meta = tr.meta.clone();
                Ok(out)
            }
            _ => Err(Skip::NotApplicable("needs curvature by turning angle".into())),
        },
    }
}

fn harnack(ctx: &RunContext, _: &AuditRequest, tol: f64) -> Result<Measured, Skip> {
    let r = harnack_check(&turning_trace(ctx)?, tol)?;
    let mut m = Measured::value(r.max_violation / r.kappa_mean).detail(format!("mean curvature {}", r.kappa_mean));
    m.info = r.verdict == Verdict::Info;
    Ok(m)
}

/// Exact polyline traces are read in curvature form, whose grid contains
/// the lowest point as a node.
fn displacement(ctx: &RunContext, _: &AuditRequest, tol: f64) -> Result<Measured, Skip> {
    let exact_polylines = ctx.scenario.initial.family().is_some() && matches!(ctx.trace.snapshots.first(), Some(Snapshot::Polyline(_)));
    let r = if exact_polylines {
        displacement_series(&turning_trace(ctx)?, tol)?
    } else {
        displacement_series(ctx.trace, tol)?
    };
    let mut m = Measured::value(r.max_increase);
    m.info = r.verdict == Verdict::Info;
    Ok(m)
}

fn class_name<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

fn matches(expect: &Option<String>, name: &str) -> Option<bool> {
    expect.as_ref().map(|e| e.eq_ignore_ascii_case(name))
}

fn strip_verdict(ctx: &RunContext, req: &AuditRequest, _: f64) -> Result<Measured, Skip> {
    let r = width_and_strip(ctx.trace, &ctx.scenario.diagnostics)?;
    let name = class_name(&r.verdict);
    let mut m = Measured::value(r.growth).detail(format!("{name}, growth exponent {}", r.exponent)).at(r.axis);
    m.class_match = matches(&req.expect, &name);
    Ok(m)
}

fn blow_down_class(ctx: &RunContext, req: &AuditRequest, _: f64) -> Result<Measured, Skip> {
    let lambdas = ctx.scenario.blow_down.as_ref().map_or(vec![1.0, 0.3, 0.1], |b| b.lambdas.clone());
    let v = classify_blow_down(&blow_down(ctx.trace, &lambdas)?, &ctx.scenario.diagnostics)?;
    let name = class_name(&v.kind);
    let mut m = Measured::value(v.confidence).detail(format!("{name}, Θ limit {}", v.gaussian_area_limit));
    if let Some(axis) = v.axis {
        m = m.at(axis);
    }
    m.class_match = matches(&req.expect, &name);
    if m.class_match.is_some() && v.kind == BlowDownKind::Undetermined {
        m.class_match = Some(false);
    }
    Ok(m)
}

fn snapshot_at(ctx: &RunContext, t: Option<f64>) -> Result<(f64, Polyline), Skip> {
    let tr = ctx.trace;
    let i = match t {
        Some(t) => tr.nearest_index(t),
        None => tr.len().checked_sub(1),
    }
    .ok_or_else(|| Skip::Failed("empty trace".into()))?;
    Ok((tr.times[i], tr.snapshots[i].to_polyline()?))
}

fn grim_fit_r(ctx: &RunContext, req: &AuditRequest, _: f64) -> Result<Measured, Skip> {
    let scale = ctx.scenario.initial.family().map_or(1.0, |f| f.scale);
    let (t, p) = snapshot_at(ctx, req.t)?;
    let fit = fit_grim_reaper(&tip_frame(&p, req.side.unwrap_or(TipSide::Theta0))?, req.radius.unwrap_or(1.5 * scale))?;
    Ok(Measured::value((fit.r - scale).abs()).at(fit.tip).detail(format!("r = {} at t = {t}, residual {}", fit.r, fit.residual)))
}

fn reflection_symmetry(ctx: &RunContext, req: &AuditRequest, _: f64) -> Result<Measured, Skip> {
    let alpha = req.alpha.unwrap_or(0.0);
    let mut m = worst(ctx.trace, |_, p| Ok((reflection_defect(p, alpha).symmetry_defect, None)))?;
    m.detail = format!("reflection across x = {alpha}; {}", m.detail);
    Ok(m)
}

fn field<'a>(ctx: &'a RunContext) -> Result<&'a crate::arrival::ArrivalTimeField, Skip> {
    ctx.field.ok_or_else(|| Skip::Failed("no arrival field".into()))
}

fn arrival_concavity(ctx: &RunContext, _: &AuditRequest, _: f64) -> Result<Measured, Skip> {
    let f = field(ctx)?;
    let (a, how) = match (f.source, ctx.scenario.initial.family()) {
        (FieldSource::ClosedForm, Some(fam)) => {
            let floor = ctx.scenario.arrival.as_ref().and_then(|s| s.t_floor).unwrap_or(ctx.scenario.window.t_start);
            (concavity_symbolic(fam, &f.grid, Some(floor))?, "symbolic Hessian")
        }
        _ => (concavity_audit(f)?, "finite differences"),
    };
    Ok(Measured::value(a.value).at(a.at).detail(format!("{how} at {} nodes", a.nodes)))
}

fn level_set(ctx: &RunContext, _: &AuditRequest, _: f64) -> Result<Measured, Skip> {
    let f = field(ctx)?;
    let r = level_set_residual(f)?;
    let mut detail = format!("{} nodes, {} degenerate", r.nodes, r.degenerate);
    if let (FieldSource::ClosedForm, Some(fam)) = (f.source, ctx.scenario.initial.family()) {
        let floor = ctx.scenario.arrival.as_ref().and_then(|s| s.t_floor).unwrap_or(ctx.scenario.window.t_start);
        let s = level_set_symbolic(fam, &f.grid, Some(floor))?;
        detail = format!("{detail}; analytic residual {:e}", s.residual);
    }
    Ok(Measured::value(r.residual).at(r.at).detail(detail))
}

fn w_transform(ctx: &RunContext, req: &AuditRequest, _: f64) -> Result<Measured, Skip> {
    let f = field(ctx)?;
    let t = req.t.unwrap_or(f.u_min() - 1.0);
    let a = w_transform_audit(f, t)?;
    Ok(Measured::value(a.value).at(a.at).detail(format!("t = {t}, {} nodes", a.nodes)))
}

fn rectangle_claim(ctx: &RunContext, _: &AuditRequest, _: f64) -> Result<Measured, Skip> {
    let r = rectangle_claim_audit(ctx.trace)?;
    let (margin, t) = r
        .points
        .iter()
        .map(|p| ((p.lhs_minus.min(p.lhs_plus) - p.rhs) / p.rhs.abs().max(1e-300), p.t))
        .fold((f64::INFINITY, f64::NAN), |a, b| if b.0 < a.0 { b } else { a });
    Ok(Measured::value(margin).detail(format!("smallest relative margin at t = {t}")))
}

fn convexity(ctx: &RunContext, _: &AuditRequest, _: f64) -> Result<Measured, Skip> {
    let bad = polylines(ctx.trace)?.iter().filter(|p| !p.is_convex()).count();
    Ok(Measured::value(bad as f64).detail(format!("{} snapshots", ctx.trace.len())))
}
