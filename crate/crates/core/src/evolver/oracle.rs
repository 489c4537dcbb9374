use std::f64::consts::PI;

use super::{drive, EvolveError, FlowTrace, Snapshot, StepControl, TraceMeta};
use crate::curve::Polyline;
use crate::exact::TimeWindow;
use crate::Point;

fn unit(p: Point) -> Point {
    p / p.norm()
}

/// Total turning of a closed polyline.
fn total_turning(p: &[Point]) -> f64 {
    let n = p.len();
    (0..n)
        .map(|i| {
            let e0 = p[(i + 1) % n] - p[i];
            let e1 = p[(i + 2) % n] - p[(i + 1) % n];
            (e0.x * e1.y - e0.y * e1.x).atan2(e0.dot(&e1))
        })
        .sum()
}

/// Resamples a closed polyline at `n` points uniformly spaced in arc length,
/// starting at the first vertex, using cubic Hermite interpolation in arc
/// length with centred-difference tangents.
fn resample_closed_hermite(p: &[Point], n: usize) -> Vec<Point> {
    let m = p.len();
    let mut s = vec![0.0; m + 1];
    for i in 0..m {
        s[i + 1] = s[i] + (p[(i + 1) % m] - p[i]).norm();
    }
    let total = s[m];
    let at = |i: isize| p[i.rem_euclid(m as isize) as usize];
    let param = |i: isize| {
        let wraps = i.div_euclid(m as isize) as f64;
        s[i.rem_euclid(m as isize) as usize] + wraps * total
    };
    let slope = |i: isize| (at(i + 1) - at(i - 1)) / (param(i + 1) - param(i - 1));
    let mut out = Vec::with_capacity(n);
    let mut k = 0;
    for j in 0..n {
        let target = total * j as f64 / n as f64;
        while k + 1 < m && s[k + 1] <= target {
            k += 1;
        }
        let h = s[k + 1] - s[k];
        let u = (target - s[k]) / h;
        let h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
        let h10 = u * (1.0 - u) * (1.0 - u);
        let h01 = u * u * (3.0 - 2.0 * u);
        let h11 = u * u * (u - 1.0);
        let ki = k as isize;
        out.push(at(ki) * h00 + slope(ki) * (h10 * h) + at(ki + 1) * h01 + slope(ki + 1) * (h11 * h));
    }
    out
}

/// Independent front-tracking integrator.
///
/// Each vertex moves with the Menger curvature of its neighbour triple along
/// the inward normal of the angle bisector (forward Euler,
/// `Δt = cfl·min Δs²`). After every step the vertices are redistributed to
/// uniform arc length.
pub fn evolve_polyline_oracle(p0: &Polyline, window: &TimeWindow, ctl: &StepControl) -> Result<FlowTrace, EvolveError> {
    let n = p0.len();
    if !p0.closed || n < 32 || !p0.is_convex() {
        return Err(EvolveError::BadInitialData("oracle needs a closed convex polyline with at least 32 vertices".into()));
    }
    let start = if p0.signed_area() < 0.0 { p0.reversed() } else { p0.clone() };
    let area_floor = 1e-6 * start.signed_area();
    let meta = TraceMeta::new("oracle", "explicit", n);
    let step = move |pts: &mut Vec<Point>, t: f64, cap: f64| -> Result<f64, Option<EvolveError>> {
        let poly = Polyline::closed(std::mem::take(pts));
        if poly.signed_area() < area_floor {
            *pts = poly.points;
            return Err(None);
        }
        let hmin = poly.segments().map(|(a, b)| (b - a).norm()).fold(f64::INFINITY, f64::min);
        let dt = (ctl.cfl.min(0.5) * hmin * hmin).min(ctl.dt_max).min(cap);
        let kappa = poly.menger_curvatures();
        let p = &poly.points;
        let moved: Vec<Point> = (0..n)
            .map(|i| {
                let a = p[(i + n - 1) % n];
                let c = p[(i + 1) % n];
                let tan = unit(unit(p[i] - a) + unit(c - p[i]));
                p[i] + Point::new(-tan.y, tan.x) * (kappa[i] * dt)
            })
            .collect();
        if (total_turning(&moved) - 2.0 * PI).abs() > 1e-6 {
            return Err(Some(EvolveError::SelfIntersection { t: t + dt }));
        }
        *pts = resample_closed_hermite(&moved, n);
        Ok(dt)
    };
    let snap = |pts: &Vec<Point>| Snapshot::Polyline(Polyline::closed(pts.clone()));
    drive(window, ctl, FlowTrace::empty(meta), start.points, step, snap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(r: f64, n: usize) -> Polyline {
        Polyline::closed(
            (0..n)
                .map(|k| {
                    let a = 2.0 * PI * k as f64 / n as f64;
                    Point::new(r * a.cos(), r * a.sin())
                })
                .collect(),
        )
    }

    #[test]
    fn circle_shrinks_to_radius_one() {
        let w = TimeWindow::new(0.0, 1.5).unwrap();
        let tr = evolve_polyline_oracle(&circle(2.0, 256), &w, &StepControl::explicit(0.25)).unwrap();
        let Snapshot::Polyline(p) = tr.snapshots.last().unwrap() else { panic!() };
        for q in &p.points {
            assert!((q.norm() - 1.0).abs() < 2e-2);
        }
    }

    #[test]
    fn hermite_resampling_keeps_circle() {
        let c = circle(1.0, 64);
        let r = resample_closed_hermite(&c.points, 100);
        for q in &r {
            assert!((q.norm() - 1.0).abs() < 1e-4);
        }
    }

    #[test]
    fn too_few_vertices_rejected() {
        let w = TimeWindow::new(0.0, 0.1).unwrap();
        assert!(matches!(
            evolve_polyline_oracle(&circle(1.0, 16), &w, &StepControl::explicit(0.25)),
            Err(EvolveError::BadInitialData(_))
        ));
    }
}
