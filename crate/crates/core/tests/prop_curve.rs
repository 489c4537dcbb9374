use std::f64::consts::PI;

use proptest::prelude::*;

use flowlab::curve::{hausdorff_distance, merge_graphs, split_graphs, support_from_polyline, CurveError};
use flowlab::scenario::{fourier_support, turning_from_support};
use flowlab::{Point, SupportCurve};

/// Fourier modes 2..=5 small enough that `ρ > 0.25·r₀`.
fn smooth_support(n: usize) -> impl Strategy<Value = SupportCurve> {
    (0.5..2.0f64, prop::collection::vec(-1.0..1.0f64, 8), -2.0..2.0f64, -2.0..2.0f64).prop_map(move |(r0, c, x, y)| {
        let scale = |k: usize| 0.75 * r0 / (4.0 * ((k * k - 1) as f64));
        let a: Vec<f64> = (1..=5).map(|k| if k == 1 { 0.0 } else { c[k - 2] * scale(k) }).collect();
        let b: Vec<f64> = (1..=5).map(|k| if k == 1 { 0.0 } else { c[k + 2] * scale(k) }).collect();
        fourier_support(r0, &a, &b, n, Point::new(x, y)).unwrap()
    })
}

fn node_count() -> impl Strategy<Value = usize> {
    prop_oneof![Just(256usize), Just(512), Just(1024)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn support_round_trip_is_identity(h in node_count().prop_flat_map(smooth_support)) {
        let n = h.len();
        let back = support_from_polyline(&h.to_polyline(), n).unwrap();
        let shift = back.center() - h.center();
        for k in 0..n {
            let nu = Point::new(h.theta(k).cos(), h.theta(k).sin());
            prop_assert!((back.h()[k] + shift.dot(&nu) - h.h()[k]).abs() <= 1e-8);
        }
    }

    #[test]
    fn reconstructed_length_matches_the_quadrature(h in node_count().prop_flat_map(smooth_support)) {
        let c = turning_from_support(&h).unwrap();
        let p = c.reconstruct_positions().unwrap();
        let d = c.dtheta();
        prop_assert!((p.length() - c.length()).abs() <= d * d * c.length(), "{} vs {}", p.length(), c.length());
    }

    #[test]
    fn closure_is_enforced(h in node_count().prop_flat_map(smooth_support), bump in -0.02..0.02f64) {
        let c = turning_from_support(&h).unwrap();
        let kappa: Vec<f64> = c.kappa().iter().zip(c.thetas()).map(|(k, t)| k * (1.0 + bump * t.cos())).collect();
        let mut c = flowlab::TurningAngleCurve::closed(kappa, c.theta0(), c.base_point()).unwrap();
        c.enforce_closure().unwrap();
        prop_assert!(c.closure_gap().norm() <= 1e-8 * c.length());
    }

    #[test]
    fn graph_split_merges_back(h in smooth_support(256), rot in 0.0..2.0 * PI, n in 33usize..300) {
        let p = h.to_polyline().rotated(rot);
        let (plus, minus) = split_graphs(&p, None, n).unwrap();
        let spacing = (plus.a_plus() - plus.a_minus()) / (n - 1) as f64;
        let ends = |g: &flowlab::GraphCurve| (g.v()[0], g.v()[g.len() - 1]);
        let (a, b) = (ends(&plus), ends(&minus));
        prop_assert!(a.0 == b.0 && a.1 == b.1, "{a:?} vs {b:?}");
        prop_assert!(plus.convexity_violation().is_none() && minus.convexity_violation().is_none());
        let merged = merge_graphs(&plus, &minus);
        prop_assert!(hausdorff_distance(&merged, &p) <= spacing);
    }

    #[test]
    fn nonconvex_support_is_a_hard_error(k in 2usize..8, excess in 0.05..1.0f64, phase in 0.0..2.0 * PI) {
        // ρ = 1 + a(1 - k²)cos(kθ + φ) dips below zero when a(k² - 1) > 1.
        let a = (1.0 + excess) / ((k * k - 1) as f64);
        let r = SupportCurve::from_fn(256, Point::zeros(), |t| 1.0 + a * (k as f64 * t + phase).cos());
        let nonconvex = matches!(r, Err(CurveError::NotStrictlyConvex { .. }));
        prop_assert!(nonconvex);
    }

    #[test]
    fn polyline_area_is_rigid_and_orientation_signed(h in smooth_support(256), rot in 0.0..2.0 * PI, dx in -5.0..5.0f64) {
        let p = h.to_polyline();
        let q = p.rotated(rot).translated(Point::new(dx, -dx));
        prop_assert!(p.is_convex() && p.signed_area() > 0.0);
        prop_assert!((q.signed_area() - p.signed_area()).abs() <= 1e-10 * p.signed_area());
        prop_assert!((p.reversed().signed_area() + p.signed_area()).abs() <= 1e-12 * p.signed_area());
        prop_assert!((h.area() - p.signed_area()).abs() <= 1e-3 * p.signed_area());
    }
}
