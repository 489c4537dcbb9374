use std::f64::consts::PI;

use proptest::prelude::*;

use flowlab::exact::{exact_arrival_time, exact_enclosed_area, sample_exact, ClipBox, ExactError};
use flowlab::{ExactFamily, FamilyKind, Point, Polyline, TimeWindow};

fn cross_signs(p: &Polyline) -> (usize, usize) {
    let n = p.len();
    let edges = if p.closed { n } else { n - 1 };
    let e: Vec<Point> = (0..edges).map(|i| p.points[(i + 1) % n] - p.points[i]).collect();
    let pairs = if p.closed { edges } else { edges - 1 };
    let mut signs = (0, 0);
    for i in 0..pairs {
        let (a, b) = (e[i], e[(i + 1) % edges]);
        // Collinear edges on the asymptotic arms give rounding-level products.
        let floor = 1e-12 * a.norm() * b.norm();
        let c = a.perp(&b);
        if c > floor {
            signs.0 += 1;
        } else if c < -floor {
            signs.1 += 1;
        }
    }
    signs
}

fn compact_kind() -> impl Strategy<Value = FamilyKind> {
    prop_oneof![Just(FamilyKind::ShrinkingCircle), Just(FamilyKind::AngenentOval)]
}

fn posed(kind: FamilyKind) -> impl Strategy<Value = ExactFamily> {
    (0.0..2.0 * PI, -3.0..3.0f64, -3.0..3.0f64, 0.3..3.0f64)
        .prop_map(move |(rot, x, y, s)| ExactFamily::new(kind, rot, Point::new(x, y), s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sampled_points_arrive_at_their_time(
        f in compact_kind().prop_flat_map(posed),
        tau in 0.05..6.0f64,
        n in 16usize..300,
    ) {
        let t = -tau * f.scale * f.scale;
        let p = sample_exact(&f, t, n, None).unwrap();
        for q in &p.points {
            let u = exact_arrival_time(&f, *q).unwrap();
            prop_assert!((u - t).abs() <= 1e-10 * (1.0 + t.abs()), "u = {u}, t = {t}");
        }
    }

    #[test]
    fn canonical_points_solve_the_defining_equations(t in -30.0..-0.05f64, n in 16usize..400) {
        let oval = sample_exact(&ExactFamily::oval(), t, n, None).unwrap();
        for q in &oval.points {
            prop_assert!((q.x.cos() - t.exp() * q.y.cosh()).abs() <= 1e-12);
        }
        let clip = ClipBox::new(-1.6, 1.6, t - 1.0, t + 12.0);
        let grim = sample_exact(&ExactFamily::grim_reaper(), t, n, Some(&clip)).unwrap();
        for q in &grim.points {
            prop_assert!((q.x.cos() - (t - q.y).exp()).abs() <= 1e-12);
        }
    }

    #[test]
    fn samples_are_convex(
        kind in prop_oneof![Just(FamilyKind::ShrinkingCircle), Just(FamilyKind::AngenentOval), Just(FamilyKind::GrimReaper)],
        rot in 0.0..2.0 * PI,
        t in -20.0..-0.1f64,
        n in 16usize..300,
    ) {
        let f = ExactFamily::canonical(kind).with_rotation(rot);
        let clip = (!kind.is_compact()).then(|| ClipBox::new(-30.0, 30.0, -30.0, 30.0));
        let p = sample_exact(&f, t, n, clip.as_ref()).unwrap();
        let (pos, neg) = cross_signs(&p);
        prop_assert!(pos == 0 || neg == 0, "{pos} left turns, {neg} right turns");
    }

    #[test]
    fn scaling_commutes_with_sampling(
        kind in compact_kind(),
        r in 0.2..5.0f64,
        t in -8.0..-0.1f64,
        n in 16usize..200,
    ) {
        let unit = sample_exact(&ExactFamily::canonical(kind), t, n, None).unwrap();
        let scaled = sample_exact(&ExactFamily::canonical(kind).with_scale(r).unwrap(), r * r * t, n, None).unwrap();
        for (a, b) in unit.points.iter().zip(&scaled.points) {
            prop_assert!((a * r - b).norm() <= 1e-12 * r.max(1.0) * (1.0 + a.norm()));
        }
    }

    #[test]
    fn compact_area_follows_the_area_law(kind in compact_kind(), s in 0.3..3.0f64, tau in 0.01..10.0f64) {
        let f = ExactFamily::canonical(kind).with_scale(s).unwrap();
        let t = -tau * s * s;
        let a = exact_enclosed_area(&f, t).unwrap();
        prop_assert!((a + 2.0 * PI * t).abs() <= 1e-9 * a.max(1.0));
    }

    #[test]
    fn nonpositive_scale_is_rejected(s in -5.0..=0.0f64) {
        prop_assert!(matches!(ExactFamily::new(FamilyKind::AngenentOval, 0.0, Point::zeros(), s), Err(ExactError::BadScale(_))));
    }

    #[test]
    fn stationary_line_serializes_with_unit_scale(s in 0.1..10.0f64) {
        let f = ExactFamily::line().with_scale(s).unwrap();
        let v = serde_json::to_value(f).unwrap();
        prop_assert_eq!(v["scale"].as_f64(), Some(1.0));
    }

    #[test]
    fn windows_are_ordered_and_end_before_extinction(a in -10.0..10.0f64, b in -10.0..10.0f64) {
        let w = TimeWindow::new(a, b);
        prop_assert_eq!(w.is_ok(), a < b);
        if let Ok(w) = w {
            prop_assert_eq!(w.check_for(&ExactFamily::circle()).is_ok(), b < 0.0);
            prop_assert!(w.check_for(&ExactFamily::grim_reaper()).is_ok());
        }
    }
}
