use std::f64::consts::PI;

use proptest::prelude::*;

use flowlab::arrival::{closed_form_field, concavity_audit, reconstruct_arrival, w_transform_audit, Grid};
use flowlab::exact::{arrival_derivatives, exact_arrival_time, exact_trace};
use flowlab::{ExactFamily, FamilyKind, Point};

fn eigenvalues([a, b, c]: [f64; 3]) -> (f64, f64) {
    let m = 0.5 * (a + c);
    let r = (0.25 * (a - c) * (a - c) + b * b).sqrt();
    (m - r, m + r)
}

fn compact_kind() -> impl Strategy<Value = FamilyKind> {
    prop_oneof![Just(FamilyKind::ShrinkingCircle), Just(FamilyKind::AngenentOval)]
}

/// A point strictly inside the region swept before `t = -0.05`.
fn interior_point(kind: FamilyKind, r: f64, phi: f64) -> Point {
    let reach = match kind {
        FamilyKind::ShrinkingCircle => 2.0,
        _ => 1.4,
    };
    Point::new(phi.cos(), phi.sin()) * (0.1 + r * reach)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn closed_form_fields_are_nonpositive_with_convex_masks(kind in compact_kind(), h in 0.03..0.2f64, floor in -8.0..-1.0f64) {
        let grid = Grid::new(-1.5, 1.5, -2.5, 2.5, h).unwrap();
        let f = closed_form_field(&ExactFamily::canonical(kind), &grid, Some(floor));
        prop_assert!(f.masked_count() > 0);
        prop_assert!(f.mask_is_lattice_convex());
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                if let Some(u) = f.at(i, j) {
                    prop_assert!(u <= 0.0 && u >= floor);
                }
            }
        }
    }

    #[test]
    fn arrival_decreases_outward_along_rays(kind in compact_kind(), phi in 0.0..2.0 * PI, r in 0.05..0.9f64, dr in 0.01..0.1f64) {
        let f = ExactFamily::canonical(kind);
        let dir = Point::new(phi.cos(), phi.sin());
        let p = interior_point(kind, r, phi);
        let q = p + dir * dr;
        if let (Ok(u0), Ok(u1)) = (exact_arrival_time(&f, p), exact_arrival_time(&f, q)) {
            prop_assert!(u1 < u0, "u({p}) = {u0}, u({q}) = {u1}");
        }
    }

    #[test]
    fn hessian_eigenvalues_are_pose_invariant(
        kind in prop_oneof![Just(FamilyKind::ShrinkingCircle), Just(FamilyKind::AngenentOval), Just(FamilyKind::GrimReaper)],
        rot in 0.0..2.0 * PI,
        dx in -2.0..2.0f64,
        r in 0.0..0.9f64,
        phi in 0.0..2.0 * PI,
    ) {
        let canonical = ExactFamily::canonical(kind);
        let posed = canonical.with_rotation(rot).with_translation(Point::new(dx, -dx));
        let p = interior_point(kind, r, phi);
        let (_, _, ha) = arrival_derivatives(&canonical, p).unwrap();
        let (_, _, hb) = arrival_derivatives(&posed, posed.to_world(p)).unwrap();
        let (a, b) = (eigenvalues(ha), eigenvalues(hb));
        let scale = 1.0 + a.0.abs().max(a.1.abs());
        prop_assert!((a.0 - b.0).abs() <= 1e-9 * scale && (a.1 - b.1).abs() <= 1e-9 * scale, "{a:?} vs {b:?}");
    }

    #[test]
    fn concave_fields_have_convex_w(h in 0.02..0.1f64, shift in 0.1..3.0f64) {
        let grid = Grid::new(-1.3, 1.3, -1.3, 1.3, h).unwrap();
        let f = closed_form_field(&ExactFamily::circle(), &grid, Some(-0.8));
        let concave = concavity_audit(&f).unwrap();
        prop_assert!(concave.value <= 1e-8);
        // For u ≤ 0 concave, D²w = -D²u/(u - t) + DuDu/(u - t)² ≥ 0.
        let w = w_transform_audit(&f, f.u_min() - shift).unwrap();
        prop_assert!(w.value >= -1e-8, "w eigenvalue {}", w.value);
    }
}

#[test]
fn reconstruction_error_drops_when_refined() {
    let circle = ExactFamily::circle();
    // Snapshot resolution refines with Δt and h; polygon chords bound the
    // error from below otherwise.
    let error = |h: f64, steps: usize, nodes: usize| {
        let times: Vec<f64> = (0..=steps).map(|k| -1.0 + 0.95 * k as f64 / steps as f64).collect();
        let tr = exact_trace(&circle, &times, nodes, None).unwrap();
        let grid = Grid::new(-1.2, 1.2, -1.2, 1.2, h).unwrap();
        let f = reconstruct_arrival(&tr, &grid).unwrap();
        let mut worst = 0.0f64;
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                if let Some(u) = f.at(i, j) {
                    worst = worst.max((u - exact_arrival_time(&circle, grid.node(i, j)).unwrap()).abs());
                }
            }
        }
        worst
    };
    let coarse = error(0.08, 5, 64);
    let fine = error(0.04, 10, 128);
    assert!(coarse / fine >= 3.0, "{coarse} -> {fine}");
}
