use serde::{Deserialize, Serialize};

use super::DiagnosticsError;
use crate::curve::Polyline;
use crate::Point;

/// Positive shoelace area of a closed polyline.
pub fn enclosed_area(p: &Polyline) -> Result<f64, DiagnosticsError> {
    if !p.closed {
        return Err(DiagnosticsError::NotClosed);
    }
    Ok(p.signed_area().abs())
}

/// Region cut off below a horizontal axis, with the crossings `A` (right)
/// and `B` (left).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClippedArea {
    pub area: f64,
    pub a: Point,
    pub b: Point,
}

/// Area between the part of a convex curve below `y = level` and the chord
/// joining its two crossings of that line.
pub fn clipped_area_below_axis(p: &Polyline, level: f64) -> Result<ClippedArea, DiagnosticsError> {
    let n = p.len();
    if n < 2 {
        return Err(DiagnosticsError::NoCrossing);
    }
    // Walk from a vertex on or above the axis so that the region below is contiguous.
    let start = if p.closed { p.points.iter().position(|q| q.y >= level).ok_or(DiagnosticsError::NoCrossing)? } else { 0 };
    let order: Vec<Point> = (0..n).map(|i| p.points[(start + i) % n]).collect();
    let segs: Vec<(Point, Point)> = if p.closed {
        (0..n).map(|i| (order[i], order[(i + 1) % n])).collect()
    } else {
        order.windows(2).map(|w| (w[0], w[1])).collect()
    };
    let mut region = Vec::new();
    let mut crossings = Vec::new();
    for (a, b) in segs {
        let below_a = a.y < level;
        let below_b = b.y < level;
        if below_a {
            region.push(a);
        }
        if below_a != below_b {
            let s = (level - a.y) / (b.y - a.y);
            let c = Point::new(a.x + s * (b.x - a.x), level);
            region.push(c);
            crossings.push(c);
        }
    }
    if !p.closed {
        if let Some(last) = order.last() {
            if last.y < level {
                return Err(DiagnosticsError::NoCrossing);
            }
        }
    }
    match crossings.len() {
        0 | 1 => return Err(DiagnosticsError::NoCrossing),
        2 => {}
        _ => return Err(DiagnosticsError::TangentCrossing),
    }
    if region.len() < 3 {
        return Err(DiagnosticsError::TangentCrossing);
    }
    let area = Polyline::closed(region).signed_area().abs();
    let (c0, c1) = (crossings[0], crossings[1]);
    let (a, b) = if c0.x > c1.x { (c0, c1) } else { (c1, c0) };
    Ok(ClippedArea { area, a, b })
}

/// Area of the trapezium with horizontal sides `AB` and `p⁻p⁺`.
pub fn trapezium_lower_bound(a: Point, b: Point, p_minus: Point, p_plus: Point) -> Result<f64, DiagnosticsError> {
    let scale = [a, b, p_minus, p_plus].iter().fold(1.0f64, |m, q| m.max(q.norm()));
    let flat = |u: Point, v: Point| (u.y - v.y).abs() <= 1e-9 * scale;
    if !flat(a, b) || !flat(p_minus, p_plus) {
        return Err(DiagnosticsError::NotTrapezium);
    }
    let quad = Polyline::closed(vec![a, b, p_minus, p_plus]);
    if !quad.is_convex() {
        return Err(DiagnosticsError::NotTrapezium);
    }
    let height = (a.y - p_minus.y).abs();
    Ok(0.5 * ((a - b).norm() + (p_plus - p_minus).norm()) * height)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{sample_exact, ClipBox, ExactFamily};
    use std::f64::consts::PI;

    fn circle(n: usize) -> Polyline {
        Polyline::closed(
            (0..n)
                .map(|k| {
                    let a = 2.0 * PI * k as f64 / n as f64;
                    Point::new(a.cos(), a.sin())
                })
                .collect(),
        )
    }

    #[test]
    fn square_and_circle_areas() {
        let sq = Polyline::closed(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ]);
        assert_eq!(enclosed_area(&sq).unwrap(), 1.0);
        let c = sample_exact(&ExactFamily::circle(), -2.0, 512, None).unwrap();
        assert!((enclosed_area(&c).unwrap() - 4.0 * PI).abs() < 1e-3);
        assert!(matches!(enclosed_area(&Polyline::open(sq.points)), Err(DiagnosticsError::NotClosed)));
    }

    #[test]
    fn lower_half_disk() {
        let c = clipped_area_below_axis(&circle(4096), 0.0).unwrap();
        assert!((c.area - PI / 2.0).abs() < 1e-5);
        assert!((c.a - Point::new(1.0, 0.0)).norm() < 1e-12);
        assert!((c.b - Point::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn grim_clipped_area_is_below_linear_bound() {
        // The region of the Grim Reaper below y = 0 has area ≤ -πt.
        let clip = ClipBox::new(-2.0, 2.0, -50.0, 10.0);
        for t in [-1.0, -5.0, -20.0] {
            let p = sample_exact(&ExactFamily::grim_reaper(), t, 4001, Some(&clip)).unwrap();
            let c = clipped_area_below_axis(&p, 0.0).unwrap();
            assert!(c.area <= -PI * t && c.area > 0.0);
        }
    }

    #[test]
    fn curve_above_axis_has_no_crossing() {
        let p = circle(64).translated(Point::new(0.0, 5.0));
        assert!(matches!(clipped_area_below_axis(&p, 0.0), Err(DiagnosticsError::NoCrossing)));
    }

    #[test]
    fn trapezium_examples() {
        let r = trapezium_lower_bound(Point::new(1.0, 0.0), Point::new(-1.0, 0.0), Point::new(-1.0, -2.0), Point::new(1.0, -2.0));
        assert_eq!(r.unwrap(), 4.0);
        let (eps, h) = (1e-3, 3.0);
        let a = trapezium_lower_bound(
            Point::new(PI / 2.0, 0.0),
            Point::new(-PI / 2.0, 0.0),
            Point::new(-PI / 2.0 + eps, -h),
            Point::new(PI / 2.0 - eps, -h),
        )
        .unwrap();
        assert!((a - PI * h).abs() < 2.0 * eps * h);
        assert!(matches!(
            trapezium_lower_bound(Point::new(1.0, 0.0), Point::new(-1.0, 0.1), Point::new(-1.0, -2.0), Point::new(1.0, -2.0)),
            Err(DiagnosticsError::NotTrapezium)
        ));
    }
}
