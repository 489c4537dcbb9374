use serde::{Deserialize, Serialize};

use crate::Point;

fn cross(a: Point, b: Point) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Distance from `p` to the segment `[a, b]`, together with the closest point.
pub fn point_segment_distance(p: Point, a: Point, b: Point) -> (f64, Point) {
    let ab = b - a;
    let len2 = ab.norm_squared();
    let s = if len2 > 0.0 { ((p - a).dot(&ab) / len2).clamp(0.0, 1.0) } else { 0.0 };
    let q = a + ab * s;
    ((p - q).norm(), q)
}

/// Ordered point samples of a planar curve.
///
/// Closed polylines carry an implicit closing segment from the last point back
/// to the first; the first point is not repeated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    pub points: Vec<Point>,
    pub closed: bool,
}

impl Polyline {
    pub fn new(points: Vec<Point>, closed: bool) -> Self {
        Self { points, closed }
    }

    pub fn closed(points: Vec<Point>) -> Self {
        Self::new(points, true)
    }

    pub fn open(points: Vec<Point>) -> Self {
        Self::new(points, false)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Segments in order, including the closing segment of a closed polyline.
    pub fn segments(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.points.len();
        let count = match (self.closed, n) {
            (_, 0) | (_, 1) => 0,
            (true, _) => n,
            (false, _) => n - 1,
        };
        (0..count).map(move |i| (self.points[i], self.points[(i + 1) % n]))
    }

    pub fn length(&self) -> f64 {
        self.segments().map(|(a, b)| (b - a).norm()).sum()
    }

    /// Shoelace area; positive for counterclockwise closed polylines.
    pub fn signed_area(&self) -> f64 {
        let n = self.points.len();
        if n < 3 {
            return 0.0;
        }
        0.5 * (0..n)
            .map(|i| cross(self.points[i], self.points[(i + 1) % n]))
            .sum::<f64>()
    }

    /// Vertex centroid.
    pub fn centroid(&self) -> Point {
        let n = self.points.len().max(1) as f64;
        self.points.iter().fold(Point::zeros(), |acc, p| acc + p) / n
    }

    /// Convexity test on consecutive edge turns.
    ///
    /// Closed polylines must also turn exactly once (total turning 2π in
    /// absolute value), which rules out star-shaped self-overlaps.
    pub fn is_convex(&self) -> bool {
        let n = self.points.len();
        if n < 3 {
            return !self.closed;
        }
        let edges: Vec<Point> = self.segments().map(|(a, b)| b - a).collect();
        let m = edges.len();
        let turns = if self.closed { m } else { m - 1 };
        let mut sign = 0.0f64;
        let mut total = 0.0;
        for i in 0..turns {
            let e0 = edges[i];
            let e1 = edges[(i + 1) % m];
            let c = cross(e0, e1);
            let scale = e0.norm() * e1.norm();
            if scale == 0.0 {
                return false;
            }
            total += c.atan2(e0.dot(&e1));
            if c.abs() <= 1e-12 * scale {
                continue;
            }
            if sign == 0.0 {
                sign = c.signum();
            } else if c.signum() != sign {
                return false;
            }
        }
        if self.closed {
            (total.abs() - 2.0 * std::f64::consts::PI).abs() < 1e-6
        } else {
            true
        }
    }

    /// Distance from `p` to the polyline and the closest point on it.
    pub fn closest_point(&self, p: Point) -> (f64, Point) {
        if self.points.len() == 1 {
            return ((p - self.points[0]).norm(), self.points[0]);
        }
        self.segments()
            .map(|(a, b)| point_segment_distance(p, a, b))
            .fold((f64::INFINITY, p), |best, cur| if cur.0 < best.0 { cur } else { best })
    }

    pub fn distance_to_point(&self, p: Point) -> f64 {
        self.closest_point(p).0
    }

    /// Membership in the convex region to the left of a counterclockwise convex
    /// polyline (for open polylines: the intersection of the left half-planes of
    /// all edges).
    pub fn contains(&self, p: Point) -> bool {
        self.segments().all(|(a, b)| cross(b - a, p - a) >= 0.0)
    }

    /// Distance to the curve, positive inside the convex region and negative outside.
    pub fn signed_distance(&self, p: Point) -> f64 {
        let d = self.distance_to_point(p);
        if self.contains(p) {
            d
        } else {
            -d
        }
    }

    pub fn map<F: Fn(Point) -> Point>(&self, f: F) -> Self {
        Self::new(self.points.iter().map(|&p| f(p)).collect(), self.closed)
    }

    pub fn translated(&self, d: Point) -> Self {
        self.map(|p| p + d)
    }

    pub fn scaled(&self, s: f64) -> Self {
        self.map(|p| p * s)
    }

    /// Rotation about the origin by `angle` radians.
    pub fn rotated(&self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        self.map(|p| Point::new(c * p.x - s * p.y, s * p.x + c * p.y))
    }

    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        Self::new(points, self.closed)
    }

    /// `(x_min, x_max, y_min, y_max)`.
    pub fn bounds(&self) -> (f64, f64, f64, f64) {
        self.points.iter().fold(
            (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
            |(a, b, c, d), p| (a.min(p.x), b.max(p.x), c.min(p.y), d.max(p.y)),
        )
    }

    /// Extent of the vertex set along the unit direction `dir`.
    pub fn extent_along(&self, dir: Point) -> f64 {
        let (lo, hi) = self
            .points
            .iter()
            .map(|p| p.dot(&dir))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        hi - lo
    }

    /// Menger curvature (reciprocal circumradius) at each vertex, signed
    /// positive for left turns. End vertices of open polylines copy their
    /// neighbour.
    pub fn menger_curvatures(&self) -> Vec<f64> {
        let n = self.points.len();
        if n < 3 {
            return vec![0.0; n];
        }
        let at = |i: usize| {
            let (a, b, c) = (self.points[(i + n - 1) % n], self.points[i], self.points[(i + 1) % n]);
            let denom = (b - a).norm() * (c - b).norm() * (c - a).norm();
            if denom == 0.0 {
                0.0
            } else {
                2.0 * cross(b - a, c - b) / denom
            }
        };
        let mut k: Vec<f64> = (0..n).map(at).collect();
        if !self.closed {
            k[0] = k[1];
            k[n - 1] = k[n - 2];
        }
        k
    }

    /// Resamples at `n` points uniformly spaced in arc length, linearly along segments.
    pub fn resample_uniform(&self, n: usize) -> Self {
        let cum = self.cumulative_lengths();
        let total = *cum.last().unwrap_or(&0.0);
        let count = if self.closed { n } else { n.saturating_sub(1).max(1) };
        let step = total / count as f64;
        let mut pts = Vec::with_capacity(n);
        let segs: Vec<(Point, Point)> = self.segments().collect();
        let mut k = 0;
        for j in 0..n {
            let s = (j as f64 * step).min(total);
            while k + 1 < segs.len() && cum[k + 1] < s {
                k += 1;
            }
            let (a, b) = segs[k];
            let len = cum[k + 1] - cum[k];
            let w = if len > 0.0 { ((s - cum[k]) / len).clamp(0.0, 1.0) } else { 0.0 };
            pts.push(a + (b - a) * w);
        }
        Self::new(pts, self.closed)
    }

    /// Cumulative arc length at segment starts, with the total appended.
    pub fn cumulative_lengths(&self) -> Vec<f64> {
        let mut cum = vec![0.0];
        for (a, b) in self.segments() {
            let last = *cum.last().unwrap();
            cum.push(last + (b - a).norm());
        }
        cum
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Polyline {
        Polyline::closed(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ])
    }

    #[test]
    fn square_area_and_convexity() {
        let sq = square();
        assert!((sq.signed_area() - 1.0).abs() < 1e-15);
        assert!(sq.is_convex());
        assert!((sq.reversed().signed_area() + 1.0).abs() < 1e-15);
        assert!((sq.length() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn dart_is_not_convex() {
        let dart = Polyline::closed(vec![
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(1.0, 0.3),
            Point::new(1.0, 2.0),
        ]);
        assert!(!dart.is_convex());
    }

    #[test]
    fn doubly_wound_polygon_is_not_convex() {
        let n = 10;
        let pts = (0..n)
            .map(|k| {
                let a = 4.0 * std::f64::consts::PI * k as f64 / n as f64;
                Point::new(a.cos(), a.sin())
            })
            .collect();
        assert!(!Polyline::closed(pts).is_convex());
    }

    #[test]
    fn signed_distance_sign_follows_inside() {
        let sq = square();
        assert!((sq.signed_distance(Point::new(0.5, 0.25)) - 0.25).abs() < 1e-15);
        assert!((sq.signed_distance(Point::new(1.5, 0.5)) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn menger_curvature_of_regular_polygon_is_inverse_circumradius() {
        let n = 64;
        let r = 2.0;
        let pts = (0..n)
            .map(|k| {
                let a = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                Point::new(r * a.cos(), r * a.sin())
            })
            .collect();
        for k in Polyline::closed(pts).menger_curvatures() {
            assert!((k - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_resampling_of_square() {
        let sq = square().resample_uniform(8);
        assert_eq!(sq.len(), 8);
        assert!((sq.points[1] - Point::new(0.5, 0.0)).norm() < 1e-15);
        assert!((sq.points[5] - Point::new(0.5, 1.0)).norm() < 1e-15);
    }
}
