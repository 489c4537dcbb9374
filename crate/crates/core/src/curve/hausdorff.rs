use super::{point_segment_distance, Polyline};
use crate::Point;

/// Segments of a polyline bucketed on a uniform grid, for exact
/// nearest-segment distances without a scan over every segment.
pub(crate) struct SegmentIndex {
    segs: Vec<(Point, Point)>,
    origin: Point,
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<u32>>,
    closed: bool,
}

impl SegmentIndex {
    pub(crate) fn new(p: &Polyline) -> Self {
        let segs: Vec<(Point, Point)> = if p.len() == 1 { vec![(p.points[0], p.points[0])] } else { p.segments().collect() };
        let (x0, x1, y0, y1) = p.bounds();
        let m = segs.len().max(1);
        let mean = segs.iter().map(|(a, b)| (b - a).norm()).sum::<f64>() / m as f64;
        let (w, h) = (x1 - x0, y1 - y0);
        let mut cell = mean.max((w * h / (4.0 * m as f64)).sqrt()).max(1e-12 * (1.0 + w + h));
        let dims = |c: f64| ((w / c).floor() as usize + 1, (h / c).floor() as usize + 1);
        while {
            let (nx, ny) = dims(cell);
            nx * ny > 16 * m + 16
        } {
            cell *= 2.0;
        }
        let (nx, ny) = dims(cell);
        let origin = Point::new(x0, y0);
        let mut buckets = vec![Vec::new(); nx * ny];
        let clampi = |v: f64, n: usize| (v.floor().max(0.0) as usize).min(n - 1);
        for (k, (a, b)) in segs.iter().enumerate() {
            let (i0, i1) = (clampi((a.x.min(b.x) - x0) / cell, nx), clampi((a.x.max(b.x) - x0) / cell, nx));
            let (j0, j1) = (clampi((a.y.min(b.y) - y0) / cell, ny), clampi((a.y.max(b.y) - y0) / cell, ny));
            for j in j0..=j1 {
                for i in i0..=i1 {
                    buckets[j * nx + i].push(k as u32);
                }
            }
        }
        Self { segs, origin, cell, nx, ny, buckets, closed: p.closed }
    }

    pub(crate) fn distance(&self, q: Point) -> f64 {
        self.nearest(q).0
    }

    /// Signed distance to a convex polyline oriented with its interior on
    /// the left: positive inside. At a vertex the side is read off the sum
    /// of the two adjacent inward normals.
    pub(crate) fn signed_distance(&self, q: Point) -> f64 {
        let (d, k, c) = self.nearest(q);
        let inward = |k: usize| {
            let (a, b) = self.segs[k];
            let e = b - a;
            Point::new(-e.y, e.x) / e.norm().max(1e-300)
        };
        let m = self.segs.len();
        let (a, b) = self.segs[k];
        let neighbour = if c == a {
            if k > 0 { Some(k - 1) } else if self.closed { Some(m - 1) } else { None }
        } else if c == b {
            if k + 1 < m { Some(k + 1) } else if self.closed { Some(0) } else { None }
        } else {
            None
        };
        let n = match neighbour {
            Some(j) => inward(k) + inward(j),
            None => inward(k),
        };
        if (q - c).dot(&n) >= 0.0 {
            d
        } else {
            -d
        }
    }

    /// Distance from `q` to the indexed polyline, the nearest segment and
    /// the nearest point on it.
    pub(crate) fn nearest(&self, q: Point) -> (f64, usize, Point) {
        let d = (q - self.origin) / self.cell;
        let ci = (d.x.floor().max(0.0) as usize).min(self.nx - 1) as isize;
        let cj = (d.y.floor().max(0.0) as usize).min(self.ny - 1) as isize;
        let mut best = (f64::INFINITY, 0, q);
        let reach = self.nx.max(self.ny) as isize;
        for k in 0..=reach {
            for j in (cj - k).max(0)..=(cj + k).min(self.ny as isize - 1) {
                let (lo, hi) = ((ci - k).max(0), (ci + k).min(self.nx as isize - 1));
                let ring: Vec<isize> = if (j - cj).abs() == k {
                    (lo..=hi).collect()
                } else {
                    [ci - k, ci + k].into_iter().filter(|&i| i >= lo && i <= hi).collect()
                };
                for i in ring {
                    for &s in &self.buckets[j as usize * self.nx + i as usize] {
                        let (a, b) = self.segs[s as usize];
                        let (d, c) = point_segment_distance(q, a, b);
                        if d < best.0 {
                            best = (d, s as usize, c);
                        }
                    }
                }
            }
            if best.0 <= k as f64 * self.cell {
                break;
            }
        }
        best
    }
}

/// Largest distance from a vertex of `a` to the polyline `b`.
pub fn directed_hausdorff(a: &Polyline, b: &Polyline) -> f64 {
    if b.len() < 64 {
        return a.points.iter().map(|&p| b.distance_to_point(p)).fold(0.0, f64::max);
    }
    let index = SegmentIndex::new(b);
    a.points.iter().map(|&p| index.distance(p)).fold(0.0, f64::max)
}

/// Symmetric point-to-segment Hausdorff distance.
pub fn hausdorff_distance(a: &Polyline, b: &Polyline) -> f64 {
    directed_hausdorff(a, b).max(directed_hausdorff(b, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Point;
    use std::f64::consts::PI;

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
    fn identical_polylines() {
        let c = circle(1.0, 64);
        assert_eq!(hausdorff_distance(&c, &c), 0.0);
    }

    #[test]
    fn concentric_circles() {
        let d = hausdorff_distance(&circle(1.0, 256), &circle(2.0, 256));
        assert!((d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inscribed_polygon_sagitta() {
        let d = hausdorff_distance(&circle(1.0, 1024), &circle(1.0, 64));
        let sagitta = 1.0 - (PI / 64.0).cos();
        assert!((d - sagitta).abs() < 1e-5, "{d} vs {sagitta}");
    }

    #[test]
    fn index_matches_brute_force() {
        let c = circle(1.0, 300);
        let open = Polyline::open((0..500).map(|k| Point::new(k as f64 * 0.01, (k as f64 * 0.01).sin() * 30.0)).collect());
        for p in [c, open] {
            let index = SegmentIndex::new(&p);
            for k in 0..400 {
                let q = Point::new((k as f64 * 0.37).sin() * 3.0, (k as f64 * 0.91).cos() * 40.0);
                assert_eq!(index.distance(q), p.distance_to_point(q));
                if p.closed {
                    assert_eq!(index.signed_distance(q), p.signed_distance(q));
                }
            }
        }
    }
}
