use std::f64::consts::{FRAC_PI_2, PI};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ScenarioError;
use crate::curve::{support_from_polyline, Polyline, SupportCurve, TurningAngleCurve};
use crate::exact::{ClipBox, ExactFamily};
use crate::Point;

fn default_nodes() -> usize {
    256
}

/// Initial curve of a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialData {
    /// A member of an exact family at time `t` (default: window start).
    Exact {
        family: ExactFamily,
        #[serde(default)]
        t: Option<f64>,
        #[serde(default = "default_nodes")]
        nodes: usize,
        #[serde(default)]
        clip: Option<ClipBox>,
        #[serde(default)]
        theta_max: Option<f64>,
    },
    /// Closed convex polyline in the CSV format of [`crate::io`], relative
    /// to the scenario file.
    PolylineFile {
        path: PathBuf,
        #[serde(default = "default_nodes")]
        nodes: usize,
    },
    /// `h(θ) = r₀ + Σ_{k≥1} a_k cos kθ + b_k sin kθ` about `center`.
    Fourier {
        r0: f64,
        #[serde(default)]
        a: Vec<f64>,
        #[serde(default)]
        b: Vec<f64>,
        #[serde(default = "default_nodes")]
        nodes: usize,
        #[serde(default)]
        center: Option<[f64; 2]>,
    },
    /// Seeded random polygon inscribed in a circle of `radius`, rounded by a
    /// disk of radius `rounding` (Minkowski sum).
    RandomPolygon {
        sides: usize,
        radius: f64,
        rounding: f64,
        seed: u64,
        #[serde(default = "default_nodes")]
        nodes: usize,
    },
}

impl InitialData {
    pub fn nodes(&self) -> usize {
        match self {
            InitialData::Exact { nodes, .. }
            | InitialData::PolylineFile { nodes, .. }
            | InitialData::Fourier { nodes, .. }
            | InitialData::RandomPolygon { nodes, .. } => *nodes,
        }
    }

    pub fn family(&self) -> Option<&ExactFamily> {
        match self {
            InitialData::Exact { family, .. } => Some(family),
            _ => None,
        }
    }
}

/// Polygon with `sides` vertices at seeded random angles on a circle of
/// `radius` about the origin. Angular gaps stay below `π` so the origin is
/// interior.
pub fn random_convex_polygon(sides: usize, radius: f64, seed: u64) -> Polyline {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut angles: Vec<f64> = (0..sides).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
        angles.sort_by(f64::total_cmp);
        let max_gap = angles
            .windows(2)
            .map(|w| w[1] - w[0])
            .chain(std::iter::once(angles[0] + 2.0 * PI - angles[sides - 1]))
            .fold(0.0, f64::max);
        if max_gap < 0.9 * PI && angles.windows(2).all(|w| w[1] - w[0] > 1e-3) {
            return Polyline::closed(angles.iter().map(|a| Point::new(a.cos(), a.sin()) * radius).collect());
        }
    }
}

/// Support function of `p ⊕ B_r` about the origin: `max_v v·ν + r`.
pub fn rounded_polygon_support(p: &Polyline, rounding: f64, n: usize) -> Result<SupportCurve, ScenarioError> {
    SupportCurve::from_fn(n, Point::zeros(), |phi| {
        let nu = Point::new(phi.cos(), phi.sin());
        p.points.iter().map(|v| v.dot(&nu)).fold(f64::NEG_INFINITY, f64::max) + rounding
    })
    .map_err(|e| ScenarioError::Config(format!("rounded polygon: {e}")))
}

/// Boundary points of `p ⊕ B_r` with outward normals at `n` uniform angles:
/// the supporting vertex pushed out by `r·ν`.
pub fn rounded_polygon_points(p: &Polyline, rounding: f64, n: usize) -> Polyline {
    let pts = (0..n)
        .map(|k| {
            let phi = 2.0 * PI * k as f64 / n as f64;
            let nu = Point::new(phi.cos(), phi.sin());
            let v = p.points.iter().copied().max_by(|a, b| a.dot(&nu).total_cmp(&b.dot(&nu))).unwrap_or_else(Point::zeros);
            v + nu * rounding
        })
        .collect();
    Polyline::closed(pts)
}

pub fn fourier_support(r0: f64, a: &[f64], b: &[f64], n: usize, center: Point) -> Result<SupportCurve, ScenarioError> {
    SupportCurve::from_fn(n, center, |phi| {
        let cos_part: f64 = a.iter().enumerate().map(|(k, c)| c * ((k + 1) as f64 * phi).cos()).sum();
        let sin_part: f64 = b.iter().enumerate().map(|(k, c)| c * ((k + 1) as f64 * phi).sin()).sum();
        r0 + cos_part + sin_part
    })
    .map_err(|e| ScenarioError::Config(format!("Fourier initial data is not strictly convex: {e}")))
}

/// Curvature by turning angle of a support curve: node `k` has turning angle
/// `φ_k + π/2` and curvature `1/ρ_k`.
pub fn turning_from_support(h: &SupportCurve) -> Result<TurningAngleCurve, ScenarioError> {
    let kappa = h.radius_of_curvature().iter().map(|r| 1.0 / r).collect();
    let base = h.to_polyline().points[0];
    TurningAngleCurve::closed(kappa, FRAC_PI_2, base).map_err(|e| ScenarioError::Config(e.to_string()))
}

/// Support-function form of non-exact initial data.
pub(crate) fn non_exact_support(init: &InitialData, base: &Path) -> Result<SupportCurve, ScenarioError> {
    match init {
        InitialData::Exact { .. } => unreachable!("exact data is handled by the caller"),
        InitialData::PolylineFile { path, nodes } => {
            let p = crate::io::read_polyline_csv(&base.join(path))?;
            support_from_polyline(&p, *nodes).map_err(|e| ScenarioError::Config(format!("{}: {e}", path.display())))
        }
        InitialData::Fourier { r0, a, b, nodes, center } => {
            let c = center.map_or(Point::zeros(), |c| Point::new(c[0], c[1]));
            fourier_support(*r0, a, b, *nodes, c)
        }
        InitialData::RandomPolygon { sides, radius, rounding, seed, nodes } => {
            if *sides < 3 || !(*radius > 0.0) || !(*rounding >= 0.0) {
                return Err(ScenarioError::Config("random polygon needs sides ≥ 3, radius > 0, rounding ≥ 0".into()));
            }
            rounded_polygon_support(&random_convex_polygon(*sides, *radius, *seed), *rounding, *nodes)
        }
    }
}

/// Polyline form of non-exact initial data. Rounded polygons are sampled
/// exactly rather than through finite differences of the support function,
/// which has kinks at the flat edges.
pub(crate) fn non_exact_polyline(init: &InitialData, base: &Path) -> Result<Polyline, ScenarioError> {
    match init {
        InitialData::PolylineFile { path, .. } => Ok(crate::io::read_polyline_csv(&base.join(path))?),
        InitialData::RandomPolygon { sides, radius, rounding, seed, nodes } => {
            non_exact_support(init, base)?;
            Ok(rounded_polygon_points(&random_convex_polygon(*sides, *radius, *seed), *rounding, *nodes))
        }
        _ => Ok(non_exact_support(init, base)?.to_polyline()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_polygon_is_convex_and_reproducible() {
        let a = random_convex_polygon(12, 1.0, 7);
        let b = random_convex_polygon(12, 1.0, 7);
        assert_eq!(a, b);
        assert!(a.is_convex() && a.signed_area() > 0.0);
        assert_ne!(a, random_convex_polygon(12, 1.0, 8));
    }

    #[test]
    fn rounded_support_is_strictly_convex() {
        let h = rounded_polygon_support(&random_convex_polygon(12, 1.0, 3), 0.2, 256).unwrap();
        assert!(h.radius_of_curvature().iter().all(|r| *r > 0.0));
    }

    #[test]
    fn rounded_points_lie_on_the_offset_curve() {
        let poly = random_convex_polygon(12, 1.0, 3);
        let p = rounded_polygon_points(&poly, 0.2, 256);
        assert!(p.is_convex());
        for q in &p.points {
            assert!((poly.signed_distance(*q).abs() - 0.2).abs() < 1e-12);
        }
    }

    #[test]
    fn fourier_rejects_nonconvex_data() {
        assert!(fourier_support(1.0, &[0.0, 0.3], &[], 64, Point::zeros()).is_ok());
        assert!(matches!(fourier_support(1.0, &[0.0, 0.0, 0.2], &[], 64, Point::zeros()), Err(ScenarioError::Config(_))));
    }

    #[test]
    fn turning_curve_matches_a_circle() {
        let h = fourier_support(2.0, &[], &[], 128, Point::new(1.0, 0.0)).unwrap();
        let c = turning_from_support(&h).unwrap();
        assert!(c.kappa().iter().all(|k| (k - 0.5).abs() < 1e-12));
        let p = c.reconstruct_positions().unwrap();
        assert!(p.points.iter().all(|q| ((q - Point::new(1.0, 0.0)).norm() - 2.0).abs() < 1e-10));
    }
}
