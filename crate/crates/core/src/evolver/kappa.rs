use super::support::RHO_FLOOR;
use super::{drive, EvolveError, FlowTrace, Scheme, Snapshot, StepControl, TraceMeta};
use crate::curve::TurningAngleCurve;
use crate::exact::TimeWindow;
use crate::numerics::{periodic_first_derivative4, periodic_second_difference, solve_cyclic_tridiagonal};
use crate::Point;

struct KappaState {
    kappa: Vec<f64>,
    base: Point,
}

fn rhs(kappa: &[f64], d: f64) -> (Vec<f64>, Vec<f64>) {
    let d2 = periodic_second_difference(kappa, d);
    let f = kappa.iter().zip(&d2).map(|(k, kk)| k * k * kk + k * k * k).collect();
    (f, d2)
}

/// Velocity `κN - κ_θT` of the point with turning angle `θ₀`.
fn base_velocity(kappa: &[f64], theta0: f64, d: f64) -> Point {
    let k_theta = periodic_first_derivative4(kappa, d)[0];
    let (s, c) = theta0.sin_cos();
    Point::new(-s, c) * kappa[0] - Point::new(c, s) * k_theta
}

/// Removes the translation mode of `1/κ` so that the curve closes.
fn project(kappa: &mut [f64], theta0: f64, d: f64) -> bool {
    let n = kappa.len() as f64;
    let (mut sc, mut ss) = (0.0, 0.0);
    for (k, v) in kappa.iter().enumerate() {
        let (s, c) = (theta0 + k as f64 * d).sin_cos();
        sc += c / v;
        ss += s / v;
    }
    let (a, b) = (2.0 * sc / n, 2.0 * ss / n);
    for (k, v) in kappa.iter_mut().enumerate() {
        let (s, c) = (theta0 + k as f64 * d).sin_cos();
        let rho = 1.0 / *v - a * c - b * s;
        if !(rho > 0.0) {
            return false;
        }
        *v = 1.0 / rho;
    }
    true
}

/// Evolves the curvature of a closed curve by `κₜ = κ²κ_θθ + κ³`.
///
/// Explicit steps are Heun's method with `Δt = cfl·Δθ²/max κ²`; the
/// semi-implicit scheme is the one-stage Rosenbrock step with Jacobian
/// `diag(κ²)D² + diag(2κκ_θθ + 3κ²)`. After each step the translation mode
/// of `1/κ` is projected out and the base point is advanced with the
/// velocity `κN - κ_θT` of the point at the first grid angle.
pub fn evolve_kappa(c0: &TurningAngleCurve, window: &TimeWindow, ctl: &StepControl) -> Result<FlowTrace, EvolveError> {
    if !c0.is_closed() {
        return Err(EvolveError::BadInitialData("curvature flow needs a closed curve".into()));
    }
    let n = c0.len();
    let d = c0.dtheta();
    let theta0 = c0.theta0();
    let rho_mean = c0.kappa().iter().map(|k| 1.0 / k).sum::<f64>() / n as f64;
    let kappa_ceiling = 1.0 / (RHO_FLOOR * rho_mean);
    let template = c0.clone();
    let scheme = ctl.scheme;
    let meta = TraceMeta::new("kappa", scheme.name(), n);
    let mut start = KappaState { kappa: c0.kappa().to_vec(), base: c0.base_point() };
    if !project(&mut start.kappa, theta0, d) {
        return Err(EvolveError::ClosureViolation { t: window.t_start });
    }

    let step = move |st: &mut KappaState, t: f64, cap: f64| -> Result<f64, Option<EvolveError>> {
        let kmax = st.kappa.iter().fold(0.0f64, |m, &k| m.max(k));
        if kmax > kappa_ceiling {
            return Err(None);
        }
        let dt = ctl.step(d * d / (kmax * kmax)).min(cap);
        let (f0, d2) = rhs(&st.kappa, d);
        let v0 = base_velocity(&st.kappa, theta0, d);
        let mut next: Vec<f64> = match scheme {
            Scheme::Explicit => {
                let k1: Vec<f64> = st.kappa.iter().zip(&f0).map(|(k, f)| k + dt * f).collect();
                let (f1, _) = rhs(&k1, d);
                st.kappa.iter().zip(f0.iter().zip(&f1)).map(|(k, (a, b))| k + 0.5 * dt * (a + b)).collect()
            }
            Scheme::SemiImplicit => {
                let inv_d2 = 1.0 / (d * d);
                let mut lower = vec![0.0; n];
                let mut diag = vec![0.0; n];
                let mut upper = vec![0.0; n];
                for i in 0..n {
                    let k = st.kappa[i];
                    let c = 0.5 * dt * k * k * inv_d2;
                    lower[i] = -c;
                    upper[i] = -c;
                    diag[i] = 1.0 + 2.0 * c - 0.5 * dt * (2.0 * k * d2[i] + 3.0 * k * k);
                }
                let inc = solve_cyclic_tridiagonal(&lower, &diag, &upper, &f0);
                st.kappa.iter().zip(&inc).map(|(k, i)| k + dt * i).collect()
            }
        };
        if let Some(node) = next.iter().position(|k| !(*k > 0.0) || !k.is_finite()) {
            return Err(Some(EvolveError::ConvexityLost { t: t + dt, node }));
        }
        if !project(&mut next, theta0, d) {
            return Err(Some(EvolveError::ClosureViolation { t: t + dt }));
        }
        let v1 = base_velocity(&next, theta0, d);
        st.base += (v0 + v1) * (0.5 * dt);
        st.kappa = next;
        Ok(dt)
    };
    let snap = move |st: &KappaState| Snapshot::Turning(template.with_kappa(st.kappa.clone(), st.base));
    drive(window, ctl, FlowTrace::empty(meta), start, step, snap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn circle_curvature_law() {
        let c0 = TurningAngleCurve::closed(vec![0.5; 64], PI / 2.0, Point::new(2.0, 0.0)).unwrap();
        let w = TimeWindow::new(-2.0, -0.5).unwrap();
        let ctl = StepControl::explicit(0.4).with_uniform_outputs(&w, 5);
        let tr = evolve_kappa(&c0, &w, &ctl).unwrap();
        for (t, s) in tr.times.iter().zip(&tr.snapshots) {
            let Snapshot::Turning(c) = s else { panic!() };
            for k in c.kappa() {
                assert!((k - 1.0 / (-2.0 * t).sqrt()).abs() < 1e-4);
            }
            // The base point stays on the shrinking circle about the origin.
            assert!((c.base_point().norm() - (-2.0 * t).sqrt()).abs() < 1e-4);
        }
    }

    #[test]
    fn semi_implicit_matches_explicit_on_perturbed_circle() {
        let n = 128;
        let kappa: Vec<f64> = (0..n).map(|k| 1.0 + 0.1 * (2.0 * PI * k as f64 / n as f64 * 2.0).cos()).collect();
        let c0 = TurningAngleCurve::closed(kappa, 0.0, Point::zeros()).unwrap();
        let w = TimeWindow::new(0.0, 0.1).unwrap();
        let a = evolve_kappa(&c0, &w, &StepControl::explicit(0.4)).unwrap();
        let b = evolve_kappa(&c0, &w, &StepControl::semi_implicit(4.0, 1e-3)).unwrap();
        let (Snapshot::Turning(ka), Snapshot::Turning(kb)) = (a.snapshots.last().unwrap(), b.snapshots.last().unwrap()) else {
            panic!()
        };
        for (x, y) in ka.kappa().iter().zip(kb.kappa()) {
            assert!((x - y).abs() < 1e-4, "{x} vs {y}");
        }
    }

    #[test]
    fn open_curves_are_rejected() {
        let c0 = TurningAngleCurve::open(vec![1.0; 9], -1.0, 1.0, Point::zeros()).unwrap();
        let w = TimeWindow::new(0.0, 1.0).unwrap();
        assert!(matches!(
            evolve_kappa(&c0, &w, &StepControl::explicit(0.4)),
            Err(EvolveError::BadInitialData(_))
        ));
    }
}
