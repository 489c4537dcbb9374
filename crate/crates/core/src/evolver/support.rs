use super::{drive, EvolveError, FlowTrace, Scheme, Snapshot, StepControl, TraceMeta};
use crate::curve::SupportCurve;
use crate::exact::TimeWindow;
use crate::numerics::{periodic_second_difference, solve_cyclic_tridiagonal};

/// Extinction floor on the radius of curvature, relative to its initial mean.
pub(crate) const RHO_FLOOR: f64 = 1e-6;

fn rho_of(h: &[f64], d: f64) -> Vec<f64> {
    periodic_second_difference(h, d).iter().zip(h).map(|(a, b)| a + b).collect()
}

/// Evolves the support function by `hₜ = -1/ρ`, `ρ = h_θθ + h`.
///
/// Explicit steps are Heun's method with `Δt = cfl·Δθ²·min ρ²`. The
/// semi-implicit scheme is a one-stage Rosenbrock step
/// `(I - Δt/2·J) k = F(h)`, `h ← h + Δt k`, with `J = diag(ρ⁻²)(D² + I)`
/// the Jacobian of `-1/ρ`; it is second order and solved by a cyclic
/// tridiagonal sweep.
pub fn evolve_support(h0: &SupportCurve, window: &TimeWindow, ctl: &StepControl) -> Result<FlowTrace, EvolveError> {
    let n = h0.len();
    let d = h0.dtheta();
    let center = h0.center();
    let rho0 = h0.radius_of_curvature();
    let floor = RHO_FLOOR * rho0.iter().sum::<f64>() / n as f64;
    let meta = TraceMeta::new("support", ctl.scheme.name(), n);
    let scheme = ctl.scheme;
    let step = move |h: &mut Vec<f64>, t: f64, cap: f64| -> Result<f64, Option<EvolveError>> {
        let rho = rho_of(h, d);
        let (node, rmin) = rho
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, &r)| if r < acc.1 { (i, r) } else { acc });
        if rmin <= 0.0 {
            return Err(Some(EvolveError::ConvexityLost { t, node }));
        }
        if rmin < floor {
            return Err(None);
        }
        let dt = ctl.step(d * d * rmin * rmin).min(cap);
        match scheme {
            Scheme::Explicit => {
                let k1: Vec<f64> = rho.iter().map(|r| -1.0 / r).collect();
                let h1: Vec<f64> = h.iter().zip(&k1).map(|(a, k)| a + dt * k).collect();
                let rho1 = rho_of(&h1, d);
                if let Some(node) = rho1.iter().position(|r| !(*r > 0.0)) {
                    return Err(Some(EvolveError::ConvexityLost { t: t + dt, node }));
                }
                for i in 0..n {
                    h[i] += 0.5 * dt * (k1[i] - 1.0 / rho1[i]);
                }
            }
            Scheme::SemiImplicit => {
                let inv_d2 = 1.0 / (d * d);
                let mut lower = vec![0.0; n];
                let mut diag = vec![0.0; n];
                let mut upper = vec![0.0; n];
                let mut rhs = vec![0.0; n];
                for i in 0..n {
                    let c = 0.5 * dt / (rho[i] * rho[i]);
                    lower[i] = -c * inv_d2;
                    upper[i] = -c * inv_d2;
                    diag[i] = 1.0 - c * (1.0 - 2.0 * inv_d2);
                    rhs[i] = -1.0 / rho[i];
                }
                let k = solve_cyclic_tridiagonal(&lower, &diag, &upper, &rhs);
                for i in 0..n {
                    h[i] += dt * k[i];
                }
            }
        }
        Ok(dt)
    };
    let snap = move |h: &Vec<f64>| Snapshot::Support(SupportCurve::from_parts_unchecked(h.clone(), center));
    drive(window, ctl, FlowTrace::empty(meta), h0.h().to_vec(), step, snap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Point;

    fn circle(r: f64, n: usize) -> SupportCurve {
        SupportCurve::from_fn(n, Point::zeros(), |_| r).unwrap()
    }

    #[test]
    fn circle_radius_law_explicit() {
        let w = TimeWindow::new(-2.0, -0.5).unwrap();
        let ctl = StepControl::explicit(0.4).with_uniform_outputs(&w, 6);
        let tr = evolve_support(&circle(2.0, 256), &w, &ctl).unwrap();
        assert_eq!(tr.len(), 7);
        for (t, s) in tr.times.iter().zip(&tr.snapshots) {
            let Snapshot::Support(s) = s else { panic!() };
            for h in s.h() {
                assert!((h - (-2.0 * t).sqrt()).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn circle_radius_law_semi_implicit() {
        let w = TimeWindow::new(-2.0, -0.5).unwrap();
        let ctl = StepControl::semi_implicit(50.0, 1e-3);
        let tr = evolve_support(&circle(2.0, 64), &w, &ctl).unwrap();
        let Snapshot::Support(s) = tr.snapshots.last().unwrap() else { panic!() };
        assert!((s.h()[0] - 1.0).abs() < 1e-6, "{}", s.h()[0]);
    }

    #[test]
    fn extinction_returns_partial_trace() {
        let w = TimeWindow::new(-0.5, 0.5).unwrap();
        let ctl = StepControl::explicit(0.4).with_outputs(vec![-0.25]);
        let err = evolve_support(&circle(1.0, 16), &w, &ctl).unwrap_err();
        let partial = err.into_partial().expect("extinction");
        assert_eq!(partial.len(), 2);
    }

    #[test]
    fn rejects_unstable_cfl() {
        let w = TimeWindow::new(-2.0, -1.0).unwrap();
        assert!(matches!(
            evolve_support(&circle(2.0, 16), &w, &StepControl::explicit(0.9)),
            Err(EvolveError::BadControl(_))
        ));
    }
}
