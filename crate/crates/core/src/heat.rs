//! Heat equation `mu u_t - u_xx = 0`: Gaussian profile, fundamental
//! solution and convolution solutions of the initial value problem.

use std::f64::consts::PI;

pub use crate::compact::CompactFunction;
use crate::compact::Interval;
use crate::quadrature::QuadratureSpec;
use crate::scaling::{limit_study, GridSpec, ScalingReport};
use crate::{Error, Result};

/// Damping / inverse diffusivity `mu > 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Damping(f64);

impl Damping {
    pub fn new(mu: f64) -> Result<Self> {
        if mu > 0.0 && mu.is_finite() {
            Ok(Self(mu))
        } else {
            Err(Error::domain(format!(
                "mu must be > 0 for the heat equation, got {mu}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Diffusion coefficient `1/mu`.
    pub fn diffusivity(self) -> f64 {
        1.0 / self.0
    }
}

/// `f*_mu(x) = sqrt(mu / 4 pi) exp(-mu x^2 / 4)`.
pub fn gaussian_profile(mu: Damping, x: f64) -> f64 {
    let mu = mu.value();
    (mu / (4.0 * PI)).sqrt() * (-mu * x * x / 4.0).exp()
}

/// Fundamental solution `K(x, t) = t^{-1/2} f*_mu(x / sqrt t)`.
pub fn heat_kernel(mu: Damping, x: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("heat kernel needs t > 0, got {t}")));
    }
    let s = t.sqrt();
    Ok(gaussian_profile(mu, x / s) / s)
}

/// `u(x, t) = int K(x - y, t) f0(y) dy`, restricted to the support of `f0`.
pub fn heat_solve_convolution(
    mu: Damping,
    f0: &CompactFunction,
    x: f64,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("heat solution needs t > 0, got {t}")));
    }
    let Some(support) = f0.support() else {
        return Ok(0.0);
    };
    let s = t.sqrt();
    let kernel = |y: f64| gaussian_profile(mu, (x - y) / s) / s;
    Ok(f0.integrate_weighted(&support, kernel, spec)?.value)
}

/// Sup and L2 distances between `sqrt(t) u(sqrt(t) x, t)` and `M f*_mu(x)`
/// for the heat solution with data `f0`, `M = int f0`.
pub fn heat_rescaled_limit_check(
    mu: Damping,
    f0: &CompactFunction,
    t_list: &[f64],
    grid: &GridSpec,
) -> Result<ScalingReport> {
    let spec = QuadratureSpec::default();
    let mass = f0.mass(&spec)?;
    limit_study(
        |x, t| heat_solve_convolution(mu, f0, x, t, &spec),
        mu,
        mass,
        t_list,
        grid,
    )
}

/// Interval on which the Gaussian profile exceeds `tol` relative to its peak.
pub fn profile_extent(mu: Damping, tol: f64) -> Interval {
    let r = (4.0 * (-tol.ln()) / mu.value()).sqrt();
    Interval { lo: -r, hi: r }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_adaptive;

    fn mu(v: f64) -> Damping {
        Damping::new(v).unwrap()
    }

    #[test]
    fn damping_rejects_nonpositive() {
        assert!(Damping::new(0.0).is_err());
        assert!(Damping::new(-1.0).is_err());
        assert_eq!(mu(2.0).diffusivity(), 0.5);
    }

    #[test]
    fn profile_at_origin() {
        assert_eq!(gaussian_profile(mu(1.0), 0.0), (1.0 / (4.0 * PI)).sqrt());
    }

    #[test]
    fn profile_moments() {
        let spec = QuadratureSpec::default();
        for &m in &[0.5, 1.0, 4.0] {
            let r = 40.0 / f64::sqrt(m);
            let f = |x: f64| gaussian_profile(mu(m), x);
            let m0 = integrate_adaptive(f, -r, r, &spec).unwrap().value;
            let m2 = integrate_adaptive(|x| x * x * f(x), -r, r, &spec)
                .unwrap()
                .value;
            assert!((m0 - 1.0).abs() <= 1e-10);
            assert!((m2 - 2.0 / m).abs() <= 1e-8);
        }
    }

    #[test]
    fn kernel_at_unit_time_is_profile() {
        for k in -20..=20 {
            let x = 0.3 * k as f64;
            assert_eq!(
                heat_kernel(mu(1.3), x, 1.0).unwrap(),
                gaussian_profile(mu(1.3), x)
            );
        }
        assert!(heat_kernel(mu(1.0), 0.0, 0.0).is_err());
    }

    #[test]
    fn kernel_scaling_fixed_point() {
        let m = mu(0.7);
        for &t in &[0.01f64, 0.5, 3.0, 100.0, 1e4] {
            for k in -10..=10 {
                let x = 0.2 * k as f64;
                let lhs = t.sqrt() * heat_kernel(m, t.sqrt() * x, t).unwrap();
                let rhs = gaussian_profile(m, x);
                assert!((lhs - rhs).abs() <= 1e-15 * rhs, "t={t} x={x}");
            }
        }
    }

    #[test]
    fn kernel_solves_heat_equation() {
        // finite-difference residual mu K_t - K_xx
        let m = mu(1.0);
        let (x, t, h) = (0.7, 2.0, 1e-4);
        let k = |x: f64, t: f64| heat_kernel(m, x, t).unwrap();
        let kt = (k(x, t + h) - k(x, t - h)) / (2.0 * h);
        let kxx = (k(x + h, t) - 2.0 * k(x, t) + k(x - h, t)) / (h * h);
        assert!((m.value() * kt - kxx).abs() <= 1e-6);
    }

    #[test]
    fn kernel_normalised_and_positive() {
        let spec = QuadratureSpec::default();
        let m = mu(1.0);
        for &t in &[0.1f64, 1.0, 10.0] {
            let r = 40.0 * t.sqrt();
            let mass = integrate_adaptive(|x| heat_kernel(m, x, t).unwrap(), -r, r, &spec)
                .unwrap()
                .value;
            assert!((mass - 1.0).abs() <= 1e-10);
            assert!(heat_kernel(m, 5.0, t).unwrap() > 0.0);
        }
    }

    #[test]
    fn zero_data_gives_zero() {
        let spec = QuadratureSpec::default();
        let u = heat_solve_convolution(mu(1.0), &CompactFunction::Zero, 0.3, 1.0, &spec).unwrap();
        assert_eq!(u, 0.0);
    }

    #[test]
    fn convolution_conserves_mass() {
        let spec = QuadratureSpec::default();
        let m = mu(1.0);
        let f0 = CompactFunction::bump(0.5, 1.0, 1.0).unwrap();
        let mass0 = f0.mass(&spec).unwrap();
        for &t in &[0.5f64, 2.0, 8.0] {
            let r = 0.5 + 1.0 + 30.0 * t.sqrt();
            let mass = integrate_adaptive(
                |x| heat_solve_convolution(m, &f0, x, t, &spec).unwrap(),
                -r,
                r,
                &spec,
            )
            .unwrap()
            .value;
            assert!((mass - mass0).abs() <= 1e-8, "t={t}: {mass} vs {mass0}");
        }
    }

    #[test]
    fn nonnegative_data_gives_nonnegative_solution() {
        let spec = QuadratureSpec::default();
        let f0 = CompactFunction::indicator(0.0, 1.0, 1.0).unwrap();
        for k in -30..=30 {
            let x = 0.5 * k as f64;
            assert!(heat_solve_convolution(mu(2.0), &f0, x, 0.3, &spec).unwrap() >= -1e-12);
        }
    }

    #[test]
    fn rescaled_profile_data_follows_closed_form() {
        // data f* evolves into K(x, t + 1), whose rescaling is
        // sqrt(t/(t+1)) f*(x sqrt(t/(t+1))); the distance to f* is O(1/t)
        let m = mu(1.0);
        let f0 = CompactFunction::tabulate(0.0, 12.0, 4801, |x| gaussian_profile(m, x)).unwrap();
        let grid = GridSpec::new(-3.0, 3.0, 7).unwrap();
        let t_list = [1.0, 10.0, 100.0];
        let r = heat_rescaled_limit_check(m, &f0, &t_list, &grid).unwrap();
        for (k, &t) in t_list.iter().enumerate() {
            let c = (t / (t + 1.0)).sqrt();
            let closed = grid
                .nodes()
                .iter()
                .map(|&x| (c * gaussian_profile(m, c * x) - gaussian_profile(m, x)).abs())
                .fold(0.0, f64::max);
            assert!((r.sup_dist[k] - closed).abs() <= 1e-6, "t={t}");
        }
        assert!(r.monotone_tail);
        assert!((r.prefactor - 1.0).abs() <= 1e-6);
    }

    #[test]
    fn indicator_is_smoothed_instantly() {
        let spec = QuadratureSpec::default();
        let f0 = CompactFunction::indicator(0.0, 1.0, 1.0).unwrap();
        let t = 0.01;
        let h = 0.01;
        let u = |x: f64| heat_solve_convolution(mu(1.0), &f0, x, t, &spec).unwrap();
        let bound = 1.0 / (t * mu(1.0).diffusivity());
        for k in -200..=200 {
            let x = k as f64 * h;
            let d2 = (u(x + h) - 2.0 * u(x) + u(x - h)) / (h * h);
            assert!(d2.is_finite() && d2.abs() < 10.0 * bound, "x={x}: {d2}");
        }
    }
}
