//! Exact solution of the damped wave Cauchy problem
//!
//! ```text
//! mu u_t + u_tt - u_xx = 0,   u(x, 0) = f(x),   u_t(x, 0) = g(x)
//! ```
//!
//! through its Bessel-kernel representation. With `d = x - a`,
//! `xi(a) = (mu/2) sqrt(t^2 - d^2)` on the domain of dependence `|d| <= t`:
//!
//! ```text
//! u = e^{-mu t/2}/2 [f(x+t) + f(x-t)]
//!   + 1/2 int f(a) (mu^2 t / 4) e^{-mu t/2} I_1(xi)/xi da
//!   + 1/2 int (g(a) + mu f(a)/2) e^{-mu t/2} I_0(xi) da
//! ```
//!
//! The time derivative of `I_0` has already been carried out, so the first
//! integrand is bounded at the window ends. Every `e^{-mu t/2} I_n(xi)` is
//! formed as `e^{xi - mu t/2} * (e^{-xi} I_n(xi))`; since `xi <= mu t/2` the
//! exponent is never positive and no intermediate overflows.

use crate::bessel::{bessel_i1_over_x_scaled, bessel_i_scaled};
use crate::compact::{CompactFunction, Interval};
use crate::quadrature::QuadratureSpec;
use crate::{Error, Result};

/// Initial data `(mu, f, g)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyProblem {
    pub mu: f64,
    /// Initial displacement.
    pub f: CompactFunction,
    /// Initial velocity.
    pub g: CompactFunction,
}

impl CauchyProblem {
    pub fn new(mu: f64, f: CompactFunction, g: CompactFunction) -> Result<Self> {
        if !(mu >= 0.0 && mu.is_finite()) {
            return Err(Error::domain(format!("mu must be >= 0, got {mu}")));
        }
        Ok(Self { mu, f, g })
    }

    /// Hull of `supp f ∪ supp g`.
    pub fn support(&self) -> Option<Interval> {
        match (self.f.support(), self.g.support()) {
            (Some(a), Some(b)) => Some(a.hull(&b)),
            (a, b) => a.or(b),
        }
    }

    /// `f ∈ C^2` and `g ∈ C^1` as required for the long-time limit.
    pub fn has_smooth_data(&self) -> bool {
        self.f.is_smooth() && self.g.is_smooth()
    }

    /// Problem with data `(f1 + f2, g1 + g2)` and the same damping.
    pub fn superpose(&self, other: &CauchyProblem) -> Result<Self> {
        if self.mu != other.mu {
            return Err(Error::domain("superposed problems must share mu"));
        }
        Ok(Self {
            mu: self.mu,
            f: self.f.plus(&other.f),
            g: self.g.plus(&other.g),
        })
    }
}

/// `[x - t, x + t]`.
pub fn domain_of_dependence(x: f64, t: f64) -> Result<Interval> {
    if !(t >= 0.0) {
        return Err(Error::domain(format!(
            "domain of dependence needs t >= 0, got {t}"
        )));
    }
    Interval::new(x - t, x + t)
}

/// `1/2 [f(x+t) + f(x-t)] + 1/2 int_{x-t}^{x+t} g`.
pub fn dalembert(
    f: &CompactFunction,
    g: &CompactFunction,
    x: f64,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let window = domain_of_dependence(x, t)?;
    let travelling = 0.5 * (f.eval(x + t) + f.eval(x - t));
    let integral = g.integrate_weighted(&window, |_| 1.0, spec)?.value;
    Ok(travelling + 0.5 * integral)
}

/// The Bessel kernels at `(x - a, t)` for damping `mu > 0`:
/// `(e^{-mu t/2} I_1(xi) mu^2 t / (4 xi), e^{-mu t/2} I_0(xi))`.
fn kernels(mu: f64, t: f64, d: f64) -> (f64, f64) {
    let half_mu = 0.5 * mu;
    let chord = ((t - d.abs()) * (t + d.abs())).max(0.0).sqrt().min(t);
    let xi = half_mu * chord;
    let exponent = half_mu * (chord - t);
    assert!(
        exponent <= 0.0,
        "positive exponent {exponent} in telegraph kernel"
    );
    let pairing = exponent.exp();
    let k1 = pairing * 0.25 * mu * mu * t * bessel_i1_over_x_scaled(xi);
    let k0 = pairing * bessel_i_scaled(0, xi);
    (k1, k0)
}

/// `u(x, t)` for `t > 0`. `mu = 0` is the undamped wave equation and is
/// delegated to [`dalembert`].
pub fn telegraph_exact(p: &CauchyProblem, x: f64, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(format!(
            "telegraph solution needs t > 0, got {t}"
        )));
    }
    if p.mu == 0.0 {
        return dalembert(&p.f, &p.g, x, t, spec);
    }
    let mu = p.mu;
    let window = domain_of_dependence(x, t)?;
    let travelling = 0.5 * (-0.5 * mu * t).exp() * (p.f.eval(x + t) + p.f.eval(x - t));

    let displacement = p.f.integrate_weighted(
        &window,
        |a| {
            let (k1, k0) = kernels(mu, t, x - a);
            k1 + 0.5 * mu * k0
        },
        spec,
    )?;
    let velocity =
        p.g.integrate_weighted(&window, |a| kernels(mu, t, x - a).1, spec)?;

    Ok(travelling + 0.5 * (displacement.value + velocity.value))
}

/// `|u_t(x, 0) - g(x)|` with `u_t(x, 0)` estimated by the one-sided
/// second-order difference `(-3 u(x,0) + 4 u(x,h) - u(x,2h)) / 2h`, `h = 1e-4`.
pub fn telegraph_time_derivative_check(p: &CauchyProblem, x: f64) -> Result<f64> {
    const H: f64 = 1e-4;
    let spec = QuadratureSpec::new(1e-13, 1e-12, 2000)?;
    let u0 = p.f.eval(x);
    let u1 = telegraph_exact(p, x, H, &spec)?;
    let u2 = telegraph_exact(p, x, 2.0 * H, &spec)?;
    let estimate = (-3.0 * u0 + 4.0 * u1 - u2) / (2.0 * H);
    Ok((estimate - p.g.eval(x)).abs())
}
