//! Explicit finite-difference solvers for the damped wave and heat
//! equations, used as brute-force oracles for the closed-form solvers.
//!
//! Both schemes use the three-point Laplacian on a uniform grid with
//! homogeneous Dirichlet values at the two artificial boundaries.

use crate::compact::{CompactFunction, Interval};
use crate::heat::Damping;
use crate::telegraph::CauchyProblem;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdmConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub dx: f64,
    /// `dt = cfl * dx` for the wave scheme, `dt = cfl * mu * dx^2 / 2` for
    /// the heat scheme.
    pub cfl: f64,
    pub t_end: f64,
}

impl FdmConfig {
    pub fn new(x_min: f64, x_max: f64, dx: f64, cfl: f64, t_end: f64) -> Result<Self> {
        let cfg = Self {
            x_min,
            x_max,
            dx,
            cfl,
            t_end,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_min.is_finite() && self.x_max.is_finite() && self.x_min < self.x_max) {
            return Err(Error::config("x_min must be < x_max"));
        }
        if !(self.dx > 0.0) {
            return Err(Error::config("dx must be > 0"));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::config(format!(
                "cfl must be in (0, 1], got {}",
                self.cfl
            )));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::config("t_end must be > 0"));
        }
        if self.points() < 3 {
            return Err(Error::config("grid needs at least 3 points"));
        }
        Ok(())
    }

    pub fn points(&self) -> usize {
        ((self.x_max - self.x_min) / self.dx).round() as usize + 1
    }

    /// The data support widened by the light cone must sit strictly inside
    /// the domain.
    fn check_light_cone(&self, support: Option<Interval>) -> Result<()> {
        if let Some(s) = support {
            let cone = s.widen(self.t_end);
            if !(self.x_min < cone.lo && cone.hi < self.x_max) {
                return Err(Error::config(format!(
                    "domain [{}, {}] does not contain data support {s} widened by t_end = {}",
                    self.x_min, self.x_max, self.t_end
                )));
            }
        }
        Ok(())
    }
}

/// Samples of a field on `x_min + i * dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub x_min: f64,
    pub dx: f64,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn new(x_min: f64, dx: f64, values: Vec<f64>) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::domain("grid function needs at least 3 values"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("grid function values must be finite"));
        }
        Ok(Self { x_min, dx, values })
    }

    pub fn sample(x_min: f64, dx: f64, points: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(
            x_min,
            dx,
            (0..points).map(|i| f(x_min + i as f64 * dx)).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx
    }

    /// Linear interpolation, zero outside the grid.
    pub fn interpolate(&self, x: f64) -> f64 {
        let s = (x - self.x_min) / self.dx;
        let n = self.values.len();
        if !(0.0..=(n - 1) as f64).contains(&s) {
            return 0.0;
        }
        let i = (s.floor() as usize).min(n - 2);
        let w = s - i as f64;
        (1.0 - w) * self.values[i] + w * self.values[i + 1]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `sum u_i dx`.
    pub fn sum(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.dx
    }

    fn same_grid(&self, other: &GridFunction) -> bool {
        self.len() == other.len() && self.x_min == other.x_min && self.dx == other.dx
    }
}

/// Energy history of a wave run, sampled at the half levels
/// `t_{k+1/2} = (k + 1/2) dt` with
///
/// ```text
/// E^{k+1/2} = 1/2 |(u^{k+1} - u^k)/dt|^2 + 1/2 <D+ u^{k+1}, D+ u^k>
/// ```
///
/// This is the quantity the centered scheme conserves exactly when
/// `mu = 0` and decreases by `mu dt |(u^{k+1} - u^{k-1})/2dt|^2` per step
/// otherwise. It is positive for `cfl < 1` and approximates
/// `int 1/2 (u_t^2 + u_x^2)` to second order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EnergyTrace {
    pub times: Vec<f64>,
    pub energy: Vec<f64>,
    /// `int u_t^2` at the same times.
    pub kinetic: Vec<f64>,
    /// `-mu int u_t^2`, the rate the continuous energy law predicts.
    pub dissipation: Vec<f64>,
}

impl EnergyTrace {
    fn record(&mut self, t: f64, a: &[f64], b: &[f64], dt: f64, dx: f64, mu: f64) {
        let kinetic = a
            .iter()
            .zip(b)
            .map(|(a, b)| ((b - a) / dt).powi(2))
            .sum::<f64>()
            * dx;
        let potential = a
            .windows(2)
            .zip(b.windows(2))
            .map(|(a, b)| (a[1] - a[0]) * (b[1] - b[0]))
            .sum::<f64>()
            / dx;
        self.times.push(t);
        self.energy.push(0.5 * (kinetic + potential));
        self.kinetic.push(kinetic);
        self.dissipation.push(-mu * kinetic);
    }
}

fn laplacian(u: &[f64], i: usize, inv_dx2: f64) -> f64 {
    (u[i + 1] - 2.0 * u[i] + u[i - 1]) * inv_dx2
}

/// Initial data's second derivative on the grid: analytic where available,
/// central differences otherwise.
fn second_derivative_on_grid(f: &CompactFunction, x_min: f64, dx: f64, n: usize) -> Vec<f64> {
    let x = |i: usize| x_min + i as f64 * dx;
    (0..n)
        .map(|i| {
            f.second_derivative(x(i)).unwrap_or_else(|| {
                if i == 0 || i == n - 1 {
                    0.0
                } else {
                    (f.eval(x(i + 1)) - 2.0 * f.eval(x(i)) + f.eval(x(i - 1))) / (dx * dx)
                }
            })
        })
        .collect()
}

/// Centered scheme for `mu u_t + u_tt - u_xx = 0`:
///
/// ```text
/// mu (u^{n+1} - u^{n-1}) / 2dt + (u^{n+1} - 2u^n + u^{n-1}) / dt^2 = D+D- u^n
/// ```
///
/// seeded with `u^1 = f + dt g + dt^2/2 (f'' - mu g)`. Returns the final
/// snapshot and the energy trace at every half level.
pub fn fdm_telegraph(p: &CauchyProblem, cfg: &FdmConfig) -> Result<(GridFunction, EnergyTrace)> {
    cfg.validate()?;
    cfg.check_light_cone(p.support())?;

    let n = cfg.points();
    let dx = cfg.dx;
    let steps = (cfg.t_end / (cfg.cfl * dx) - 1e-9).ceil().max(1.0) as usize;
    let dt = cfg.t_end / steps as f64;
    let mu = p.mu;
    let inv_dx2 = 1.0 / (dx * dx);
    let x = |i: usize| cfg.x_min + i as f64 * dx;

    let mut prev: Vec<f64> = (0..n).map(|i| p.f.eval(x(i))).collect();
    let fxx = second_derivative_on_grid(&p.f, cfg.x_min, dx, n);
    let mut curr: Vec<f64> = (0..n)
        .map(|i| {
            let g = p.g.eval(x(i));
            prev[i] + dt * g + 0.5 * dt * dt * (fxx[i] - mu * g)
        })
        .collect();
    prev[0] = 0.0;
    prev[n - 1] = 0.0;
    curr[0] = 0.0;
    curr[n - 1] = 0.0;

    let lhs = 1.0 / (dt * dt) + 0.5 * mu / dt;
    let mut next = vec![0.0; n];
    let mut trace = EnergyTrace::default();
    trace.record(0.5 * dt, &prev, &curr, dt, dx, mu);

    for step in 1..steps {
        for i in 1..n - 1 {
            let rhs = laplacian(&curr, i, inv_dx2)
                + (2.0 * curr[i] - prev[i]) / (dt * dt)
                + 0.5 * mu * prev[i] / dt;
            next[i] = rhs / lhs;
        }
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::Unstable { step });
        }
        trace.record((step as f64 + 0.5) * dt, &curr, &next, dt, dx, mu);

        std::mem::swap(&mut prev, &mut curr);
        std::mem::swap(&mut curr, &mut next);
    }

    Ok((GridFunction::new(cfg.x_min, dx, curr)?, trace))
}

/// Forward Euler in time, centered second difference in space, for
/// `mu u_t - u_xx = 0`.
pub fn fdm_heat(mu: Damping, f0: &CompactFunction, cfg: &FdmConfig) -> Result<GridFunction> {
    cfg.validate()?;
    cfg.check_light_cone(f0.support())?;

    let n = cfg.points();
    let dx = cfg.dx;
    let mu = mu.value();
    let dt_max = cfg.cfl * mu * dx * dx / 2.0;
    let steps = (cfg.t_end / dt_max - 1e-9).ceil().max(1.0) as usize;
    let dt = cfg.t_end / steps as f64;
    if dt > mu * dx * dx / 2.0 {
        return Err(Error::config("heat scheme needs dt <= mu dx^2 / 2"));
    }
    let r = dt / (mu * dx * dx);

    let mut u: Vec<f64> = (0..n).map(|i| f0.eval(cfg.x_min + i as f64 * dx)).collect();
    u[0] = 0.0;
    u[n - 1] = 0.0;
    let mut next = u.clone();
    for step in 0..steps {
        for i in 1..n - 1 {
            next[i] = u[i] + r * (u[i + 1] - 2.0 * u[i] + u[i - 1]);
        }
        if !next[n / 2].is_finite() {
            return Err(Error::Unstable { step });
        }
        std::mem::swap(&mut u, &mut next);
    }
    GridFunction::new(cfg.x_min, dx, u)
}

fn energy_slices(u: &[f64], ut: &[f64], dx: f64) -> f64 {
    let n = u.len();
    let mut sum = 0.0;
    for i in 0..n {
        let ux = if i == 0 || i == n - 1 {
            0.0
        } else {
            (u[i + 1] - u[i - 1]) / (2.0 * dx)
        };
        sum += 0.5 * (ut[i] * ut[i] + ux * ux);
    }
    sum * dx
}

/// `sum 1/2 (u_t^2 + (D0 u)^2) dx` with centered spatial differences.
pub fn energy(u: &GridFunction, u_t: &GridFunction) -> Result<f64> {
    if !u.same_grid(u_t) {
        return Err(Error::domain("energy needs u and u_t on the same grid"));
    }
    Ok(energy_slices(&u.values, &u_t.values, u.dx))
}

/// `max_k |(E_{k+1} - E_{k-1}) / 2dt + mu int u_t^2| / E_0` over interior
/// trace entries. `mu = 0` checks conservation.
pub fn energy_dissipation_check(trace: &EnergyTrace, mu: f64) -> Result<f64> {
    if !(mu >= 0.0) {
        return Err(Error::domain(format!("mu must be >= 0, got {mu}")));
    }
    let n = trace.energy.len();
    if n < 3 {
        return Ok(0.0);
    }
    let e0 = trace.energy[0].max(f64::MIN_POSITIVE);
    let mut worst: f64 = 0.0;
    for k in 1..n - 1 {
        let dt2 = trace.times[k + 1] - trace.times[k - 1];
        let rate = (trace.energy[k + 1] - trace.energy[k - 1]) / dt2;
        worst = worst.max((rate + mu * trace.kinetic[k]).abs() / e0);
    }
    Ok(worst)
}
