//! Diffusive rescaling `v(x, t) = L^{1/2} u(L^{1/2} x, L t)` and the long-time
//! studies built on it.
//!
//! For `mu > 0` the rescaled damped wave solution approaches `M f*_mu(x)`
//! with `M = int (f + g/mu)`. The studies here measure that distance on a
//! grid, the residual of the rescaled equation
//! `mu v_t + v_tt / L - v_xx = 0`, and the four window integrals
//! `T_{3/2}, T_2, S_{1/2}, S_1` obtained by replacing the Bessel functions
//! with their leading asymptotics.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::compact::Interval;
use crate::heat::{gaussian_profile, Damping};
use crate::quadrature::QuadratureSpec;
use crate::telegraph::{telegraph_exact, CauchyProblem};
use crate::{Error, Result};

/// Uniform grid `x_min + i (x_max - x_min) / (points - 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            x_min: -8.0,
            x_max: 8.0,
            points: 801,
        }
    }
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, points: usize) -> Result<Self> {
        let g = Self {
            x_min,
            x_max,
            points,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_min.is_finite() && self.x_max.is_finite() && self.x_min < self.x_max) {
            return Err(Error::config("grid needs finite x_min < x_max"));
        }
        if self.points < 3 {
            return Err(Error::config("grid needs at least 3 points"));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.points - 1) as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.points)
            .map(|i| self.x_min + i as f64 * h)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    pub t_values: Vec<f64>,
    pub sup_dist: Vec<f64>,
    pub l2_dist: Vec<f64>,
    /// `sup_dist` non-increasing over the last half of `t_values`.
    pub monotone_tail: bool,
    pub prefactor: f64,
    /// Grid node maximising the rescaled field at each time.
    pub peak_location: Vec<f64>,
}

/// `L^{1/2} u(L^{1/2} x, L t)`.
pub fn rescale<F>(u_eval: F, l: f64, x: f64, t: f64) -> f64
where
    F: Fn(f64, f64) -> f64,
{
    let s = l.sqrt();
    s * u_eval(s * x, l * t)
}

/// `M = int f + (1/mu) int g`.
pub fn prefactor(p: &CauchyProblem, spec: &QuadratureSpec) -> Result<f64> {
    if !(p.mu > 0.0) {
        return Err(Error::domain(format!(
            "prefactor needs mu > 0 for the diffusive limit, got {}",
            p.mu
        )));
    }
    Ok(p.f.mass(spec)? + p.g.mass(spec)? / p.mu)
}

/// Distances between `sqrt(t) u(sqrt(t) x, t)` and `mass * f*_mu(x)` on
/// `grid` for each `t`. Grid points are evaluated in parallel; the result
/// does not depend on the thread count.
pub fn limit_study<F>(
    eval: F,
    mu: Damping,
    mass: f64,
    t_list: &[f64],
    grid: &GridSpec,
) -> Result<ScalingReport>
where
    F: Fn(f64, f64) -> Result<f64> + Sync,
{
    grid.validate()?;
    check_times(t_list)?;
    let nodes = grid.nodes();
    let h = grid.spacing();

    let mut report = ScalingReport {
        t_values: t_list.to_vec(),
        sup_dist: Vec::with_capacity(t_list.len()),
        l2_dist: Vec::with_capacity(t_list.len()),
        monotone_tail: true,
        prefactor: mass,
        peak_location: Vec::with_capacity(t_list.len()),
    };
    for &t in t_list {
        let s = t.sqrt();
        let field: Vec<f64> = nodes
            .par_iter()
            .map(|&x| eval(s * x, t).map(|u| s * u))
            .collect::<Result<_>>()?;

        let mut sup: f64 = 0.0;
        let mut sq = 0.0;
        let mut peak = (f64::NEG_INFINITY, nodes[0]);
        for (&x, &v) in nodes.iter().zip(&field) {
            let d = (v - mass * gaussian_profile(mu, x)).abs();
            sup = sup.max(d);
            sq += d * d;
            if v > peak.0 {
                peak = (v, x);
            }
        }
        report.sup_dist.push(sup);
        report.l2_dist.push((sq * h).sqrt());
        report.peak_location.push(peak.1);
    }

    let n = report.sup_dist.len();
    report.monotone_tail = report.sup_dist[n / 2..].windows(2).all(|w| w[1] <= w[0]);
    Ok(report)
}

fn check_times(t_list: &[f64]) -> Result<()> {
    if t_list.is_empty() {
        return Err(Error::config("t_list must not be empty"));
    }
    if t_list.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
        return Err(Error::config("t_list entries must be finite and > 0"));
    }
    if t_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::config("t_list must be strictly increasing"));
    }
    Ok(())
}

/// [`limit_study`] for the damped wave solution with `M` from [`prefactor`].
pub fn diffusive_limit_study(
    p: &CauchyProblem,
    t_list: &[f64],
    grid: &GridSpec,
    spec: &QuadratureSpec,
) -> Result<ScalingReport> {
    let mu = Damping::new(p.mu)?;
    if !p.has_smooth_data() {
        return Err(Error::precondition(
            "diffusive limit study needs f in C^2 and g in C^1 (bump or truncated_gaussian data)",
        ));
    }
    let mass = prefactor(p, spec)?;
    limit_study(
        |x, t| telegraph_exact(p, x, t, spec),
        mu,
        mass,
        t_list,
        grid,
    )
}

/// `(|mu v_t + v_tt / L - v_xx|, |mu v_t - v_xx|)` for the rescaled damped
/// wave solution, with central differences of step `1e-3` in both variables.
pub fn rescaled_pde_residual(p: &CauchyProblem, l: f64, x: f64, t: f64) -> Result<(f64, f64)> {
    const H: f64 = 1e-3;
    if !(l >= 1.0 && l.is_finite()) {
        return Err(Error::domain(format!("rescaling needs L >= 1, got {l}")));
    }
    if !(t > H) {
        return Err(Error::domain(format!("residual needs t > {H}, got {t}")));
    }
    let spec = QuadratureSpec::new(1e-13, 1e-13, 4000)?;
    let v = |x: f64, t: f64| -> Result<f64> {
        let s = l.sqrt();
        Ok(s * telegraph_exact(p, s * x, l * t, &spec)?)
    };
    let c = v(x, t)?;
    let (tp, tm) = (v(x, t + H)?, v(x, t - H)?);
    let (xp, xm) = (v(x + H, t)?, v(x - H, t)?);
    let v_t = (tp - tm) / (2.0 * H);
    let v_tt = (tp - 2.0 * c + tm) / (H * H);
    let v_xx = (xp - 2.0 * c + xm) / (H * H);
    let heat = p.mu * v_t - v_xx;
    Ok(((heat + v_tt / l).abs(), heat.abs()))
}

/// The window integrals at one `(L, x)`, `t = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProofDecomposition {
    pub l: f64,
    pub x: f64,
    pub t_three_halves: f64,
    pub t_two: f64,
    pub s_half: f64,
    pub s_one: f64,
}

impl ProofDecomposition {
    /// `T_{3/2} + S_{1/2}`, the part converging to `M f*_mu(x)`.
    pub fn leading(&self) -> f64 {
        self.t_three_halves + self.s_half
    }

    /// `T_2 + S_1`, the part that must vanish.
    pub fn remainder(&self) -> f64 {
        self.t_two + self.s_one
    }
}

pub const DEFAULT_L_LIST: [f64; 5] = [25.0, 50.0, 100.0, 200.0, 400.0];

/// `T_beta` and `S_beta` with
///
/// ```text
/// xi(a)   = (mu/2) sqrt(L^2 - (sqrt(L) x - a)^2)
/// T_beta  = mu / (4 sqrt(2 pi)) int L^{3/2} e^{xi - mu L/2} xi^{-beta} (mu/2) f(a) da
/// S_beta  = 1 / (2 sqrt(2 pi)) int L^{1/2} e^{xi - mu L/2} xi^{-beta} (g(a) + mu f(a)/2) da
/// ```
///
/// over `a` in `[sqrt(L) x - L, sqrt(L) x + L]`. The data support must lie
/// strictly inside that window.
pub fn proof_decomposition_check(
    p: &CauchyProblem,
    x: f64,
    l_list: &[f64],
    spec: &QuadratureSpec,
) -> Result<Vec<ProofDecomposition>> {
    let mu = Damping::new(p.mu)?.value();
    l_list
        .iter()
        .map(|&l| {
            if !(l > 1.0 && l.is_finite()) {
                return Err(Error::domain(format!("decomposition needs L > 1, got {l}")));
            }
            let center = l.sqrt() * x;
            let window = Interval {
                lo: center - l,
                hi: center + l,
            };
            if let Some(s) = p.support() {
                if !(window.lo < s.lo && s.hi < window.hi) {
                    return Err(Error::precondition(format!(
                        "L = {l}: f(sqrt(L) x + L) = 0 = f(sqrt(L) x - L) fails, \
                         data support {s} is not strictly inside window {window}"
                    )));
                }
            }

            let weight = |a: f64, beta: f64| {
                let d = center - a;
                let chord = ((l - d.abs()) * (l + d.abs())).max(0.0).sqrt();
                let xi = 0.5 * mu * chord;
                let exponent = 0.5 * mu * (chord - l);
                assert!(
                    exponent <= 0.0,
                    "positive exponent {exponent} in decomposition"
                );
                exponent.exp() / xi.powf(beta)
            };
            let t_coef = mu / (4.0 * (2.0 * PI).sqrt()) * l.powf(1.5) * 0.5 * mu;
            let s_coef = 1.0 / (2.0 * (2.0 * PI).sqrt()) * l.sqrt();
            let t_term = |beta: f64| -> Result<f64> {
                Ok(t_coef
                    * p.f
                        .integrate_weighted(&window, |a| weight(a, beta), spec)?
                        .value)
            };
            let s_term = |beta: f64| -> Result<f64> {
                let g =
                    p.g.integrate_weighted(&window, |a| weight(a, beta), spec)?
                        .value;
                let f =
                    p.f.integrate_weighted(&window, |a| weight(a, beta), spec)?
                        .value;
                Ok(s_coef * (g + 0.5 * mu * f))
            };

            let d = ProofDecomposition {
                l,
                x,
                t_three_halves: t_term(1.5)?,
                t_two: t_term(2.0)?,
                s_half: s_term(0.5)?,
                s_one: s_term(1.0)?,
            };
            let all_finite = [d.t_three_halves, d.t_two, d.s_half, d.s_one]
                .iter()
                .all(|v| v.is_finite());
            if !all_finite {
                return Err(Error::domain(format!(
                    "non-finite decomposition at L = {l}, x = {x}"
                )));
            }
            Ok(d)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compact::CompactFunction;
    use crate::heat::heat_kernel;
    use proptest::prelude::*;

    fn bump() -> CompactFunction {
        CompactFunction::bump(0.0, 1.0, 1.0).unwrap()
    }

    fn problem(f: CompactFunction, g: CompactFunction) -> CauchyProblem {
        CauchyProblem::new(1.0, f, g).unwrap()
    }

    #[test]
    fn rescale_identity_at_one() {
        let u = |x: f64, t: f64| x.sin() * (-t).exp();
        for &(x, t) in &[(0.3, 1.0), (-2.0, 0.1), (5.0, 7.0)] {
            assert_eq!(rescale(u, 1.0, x, t), u(x, t));
        }
    }

    #[test]
    fn rescale_composes() {
        let u = |x: f64, t: f64| x * x + t;
        let (l1, l2) = (4.0, 16.0);
        for &(x, t) in &[(0.5, 1.0), (-1.5, 2.0)] {
            let nested = rescale(|y, s| rescale(u, l1, y, s), l2, x, t);
            assert_eq!(nested, rescale(u, l1 * l2, x, t));
        }
    }

    #[test]
    fn heat_kernel_is_fixed_point() {
        let mu = Damping::new(1.0).unwrap();
        for &l in &[2.0, 10.0, 100.0] {
            for k in -10..=10 {
                let x = 0.2 * k as f64;
                let v = rescale(|y, s| heat_kernel(mu, y, s).unwrap(), l, x, 1.0);
                let f = gaussian_profile(mu, x);
                assert!((v - f).abs() <= 1e-15 * f, "L={l} x={x}");
            }
        }
    }

    #[test]
    fn prefactor_cases() {
        let spec = QuadratureSpec::default();
        let m = bump().mass(&spec).unwrap();
        let p = problem(bump(), CompactFunction::Zero);
        assert!((prefactor(&p, &spec).unwrap() - m).abs() <= 1e-12);
        let p = CauchyProblem::new(2.0, CompactFunction::Zero, bump()).unwrap();
        assert!((prefactor(&p, &spec).unwrap() - m / 2.0).abs() <= 1e-12);
        let p = problem(bump(), bump());
        assert!((prefactor(&p, &spec).unwrap() - 2.0 * m).abs() <= 1e-10);
        let p = CauchyProblem::new(0.0, bump(), bump()).unwrap();
        assert!(prefactor(&p, &spec).is_err());
    }

    proptest! {
        #[test]
        fn prefactor_is_linear(a in -5.0f64..5.0, mu in 0.2f64..4.0) {
            let spec = QuadratureSpec::default();
            let g = CompactFunction::bump(0.5, 2.0, 0.7).unwrap();
            let p = CauchyProblem::new(mu, bump(), g.clone()).unwrap();
            let q = CauchyProblem::new(mu, bump().scaled(a), g.scaled(a)).unwrap();
            let lhs = prefactor(&q, &spec).unwrap();
            let rhs = a * prefactor(&p, &spec).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
        }
    }

    #[test]
    fn zero_data_has_zero_distance() {
        let p = problem(CompactFunction::Zero, CompactFunction::Zero);
        let grid = GridSpec::new(-4.0, 4.0, 41).unwrap();
        let r = diffusive_limit_study(&p, &[1.0, 4.0], &grid, &QuadratureSpec::default()).unwrap();
        assert_eq!(r.prefactor, 0.0);
        assert!(r.sup_dist.iter().chain(&r.l2_dist).all(|d| *d == 0.0));
    }

    #[test]
    fn limit_study_rejects_rough_data_and_bad_times() {
        let spec = QuadratureSpec::default();
        let grid = GridSpec::default();
        let ind = CompactFunction::indicator(0.0, 1.0, 1.0).unwrap();
        let p = problem(ind, CompactFunction::Zero);
        assert!(matches!(
            diffusive_limit_study(&p, &[1.0], &grid, &spec),
            Err(Error::Precondition(_))
        ));
        let p = problem(bump(), CompactFunction::Zero);
        assert!(diffusive_limit_study(&p, &[4.0, 1.0], &grid, &spec).is_err());
        let p = CauchyProblem::new(0.0, bump(), CompactFunction::Zero).unwrap();
        assert!(diffusive_limit_study(&p, &[1.0], &grid, &spec).is_err());
    }

    #[test]
    fn bump_converges_to_profile() {
        let p = problem(bump(), CompactFunction::Zero);
        let grid = GridSpec::new(-8.0, 8.0, 161).unwrap();
        let r = diffusive_limit_study(&p, &[25.0, 100.0, 400.0], &grid, &QuadratureSpec::default())
            .unwrap();
        let d = &r.sup_dist;
        assert!(d[0] > d[1] && d[1] > d[2], "{d:?}");
        assert!(d[2] <= 0.5 * d[0]);
        assert!(r.monotone_tail);
        assert!(r.peak_location.last().unwrap().abs() <= 2.0 * grid.spacing());
    }

    #[test]
    fn heat_and_wave_share_the_limit() {
        let spec = QuadratureSpec::default();
        let mu = Damping::new(2.0).unwrap();
        let g = CompactFunction::bump(0.3, 0.8, 1.5).unwrap();
        let p = CauchyProblem::new(2.0, bump(), g.clone()).unwrap();
        let grid = GridSpec::new(-6.0, 6.0, 121).unwrap();
        let t_list = [25.0, 100.0];
        let wave = diffusive_limit_study(&p, &t_list, &grid, &spec).unwrap();
        let f0 = bump().plus(&g.scaled(0.5));
        let heat = crate::heat::heat_rescaled_limit_check(mu, &f0, &t_list, &grid).unwrap();
        assert!((wave.prefactor - heat.prefactor).abs() <= 1e-10);
        let (a, b) = (wave.sup_dist[1], heat.sup_dist[1]);
        assert!((a - b).abs() < a.max(b), "{a} vs {b}");
    }

    #[test]
    fn heat_closed_form_profile_limit() {
        // u(x, t) = K(x, t + 1) for data f*; its rescaling is
        // sqrt(t/(t+1)) f*(x sqrt(t/(t+1))).
        let mu = Damping::new(1.0).unwrap();
        let grid = GridSpec::new(-6.0, 6.0, 25).unwrap();
        let t_list = [1.0, 10.0, 100.0];
        let r = limit_study(|x, t| heat_kernel(mu, x, t + 1.0), mu, 1.0, &t_list, &grid).unwrap();
        for (k, &t) in t_list.iter().enumerate() {
            let c = (t / (t + 1.0)).sqrt();
            let expected = grid
                .nodes()
                .iter()
                .map(|&x| (c * gaussian_profile(mu, c * x) - gaussian_profile(mu, x)).abs())
                .fold(0.0, f64::max);
            assert!((r.sup_dist[k] - expected).abs() <= 1e-15, "t={t}");
        }
        assert!(r.monotone_tail);
    }

    #[test]
    fn residual_of_rescaled_equation() {
        let p = problem(bump(), CompactFunction::Zero);
        for &l in &[1.0, 50.0] {
            let (full, _) = rescaled_pde_residual(&p, l, 0.4, 1.0).unwrap();
            assert!(full <= 1e-4, "L={l}: {full}");
        }
        let (_, h25) = rescaled_pde_residual(&p, 25.0, 0.4, 1.0).unwrap();
        let (_, h400) = rescaled_pde_residual(&p, 400.0, 0.4, 1.0).unwrap();
        assert!(h400 < h25, "{h400} vs {h25}");
        assert!(rescaled_pde_residual(&p, 0.5, 0.4, 1.0).is_err());
    }

    #[test]
    fn decomposition_terms_behave() {
        let spec = QuadratureSpec::default();
        let p = problem(bump(), CompactFunction::Zero);
        let m = prefactor(&p, &spec).unwrap();
        let x = 0.5;
        let target = m * gaussian_profile(Damping::new(1.0).unwrap(), x);
        let d = proof_decomposition_check(&p, x, &[50.0, 400.0], &spec).unwrap();
        assert!(d[1].remainder().abs() < d[0].remainder().abs());
        assert!((d[1].leading() - target).abs() < (d[0].leading() - target).abs());

        let l: f64 = 400.0;
        let u = l.sqrt() * telegraph_exact(&p, l.sqrt() * x, l, &spec).unwrap();
        assert!((d[1].leading() - u).abs() <= 1e-2);
    }

    #[test]
    fn decomposition_precondition() {
        let spec = QuadratureSpec::default();
        let p = problem(
            CompactFunction::bump(0.0, 3.0, 1.0).unwrap(),
            CompactFunction::Zero,
        );
        let err = proof_decomposition_check(&p, 0.5, &[2.0], &spec).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        assert!(err.to_string().contains("L = 2"));
        assert!(proof_decomposition_check(&p, 0.0, &[1.0], &spec).is_err());
    }

    #[test]
    fn decomposition_finite_for_large_l() {
        let spec = QuadratureSpec::default();
        let p = problem(bump(), bump());
        let d = proof_decomposition_check(&p, 1.0, &[1e3, 1e4], &spec).unwrap();
        assert!(d
            .iter()
            .all(|d| d.leading().is_finite() && d.remainder().is_finite()));
    }
}
