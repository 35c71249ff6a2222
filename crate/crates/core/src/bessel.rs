//! Bessel functions `J_n` and modified Bessel functions `I_nu` on the real
//! line, together with an explicit bound on how far `I_nu(x)` sits from its
//! leading asymptotic form `e^x / sqrt(2 pi x)`.
//!
//! Three evaluation routes for `I_nu` are provided and cross-checked in the
//! tests: the power series, the exponentially scaled form `e^{-x} I_n(x)`
//! (series for small `x`, periodic trapezoidal rule on the integral
//! representation for large `x`), and adaptive quadrature of the integral
//! representation for arbitrary real `nu >= 0`.

use std::f64::consts::{E, PI, SQRT_2};

use thiserror::Error;

use crate::quadrature::{integrate_adaptive, QuadratureSpec};
use crate::{Error, Result};

/// Terms below this fraction of the running sum stop the series.
const SERIES_REL_CUTOFF: f64 = 1e-17;
const SERIES_MAX_TERMS: usize = 60;

/// Largest |x| accepted by the unscaled series (`e^x` overflows soon after).
pub const MAX_UNSCALED_ARG: f64 = 700.0;

/// Beyond this the J series loses digits to cancellation.
pub const J_FULL_ACCURACY_LIMIT: f64 = 30.0;

/// Switch point between the series and the trapezoidal route in
/// [`bessel_i_scaled`].
const SCALED_SERIES_LIMIT: f64 = 30.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BesselError {
    #[error("intermediate series term overflowed for order {order} at x = {x}")]
    Overflow { order: u32, x: f64 },

    #[error("|x| = {x} exceeds {MAX_UNSCALED_ARG}; use bessel_i_scaled instead")]
    ArgumentTooLarge { x: f64 },

    #[error("Bessel order must be finite and >= 0, got {0}")]
    InvalidOrder(f64),

    #[error("delta must lie in (0, 1/2), got {0}")]
    InvalidDelta(f64),

    #[error("argument must be > 0, got {0}")]
    NonPositiveArgument(f64),
}

/// Real Bessel order `nu >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub const ZERO: BesselOrder = BesselOrder(0.0);
    pub const ONE: BesselOrder = BesselOrder(1.0);

    pub fn new(nu: f64) -> std::result::Result<Self, BesselError> {
        if nu.is_finite() && nu >= 0.0 {
            Ok(Self(nu))
        } else {
            Err(BesselError::InvalidOrder(nu))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// The order as an integer, if it is one.
    pub fn as_integer(self) -> Option<u32> {
        (self.0.fract() == 0.0 && self.0 <= u32::MAX as f64).then_some(self.0 as u32)
    }
}

impl From<u32> for BesselOrder {
    fn from(n: u32) -> Self {
        Self(n as f64)
    }
}

/// Value of `J_n(x)` plus whether it was computed in the cancellation-prone
/// range `|x| > 30`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JValue {
    pub value: f64,
    pub reduced_accuracy: bool,
}

/// `(x/2)^n / n!` for `x >= 0`, built up multiplicatively.
fn leading_term(n: u32, x: f64) -> std::result::Result<f64, BesselError> {
    let half = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / k as f64;
    }
    if term.is_finite() {
        Ok(term)
    } else {
        Err(BesselError::Overflow { order: n, x })
    }
}

/// Sum `sum_j s^j (x/2)^{2j} / (j! (j+n)!)` times the leading term, where
/// `s = -1` for `J` and `+1` for `I`. Requires `x >= 0`.
fn power_series(
    n: u32,
    x: f64,
    alternating: bool,
    max_terms: usize,
) -> std::result::Result<f64, BesselError> {
    let mut term = leading_term(n, x)?;
    let q = 0.25 * x * x;
    let q = if alternating { -q } else { q };
    let mut sum = term;
    for j in 1..max_terms {
        term *= q / (j as f64 * (j + n as usize) as f64);
        if !term.is_finite() {
            return Err(BesselError::Overflow { order: n, x });
        }
        sum += term;
        if term == 0.0 || term.abs() < SERIES_REL_CUTOFF * sum.abs() {
            break;
        }
    }
    Ok(sum)
}

fn parity_sign(n: u32, x: f64) -> f64 {
    if x < 0.0 && n % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// Bessel function of the first kind `J_n(x)` by its power series.
pub fn bessel_j(n: u32, x: f64) -> std::result::Result<JValue, BesselError> {
    let value = parity_sign(n, x) * power_series(n, x.abs(), true, SERIES_MAX_TERMS)?;
    Ok(JValue {
        value,
        reduced_accuracy: x.abs() > J_FULL_ACCURACY_LIMIT,
    })
}

/// Number of series terms needed for `I_n(x)`; the terms peak near `j = x/2`.
fn i_series_terms(x: f64) -> usize {
    SERIES_MAX_TERMS + x.abs().ceil() as usize
}

/// Modified Bessel function `I_n(x)` by its power series, `|x| <= 700`.
pub fn bessel_i(n: u32, x: f64) -> std::result::Result<f64, BesselError> {
    if !(x.abs() <= MAX_UNSCALED_ARG) {
        return Err(BesselError::ArgumentTooLarge { x });
    }
    Ok(parity_sign(n, x) * power_series(n, x.abs(), false, i_series_terms(x))?)
}

/// Number of trapezoidal nodes on `[0, pi]` for `e^{x(cos t - 1)} cos(n t)`.
///
/// The aliasing error is governed by `e^{-x} I_{2N - n}(x) ~ exp(-(2N-n)^2 / 2x)`,
/// which is below 1e-17 once `2N - n > 8.9 sqrt(x)`.
fn trapezoid_nodes(n: u32, x: f64) -> usize {
    (5.0 * x.sqrt()).ceil() as usize + n as usize + 32
}

/// `(1/pi) int_0^pi e^{x(cos t - 1)} cos(n t) dt` by the trapezoidal rule,
/// which converges geometrically for this periodic analytic integrand.
fn scaled_integral_trapezoid(n: u32, x: f64) -> f64 {
    let nodes = trapezoid_nodes(n, x);
    let h = PI / nodes as f64;
    let integrand = |t: f64| (x * (t.cos() - 1.0)).exp() * (n as f64 * t).cos();
    let mut sum = 0.5 * (integrand(0.0) + integrand(PI));
    for k in 1..nodes {
        sum += integrand(k as f64 * h);
    }
    sum / nodes as f64
}

/// Exponentially scaled `e^{-|x|} I_n(x)`; never overflows.
///
/// For `|x| <= 30` this is `e^{-|x|}` times the series; beyond that the
/// integral representation is evaluated with every intermediate in `[0, 1]`.
pub fn bessel_i_scaled(n: u32, x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax <= SCALED_SERIES_LIMIT {
        (-ax).exp() * power_series(n, ax, false, i_series_terms(ax)).expect("bounded argument")
    } else {
        scaled_integral_trapezoid(n, ax)
    };
    parity_sign(n, x) * v
}

/// `I_1(x)/x`, continuous at zero with limit 1/2. Even in `x`.
pub fn bessel_i1_over_x(x: f64) -> f64 {
    let ax = x.abs();
    let q = 0.25 * ax * ax;
    let mut term = 0.5;
    let mut sum = term;
    for j in 1..i_series_terms(ax) {
        term *= q / (j as f64 * (j + 1) as f64);
        sum += term;
        if term == 0.0 || term < SERIES_REL_CUTOFF * sum {
            break;
        }
    }
    sum
}

/// `e^{-|x|} I_1(x)/x`, the endpoint-safe kernel factor used by the
/// telegraph solver.
pub fn bessel_i1_over_x_scaled(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= SCALED_SERIES_LIMIT {
        (-ax).exp() * bessel_i1_over_x(ax)
    } else {
        bessel_i_scaled(1, ax) / ax
    }
}

/// `I_nu(x)` by adaptive quadrature of
/// `(1/pi) int_0^pi e^{x cos t} cos(nu t) dt - (sin(nu pi)/pi) int_0^inf e^{-x cosh t - nu t} dt`.
///
/// The half-line term vanishes for integer `nu` and is skipped; otherwise it
/// is truncated where its integrand drops below `spec.abs_tol`.
pub fn bessel_i_integral(order: BesselOrder, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::domain(format!(
            "bessel_i_integral needs x >= 0, got {x}"
        )));
    }
    let nu = order.value();
    let arc = integrate_adaptive(|t| (x * t.cos()).exp() * (nu * t).cos(), 0.0, PI, spec)?;
    let mut value = arc.value / PI;

    if order.as_integer().is_none() {
        let cutoff = half_line_cutoff(nu, x, spec.abs_tol);
        let tail = integrate_adaptive(|t| (-x * t.cosh() - nu * t).exp(), 0.0, cutoff, spec)?;
        value -= (nu * PI).sin() / PI * tail.value;
    }
    Ok(value)
}

/// Smallest `T` with `x cosh T + nu T >= -ln(tol)`, by bisection.
fn half_line_cutoff(nu: f64, x: f64, tol: f64) -> f64 {
    let target = -tol.ln();
    let phase = |t: f64| x * t.cosh() + nu * t;
    if phase(0.0) >= target {
        return 0.0;
    }
    let mut hi = 1.0;
    while phase(hi) < target {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if phase(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    hi
}

/// The explicit bound `C(x; delta, nu)` on `|sqrt(2 pi x) e^{-x} I_nu(x) - 1|`
/// and its six contributions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticBound {
    pub x: f64,
    pub delta: f64,
    /// `1 - 4 delta^2`
    pub sigma: f64,
    pub nu: f64,
    /// Summands in order: the `delta`-window cosine tail, the `(pi/2, pi)`
    /// arc, the half-line term, the `cos(nu u / sqrt x)` correction, the
    /// quartic remainder and the Gaussian tail.
    pub terms: [f64; 6],
    pub value: f64,
}

pub fn asymptotic_bound(order: BesselOrder, x: f64, delta: f64) -> Result<AsymptoticBound> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(BesselError::NonPositiveArgument(x).into());
    }
    if !(delta > 0.0 && delta < 0.5) {
        return Err(BesselError::InvalidDelta(delta).into());
    }
    let nu = order.value().abs();
    let sigma = 1.0 - 4.0 * delta * delta;
    // 1 - cos(delta) without cancellation
    let one_minus_cos = 2.0 * (0.5 * delta).sin().powi(2);
    let pi3 = PI.powi(3);

    let terms = [
        (pi3 * x / 2.0).sqrt() * (-x * one_minus_cos).exp(),
        (pi3 / (2.0 * x)).sqrt() * ((-x).exp() - (-2.0 * x).exp()),
        (-2.0 * x).exp(),
        2.0 * nu / (E * x * sigma),
        128.0 * SQRT_2 / (x * E * E * sigma.powf(2.5)),
        SQRT_2 * (-delta * delta * x / 4.0).exp(),
    ];
    Ok(AsymptoticBound {
        x,
        delta,
        sigma,
        nu,
        terms,
        value: terms.iter().sum(),
    })
}

const DELTA_GRID_POINTS: usize = 200;
const DELTA_GRID_LO: f64 = 1e-4;
const DELTA_GRID_HI: f64 = 0.5 - 1e-4;

/// Geometric grid of `points` values from `lo` to `hi` inclusive.
pub fn geometric_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    assert!(points >= 2 && lo > 0.0 && hi > lo);
    let ratio = (hi / lo).powf(1.0 / (points - 1) as f64);
    (0..points)
        .map(|k| {
            if k == points - 1 {
                hi
            } else {
                lo * ratio.powi(k as i32)
            }
        })
        .collect()
}

/// The grid searched by [`optimize_delta`].
pub fn delta_search_grid() -> Vec<f64> {
    geometric_grid(DELTA_GRID_LO, DELTA_GRID_HI, DELTA_GRID_POINTS)
}

/// Minimise `C(x; delta, nu)` over a 200-point geometric grid in
/// `(1e-4, 1/2 - 1e-4)`. Returns `(delta_star, C_star)`.
pub fn optimize_delta(order: BesselOrder, x: f64) -> Result<(f64, f64)> {
    let mut best = (f64::NAN, f64::INFINITY);
    for delta in delta_search_grid() {
        let c = asymptotic_bound(order, x, delta)?.value;
        if c < best.1 {
            best = (delta, c);
        }
    }
    Ok(best)
}

/// `sqrt(2 pi x) e^{-x} I_n(x)`, the ratio that tends to one.
pub fn asymptotic_ratio(n: u32, x: f64) -> f64 {
    (2.0 * PI * x).sqrt() * bessel_i_scaled(n, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_err(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    /// Independent truncated series `sum_{j<terms}` with a
    /// geometric-tail bound on the remainder.
    fn i0_partial_sum(x: f64, terms: usize) -> (f64, f64) {
        let mut sum = 0.0;
        let mut fact = 1.0f64;
        let mut last = 0.0;
        for j in 0..=terms {
            if j > 0 {
                fact *= j as f64;
            }
            let t = (x / 2.0).powi(2 * j as i32) / (fact * fact);
            if j == terms {
                last = t;
            } else {
                sum += t;
            }
        }
        (sum, 2.0 * last)
    }

    #[test]
    fn j_at_zero() {
        assert_eq!(bessel_j(0, 0.0).unwrap().value, 1.0);
        assert_eq!(bessel_j(1, 0.0).unwrap().value, 0.0);
    }

    #[test]
    fn j0_first_root_from_bisection() {
        // bisection on the series itself
        let (mut lo, mut hi) = (2.0, 3.0);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if bessel_j(0, lo).unwrap().value * bessel_j(0, mid).unwrap().value <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let root = 0.5 * (lo + hi);
        assert!((root - 2.404826).abs() < 1e-6);
        assert!(bessel_j(0, 2.404826).unwrap().value.abs() <= 1e-6);
    }

    #[test]
    fn j_flags_large_arguments() {
        assert!(!bessel_j(0, 29.0).unwrap().reduced_accuracy);
        assert!(bessel_j(0, 31.0).unwrap().reduced_accuracy);
    }

    #[test]
    fn j_overflow_reported() {
        assert!(matches!(
            bessel_j(400, 1e300),
            Err(BesselError::Overflow { .. })
        ));
    }

    #[test]
    fn i_at_zero_and_parity() {
        assert_eq!(bessel_i(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_i(1, -2.5).unwrap(), -bessel_i(1, 2.5).unwrap());
    }

    #[test]
    fn i0_of_one_matches_partial_sum() {
        let (partial, remainder) = i0_partial_sum(1.0, 30);
        assert!(remainder < 1e-15);
        assert!((bessel_i(0, 1.0).unwrap() - partial).abs() <= 1e-15);
    }

    #[test]
    fn i_rejects_huge_arguments() {
        assert!(matches!(
            bessel_i(0, 701.0),
            Err(BesselError::ArgumentTooLarge { .. })
        ));
        assert!(bessel_i(0, 700.0).unwrap().is_finite());
    }

    #[test]
    fn i_series_converges_at_700() {
        let direct = bessel_i(0, 700.0).unwrap();
        let scaled = bessel_i_scaled(0, 700.0);
        let via_scaled = scaled * 700.0f64.exp();
        assert!(rel_err(direct, via_scaled) < 1e-12);
    }

    #[test]
    fn scaled_at_zero() {
        assert_eq!(bessel_i_scaled(0, 0.0), 1.0);
        assert_eq!(bessel_i_scaled(1, 0.0), 0.0);
    }

    #[test]
    fn scaled_matches_series_route() {
        let direct = (-20.0f64).exp() * bessel_i(0, 20.0).unwrap();
        assert!(rel_err(bessel_i_scaled(0, 20.0), direct) <= 1e-13);
        for &x in &[0.5f64, 3.0, 12.0, 29.5] {
            for n in 0..2 {
                let direct = (-x).exp() * bessel_i(n, x).unwrap();
                assert!(rel_err(bessel_i_scaled(n, x), direct) <= 1e-13);
            }
        }
    }

    #[test]
    fn trapezoid_route_matches_series_beyond_switch() {
        for &x in &[30.5f64, 40.0, 80.0, 200.0] {
            for n in 0..3 {
                let series = (-x).exp() * bessel_i(n, x).unwrap();
                assert!(
                    rel_err(scaled_integral_trapezoid(n, x), series) <= 1e-13,
                    "n={n} x={x}"
                );
            }
        }
        // also inside the series range
        for &x in &[1.0f64, 10.0, 25.0] {
            let series = (-x).exp() * bessel_i(1, x).unwrap();
            assert!(rel_err(scaled_integral_trapezoid(1, x), series) <= 1e-13);
        }
    }

    #[test]
    fn scaled_is_positive_and_approaches_leading_asymptotic() {
        for &x in &[1e-3, 1.0, 50.0, 1e3, 1e5] {
            assert!(bessel_i_scaled(0, x) > 0.0);
        }
        let x = 1e4;
        let (_, c_star) = optimize_delta(BesselOrder::ZERO, x).unwrap();
        let lead = 1.0 / (2.0 * PI * x).sqrt();
        assert!((bessel_i_scaled(0, x) / lead - 1.0).abs() <= c_star);
        // and the well-known 1/(8x) correction is visible
        assert!((asymptotic_ratio(0, x) - 1.0 - 1.0 / (8.0 * x)).abs() < 1e-8);
    }

    #[test]
    fn integral_representation_matches_series() {
        let spec = QuadratureSpec::default();
        let v = bessel_i_integral(BesselOrder::ZERO, 0.0, &spec).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
        let v = bessel_i_integral(BesselOrder::ZERO, 5.0, &spec).unwrap();
        assert!((v - bessel_i(0, 5.0).unwrap()).abs() <= 1e-9);
        let v = bessel_i_integral(BesselOrder::ONE, 3.0, &spec).unwrap();
        assert!((v - bessel_i(1, 3.0).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn integral_representation_half_integer_order() {
        // I_{1/2}(x) = sqrt(2 / (pi x)) sinh x
        let spec = QuadratureSpec::default();
        let order = BesselOrder::new(0.5).unwrap();
        for &x in &[0.3f64, 1.0, 4.0] {
            let exact = (2.0 / (PI * x)).sqrt() * x.sinh();
            let v = bessel_i_integral(order, x, &spec).unwrap();
            assert!(rel_err(v, exact) < 1e-9, "x={x}: {v} vs {exact}");
        }
    }

    #[test]
    fn i1_over_x_limits() {
        assert_eq!(bessel_i1_over_x(0.0), 0.5);
        assert!((bessel_i1_over_x(1e-8) - 0.5).abs() <= 1e-15);
        assert!(rel_err(bessel_i1_over_x(2.0), bessel_i(1, 2.0).unwrap() / 2.0) <= 1e-14);
        assert!(
            rel_err(
                bessel_i1_over_x_scaled(45.0),
                bessel_i_scaled(1, 45.0) / 45.0
            ) < 1e-15
        );
    }

    #[test]
    fn bound_rejects_bad_delta() {
        assert!(asymptotic_bound(BesselOrder::ZERO, 10.0, 0.0).is_err());
        assert!(asymptotic_bound(BesselOrder::ZERO, 10.0, 0.5).is_err());
        assert!(asymptotic_bound(BesselOrder::ZERO, -1.0, 0.2).is_err());
    }

    #[test]
    fn bound_matches_closed_form() {
        let b = asymptotic_bound(BesselOrder::ONE, 50.0, 0.2).unwrap();
        let x: f64 = 50.0;
        let d: f64 = 0.2;
        let s = 1.0 - 4.0 * d * d;
        let expected = (PI.powi(3) * x / 2.0).sqrt() * (-x * (1.0 - d.cos())).exp()
            + (PI.powi(3) / (2.0 * x)).sqrt() * ((-x).exp() - (-2.0 * x).exp())
            + (-2.0 * x).exp()
            + 2.0 / (E * x * s)
            + 128.0 * SQRT_2 / (x * E * E * s.powf(2.5))
            + SQRT_2 * (-d * d * x / 4.0).exp();
        assert!(rel_err(b.value, expected) < 1e-14);
        assert!(b.value > 0.0 && b.sigma > 0.0);
    }

    #[test]
    fn bound_holds_on_examples() {
        let lhs0 = (asymptotic_ratio(0, 50.0) - 1.0).abs();
        assert!(
            lhs0 <= asymptotic_bound(BesselOrder::ZERO, 50.0, 0.2)
                .unwrap()
                .value
        );
        let lhs1 = (asymptotic_ratio(1, 200.0) - 1.0).abs();
        assert!(
            lhs1 <= asymptotic_bound(BesselOrder::ONE, 200.0, 0.1)
                .unwrap()
                .value
        );
    }

    #[test]
    fn exponentially_small_terms_vanish() {
        let d = 0.3;
        let small = asymptotic_bound(BesselOrder::ZERO, 10.0, d).unwrap();
        let large = asymptotic_bound(BesselOrder::ZERO, 1000.0, d).unwrap();
        assert!(large.terms[1] < small.terms[1] && large.terms[1] < 1e-20);
        assert!(large.terms[2] < small.terms[2] && large.terms[2] < 1e-20);
    }

    #[test]
    fn optimized_delta_is_interior_and_decreasing() {
        for nu in [BesselOrder::ZERO, BesselOrder::ONE] {
            let mut prev = f64::INFINITY;
            for &x in &[50.0, 100.0, 200.0, 400.0, 800.0] {
                let (d, c) = optimize_delta(nu, x).unwrap();
                assert!(d > 0.0 && d < 0.5);
                assert!(c < prev, "C* not decreasing at x={x}");
                prev = c;
            }
        }
        let grid = delta_search_grid();
        assert_eq!(grid.len(), 200);
        assert!((grid[0] - 1e-4).abs() < 1e-18 && grid[199] == 0.5 - 1e-4);
    }

    #[test]
    fn parity_of_j_and_i() {
        for n in 0..4u32 {
            for k in 0..=20 {
                let x = k as f64 * 0.5;
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let ip = bessel_i(n, x).unwrap();
                let im = bessel_i(n, -x).unwrap();
                assert!((im - sign * ip).abs() <= 1e-13 * ip.abs());
                let jp = bessel_j(n, x).unwrap().value;
                let jm = bessel_j(n, -x).unwrap().value;
                assert!((jm - sign * jp).abs() <= 1e-13 * jp.abs());
            }
        }
    }

    #[test]
    fn bessel_order_validation() {
        assert!(BesselOrder::new(-0.1).is_err());
        assert!(BesselOrder::new(f64::NAN).is_err());
        assert_eq!(BesselOrder::new(2.0).unwrap().as_integer(), Some(2));
        assert_eq!(BesselOrder::new(0.5).unwrap().as_integer(), None);
    }
}
