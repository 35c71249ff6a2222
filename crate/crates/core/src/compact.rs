//! Compactly supported initial data and closed intervals.

use std::f64::consts::PI;
use std::fmt;

use crate::quadrature::{integrate_segments, QuadratureResult, QuadratureSpec};
use crate::{Error, Result};

/// Closed interval `[lo, hi]`, `lo <= hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::domain(format!("invalid interval [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Minkowski sum with `[-r, r]`.
    pub fn widen(&self, r: f64) -> Interval {
        Interval {
            lo: self.lo - r,
            hi: self.hi + r,
        }
    }

    /// Distance from `x` to the interval (zero inside).
    pub fn distance(&self, x: f64) -> f64 {
        (self.lo - x).max(x - self.hi).max(0.0)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Mass of a standard normal outside `[-8, 8]`, i.e. `erfc(8 / sqrt 2)`.
const NORMAL_TAIL_8: f64 = 1.244_192_114_854_365_8e-15;

/// Truncation point of the truncated Gaussian, in standard deviations.
const GAUSS_TRUNCATION: f64 = 8.0;

/// Compactly supported function on the real line.
///
/// All kinds vanish identically outside `[center - half_width, center + half_width]`.
/// `Sum` superposes pieces; `Zero` has empty support.
#[derive(Debug, Clone, PartialEq)]
pub enum CompactFunction {
    Zero,
    /// `amplitude * exp(1 - 1/(1 - r^2))`, `r = (x - center)/half_width`; peak
    /// value `amplitude`, `C^infinity`.
    Bump {
        center: f64,
        half_width: f64,
        amplitude: f64,
    },
    /// Gaussian of standard deviation `half_width / 8`, cut at the support
    /// edges and renormalised so that its integral equals `amplitude`.
    TruncatedGaussian {
        center: f64,
        half_width: f64,
        amplitude: f64,
    },
    /// `amplitude` on the open support, `amplitude / 2` at its two endpoints.
    Indicator {
        center: f64,
        half_width: f64,
        amplitude: f64,
    },
    /// Piecewise-linear interpolation of `values` sampled uniformly across the
    /// support (endpoints included), scaled by `amplitude`.
    Table {
        center: f64,
        half_width: f64,
        amplitude: f64,
        values: Vec<f64>,
    },
    Sum(Vec<CompactFunction>),
}

fn check_shape(center: f64, half_width: f64, amplitude: f64) -> Result<()> {
    if !(center.is_finite() && amplitude.is_finite()) {
        return Err(Error::domain("center and amplitude must be finite"));
    }
    if !(half_width > 0.0 && half_width.is_finite()) {
        return Err(Error::domain(format!(
            "half_width must be > 0, got {half_width}"
        )));
    }
    Ok(())
}

impl CompactFunction {
    pub fn bump(center: f64, half_width: f64, amplitude: f64) -> Result<Self> {
        check_shape(center, half_width, amplitude)?;
        Ok(Self::Bump {
            center,
            half_width,
            amplitude,
        })
    }

    pub fn truncated_gaussian(center: f64, half_width: f64, amplitude: f64) -> Result<Self> {
        check_shape(center, half_width, amplitude)?;
        Ok(Self::TruncatedGaussian {
            center,
            half_width,
            amplitude,
        })
    }

    pub fn indicator(center: f64, half_width: f64, amplitude: f64) -> Result<Self> {
        check_shape(center, half_width, amplitude)?;
        Ok(Self::Indicator {
            center,
            half_width,
            amplitude,
        })
    }

    pub fn table(center: f64, half_width: f64, amplitude: f64, values: Vec<f64>) -> Result<Self> {
        check_shape(center, half_width, amplitude)?;
        if values.len() < 2 {
            return Err(Error::domain("table needs at least two samples"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("table samples must be finite"));
        }
        Ok(Self::Table {
            center,
            half_width,
            amplitude,
            values,
        })
    }

    /// Tabulate `f` at `points` uniform nodes on `[center - half_width, center + half_width]`.
    pub fn tabulate(
        center: f64,
        half_width: f64,
        points: usize,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        if points < 2 {
            return Err(Error::domain("table needs at least two samples"));
        }
        let h = 2.0 * half_width / (points - 1) as f64;
        let values = (0..points)
            .map(|i| f(center - half_width + i as f64 * h))
            .collect();
        Self::table(center, half_width, 1.0, values)
    }

    /// Support of a single piece, `None` for `Zero` and `Sum`.
    fn piece_support(&self) -> Option<Interval> {
        match self {
            Self::Bump {
                center, half_width, ..
            }
            | Self::TruncatedGaussian {
                center, half_width, ..
            }
            | Self::Indicator {
                center, half_width, ..
            }
            | Self::Table {
                center, half_width, ..
            } => Some(Interval {
                lo: center - half_width,
                hi: center + half_width,
            }),
            Self::Zero | Self::Sum(_) => None,
        }
    }

    /// Convex hull of the support; `None` when identically zero.
    pub fn support(&self) -> Option<Interval> {
        match self {
            Self::Sum(parts) => parts
                .iter()
                .filter_map(|p| p.support())
                .reduce(|a, b| a.hull(&b)),
            _ => self.piece_support(),
        }
    }

    fn collect_supports(&self, out: &mut Vec<Interval>) {
        match self {
            Self::Sum(parts) => parts.iter().for_each(|p| p.collect_supports(out)),
            _ => out.extend(self.piece_support()),
        }
    }

    /// Union of the piece supports as disjoint sorted intervals.
    pub fn support_intervals(&self) -> Vec<Interval> {
        let mut pieces = Vec::new();
        self.collect_supports(&mut pieces);
        pieces.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        let mut merged: Vec<Interval> = Vec::new();
        for p in pieces {
            match merged.last_mut() {
                Some(last) if p.lo <= last.hi => last.hi = last.hi.max(p.hi),
                _ => merged.push(p),
            }
        }
        merged
    }

    /// Points where the function may fail to be smooth: piece endpoints and
    /// table nodes.
    fn collect_breakpoints(&self, out: &mut Vec<f64>) {
        match self {
            Self::Sum(parts) => parts.iter().for_each(|p| p.collect_breakpoints(out)),
            Self::Table {
                center,
                half_width,
                values,
                ..
            } => {
                let n = values.len();
                let h = 2.0 * half_width / (n - 1) as f64;
                out.extend((0..n).map(|i| center - half_width + i as f64 * h));
            }
            _ => {
                if let Some(s) = self.piece_support() {
                    out.push(s.lo);
                    out.push(s.hi);
                }
            }
        }
    }

    /// Breakpoint-aligned segments covering `support ∩ window`; integrands
    /// that carry this function as a factor are smooth on each segment.
    pub fn segments_within(&self, window: &Interval) -> Vec<Vec<f64>> {
        let supports = self.support_intervals();
        let mut breaks = Vec::new();
        self.collect_breakpoints(&mut breaks);
        breaks.sort_by(|a, b| a.total_cmp(b));
        breaks.dedup();

        let mut out = Vec::new();
        for s in supports {
            let Some(part) = s.intersect(window) else {
                continue;
            };
            if part.length() == 0.0 {
                continue;
            }
            let mut pts = vec![part.lo];
            pts.extend(
                breaks
                    .iter()
                    .copied()
                    .filter(|&b| part.lo < b && b < part.hi),
            );
            pts.push(part.hi);
            out.push(pts);
        }
        out
    }

    /// `int_{support ∩ window} weight(x) * self(x) dx`.
    pub fn integrate_weighted(
        &self,
        window: &Interval,
        weight: impl Fn(f64) -> f64,
        spec: &QuadratureSpec,
    ) -> Result<QuadratureResult> {
        let mut acc = QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            subdivisions_used: 0,
        };
        let integrand = |x: f64| {
            let v = self.eval(x);
            if v == 0.0 {
                0.0
            } else {
                v * weight(x)
            }
        };
        for pts in self.segments_within(window) {
            let r = integrate_segments(integrand, &pts, spec)?;
            acc.value += r.value;
            acc.error_estimate += r.error_estimate;
            acc.subdivisions_used += r.subdivisions_used;
        }
        Ok(acc)
    }

    /// `int self dx` over the whole support.
    pub fn mass(&self, spec: &QuadratureSpec) -> Result<f64> {
        match self.support() {
            None => Ok(0.0),
            Some(s) => Ok(self.integrate_weighted(&s, |_| 1.0, spec)?.value),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Sum(parts) => parts.iter().map(|p| p.eval(x)).sum(),
            Self::Bump {
                center,
                half_width,
                amplitude,
            } => {
                let r = (x - center) / half_width;
                if r.abs() >= 1.0 {
                    0.0
                } else {
                    amplitude * (1.0 - 1.0 / (1.0 - r * r)).exp()
                }
            }
            Self::TruncatedGaussian {
                center,
                half_width,
                amplitude,
            } => {
                let d = x - center;
                if d.abs() > *half_width {
                    return 0.0;
                }
                let sd = half_width / GAUSS_TRUNCATION;
                let z = d / sd;
                let norm = sd * (2.0 * PI).sqrt() * (1.0 - NORMAL_TAIL_8);
                amplitude * (-0.5 * z * z).exp() / norm
            }
            Self::Indicator {
                center,
                half_width,
                amplitude,
            } => {
                let d = (x - center).abs();
                if d < *half_width {
                    *amplitude
                } else if d == *half_width {
                    0.5 * amplitude
                } else {
                    0.0
                }
            }
            Self::Table {
                center,
                half_width,
                amplitude,
                values,
            } => {
                let lo = center - half_width;
                let n = values.len();
                let h = 2.0 * half_width / (n - 1) as f64;
                let s = (x - lo) / h;
                if !(0.0..=(n - 1) as f64).contains(&s) {
                    return 0.0;
                }
                let i = (s.floor() as usize).min(n - 2);
                let w = s - i as f64;
                amplitude * ((1.0 - w) * values[i] + w * values[i + 1])
            }
        }
    }

    /// Analytic first derivative, where the kind has one.
    pub fn derivative(&self, x: f64) -> Option<f64> {
        match self {
            Self::Zero => Some(0.0),
            Self::Sum(parts) => parts.iter().map(|p| p.derivative(x)).sum(),
            Self::Bump {
                center,
                half_width,
                amplitude,
            } => {
                let r = (x - center) / half_width;
                if r.abs() >= 1.0 {
                    return Some(0.0);
                }
                let s = 1.0 - r * r;
                let phi = (1.0 - 1.0 / s).exp();
                Some(amplitude * phi * (-2.0 * r / (s * s)) / half_width)
            }
            Self::TruncatedGaussian {
                center, half_width, ..
            } => {
                let d = x - center;
                if d.abs() > *half_width {
                    return Some(0.0);
                }
                let sd = half_width / GAUSS_TRUNCATION;
                Some(-d / (sd * sd) * self.eval(x))
            }
            Self::Indicator { .. } | Self::Table { .. } => None,
        }
    }

    /// Analytic second derivative, where the kind has one.
    pub fn second_derivative(&self, x: f64) -> Option<f64> {
        match self {
            Self::Zero => Some(0.0),
            Self::Sum(parts) => parts.iter().map(|p| p.second_derivative(x)).sum(),
            Self::Bump {
                center,
                half_width,
                amplitude,
            } => {
                let r = (x - center) / half_width;
                if r.abs() >= 1.0 {
                    return Some(0.0);
                }
                let s = 1.0 - r * r;
                let phi = (1.0 - 1.0 / s).exp();
                let r2 = r * r;
                Some(
                    amplitude * phi * (6.0 * r2 * r2 - 2.0) / s.powi(4) / (half_width * half_width),
                )
            }
            Self::TruncatedGaussian {
                center, half_width, ..
            } => {
                let d = x - center;
                if d.abs() > *half_width {
                    return Some(0.0);
                }
                let var = (half_width / GAUSS_TRUNCATION).powi(2);
                Some((d * d / (var * var) - 1.0 / var) * self.eval(x))
            }
            Self::Indicator { .. } | Self::Table { .. } => None,
        }
    }

    /// `C^2` (for initial displacement) and hence also `C^1`. The truncated
    /// Gaussian counts: its jump at the cut is below 1e-13 of its peak.
    pub fn is_smooth(&self) -> bool {
        match self {
            Self::Zero | Self::Bump { .. } | Self::TruncatedGaussian { .. } => true,
            Self::Indicator { .. } | Self::Table { .. } => false,
            Self::Sum(parts) => parts.iter().all(|p| p.is_smooth()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.support().is_none()
    }

    /// Pointwise `a * self`.
    pub fn scaled(&self, a: f64) -> Self {
        match self {
            Self::Zero => Self::Zero,
            Self::Sum(parts) => Self::Sum(parts.iter().map(|p| p.scaled(a)).collect()),
            Self::Bump {
                center,
                half_width,
                amplitude,
            } => Self::Bump {
                center: *center,
                half_width: *half_width,
                amplitude: a * amplitude,
            },
            Self::TruncatedGaussian {
                center,
                half_width,
                amplitude,
            } => Self::TruncatedGaussian {
                center: *center,
                half_width: *half_width,
                amplitude: a * amplitude,
            },
            Self::Indicator {
                center,
                half_width,
                amplitude,
            } => Self::Indicator {
                center: *center,
                half_width: *half_width,
                amplitude: a * amplitude,
            },
            Self::Table {
                center,
                half_width,
                amplitude,
                values,
            } => Self::Table {
                center: *center,
                half_width: *half_width,
                amplitude: a * amplitude,
                values: values.clone(),
            },
        }
    }

    /// Pointwise `self + other`.
    pub fn plus(&self, other: &CompactFunction) -> Self {
        match (self, other) {
            (Self::Zero, o) => o.clone(),
            (s, Self::Zero) => s.clone(),
            (Self::Sum(a), Self::Sum(b)) => Self::Sum(a.iter().chain(b).cloned().collect()),
            (Self::Sum(a), o) => Self::Sum(a.iter().cloned().chain([o.clone()]).collect()),
            (s, Self::Sum(b)) => {
                Self::Sum([s.clone()].into_iter().chain(b.iter().cloned()).collect())
            }
            (s, o) => Self::Sum(vec![s.clone(), o.clone()]),
        }
    }
}
