//! Adaptive Gauss–Kronrod (7/15) integration on finite and semi-infinite
//! intervals.
//!
//! Panels are refined by global bisection of the panel with the largest error
//! estimate. The final value is a pairwise sum over panels in left-endpoint
//! order, so a given panel set always produces the same bits.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{domain, Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_PANELS: usize = 100_000;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    id: usize,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error).then_with(|| other.id.cmp(&self.id))
    }
}

fn gauss_kronrod<F>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut eval = |t: f64| -> Result<f64> {
        let v = f(t)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { at: t })
        }
    };

    let fc = eval(center)?;
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = res_k * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let h = half.abs();
    let value = res_k * half;
    res_abs *= h;
    res_asc *= h;
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok((value, err))
}

/// Pairwise sum, used for the final panel accumulation.
pub(crate) fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Adaptive integrator configuration.
///
/// A result is accepted once the summed error estimate is at most
/// `max(abs_tol, rel_tol * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integrator {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for Integrator {
    fn default() -> Self {
        Self::new(DEFAULT_TOL, 1e-12)
    }
}

impl Integrator {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            max_panels: DEFAULT_MAX_PANELS,
        }
    }

    /// Absolute tolerance `tol` with a small relative floor for large values.
    pub fn with_tol(tol: f64) -> Self {
        Self::new(tol, 1e-13)
    }

    pub fn max_panels(mut self, n: usize) -> Self {
        self.max_panels = n.max(1);
        self
    }

    fn check(&self) -> Result<()> {
        if !(self.abs_tol >= 0.0 && self.rel_tol >= 0.0) || (self.abs_tol == 0.0 && self.rel_tol == 0.0) {
            return Err(Error::Config(format!(
                "quadrature tolerances must be non-negative and not both zero (abs {}, rel {})",
                self.abs_tol, self.rel_tol
            )));
        }
        Ok(())
    }

    /// ∫_a^b f.
    pub fn finite<F>(&self, mut f: F, a: f64, b: f64) -> Result<IntegralResult>
    where
        F: FnMut(f64) -> f64,
    {
        self.try_finite(|t| Ok(f(t)), a, b)
    }

    /// ∫_a^b f for an integrand that may itself fail.
    pub fn try_finite<F>(&self, f: F, a: f64, b: f64) -> Result<IntegralResult>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        self.check()?;
        if !(a.is_finite() && b.is_finite()) {
            return Err(domain(
                "integrate_finite",
                format!("limits must be finite, got [{a}, {b}]"),
            ));
        }
        if a > b {
            return Err(domain("integrate_finite", format!("require a <= b, got [{a}, {b}]")));
        }
        if a == b {
            return Ok(IntegralResult {
                value: 0.0,
                abs_error_estimate: 0.0,
                subdivisions: 1,
            });
        }
        self.adapt(f, a, b, None)
    }

    /// ∫_a^∞ f.
    pub fn semi_infinite<F>(&self, mut f: F, a: f64) -> Result<IntegralResult>
    where
        F: FnMut(f64) -> f64,
    {
        self.try_semi_infinite(|t| Ok(f(t)), a)
    }

    /// ∫_a^∞ f for an integrand that may itself fail.
    pub fn try_semi_infinite<F>(&self, mut f: F, a: f64) -> Result<IntegralResult>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        self.check()?;
        if !a.is_finite() {
            return Err(domain(
                "integrate_semi_infinite",
                format!("lower limit must be finite, got {a}"),
            ));
        }
        let half = Integrator {
            abs_tol: 0.5 * self.abs_tol,
            ..*self
        };
        let head = half.adapt(&mut f, a, a + 1.0, None)?;
        let c = a + 1.0;
        // t = c + (1 − u)/u, dt = du/u²
        let g = |u: f64| -> Result<f64> {
            let t = c + (1.0 - u) / u;
            let v = f(t)?;
            if !v.is_finite() {
                return Err(Error::NonFinite { at: t });
            }
            if v == 0.0 {
                return Ok(0.0);
            }
            Ok(v / (u * u))
        };
        let tail = half.adapt(g, 0.0, 1.0, Some(c))?;
        Ok(IntegralResult {
            value: head.value + tail.value,
            abs_error_estimate: head.abs_error_estimate + tail.abs_error_estimate,
            subdivisions: head.subdivisions + tail.subdivisions,
        })
    }

    /// ∫_0^b f for an integrand behaving like u^{p−1} at the origin.
    ///
    /// Substitutes u = b·v^{1/p}, which turns the leading power into a
    /// constant.
    pub fn power_head<F>(&self, mut f: F, b: f64, p: f64) -> Result<IntegralResult>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        if !(p > 0.0 && p.is_finite()) {
            return Err(domain("power_head", format!("exponent must be positive, got {p}")));
        }
        let inv = 1.0 / p;
        let scale = b / p;
        self.try_finite(
            move |v| {
                if v == 0.0 {
                    return Ok(0.0);
                }
                let jac = scale * v.powf(inv - 1.0);
                let val = f(b * v.powf(inv))?;
                Ok(if val == 0.0 { 0.0 } else { val * jac })
            },
            0.0,
            1.0,
        )
    }

    fn adapt<F>(&self, mut f: F, a: f64, b: f64, tail_origin: Option<f64>) -> Result<IntegralResult>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let (v0, e0) = gauss_kronrod(&mut f, a, b)?;
        let mut heap = BinaryHeap::new();
        let mut frozen: Vec<Panel> = Vec::new();
        let mut next_id = 0usize;
        heap.push(Panel {
            a,
            b,
            value: v0,
            error: e0,
            id: next_id,
        });
        next_id += 1;
        let mut total_value = v0;
        let mut total_error = e0;
        let mut tail_streak = 0usize;
        let mut iter = 0usize;

        loop {
            iter += 1;
            if iter.is_multiple_of(512) {
                total_value = heap.iter().chain(frozen.iter()).map(|p| p.value).sum();
                total_error = heap.iter().chain(frozen.iter()).map(|p| p.error).sum();
            }
            let target = self.abs_tol.max(self.rel_tol * total_value.abs());
            if total_error <= target {
                // confirm with exact sums before accepting
                let exact_err: f64 = heap.iter().chain(frozen.iter()).map(|p| p.error).sum();
                let exact_val: f64 = heap.iter().chain(frozen.iter()).map(|p| p.value).sum();
                total_error = exact_err;
                total_value = exact_val;
                if exact_err <= self.abs_tol.max(self.rel_tol * exact_val.abs()) {
                    break;
                }
            }
            let count = heap.len() + frozen.len();
            let Some(worst) = heap.pop() else {
                return Err(Error::NonConvergence {
                    value: total_value,
                    abs_error: total_error,
                    subdivisions: count,
                });
            };
            if count >= self.max_panels {
                heap.push(worst);
                let value = heap.iter().chain(frozen.iter()).map(|p| p.value).sum();
                let abs_error = heap.iter().chain(frozen.iter()).map(|p| p.error).sum();
                return Err(Error::NonConvergence {
                    value,
                    abs_error,
                    subdivisions: count,
                });
            }
            let mid = 0.5 * (worst.a + worst.b);
            if !(mid > worst.a && mid < worst.b)
                || (worst.b - worst.a) <= 4.0 * f64::EPSILON * worst.a.abs().max(worst.b.abs())
            {
                frozen.push(worst);
                continue;
            }
            let (v1, e1) = gauss_kronrod(&mut f, worst.a, mid)?;
            let (v2, e2) = gauss_kronrod(&mut f, mid, worst.b)?;

            if let Some(origin) = tail_origin {
                if worst.a == a {
                    let ratio = if worst.value != 0.0 { v1 / worst.value } else { 0.0 };
                    if ratio >= 0.99 && v1.abs() > self.abs_tol {
                        tail_streak += 1;
                    } else {
                        tail_streak = 0;
                    }
                    if tail_streak >= 8 {
                        return Err(Error::Divergence {
                            near: origin + (1.0 - mid) / mid,
                        });
                    }
                }
            }

            total_value += v1 + v2 - worst.value;
            total_error += e1 + e2 - worst.error;
            heap.push(Panel {
                a: worst.a,
                b: mid,
                value: v1,
                error: e1,
                id: next_id,
            });
            heap.push(Panel {
                a: mid,
                b: worst.b,
                value: v2,
                error: e2,
                id: next_id + 1,
            });
            next_id += 2;
        }

        let mut panels: Vec<Panel> = heap.into_vec();
        panels.extend(frozen);
        panels.sort_by(|p, q| p.a.total_cmp(&q.a));
        let values: Vec<f64> = panels.iter().map(|p| p.value).collect();
        let errors: Vec<f64> = panels.iter().map(|p| p.error).collect();
        Ok(IntegralResult {
            value: pairwise_sum(&values),
            abs_error_estimate: pairwise_sum(&errors),
            subdivisions: panels.len(),
        })
    }
}

/// ∫_a^b f with absolute tolerance `tol`.
pub fn integrate_finite<F>(f: F, a: f64, b: f64, tol: f64) -> Result<IntegralResult>
where
    F: FnMut(f64) -> f64,
{
    Integrator::with_tol(tol).finite(f, a, b)
}

/// ∫_a^∞ f with absolute tolerance `tol`.
pub fn integrate_semi_infinite<F>(f: F, a: f64, tol: f64) -> Result<IntegralResult>
where
    F: FnMut(f64) -> f64,
{
    Integrator::with_tol(tol).semi_infinite(f, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn finite_examples() {
        let r = integrate_finite(|t| t, 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 0.5).abs() < 1e-14);
        let r = integrate_finite(|t| 1.0 / t.sqrt(), 0.0, 1.0, 1e-10).unwrap();
        assert!((r.value - 2.0).abs() < 1e-10);
        assert!(r.abs_error_estimate <= 1e-10);
        let r = integrate_finite(f64::sin, 0.0, PI, 1e-12).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn semi_infinite_examples() {
        let r = integrate_semi_infinite(|t| (-t).exp(), 0.0, 1e-12).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        let r = integrate_semi_infinite(|t| (-t).exp() / t.sqrt(), 0.0, 1e-10).unwrap();
        assert!((r.value - PI.sqrt()).abs() < 1e-10);
        let r = integrate_semi_infinite(|t| (1.0 + t).powi(-2), 0.0, 1e-12).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        let r = integrate_semi_infinite(|t| (-t).exp(), 3.0, 1e-13).unwrap();
        assert!((r.value - (-3f64).exp()).abs() < 1e-13);
    }

    #[test]
    fn divergent_tail_is_reported() {
        let r = integrate_semi_infinite(|t| 1.0 / (1.0 + t), 0.0, 1e-10);
        assert!(matches!(r, Err(Error::Divergence { .. })), "{r:?}");
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let r = integrate_finite(|t| if t > 0.5 { f64::NAN } else { t }, 0.0, 1.0, 1e-10);
        assert!(matches!(r, Err(Error::NonFinite { .. })));
    }

    #[test]
    fn budget_exhaustion_is_non_convergence() {
        let r = Integrator::with_tol(1e-14)
            .max_panels(4)
            .finite(|t| (50.0 * t).sin().abs(), 0.0, 10.0);
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn bad_limits_are_domain_errors() {
        assert!(integrate_finite(|t| t, 1.0, 0.0, 1e-10).is_err());
        assert!(integrate_finite(|t| t, 0.0, f64::INFINITY, 1e-10).is_err());
        assert_eq!(integrate_finite(|t| t, 2.0, 2.0, 1e-10).unwrap().value, 0.0);
    }

    #[test]
    fn power_head_handles_weak_singularity() {
        // ∫_0^1 u^{−0.99} du = 100
        let r = Integrator::with_tol(1e-10)
            .power_head(|u| Ok(u.powf(-0.99)), 1.0, 0.01)
            .unwrap();
        assert!((r.value - 100.0).abs() < 1e-8);
    }

    #[test]
    fn deterministic_bits() {
        let f = |t: f64| (t * 3.0).cos() * (-t).exp();
        let a = integrate_semi_infinite(f, 0.0, 1e-11).unwrap();
        let b = integrate_semi_infinite(f, 0.0, 1e-11).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.subdivisions, b.subdivisions);
    }

    #[test]
    fn fallible_integrand_propagates() {
        let r = Integrator::default().try_finite(
            |t| {
                if t > 0.9 {
                    Err(Error::Config("stop".into()))
                } else {
                    Ok(t)
                }
            },
            0.0,
            1.0,
        );
        assert!(matches!(r, Err(Error::Config(_))));
    }
}
