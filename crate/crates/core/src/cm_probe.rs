//! Finite-difference probes of complete monotonicity and related classes.
//!
//! A passing probe means "consistent with complete monotonicity up to the
//! probed order on the probed grid", never a proof.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Step used for the forward differences at a grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum StepPolicy {
    /// h = factor·x.
    Relative(f64),
    Fixed(f64),
}

impl StepPolicy {
    fn step(&self, x: f64) -> f64 {
        match *self {
            StepPolicy::Relative(c) => c * x,
            StepPolicy::Fixed(h) => h,
        }
    }

    fn describe(&self) -> String {
        match *self {
            StepPolicy::Relative(c) => format!("relative:{c}"),
            StepPolicy::Fixed(h) => format!("fixed:{h}"),
        }
    }
}

/// Rounding guard for the sign test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum Tolerance {
    /// tol = factor·|f(x)|.
    Relative(f64),
    Absolute(f64),
}

impl Tolerance {
    fn at(&self, fx: f64) -> f64 {
        match *self {
            Tolerance::Relative(r) => r * fx.abs(),
            Tolerance::Absolute(a) => a,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
}

impl ProbeGrid {
    pub fn nodes(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.x_min];
        }
        let (lo, hi) = (self.x_min.ln(), self.x_max.ln());
        let n = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| match i {
                0 => self.x_min,
                i if i + 1 == self.points => self.x_max,
                i => (lo + (hi - lo) * i as f64 / n).exp(),
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeConfig {
    pub max_order: usize,
    pub grid: ProbeGrid,
    pub step: StepPolicy,
    pub tolerance: Tolerance,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            max_order: 8,
            grid: ProbeGrid {
                x_min: 0.1,
                x_max: 50.0,
                points: 40,
            },
            step: StepPolicy::Relative(0.01),
            tolerance: Tolerance::Relative(1e-9),
        }
    }
}

impl ProbeConfig {
    pub fn new(max_order: usize, x_min: f64, x_max: f64, points: usize) -> Result<Self> {
        let cfg = Self {
            max_order,
            grid: ProbeGrid { x_min, x_max, points },
            ..Self::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_step(mut self, step: StepPolicy) -> Result<Self> {
        self.step = step;
        self.validate()?;
        Ok(self)
    }

    pub fn with_tolerance(mut self, tolerance: Tolerance) -> Result<Self> {
        self.tolerance = tolerance;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=10).contains(&self.max_order) {
            return Err(Error::Config(format!(
                "max_order must be in 1..=10, got {}",
                self.max_order
            )));
        }
        let g = &self.grid;
        if !(g.x_min > 0.0 && g.x_max >= g.x_min && g.x_max.is_finite() && g.points >= 1) {
            return Err(Error::Config(format!(
                "probe grid needs 0 < x_min <= x_max and at least one point, got [{}, {}] x {}",
                g.x_min, g.x_max, g.points
            )));
        }
        match self.step {
            StepPolicy::Relative(c) if !(c > 0.0 && c <= 0.5 / self.max_order as f64) => Err(Error::Config(format!(
                "relative step must be in (0, 1/(2·max_order)], got {c}"
            ))),
            StepPolicy::Fixed(h) if !(h > 0.0 && h <= g.x_min / (2.0 * self.max_order as f64)) => Err(Error::Config(
                format!("fixed step must be in (0, x_min/(2·max_order)], got {h}"),
            )),
            _ => Ok(()),
        }?;
        match self.tolerance {
            Tolerance::Relative(t) | Tolerance::Absolute(t) if !(t >= 0.0 && t.is_finite()) => {
                Err(Error::Config(format!("tolerance must be non-negative, got {t}")))
            }
            _ => Ok(()),
        }
    }
}

/// Most negative signed difference found, relative to its tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Worst {
    pub order: usize,
    pub x: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub pass: bool,
    pub max_order: usize,
    pub worst: Worst,
    /// Highest k such that every order up to k passed; `None` when f itself
    /// is negative somewhere.
    pub passed_through_order: Option<usize>,
    pub grid: ProbeGrid,
    pub h_policy: String,
}

impl ProbeReport {
    /// True when every order up to `k` passed.
    pub fn passes_order(&self, k: usize) -> bool {
        self.passed_through_order.is_some_and(|p| p >= k)
    }
}

fn binomial_row(k: usize) -> Vec<f64> {
    let mut row = vec![1.0; k + 1];
    for j in 1..k {
        row[j] = row[j - 1] * (k - j + 1) as f64 / j as f64;
    }
    row
}

struct NodeResult {
    // per order: (signed difference, tolerance)
    orders: Vec<(f64, f64)>,
}

/// A function value with a bound on its rounding noise.
#[derive(Debug, Clone, Copy)]
struct Sample {
    value: f64,
    noise: f64,
}

fn probe_node<F>(f: &F, x: f64, cfg: &ProbeConfig, rows: &[Vec<f64>]) -> Result<NodeResult>
where
    F: Fn(f64) -> Result<Sample>,
{
    let h = cfg.step.step(x);
    let mut vals = Vec::with_capacity(cfg.max_order + 1);
    for j in 0..=cfg.max_order {
        let t = x + j as f64 * h;
        let v = f(t).map_err(|e| Error::Evaluation {
            at: t,
            detail: e.to_string(),
        })?;
        if !v.value.is_finite() {
            return Err(Error::Evaluation {
                at: t,
                detail: "non-finite value".into(),
            });
        }
        vals.push(v);
    }
    let tol = cfg.tolerance.at(vals[0].value);
    let orders = (0..=cfg.max_order)
        .map(|k| {
            // (−1)^k Δ_h^k f(x) = Σ_j (−1)^j C(k,j) f(x + jh)
            let mut s = 0.0;
            let mut noise = 0.0;
            for (j, c) in rows[k].iter().enumerate() {
                let v = vals[j].value;
                s += if j % 2 == 0 { c * v } else { -c * v };
                noise += c * vals[j].noise;
            }
            (s, tol + noise)
        })
        .collect();
    Ok(NodeResult { orders })
}

/// [`cm_probe`] for a fallible function.
pub fn try_cm_probe<F>(f: F, cfg: &ProbeConfig) -> Result<ProbeReport>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    probe_samples(
        |x| {
            Ok(Sample {
                value: f(x)?,
                noise: 0.0,
            })
        },
        cfg,
    )
}

fn probe_samples<F>(f: F, cfg: &ProbeConfig) -> Result<ProbeReport>
where
    F: Fn(f64) -> Result<Sample> + Sync,
{
    cfg.validate()?;
    let rows: Vec<Vec<f64>> = (0..=cfg.max_order).map(binomial_row).collect();
    let nodes = cfg.grid.nodes();
    let results: Vec<NodeResult> = nodes
        .par_iter()
        .map(|&x| probe_node(&f, x, cfg, &rows))
        .collect::<Result<_>>()?;

    let mut first_fail: Option<usize> = None;
    let mut worst = Worst {
        order: 0,
        x: nodes[0],
        value: results[0].orders[0].0,
    };
    let mut worst_slack = f64::INFINITY;
    for (x, r) in nodes.iter().zip(&results) {
        for (k, &(v, tol)) in r.orders.iter().enumerate() {
            let slack = v + tol;
            if slack < 0.0 {
                first_fail = Some(first_fail.map_or(k, |o| o.min(k)));
            }
            if slack < worst_slack {
                worst_slack = slack;
                worst = Worst {
                    order: k,
                    x: *x,
                    value: v,
                };
            }
        }
    }
    let passed_through_order = match first_fail {
        None => Some(cfg.max_order),
        Some(0) => None,
        Some(k) => Some(k - 1),
    };
    Ok(ProbeReport {
        pass: first_fail.is_none(),
        max_order: cfg.max_order,
        worst,
        passed_through_order,
        grid: cfg.grid,
        h_policy: cfg.step.describe(),
    })
}

/// Checks (−1)^k Δ_h^k f(x) ≥ −tol for k = 0..=max_order on every grid point.
pub fn cm_probe<F>(f: F, cfg: &ProbeConfig) -> Result<ProbeReport>
where
    F: Fn(f64) -> f64 + Sync,
{
    try_cm_probe(|x| Ok(f(x)), cfg)
}

/// Probe of x ↦ x^α f(x).
pub fn try_cm_order_probe<F>(f: F, alpha: f64, cfg: &ProbeConfig) -> Result<ProbeReport>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    try_cm_probe(|x| Ok(x.powf(alpha) * f(x)?), cfg)
}

pub fn cm_order_probe<F>(f: F, alpha: f64, cfg: &ProbeConfig) -> Result<ProbeReport>
where
    F: Fn(f64) -> f64 + Sync,
{
    try_cm_order_probe(|x| Ok(f(x)), alpha, cfg)
}

/// Relative half-width of the derivative stencil.
const DIFF_STEP: f64 = 0.02;

/// Five-point central difference with step proportional to x, with a
/// bound on the rounding noise of the quotient.
fn central_derivative<F>(f: &F, x: f64) -> Result<Sample>
where
    F: Fn(f64) -> Result<f64>,
{
    let d = DIFF_STEP * x;
    let (p1, m1) = (f(x + d)?, f(x - d)?);
    let (p2, m2) = (f(x + 2.0 * d)?, f(x - 2.0 * d)?);
    let value = (8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * d);
    let scale = 8.0 * (p1.abs() + m1.abs()) + p2.abs() + m2.abs();
    let noise = 4.0 * f64::EPSILON * scale / (12.0 * d);
    Ok(Sample { value, noise })
}

/// Probe of −(ln f)′ for a positive f.
pub fn log_cm_probe<F>(f: F, cfg: &ProbeConfig) -> Result<ProbeReport>
where
    F: Fn(f64) -> f64 + Sync,
{
    let ln_f = |x: f64| {
        let v = f(x);
        if v > 0.0 && v.is_finite() {
            Ok(v.ln())
        } else {
            Err(crate::error::domain(
                "log_cm_probe",
                format!("f must be positive, got f({x}) = {v}"),
            ))
        }
    };
    probe_samples(
        |x| {
            let d = central_derivative(&ln_f, x)?;
            Ok(Sample {
                value: -d.value,
                noise: d.noise,
            })
        },
        cfg,
    )
}

/// Probe of x^{1−λ} f′(x), the defining condition of order-λ Bernstein functions.
pub fn bernstein_order_probe<F>(f: F, lambda: f64, cfg: &ProbeConfig) -> Result<ProbeReport>
where
    F: Fn(f64) -> f64 + Sync,
{
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(crate::error::domain(
            "bernstein_order_probe",
            format!("lambda must be positive, got {lambda}"),
        ));
    }
    let fr = |x: f64| Ok(f(x));
    probe_samples(
        |x| {
            let w = x.powf(1.0 - lambda);
            let d = central_derivative(&fr, x)?;
            Ok(Sample {
                value: w * d.value,
                noise: w * d.noise,
            })
        },
        cfg,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glambda::{g_lambda, weighted_derivative};
    use crate::special::{log_gamma, lower_incomplete_gamma};

    fn cfg() -> ProbeConfig {
        ProbeConfig::default()
    }

    #[test]
    fn soundness_on_knowns() {
        let c = cfg();
        assert!(cm_probe(|x| (-x).exp(), &c).unwrap().pass);
        assert!(cm_probe(|x| 1.0 / (1.0 + x), &c).unwrap().pass);
        assert!(cm_probe(|x| x.powf(-0.5), &c).unwrap().pass);
        assert!(!cm_probe(|x| x, &c).unwrap().pass);
        assert!(!cm_probe(|x| x.sin() + 2.0, &c).unwrap().pass);
        assert!(!cm_probe(|x| x.exp(), &c).unwrap().pass);
    }

    #[test]
    fn negative_function_fails_at_order_zero() {
        let r = cm_probe(|x| -x, &cfg()).unwrap();
        assert!(!r.pass);
        assert_eq!(r.passed_through_order, None);
        assert_eq!(r.worst.order, 0);
    }

    #[test]
    fn gamma_ratio_is_cm() {
        let f = |x: f64| (log_gamma(x + 1.0).unwrap() - log_gamma(x + 2.5).unwrap()).exp();
        assert!(cm_probe(f, &cfg()).unwrap().pass);
    }

    #[test]
    fn order_probe() {
        let c = cfg();
        assert!(cm_order_probe(|x| (-x).exp(), 0.0, &c).unwrap().pass);
        assert!(
            cm_order_probe(|x| weighted_derivative(2.5, x).unwrap(), 0.0, &c)
                .unwrap()
                .pass
        );
        let r = cm_order_probe(|x| 1.0 / x, 2.0, &c).unwrap();
        assert!(!r.pass);
        assert_eq!(r.passed_through_order, Some(0));
    }

    #[test]
    fn log_cm() {
        let c = cfg();
        assert!(log_cm_probe(|x| g_lambda(0.5, x).unwrap(), &c).unwrap().pass);
        assert!(log_cm_probe(|x| 1.0 / g_lambda(1.5, x).unwrap(), &c).unwrap().pass);
        assert!(!log_cm_probe(|x| x.exp(), &c).unwrap().pass);
        assert!(log_cm_probe(|x| x - 1.0, &c).is_err());
    }

    #[test]
    fn bernstein_order() {
        let c = ProbeConfig::new(6, 0.01, 50.0, 40).unwrap();
        let l = 0.7;
        assert!(
            bernstein_order_probe(|x| lower_incomplete_gamma(l, x).unwrap(), l, &c)
                .unwrap()
                .pass
        );
        assert!(
            bernstein_order_probe(|x| g_lambda(2.5, x).unwrap(), 1.5, &c)
                .unwrap()
                .pass
        );
        assert!(
            !bernstein_order_probe(|x| g_lambda(2.5, x).unwrap(), 1.2, &c)
                .unwrap()
                .pass
        );
    }

    #[test]
    fn differences_match_closed_form() {
        let h = 1e-3;
        let c = ProbeConfig::new(4, 0.5, 4.0, 5)
            .unwrap()
            .with_step(StepPolicy::Fixed(h))
            .unwrap();
        let rows: Vec<Vec<f64>> = (0..=4).map(binomial_row).collect();
        let f = |x: f64| {
            Ok(Sample {
                value: (-x).exp(),
                noise: 0.0,
            })
        };
        for x in c.grid.nodes() {
            let r = probe_node(&f, x, &c, &rows).unwrap();
            for k in 1..=4 {
                let want = (-x).exp() * (-(-h).exp_m1()).powi(k as i32);
                let got = r.orders[k].0;
                assert!(((got - want) / want).abs() < 1e-2, "k={k} x={x}");
            }
        }
    }

    #[test]
    fn order_monotonicity_by_construction() {
        let r = cm_probe(|x| 2.0 - (x / 10.0).tanh(), &cfg()).unwrap();
        if let Some(k) = r.passed_through_order {
            for j in 0..=k {
                assert!(r.passes_order(j));
            }
        }
    }

    #[test]
    fn config_validation() {
        assert!(ProbeConfig::new(0, 0.1, 1.0, 3).is_err());
        assert!(ProbeConfig::new(11, 0.1, 1.0, 3).is_err());
        assert!(ProbeConfig::new(4, 0.1, 1.0, 3)
            .unwrap()
            .with_step(StepPolicy::Fixed(0.1))
            .is_err());
        assert!(ProbeConfig::new(4, 0.1, 1.0, 3)
            .unwrap()
            .with_step(StepPolicy::Fixed(0.01))
            .is_ok());
    }
}
