//! Margins of the strict inequalities between gamma smoothing, incomplete
//! beta/gamma functions and generalized Bernstein functions, plus grid
//! sweeps over them.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::glambda::{g_lambda, log_g_neg};
use crate::measures::{laplace_transform, Density, GBFRep, KernelForm, MeasureSpec};
use crate::quadrature::Integrator;
use crate::smoothing::{smooth, try_smooth};
use crate::special::{gamma_pq, log_gamma, regularized_beta_pair};

/// Relative rounding guard applied to every margin comparison.
pub const ROUNDING_GUARD: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Log,
    Linear,
}

/// One sweep axis: `count` points between `min` and `max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Axis {
    pub fn new(min: f64, max: f64, count: usize, spacing: Spacing) -> Result<Self> {
        let a = Self {
            min,
            max,
            count,
            spacing,
        };
        a.validate()?;
        Ok(a)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.min > 0.0 && self.max.is_finite() && self.max >= self.min && self.count >= 1) {
            return Err(Error::Config(format!(
                "axis needs 0 < min <= max and count >= 1, got min={}, max={}, count={}",
                self.min, self.max, self.count
            )));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let n = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let w = i as f64 / n;
                if i == 0 {
                    return self.min;
                }
                if i + 1 == self.count {
                    return self.max;
                }
                match self.spacing {
                    Spacing::Linear => self.min + w * (self.max - self.min),
                    Spacing::Log => (self.min.ln() + w * (self.max.ln() - self.min.ln())).exp(),
                }
            })
            .collect()
    }
}

impl FromStr for Axis {
    type Err = Error;

    /// `spacing:min:max:count`, e.g. `log:0.01:100:20`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::Config(format!("expected spacing:min:max:count, got '{s}'"));
        if parts.len() != 4 {
            return Err(bad());
        }
        let spacing = match parts[0] {
            "log" => Spacing::Log,
            "linear" | "lin" => Spacing::Linear,
            _ => return Err(bad()),
        };
        let min = parts[1].parse::<f64>().map_err(|_| bad())?;
        let max = parts[2].parse::<f64>().map_err(|_| bad())?;
        let count = parts[3].parse::<usize>().map_err(|_| bad())?;
        Axis::new(min, max, count, spacing)
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sp = match self.spacing {
            Spacing::Log => "log",
            Spacing::Linear => "linear",
        };
        write!(f, "{sp}:{}:{}:{}", self.min, self.max, self.count)
    }
}

/// Sweep grid over λ, x and y.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lambda_values: Vec<f64>,
    pub x_grid: Axis,
    pub y_grid: Axis,
}

impl GridSpec {
    pub fn new(lambda_values: Vec<f64>, x_grid: Axis, y_grid: Axis) -> Result<Self> {
        let g = Self {
            lambda_values,
            x_grid,
            y_grid,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.lambda_values.iter().any(|l| !(*l > 0.0 && l.is_finite())) {
            return Err(Error::Config("lambda values must be positive".into()));
        }
        self.x_grid.validate()?;
        self.y_grid.validate()
    }

    /// Same axis for x and y.
    pub fn square(lambda_values: Vec<f64>, axis: Axis) -> Result<Self> {
        Self::new(lambda_values, axis, axis)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        })
    }
}

/// One grid point of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginEntry {
    pub ineq: String,
    pub lambda: f64,
    pub x: f64,
    pub y: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub rel_margin: f64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Margin value together with the two sides it came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Margin {
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

impl Margin {
    fn from_sides(lhs: f64, rhs: f64) -> Self {
        Self {
            lhs,
            rhs,
            margin: rhs - lhs,
        }
    }

    /// Passes when `margin > floor − ROUNDING_GUARD·|rhs|`.
    pub fn passes(&self, floor: f64) -> bool {
        self.margin > floor - ROUNDING_GUARD * self.rhs.abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Verdict {
    pub pass: bool,
}

/// Summary of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginReport {
    pub entries: Vec<MarginEntry>,
    pub min_margin: f64,
    pub argmin: (f64, f64, f64),
    pub pass: bool,
    pub margin_floor: f64,
}

/// The summary JSON object of a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportSummary {
    pub min_margin: f64,
    pub argmin: (f64, f64, f64),
    pub verdict: &'static str,
}

impl MarginReport {
    pub fn from_entries(entries: Vec<MarginEntry>, margin_floor: f64) -> Self {
        let mut min_margin = f64::INFINITY;
        let mut argmin = (f64::NAN, f64::NAN, f64::NAN);
        for e in &entries {
            if e.status != Status::Error && e.margin < min_margin {
                min_margin = e.margin;
                argmin = (e.lambda, e.x, e.y);
            }
        }
        let pass = !entries.is_empty() && entries.iter().all(|e| e.status == Status::Pass);
        Self {
            entries,
            min_margin,
            argmin,
            pass,
            margin_floor,
        }
    }

    pub fn summary(&self) -> ReportSummary {
        ReportSummary {
            min_margin: self.min_margin,
            argmin: self.argmin,
            verdict: if self.pass { "pass" } else { "fail" },
        }
    }

    pub fn has_errors(&self) -> bool {
        self.entries.iter().any(|e| e.status == Status::Error)
    }

    pub const CSV_HEADER: &'static str = "ineq,lambda,x,y,lhs,rhs,margin,rel_margin,status";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for e in &self.entries {
            out.push_str(&format!(
                "{},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{}\n",
                e.ineq, e.lambda, e.x, e.y, e.lhs, e.rhs, e.margin, e.rel_margin, e.status
            ));
        }
        out
    }
}

/// Options shared by the margin functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginOptions {
    pub tol: f64,
    pub check_hypotheses: bool,
    pub margin_floor: f64,
}

impl Default for MarginOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            check_hypotheses: true,
            margin_floor: 0.0,
        }
    }
}

fn hypothesis(msg: impl Into<String>) -> Error {
    Error::Hypothesis(msg.into())
}

fn check_xy(x: f64, y: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite() && y > 0.0 && y.is_finite()) {
        return Err(crate::error::domain(
            "margin",
            format!("x and y must be positive, got x={x}, y={y}"),
        ));
    }
    Ok(())
}

/// γ(λ,x) − Γ(λ+y)/Γ(y)·B(λ, y; x/(x+y)), defined for λ ≤ 1.
pub fn margin_ineq_i(lambda: f64, x: f64, y: f64, check_hypotheses: bool) -> Result<Margin> {
    check_xy(x, y)?;
    if check_hypotheses && !(lambda > 0.0 && lambda <= 1.0) {
        return Err(hypothesis(format!("inequality I needs 0 < lambda <= 1, got {lambda}")));
    }
    let g = log_gamma(lambda)?.exp();
    let (p, q) = gamma_pq(lambda, x)?;
    let (i, ic) = regularized_beta_pair(lambda, y, x / (x + y))?;
    let rhs = g * p;
    let lhs = g * i;
    let margin = if p > 0.5 { g * (ic - q) } else { g * (p - i) };
    Ok(Margin { lhs, rhs, margin })
}

/// γ(λ,x) − y^λ B(λ, y; x/(x+y)), defined for λ ≥ 1.
pub fn margin_ineq_ii(lambda: f64, x: f64, y: f64, check_hypotheses: bool) -> Result<Margin> {
    check_xy(x, y)?;
    if check_hypotheses && !(lambda >= 1.0 && lambda.is_finite()) {
        return Err(hypothesis(format!("inequality II needs lambda >= 1, got {lambda}")));
    }
    let g = log_gamma(lambda)?.exp();
    let neg_log_gy = log_g_neg(lambda, y)?;
    let gy = (-neg_log_gy).exp();
    let one_minus_gy = -(-neg_log_gy).exp_m1();
    let (p, q) = gamma_pq(lambda, x)?;
    let (i, ic) = regularized_beta_pair(lambda, y, x / (x + y))?;
    let rhs = g * p;
    let lhs = g * gy * i;
    let margin = if p > 0.5 {
        g * (one_minus_gy - q + gy * ic)
    } else {
        g * (p - gy * i)
    };
    Ok(Margin { lhs, rhs, margin })
}

fn check_bounded_nonconstant(rep: &GBFRep, tol: f64) -> Result<()> {
    if rep.is_constant() {
        return Err(hypothesis("f must be non-constant"));
    }
    rep.limit_at_infinity(tol)
        .map_err(|_| hypothesis("f must be bounded (a = 0 and finite limit at infinity)"))?;
    Ok(())
}

/// f(x) − ∫ f dP_{y,x} for a bounded non-constant f of order λ ≤ 1.
pub fn margin_thm_iii(rep: &GBFRep, x: f64, y: f64, opts: &MarginOptions) -> Result<Margin> {
    check_xy(x, y)?;
    if opts.check_hypotheses {
        if rep.lambda > 1.0 {
            return Err(hypothesis(format!("theorem III needs lambda <= 1, got {}", rep.lambda)));
        }
        check_bounded_nonconstant(rep, opts.tol)?;
    }
    let rhs = rep.eval(x, opts.tol)?;
    let lhs = try_smooth(
        |t| if t > 0.0 { rep.eval(t, opts.tol) } else { Ok(rep.b) },
        y,
        x,
        opts.tol,
    )?;
    Ok(Margin::from_sides(lhs, rhs))
}

/// f(x) − g_λ(y) ∫ f dP_{y,x} for a bounded non-constant f of order λ > 1.
pub fn margin_thm_iv(rep: &GBFRep, x: f64, y: f64, opts: &MarginOptions) -> Result<Margin> {
    check_xy(x, y)?;
    if opts.check_hypotheses {
        if rep.lambda <= 1.0 {
            return Err(hypothesis(format!("theorem IV needs lambda > 1, got {}", rep.lambda)));
        }
        check_bounded_nonconstant(rep, opts.tol)?;
    }
    let rhs = rep.eval(x, opts.tol)?;
    let s = try_smooth(
        |t| if t > 0.0 { rep.eval(t, opts.tol) } else { Ok(rep.b) },
        y,
        x,
        opts.tol,
    )?;
    Ok(Margin::from_sides(g_lambda(rep.lambda, y)? * s, rhs))
}

/// Numerical probe of the wider hypothesis class for the smoothing
/// inequality: bounded, positive, increasing, with t^{1−λ} f′ strictly
/// decreasing, and for λ > 1 also t^{−λ} f strictly decreasing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RemarkProbe {
    pub positive: bool,
    pub increasing: bool,
    pub weighted_derivative_decreasing: bool,
    pub scaled_decreasing: Option<bool>,
}

impl RemarkProbe {
    pub fn holds(&self) -> bool {
        self.positive
            && self.increasing
            && self.weighted_derivative_decreasing
            && self.scaled_decreasing.unwrap_or(true)
    }
}

/// Probes the hypotheses of the wider class on a log grid over [1e-3, 50].
/// Monotonicity is checked up to a small relative tolerance, since
/// derivatives come from central differences.
pub fn probe_remark_hypotheses<F>(f: F, lambda: f64) -> RemarkProbe
where
    F: Fn(f64) -> f64,
{
    let n = 61;
    let (lo, hi) = (1e-3f64.ln(), 50f64.ln());
    let ts: Vec<f64> = (0..n)
        .map(|i| (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp())
        .collect();
    let vals: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
    let non_increasing = |v: &[f64]| v.windows(2).all(|w| w[1] <= w[0] + 1e-6 * w[0].abs());
    let positive = vals.iter().all(|v| *v > 0.0);
    let increasing = vals.windows(2).all(|w| w[1] >= w[0]) && vals[n - 1] > vals[0];
    let wd: Vec<f64> = ts
        .iter()
        .map(|&t| {
            let h = 1e-4 * t;
            let d = (f(t + h) - f(t - h)) / (2.0 * h);
            t.powf(1.0 - lambda) * d
        })
        .collect();
    let weighted_derivative_decreasing = non_increasing(&wd) && wd[n - 1] < wd[0];
    let scaled_decreasing = (lambda > 1.0).then(|| {
        let sc: Vec<f64> = ts.iter().zip(&vals).map(|(t, v)| v * t.powf(-lambda)).collect();
        non_increasing(&sc) && sc[n - 1] < sc[0]
    });
    RemarkProbe {
        positive,
        increasing,
        weighted_derivative_decreasing,
        scaled_decreasing,
    }
}

/// Smoothing margin for an arbitrary function of the wider class:
/// f(x) − ∫ f dP_{y,x} for λ ≤ 1 and f(x) − g_λ(y) ∫ f dP_{y,x} for λ > 1.
/// The hypothesis probe is returned next to the margin, not enforced.
pub fn margin_remark<F>(f: F, lambda: f64, x: f64, y: f64, tol: f64) -> Result<(Margin, RemarkProbe)>
where
    F: Fn(f64) -> f64,
{
    check_xy(x, y)?;
    let probe = probe_remark_hypotheses(&f, lambda);
    let s = smooth(&f, y, x, tol)?;
    let factor = if lambda > 1.0 { g_lambda(lambda, y)? } else { 1.0 };
    Ok((Margin::from_sides(factor * s, f(x)), probe))
}

/// The measure ω of the corollary on completely monotonic functions.
#[derive(Debug, Clone, PartialEq)]
pub enum Omega {
    /// ω given directly.
    Spec(MeasureSpec),
    /// ω determined by a representation: t^{−λ} f(t) = L(ω)(t).
    Derived(GBFRep),
}

/// Checks that ω can belong to a bounded non-constant f of order λ, that is
/// ω has a density w with s^{1−λ} w(s) non-increasing.
fn check_omega_spec(lambda: f64, omega: &MeasureSpec) -> Result<()> {
    if !omega.atoms.is_empty() {
        return Err(hypothesis(
            "atoms in omega cannot come from a bounded function of the class (t^λ·L(ω) would not be increasing)",
        ));
    }
    let Some(d) = &omega.density else {
        return Err(hypothesis("omega must be non-zero"));
    };
    let mut prev = f64::INFINITY;
    for i in 0..=90 {
        let s = 10f64.powf(-6.0 + 9.0 * i as f64 / 90.0);
        let v = s.powf(1.0 - lambda) * d.eval(s);
        if v > prev * (1.0 + 1e-12) {
            return Err(hypothesis(format!("s^(1-lambda)·w(s) increases near s = {s:e}")));
        }
        prev = v;
    }
    Ok(())
}

/// ∫ dω(s) (1 + xs/y)^{−(λ+y)} for an ω given through a measure-form
/// representation with atoms only.
fn derived_omega_integral(rep: &GBFRep, x: f64, y: f64, tol: f64) -> Result<f64> {
    if rep.kernel_form != KernelForm::Measure || rep.measure_or_density.density.is_some() || rep.a != 0.0 {
        return Err(Error::Config(
            "derived omega needs a measure-form representation with a = 0 and atoms only".into(),
        ));
    }
    let l = rep.lambda;
    let inv_gamma = (-log_gamma(l)?).exp();
    let mut atoms = rep.measure_or_density.atoms.clone();
    atoms.sort_by(|p, q| p.location.total_cmp(&q.location));
    let kernel = |s: f64| (-(l + y) * (x * s / y).ln_1p()).exp();
    // ω has density s^{λ−1} · (b/Γ(λ) + Σ_{t_i > s} w_i t_i^{−λ})
    let mut level: f64 = rep.b * inv_gamma + atoms.iter().map(|a| a.weight * a.location.powf(-l)).sum::<f64>();
    let integ = Integrator::with_tol(tol);
    let mut total = 0.0;
    let mut left = 0.0;
    for a in &atoms {
        if level > 0.0 {
            let piece = if left == 0.0 {
                integ.power_head(|s| Ok(s.powf(l - 1.0) * kernel(s)), a.location, l)?
            } else {
                integ.finite(|s| s.powf(l - 1.0) * kernel(s), left, a.location)?
            };
            total += level * piece.value;
        }
        level -= a.weight * a.location.powf(-l);
        left = a.location;
    }
    if rep.b > 0.0 {
        let piece = if left == 0.0 {
            let head = integ.power_head(|s| Ok(s.powf(l - 1.0) * kernel(s)), 1.0, l)?.value;
            head + integ.semi_infinite(|s| s.powf(l - 1.0) * kernel(s), 1.0)?.value
        } else {
            integ.semi_infinite(|s| s.powf(l - 1.0) * kernel(s), left)?.value
        };
        total += rep.b * inv_gamma * piece;
    }
    Ok(total)
}

/// L(ω)(x) − (branch-specific left side) of the corollary on completely
/// monotonic functions. λ ≤ 1 uses the first branch, λ > 1 the second.
pub fn margin_cor_cm(lambda: f64, omega: &Omega, x: f64, y: f64, opts: &MarginOptions) -> Result<Margin> {
    check_xy(x, y)?;
    // y^y Γ(λ+y)/Γ(y) (y+xs)^{−λ−y} = (1/g_λ(y)) (1+xs/y)^{−λ−y}
    // y^{λ+y} (y+xs)^{−λ−y} = (1+xs/y)^{−λ−y}
    let (lam, rhs, raw) = match omega {
        Omega::Spec(m) => {
            if opts.check_hypotheses {
                check_omega_spec(lambda, m)?;
            }
            let rhs = laplace_transform(m, x, opts.tol)?;
            let integ = Integrator::with_tol(opts.tol);
            let raw = m.integrate(|s| Ok((-(lambda + y) * (x * s / y).ln_1p()).exp()), 0.0, &integ)?;
            (lambda, rhs, raw)
        }
        Omega::Derived(rep) => {
            if opts.check_hypotheses {
                check_bounded_nonconstant(rep, opts.tol)?;
            }
            let l = rep.lambda;
            let rhs = rep.eval(x, opts.tol)? * x.powf(-l);
            (l, rhs, derived_omega_integral(rep, x, y, opts.tol)?)
        }
    };
    let lhs = if lam <= 1.0 {
        raw * log_g_neg(lam, y)?.exp()
    } else {
        raw
    };
    Ok(Margin::from_sides(lhs, rhs))
}

/// ∫ g dP_{y,x} − g(x) for a bounded completely monotonic g.
pub fn margin_cor_bdd_cm<F>(g: F, x: f64, y: f64, tol: f64) -> Result<Margin>
where
    F: Fn(f64) -> f64,
{
    check_xy(x, y)?;
    let rhs = smooth(&g, y, x, tol)?;
    Ok(Margin::from_sides(g(x), rhs))
}

/// Which inequality a sweep evaluates, with its fixture.
#[derive(Debug, Clone, PartialEq)]
pub enum Inequality {
    I,
    II,
    ThmIII(GBFRep),
    ThmIV(GBFRep),
    CorCm(Omega),
    /// g = L(ν) for a finite measure ν.
    CorBddCm(MeasureSpec),
}

impl Inequality {
    pub fn id(&self) -> &'static str {
        match self {
            Inequality::I => "I",
            Inequality::II => "II",
            Inequality::ThmIII(_) => "III",
            Inequality::ThmIV(_) => "IV",
            Inequality::CorCm(_) => "cor_cm",
            Inequality::CorBddCm(_) => "cor_bdd_cm",
        }
    }

    /// λ values a sweep visits; representation-based fixtures carry their own.
    fn lambdas(&self, grid: &GridSpec) -> Vec<f64> {
        match self {
            Inequality::ThmIII(r) | Inequality::ThmIV(r) | Inequality::CorCm(Omega::Derived(r)) => vec![r.lambda],
            Inequality::CorBddCm(_) => vec![1.0],
            _ => grid.lambda_values.clone(),
        }
    }

    /// Margin at one point.
    pub fn margin(&self, lambda: f64, x: f64, y: f64, opts: &MarginOptions) -> Result<Margin> {
        match self {
            Inequality::I => margin_ineq_i(lambda, x, y, opts.check_hypotheses),
            Inequality::II => margin_ineq_ii(lambda, x, y, opts.check_hypotheses),
            Inequality::ThmIII(r) => margin_thm_iii(r, x, y, opts),
            Inequality::ThmIV(r) => margin_thm_iv(r, x, y, opts),
            Inequality::CorCm(o) => margin_cor_cm(lambda, o, x, y, opts),
            Inequality::CorBddCm(nu) => {
                if opts.check_hypotheses && nu.is_zero() {
                    return Err(hypothesis("g must be non-constant"));
                }
                let nu = nu.clone();
                let tol = opts.tol;
                let g = move |t: f64| laplace_transform(&nu, t, tol).unwrap_or(f64::NAN);
                margin_cor_bdd_cm(g, x, y, opts.tol)
            }
        }
    }
}

fn entry(ineq: &str, lambda: f64, x: f64, y: f64, res: Result<Margin>, floor: f64) -> MarginEntry {
    match res {
        Ok(m) if m.margin.is_finite() => MarginEntry {
            ineq: ineq.to_string(),
            lambda,
            x,
            y,
            lhs: m.lhs,
            rhs: m.rhs,
            margin: m.margin,
            rel_margin: if m.rhs != 0.0 { m.margin / m.rhs.abs() } else { f64::NAN },
            status: if m.passes(floor) { Status::Pass } else { Status::Fail },
            detail: None,
        },
        other => MarginEntry {
            ineq: ineq.to_string(),
            lambda,
            x,
            y,
            lhs: f64::NAN,
            rhs: f64::NAN,
            margin: f64::NAN,
            rel_margin: f64::NAN,
            status: Status::Error,
            detail: Some(match other {
                Err(e) => e.to_string(),
                Ok(_) => "non-finite margin".into(),
            }),
        },
    }
}

/// Evaluates an inequality over every (λ, x, y) of the grid.
///
/// Points are evaluated in parallel; entries come back in grid order
/// (λ outermost, then x, then y). Hypothesis violations abort the sweep;
/// numerical failures are recorded per entry.
pub fn sweep(which: &Inequality, grid: &GridSpec, opts: &MarginOptions) -> Result<MarginReport> {
    grid.validate()?;
    let lambdas = which.lambdas(grid);
    if opts.check_hypotheses {
        for &l in &lambdas {
            let x0 = grid.x_grid.min;
            let y0 = grid.y_grid.min;
            if let Err(e @ Error::Hypothesis(_)) = which.margin(l, x0, y0, opts) {
                return Err(e);
            }
        }
    }
    let xs = grid.x_grid.points();
    let ys = grid.y_grid.points();
    let mut points = Vec::with_capacity(lambdas.len() * xs.len() * ys.len());
    for &l in &lambdas {
        for &x in &xs {
            for &y in &ys {
                points.push((l, x, y));
            }
        }
    }
    let id = which.id();
    let entries: Vec<MarginEntry> = points
        .par_iter()
        .map(|&(l, x, y)| entry(id, l, x, y, which.margin(l, x, y, opts), opts.margin_floor))
        .collect();
    Ok(MarginReport::from_entries(entries, opts.margin_floor))
}

/// Margins along y at fixed (λ, x); used to check that they shrink toward 0.
pub fn sharpness_profile(
    which: &Inequality,
    lambda: f64,
    x: f64,
    ys: &[f64],
    opts: &MarginOptions,
) -> Result<Vec<f64>> {
    ys.iter()
        .map(|&y| Ok(which.margin(lambda, x, y, opts)?.margin))
        .collect()
}

/// True when the sequence is non-increasing up to the rounding guard.
pub fn is_non_increasing(values: &[f64]) -> bool {
    values
        .windows(2)
        .all(|w| w[1] <= w[0] + ROUNDING_GUARD * w[0].abs().max(f64::MIN_POSITIVE))
}

/// ω with density e^{−cs}·s^{λ−1}, a convenient admissible choice.
pub fn omega_power_exp(lambda: f64, c: f64) -> Result<MeasureSpec> {
    MeasureSpec::with_density(Density::PowerExp { p: lambda - 1.0, c })
}
