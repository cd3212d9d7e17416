//! Large-x expansion of bounded complete generalized Bernstein functions
//!
//!   f(x) = b + ∫₀^∞ P(λ, xt) φ(t) dt,
//!
//! with P = γ/Γ the regularized lower incomplete gamma function and φ
//! completely monotonic and integrable.

use serde::{Deserialize, Serialize};

use crate::cm_probe::{try_cm_order_probe, ProbeConfig, ProbeReport};
use crate::error::{domain, Error, Result};
use crate::measures::Density;
use crate::quadrature::Integrator;
use crate::special::{gamma_pq, pochhammer};

/// Orders above this get flagged as unreliable for tabulated densities.
pub const TABLE_DERIVATIVE_WARN_ORDER: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionSpec {
    pub lambda: f64,
    #[serde(default)]
    pub b: f64,
    pub phi: Density,
    pub n: usize,
}

impl ExpansionSpec {
    pub fn new(lambda: f64, b: f64, phi: Density, n: usize) -> Result<Self> {
        let s = Self { lambda, b, phi, n };
        s.validate()?;
        Ok(s)
    }

    /// The randomized Lomax distribution function, φ(t) = (1+t)^{−2}.
    pub fn lomax(lambda: f64, n: usize) -> Result<Self> {
        Self::new(lambda, 0.0, Density::Lomax2, n)
    }

    pub fn with_order(&self, n: usize) -> Result<Self> {
        Self::new(self.lambda, self.b, self.phi.clone(), n)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(domain(
                "expansion",
                format!("lambda must be positive, got {}", self.lambda),
            ));
        }
        if !(self.b >= 0.0 && self.b.is_finite()) {
            return Err(domain("expansion", format!("b must be non-negative, got {}", self.b)));
        }
        if self.n < 1 {
            return Err(domain("expansion", "truncation order n must be at least 1"));
        }
        self.phi.validate()?;
        if self.phi.origin_exponent() < 0.0 {
            return Err(domain("expansion", "phi must be bounded at the origin"));
        }
        Ok(())
    }

    /// Warnings about the derivative estimates the coefficients rely on.
    pub fn warnings(&self) -> Vec<String> {
        match &self.phi {
            Density::CustomTable { .. } if self.n >= TABLE_DERIVATIVE_WARN_ORDER + 3 => vec![format!(
                "derivatives of a tabulated phi above order {TABLE_DERIVATIVE_WARN_ORDER} are extrapolated and ill-conditioned"
            )],
            _ => vec![],
        }
    }
}

/// φ^{(k)}(0+).
pub fn phi_derivative_at_zero(phi: &Density, k: usize) -> Result<f64> {
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    match phi {
        Density::Lomax2 => Ok(sign * factorial(k + 1)),
        Density::ExpNeg { c } => Ok((-c).powi(k as i32)),
        Density::PowerExp { p, c } if *p == 0.0 => Ok((-c).powi(k as i32)),
        Density::PowerExp { .. } => Err(Error::MissingDerivative {
            density: phi.name().into(),
            order: k,
        }),
        Density::CustomTable { t, values } => table_derivative_at_zero(t, values, k),
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// k-th derivative at 0 of the polynomial through the first k+2 table nodes.
fn table_derivative_at_zero(t: &[f64], values: &[f64], k: usize) -> Result<f64> {
    let m = k + 2;
    if t.len() < m {
        return Err(Error::MissingDerivative {
            density: "custom-table".into(),
            order: k,
        });
    }
    // Newton divided differences
    let mut dd: Vec<f64> = values[..m].to_vec();
    for level in 1..m {
        for i in (level..m).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / (t[i] - t[i - level]);
        }
    }
    // expand Π (s − t_j) into monomials, accumulating coefficients
    let mut poly = vec![0.0; m];
    let mut basis = vec![0.0; m];
    basis[0] = 1.0;
    for (i, c) in dd.iter().enumerate() {
        for (p, b) in poly.iter_mut().zip(&basis) {
            *p += c * b;
        }
        if i + 1 < m {
            for j in (0..m).rev() {
                let lower = if j > 0 { basis[j - 1] } else { 0.0 };
                basis[j] = lower - t[i] * basis[j];
            }
        }
    }
    Ok(factorial(k) * poly[k])
}

/// c_0 = b + ∫φ and c_{k+1} = −(λ)_{k+1}/(k+1)! · φ^{(k)}(0+) for k ≤ n−2.
pub fn expansion_coefficients(spec: &ExpansionSpec, tol: f64) -> Result<Vec<f64>> {
    spec.validate()?;
    let mass = phi_mass(&spec.phi, tol)?;
    let mut c = Vec::with_capacity(spec.n);
    c.push(spec.b + mass);
    for k in 0..spec.n.saturating_sub(1) {
        let d = phi_derivative_at_zero(&spec.phi, k)?;
        c.push(-pochhammer(spec.lambda, (k + 1) as u32)? / factorial(k + 1) * d);
    }
    Ok(c)
}

fn phi_mass(phi: &Density, tol: f64) -> Result<f64> {
    match phi {
        Density::Lomax2 => Ok(1.0),
        Density::ExpNeg { c } | Density::PowerExp { p: _, c } if *c > 0.0 && phi.origin_exponent() == 0.0 => {
            Ok(1.0 / c)
        }
        _ => {
            let m = crate::measures::MeasureSpec::with_density(phi.clone())?;
            m.total_mass(tol)
        }
    }
}

/// Σ_{k=0}^{n−1} c_k / x^k.
pub fn expansion_partial_sum(spec: &ExpansionSpec, x: f64, tol: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(domain("expansion_partial_sum", format!("x must be positive, got {x}")));
    }
    let c = expansion_coefficients(spec, tol)?;
    // Horner in 1/x
    let inv = 1.0 / x;
    Ok(c.iter().rev().fold(0.0, |acc, ck| acc * inv + ck))
}

/// ∫₀^∞ Q(λ, xt) g(t) dt split at t = 1.
fn upper_kernel_integral<G>(lambda: f64, x: f64, g: G, tol: f64) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    let integrand = |t: f64| -> Result<f64> {
        let w = g(t);
        if w == 0.0 {
            return Ok(0.0);
        }
        Ok(gamma_pq(lambda, x * t)?.1 * w)
    };
    let integ = Integrator::with_tol(0.5 * tol);
    let head = integ.try_finite(integrand, 0.0, 1.0)?;
    let tail = integ.try_semi_infinite(integrand, 1.0)?;
    Ok(head.value + tail.value)
}

/// ∫₀^∞ P(λ, xt) g(t) dt split at t = 1, for g bounded at 0.
fn lower_kernel_integral<G>(lambda: f64, x: f64, g: G, tol: f64) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    let integrand = |t: f64| -> Result<f64> {
        let w = g(t);
        if w == 0.0 {
            return Ok(0.0);
        }
        Ok(gamma_pq(lambda, x * t)?.0 * w)
    };
    let integ = Integrator::with_tol(0.5 * tol);
    let head = integ.power_head(integrand, 1.0, lambda + 1.0)?;
    let tail = integ.try_semi_infinite(integrand, 1.0)?;
    Ok(head.value + tail.value)
}

/// f(x) = b + ∫ P(λ, xt) φ(t) dt by quadrature.
pub fn expansion_function(spec: &ExpansionSpec, x: f64, tol: f64) -> Result<f64> {
    spec.validate()?;
    if x == 0.0 {
        return Ok(spec.b);
    }
    if !(x > 0.0 && x.is_finite()) {
        return Err(domain("expansion_function", format!("x must be non-negative, got {x}")));
    }
    let phi = |t: f64| spec.phi.eval(t);
    if x >= 1.0 {
        let mass = phi_mass(&spec.phi, tol)?;
        Ok(spec.b + mass - upper_kernel_integral(spec.lambda, x, phi, tol)?)
    } else {
        Ok(spec.b + lower_kernel_integral(spec.lambda, x, phi, tol)?)
    }
}

/// F_λ(x) = ∫₀^∞ P(λ, xt) (1+t)^{−2} dt.
pub fn lomax_cdf(lambda: f64, x: f64, tol: f64) -> Result<f64> {
    let v = expansion_function(&ExpansionSpec::lomax(lambda, 1)?, x, tol)?;
    Ok(v.clamp(0.0, 1.0))
}

/// (−1)^m (e^{−z} − Σ_{k<m} (−z)^k/k!), computed without cancellation.
fn exp_taylor_tail(m: usize, z: f64) -> f64 {
    if m == 0 {
        return (-z).exp();
    }
    if z > 50.0 {
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 0..m {
            if k > 0 {
                term *= -z / k as f64;
            }
            sum += term;
        }
        let v = (-z).exp() - sum;
        return if m.is_multiple_of(2) { v } else { -v };
    }
    // (z^m/m!) e^{−z} Σ_j m z^j / ((m+j) j!), all terms positive
    let mf = m as f64;
    let mut term = 1.0;
    let mut sum = 0.0;
    for j in 0..500 {
        if j > 0 {
            term *= z / j as f64;
        }
        let add = mf / (mf + j as f64) * term;
        sum += add;
        if add < 1e-17 * sum {
            break;
        }
    }
    let lead = (mf * z.ln() - crate::special::log_gamma(mf + 1.0).unwrap_or(f64::INFINITY) - z).exp();
    lead * sum
}

/// Non-negative weight ρ_n with Q_n(x) = ∫ Q(λ, xt) ρ_n(t) dt, when a
/// cancellation-free form is known.
fn remainder_weight(phi: &Density, n: usize) -> Option<Box<dyn Fn(f64) -> f64 + Send + Sync>> {
    match phi {
        Density::Lomax2 => {
            let nf = n as f64;
            Some(Box::new(move |t: f64| {
                let s = 1.0 + t;
                t.powi(n as i32 - 1) * (nf + (nf - 1.0) * t) / (s * s)
            }))
        }
        Density::ExpNeg { c } | Density::PowerExp { p: _, c } if phi.origin_exponent() == 0.0 => {
            let c = *c;
            Some(Box::new(move |t: f64| exp_taylor_tail(n - 1, c * t)))
        }
        _ => None,
    }
}

/// Q_n(x) = (−1)^n (f(x) − Σ_{k<n} c_k/x^k).
pub fn remainder(spec: &ExpansionSpec, x: f64, tol: f64) -> Result<f64> {
    spec.validate()?;
    if !(x > 0.0 && x.is_finite()) {
        return Err(domain("remainder", format!("x must be positive, got {x}")));
    }
    if let Some(w) = remainder_weight(&spec.phi, spec.n) {
        return upper_kernel_integral(spec.lambda, x, w, tol);
    }
    let diff = expansion_function(spec, x, tol)? - expansion_partial_sum(spec, x, tol)?;
    Ok(if spec.n.is_multiple_of(2) { diff } else { -diff })
}

/// |c_n|/x^n, the first term left out of the partial sum.
pub fn first_omitted_term(spec: &ExpansionSpec, x: f64, tol: f64) -> Result<f64> {
    let next = spec.with_order(spec.n + 1)?;
    let c = expansion_coefficients(&next, tol)?;
    Ok(c[spec.n].abs() / x.powi(spec.n as i32))
}

/// Probes x ↦ x^{n−λ} Q_n(x) for complete monotonicity.
pub fn remainder_cm_order_check(spec: &ExpansionSpec, n: usize, cfg: &ProbeConfig, tol: f64) -> Result<ProbeReport> {
    remainder_cm_probe_with_alpha(spec, n, n as f64 - spec.lambda, cfg, tol)
}

/// As [`remainder_cm_order_check`] with an arbitrary order α.
pub fn remainder_cm_probe_with_alpha(
    spec: &ExpansionSpec,
    n: usize,
    alpha: f64,
    cfg: &ProbeConfig,
    tol: f64,
) -> Result<ProbeReport> {
    let s = spec.with_order(n)?;
    try_cm_order_probe(|x| remainder(&s, x, tol), alpha, cfg)
}

/// One row of an expansion study.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionRow {
    pub lambda: f64,
    pub x: f64,
    pub n: usize,
    pub f_value: f64,
    pub partial_sum: f64,
    pub remainder_signed: f64,
    pub bracket_ok: bool,
}

pub const EXPANSION_CSV_HEADER: &str = "lambda,x,n,f_value,partial_sum,remainder_signed,bracket_ok";

/// True when f lies between the partial sums of orders n and n+1, up to
/// a floor of 1e-10·|f|.
pub fn brackets(f: f64, s_n: f64, s_next: f64) -> bool {
    let floor = 1e-10 * f.abs();
    let (lo, hi) = if s_n <= s_next { (s_n, s_next) } else { (s_next, s_n) };
    f >= lo - floor && f <= hi + floor
}

/// Rows for n = 1..=max_n at each x.
pub fn expansion_table(base: &ExpansionSpec, xs: &[f64], max_n: usize, tol: f64) -> Result<Vec<ExpansionRow>> {
    let mut rows = Vec::new();
    for &x in xs {
        let f = expansion_function(base, x, tol)?;
        for n in 1..=max_n {
            let s_n = expansion_partial_sum(&base.with_order(n)?, x, tol)?;
            let s_next = expansion_partial_sum(&base.with_order(n + 1)?, x, tol)?;
            rows.push(ExpansionRow {
                lambda: base.lambda,
                x,
                n,
                f_value: f,
                partial_sum: s_n,
                remainder_signed: f - s_n,
                bracket_ok: brackets(f, s_n, s_next),
            });
        }
    }
    Ok(rows)
}

pub fn expansion_csv(rows: &[ExpansionRow]) -> String {
    let mut out = String::from(EXPANSION_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{:e},{:e},{},{:e},{:e},{:e},{}\n",
            r.lambda, r.x, r.n, r.f_value, r.partial_sum, r.remainder_signed, r.bracket_ok
        ));
    }
    out
}
