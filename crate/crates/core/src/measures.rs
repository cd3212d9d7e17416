//! Positive measures on (0, ∞) and integral representations of generalized
//! Bernstein functions built from them.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quadrature::{IntegralResult, Integrator};
use crate::special::{gamma_over_power, log_gamma, lower_incomplete_gamma};

/// A point mass `weight · ε_location`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub location: f64,
    pub weight: f64,
}

/// Named densities on (0, ∞).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name")]
pub enum Density {
    /// (1 + t)^{−2}
    #[serde(rename = "lomax2")]
    Lomax2,
    /// e^{−ct}
    #[serde(rename = "expneg")]
    ExpNeg { c: f64 },
    /// t^p e^{−ct}
    #[serde(rename = "powerexp")]
    PowerExp { p: f64, c: f64 },
    /// Linear interpolation through `(t[i], values[i])`, constant below the
    /// first node and exponentially decaying through the last two nodes.
    #[serde(rename = "custom-table")]
    CustomTable { t: Vec<f64>, values: Vec<f64> },
}

impl Density {
    pub fn name(&self) -> &'static str {
        match self {
            Density::Lomax2 => "lomax2",
            Density::ExpNeg { .. } => "expneg",
            Density::PowerExp { .. } => "powerexp",
            Density::CustomTable { .. } => "custom-table",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |d: String| Err(domain("density", d));
        match self {
            Density::Lomax2 => Ok(()),
            Density::ExpNeg { c } => {
                if c.is_finite() && *c >= 0.0 {
                    Ok(())
                } else {
                    bad(format!("expneg rate must be >= 0, got {c}"))
                }
            }
            Density::PowerExp { p, c } => {
                if !(p.is_finite() && c.is_finite() && *c >= 0.0) {
                    bad(format!("powerexp needs finite p and c >= 0, got p={p}, c={c}"))
                } else {
                    Ok(())
                }
            }
            Density::CustomTable { t, values } => {
                if t.len() < 2 || t.len() != values.len() {
                    return bad("custom-table needs at least two nodes and matching lengths".into());
                }
                if t[0] < 0.0 || t.windows(2).any(|w| !(w[1] > w[0])) || t.iter().any(|v| !v.is_finite()) {
                    return bad("custom-table nodes must be non-negative and strictly increasing".into());
                }
                if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                    return bad("custom-table values must be finite and non-negative".into());
                }
                let n = values.len();
                if values[n - 1] > 0.0 && values[n - 1] >= values[n - 2] {
                    return bad("custom-table tail must decay: last value must be below the one before".into());
                }
                Ok(())
            }
        }
    }

    /// Density value at `t > 0`.
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Density::Lomax2 => {
                let s = 1.0 + t;
                1.0 / (s * s)
            }
            Density::ExpNeg { c } => (-c * t).exp(),
            Density::PowerExp { p, c } => (p * t.ln() - c * t).exp(),
            Density::CustomTable { t: nodes, values } => table_eval(nodes, values, t),
        }
    }

    /// Exponent q with density(t) ~ t^q as t → 0+.
    pub fn origin_exponent(&self) -> f64 {
        match self {
            Density::PowerExp { p, .. } => *p,
            _ => 0.0,
        }
    }
}

fn table_eval(nodes: &[f64], values: &[f64], t: f64) -> f64 {
    let n = nodes.len();
    if t <= nodes[0] {
        return values[0];
    }
    if t >= nodes[n - 1] {
        let (v1, v2) = (values[n - 2], values[n - 1]);
        if v2 == 0.0 {
            return 0.0;
        }
        let rate = (v1 / v2).ln() / (nodes[n - 1] - nodes[n - 2]);
        return v2 * (-rate * (t - nodes[n - 1])).exp();
    }
    let i = nodes.partition_point(|&s| s <= t) - 1;
    let w = (t - nodes[i]) / (nodes[i + 1] - nodes[i]);
    values[i] + w * (values[i + 1] - values[i])
}

/// A positive measure on (0, ∞): finitely many atoms plus an optional density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(try_from = "RawMeasure")]
pub struct MeasureSpec {
    #[serde(default)]
    pub atoms: Vec<Atom>,
    #[serde(default)]
    pub density: Option<Density>,
}

#[derive(Deserialize)]
struct RawMeasure {
    #[serde(default)]
    atoms: Vec<Atom>,
    #[serde(default)]
    density: Option<Density>,
}

impl TryFrom<RawMeasure> for MeasureSpec {
    type Error = Error;

    fn try_from(raw: RawMeasure) -> Result<Self> {
        MeasureSpec::new(raw.atoms, raw.density)
    }
}

impl MeasureSpec {
    pub fn new(atoms: Vec<Atom>, density: Option<Density>) -> Result<Self> {
        let m = Self { atoms, density };
        m.validate()?;
        Ok(m)
    }

    /// The zero measure.
    pub fn zero() -> Self {
        Self::default()
    }

    /// `weight · ε_location`.
    pub fn point_mass(location: f64, weight: f64) -> Result<Self> {
        Self::new(vec![Atom { location, weight }], None)
    }

    pub fn with_density(density: Density) -> Result<Self> {
        Self::new(Vec::new(), Some(density))
    }

    pub fn validate(&self) -> Result<()> {
        for a in &self.atoms {
            if !(a.location > 0.0 && a.location.is_finite()) {
                return Err(domain(
                    "measure",
                    format!("atom location must be positive, got {}", a.location),
                ));
            }
            if !(a.weight > 0.0 && a.weight.is_finite()) {
                return Err(domain(
                    "measure",
                    format!("atom weight must be positive, got {}", a.weight),
                ));
            }
        }
        if let Some(d) = &self.density {
            d.validate()?;
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
            && match &self.density {
                None => true,
                Some(Density::CustomTable { values, .. }) => values.iter().all(|v| *v == 0.0),
                Some(_) => false,
            }
    }

    /// ∫₀^∞ g(t) ρ(t) dt for the density part ρ, where g(t) ~ t^{g_exponent}
    /// near the origin. Zero when there is no density.
    pub fn integrate_density<G>(&self, mut g: G, g_exponent: f64, integ: &Integrator) -> Result<IntegralResult>
    where
        G: FnMut(f64) -> Result<f64>,
    {
        let Some(d) = &self.density else {
            return Ok(IntegralResult {
                value: 0.0,
                abs_error_estimate: 0.0,
                subdivisions: 0,
            });
        };
        let p_head = d.origin_exponent() + g_exponent + 1.0;
        if p_head <= 0.0 {
            return Err(Error::Divergence { near: 0.0 });
        }
        let half = Integrator {
            abs_tol: 0.5 * integ.abs_tol,
            ..*integ
        };
        let head = half.power_head(
            |t| {
                let v = g(t)?;
                Ok(if v == 0.0 { 0.0 } else { v * d.eval(t) })
            },
            1.0,
            p_head,
        )?;
        let tail = half.try_semi_infinite(
            |t| {
                let v = g(t)?;
                Ok(if v == 0.0 { 0.0 } else { v * d.eval(t) })
            },
            1.0,
        )?;
        Ok(IntegralResult {
            value: head.value + tail.value,
            abs_error_estimate: head.abs_error_estimate + tail.abs_error_estimate,
            subdivisions: head.subdivisions + tail.subdivisions,
        })
    }

    /// ∫ g dμ over atoms and density.
    pub fn integrate<G>(&self, mut g: G, g_exponent: f64, integ: &Integrator) -> Result<f64>
    where
        G: FnMut(f64) -> Result<f64>,
    {
        let mut sum = 0.0;
        for a in &self.atoms {
            sum += a.weight * g(a.location)?;
        }
        Ok(sum + self.integrate_density(g, g_exponent, integ)?.value)
    }

    /// Total mass μ((0, ∞)).
    pub fn total_mass(&self, tol: f64) -> Result<f64> {
        self.integrate(|_| Ok(1.0), 0.0, &Integrator::with_tol(tol))
    }
}

/// Laplace transform L(μ)(x) = ∫ e^{−xt} dμ(t) for x ≥ 0.
pub fn laplace_transform(mu: &MeasureSpec, x: f64, tol: f64) -> Result<f64> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(domain("laplace_transform", format!("x must be >= 0, got {x}")));
    }
    mu.integrate(|t| Ok((-x * t).exp()), 0.0, &Integrator::with_tol(tol))
}

/// Which displayed kernel a representation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelForm {
    /// a x^λ + b + ∫ γ(λ, xt) t^{−λ} dμ(t)
    #[serde(rename = "MEASURE")]
    Measure,
    /// a x^λ + b + ∫ γ(λ, xt) φ(t) dt
    #[serde(rename = "DENSITY")]
    Density,
}

/// A generalized Bernstein function of order λ given by its integral
/// representation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRep")]
pub struct GBFRep {
    pub lambda: f64,
    pub a: f64,
    pub b: f64,
    pub kernel_form: KernelForm,
    pub measure_or_density: MeasureSpec,
}

#[derive(Deserialize)]
struct RawRep {
    lambda: f64,
    #[serde(default)]
    a: f64,
    #[serde(default)]
    b: f64,
    kernel_form: KernelForm,
    measure_or_density: MeasureSpec,
}

impl TryFrom<RawRep> for GBFRep {
    type Error = Error;

    fn try_from(r: RawRep) -> Result<Self> {
        GBFRep::new(r.lambda, r.a, r.b, r.kernel_form, r.measure_or_density)
    }
}

const PROBE_POINTS: [f64; 8] = [1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1];

impl GBFRep {
    pub fn new(lambda: f64, a: f64, b: f64, kernel_form: KernelForm, measure: MeasureSpec) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(domain("GBFRep", format!("lambda must be positive, got {lambda}")));
        }
        if !(a >= 0.0 && a.is_finite() && b >= 0.0 && b.is_finite()) {
            return Err(domain(
                "GBFRep",
                format!("a and b must be non-negative, got a={a}, b={b}"),
            ));
        }
        measure.validate()?;
        let rep = Self {
            lambda,
            a,
            b,
            kernel_form,
            measure_or_density: measure,
        };
        rep.probe_convergence()?;
        Ok(rep)
    }

    /// μ = ε_s with weight w in measure form, a = b = 0.
    pub fn point_mass(lambda: f64, location: f64, weight: f64) -> Result<Self> {
        Self::new(
            lambda,
            0.0,
            0.0,
            KernelForm::Measure,
            MeasureSpec::point_mass(location, weight)?,
        )
    }

    /// b + ∫ γ(λ, xt) φ(t) dt.
    pub fn with_density(lambda: f64, b: f64, density: Density) -> Result<Self> {
        Self::new(lambda, 0.0, b, KernelForm::Density, MeasureSpec::with_density(density)?)
    }

    fn probe_convergence(&self) -> Result<()> {
        if let Some(d) = &self.measure_or_density.density {
            let mut prev: Option<f64> = None;
            for &t in &PROBE_POINTS {
                let h = self.kernel(1.0, t)? * d.eval(t);
                if !h.is_finite() {
                    return Err(domain("GBFRep", format!("integrand not finite at t = {t}")));
                }
                let r = t * h;
                if let Some(p) = prev {
                    if p > 0.0 && !(p < r) {
                        return Err(domain(
                            "GBFRep",
                            format!("integrand is not integrable at 0+ (t·h(t) does not vanish near t = {t})"),
                        ));
                    }
                }
                prev = Some(r);
            }
        }
        self.kernel_integral(1.0, &Integrator::with_tol(1e-8))
            .map_err(|e| domain("GBFRep", format!("defining integral does not converge at x = 1: {e}")))?;
        Ok(())
    }

    /// Kernel value at (x, t).
    pub fn kernel(&self, x: f64, t: f64) -> Result<f64> {
        match self.kernel_form {
            KernelForm::Measure => Ok(x.powf(self.lambda) * gamma_over_power(self.lambda, x * t)?),
            KernelForm::Density => lower_incomplete_gamma(self.lambda, x * t),
        }
    }

    fn kernel_exponent(&self) -> f64 {
        match self.kernel_form {
            KernelForm::Measure => 0.0,
            KernelForm::Density => self.lambda,
        }
    }

    /// The integral part of the representation.
    pub fn kernel_integral(&self, x: f64, integ: &Integrator) -> Result<f64> {
        self.measure_or_density
            .integrate(|t| self.kernel(x, t), self.kernel_exponent(), integ)
    }

    /// Value of f(x).
    pub fn eval(&self, x: f64, tol: f64) -> Result<f64> {
        evaluate_gbf(self, x, tol)
    }

    /// f′(x), using d/dx γ(λ, xt) = x^{λ−1} t^λ e^{−xt}.
    pub fn derivative(&self, x: f64, tol: f64) -> Result<f64> {
        if !(x > 0.0 && x.is_finite()) {
            return Err(domain("gbf_derivative", format!("x must be positive, got {x}")));
        }
        let l = self.lambda;
        let integ = Integrator::with_tol(tol);
        let inner = match self.kernel_form {
            KernelForm::Measure => self.measure_or_density.integrate(|t| Ok((-x * t).exp()), 0.0, &integ)?,
            KernelForm::Density => self
                .measure_or_density
                .integrate(|t| Ok((l * t.ln() - x * t).exp()), l, &integ)?,
        };
        Ok(x.powf(l - 1.0) * (self.a * l + inner))
    }

    /// lim_{x→∞} f(x); fails with a divergence error when f is unbounded.
    pub fn limit_at_infinity(&self, tol: f64) -> Result<f64> {
        if self.a > 0.0 {
            return Err(Error::Divergence { near: f64::INFINITY });
        }
        let g = log_gamma(self.lambda)?.exp();
        let integ = Integrator::with_tol(tol);
        let l = self.lambda;
        let mass = match self.kernel_form {
            KernelForm::Measure => self.measure_or_density.integrate(|t| Ok(t.powf(-l)), -l, &integ)?,
            KernelForm::Density => self.measure_or_density.integrate(|_| Ok(1.0), 0.0, &integ)?,
        };
        Ok(self.b + g * mass)
    }

    pub fn is_bounded(&self, tol: f64) -> bool {
        self.limit_at_infinity(tol).is_ok()
    }

    pub fn is_constant(&self) -> bool {
        self.a == 0.0 && self.measure_or_density.is_zero()
    }
}

/// f(x) = a x^λ + b + kernel integral.
pub fn evaluate_gbf(rep: &GBFRep, x: f64, tol: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(domain("evaluate_gbf", format!("x must be positive, got {x}")));
    }
    let integral = rep.kernel_integral(x, &Integrator::with_tol(tol))?;
    Ok(rep.a * x.powf(rep.lambda) + rep.b + integral)
}
