//! Gamma smoothing ∫ f dP_{y,x}, the incomplete beta/gamma identities that
//! come with it, and the approximating sequence f_n.

use crate::error::{domain, Result};
use crate::glambda::log_g_neg;
use crate::measures::{GBFRep, KernelForm};
use crate::quadrature::Integrator;
use crate::special::{gamma_pq, incomplete_beta, log_gamma, log_gamma_ratio, regularized_beta, regularized_gamma_p};

/// Above this shape the smoothing integral is restricted to the bulk of the
/// gamma density.
pub const LARGE_SHAPE: f64 = 500.0;
const BULK_WIDTH: f64 = 20.0;

/// Shape/location pair of the gamma distribution with shape y and scale x/y.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingParams {
    pub y: f64,
    pub x: f64,
    pub tol: f64,
}

impl SmoothingParams {
    pub fn new(y: f64, x: f64, tol: f64) -> Result<Self> {
        for (name, v) in [("y", y), ("x", x), ("tol", tol)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(domain("smoothing", format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self { y, x, tol })
    }
}

/// P_{y,x}(t) = γ(y, yt/x)/Γ(y).
pub fn gamma_cdf(y: f64, x: f64, t: f64) -> Result<f64> {
    SmoothingParams::new(y, x, 1.0)?;
    if !(t >= 0.0) {
        return Err(domain("gamma_cdf", format!("t must be >= 0, got {t}")));
    }
    regularized_gamma_p(y, y * t / x)
}

/// ln of the gamma(y, 1/y) density at s > 0.
fn log_unit_density(y: f64, ln_norm: f64, s: f64) -> f64 {
    ln_norm + (y - 1.0) * s.ln() - y * s
}

/// ∫₀^∞ f(t) dP_{y,x}(t) for a bounded f.
pub fn smooth<F>(mut f: F, y: f64, x: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    try_smooth(|t| Ok(f(t)), y, x, tol)
}

/// [`smooth`] for an integrand that may fail.
pub fn try_smooth<F>(mut f: F, y: f64, x: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let p = SmoothingParams::new(y, x, tol)?;
    // substitute t = x s; s has the gamma(y, 1/y) law
    let ln_norm = y * y.ln() - log_gamma(y)?;
    let mut integrand = |s: f64| -> Result<f64> {
        if s <= 0.0 {
            return Ok(0.0);
        }
        let w = log_unit_density(y, ln_norm, s).exp();
        if w == 0.0 {
            return Ok(0.0);
        }
        Ok(f(p.x * s)? * w)
    };
    if y > LARGE_SHAPE {
        let half = BULK_WIDTH / y.sqrt();
        let lo = (1.0 - half).max(0.0);
        let r = Integrator::with_tol(tol).try_finite(integrand, lo, 1.0 + half)?;
        return Ok(r.value);
    }
    let integ = Integrator::with_tol(0.5 * tol);
    let head = if y < 1.0 {
        integ.power_head(&mut integrand, 1.0, y)?
    } else {
        integ.try_finite(&mut integrand, 0.0, 1.0)?
    };
    let tail = integ.try_semi_infinite(&mut integrand, 1.0)?;
    Ok(head.value + tail.value)
}

/// Γ(λ+y)/Γ(y) · B(λ, y; x/(x+y)).
pub fn beta_side(lambda: f64, x: f64, y: f64) -> Result<f64> {
    let z = x / (x + y);
    let i = regularized_beta(lambda, y, z)?;
    Ok(log_gamma(lambda)?.exp() * i)
}

/// Both sides of the identity
/// Γ(λ+y)/Γ(y)·B(λ,y;x/(x+y)) = Γ(λ) − x^λ ∫₀^∞ P(y, yt) t^{λ−1} e^{−xt} dt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub lhs: f64,
    pub rhs: f64,
}

impl Residual {
    pub fn value(&self) -> f64 {
        self.lhs - self.rhs
    }
}

fn check_all_positive(op: &'static str, vals: &[(&str, f64)]) -> Result<()> {
    for (name, v) in vals {
        if !(*v > 0.0 && v.is_finite()) {
            return Err(domain(op, format!("{name} must be positive, got {v}")));
        }
    }
    Ok(())
}

/// Left and right sides of the beta/gamma identity at (λ, x, y).
pub fn bg1_sides(lambda: f64, x: f64, y: f64) -> Result<Residual> {
    check_all_positive("bg1_residual", &[("lambda", lambda), ("x", x), ("y", y)])?;
    // incomplete beta route
    let lhs = log_gamma_ratio(y, lambda)?.exp() * incomplete_beta(lambda, y, x / (x + y))?;
    // quadrature route, with u = xt
    let g = log_gamma(lambda)?.exp();
    let integ = Integrator::new(1e-13 * g.max(1.0), 1e-13);
    let integrand = |u: f64| -> Result<f64> {
        if u == 0.0 {
            return Ok(0.0);
        }
        let p = regularized_gamma_p(y, y * u / x)?;
        Ok(p * ((lambda - 1.0) * u.ln() - u).exp())
    };
    let head = integ.power_head(integrand, 1.0, lambda + y)?;
    let tail = integ.try_semi_infinite(integrand, 1.0)?;
    Ok(Residual {
        lhs,
        rhs: g - (head.value + tail.value),
    })
}

/// LHS − RHS of the beta/gamma identity.
pub fn bg1_residual(lambda: f64, x: f64, y: f64) -> Result<f64> {
    Ok(bg1_sides(lambda, x, y)?.value())
}

/// Sides of ∫₀¹ P(y,yt) t^{λ−1} dt + ∫₁^∞ (P(y,yt) − 1) t^{λ−1} dt = (1 − 1/g_λ(y))/λ.
pub fn gg1_sides(lambda: f64, y: f64) -> Result<Residual> {
    check_all_positive("gg1_residual", &[("lambda", lambda), ("y", y)])?;
    let integ = Integrator::new(1e-13, 1e-13);
    let head = integ.power_head(
        |t| {
            if t == 0.0 {
                return Ok(0.0);
            }
            Ok(regularized_gamma_p(y, y * t)? * t.powf(lambda - 1.0))
        },
        1.0,
        lambda + y,
    )?;
    let tail = integ.try_semi_infinite(|t| Ok(gamma_pq(y, y * t)?.1 * t.powf(lambda - 1.0)), 1.0)?;
    let rhs = -(log_g_neg(lambda, y)?).exp_m1() / lambda;
    Ok(Residual {
        lhs: head.value - tail.value,
        rhs,
    })
}

/// LHS − RHS of the gamma/g_λ identity.
pub fn gg1_residual(lambda: f64, y: f64) -> Result<f64> {
    Ok(gg1_sides(lambda, y)?.value())
}

/// Γ(λ+n)/Γ(n) · B(λ, n; x/(x + n/t)) · t^{−λ}.
pub fn thorin_term(lambda: f64, n: u32, x: f64, t: f64) -> Result<f64> {
    check_all_positive("thorin_term", &[("lambda", lambda), ("x", x), ("t", t)])?;
    if n == 0 {
        return Err(domain("thorin_term", "n must be positive"));
    }
    let nf = n as f64;
    let xt = x * t;
    let z = xt / (xt + nf);
    // Γ(λ+n)/Γ(n)·B(λ,n;z) = Γ(λ)·I_z(λ,n)
    let i = regularized_beta(lambda, nf, z)?;
    Ok(log_gamma(lambda)?.exp() * i * t.powf(-lambda))
}

/// f_n(x) = a x^λ + b + Γ(λ+n)/Γ(n) ∫ B(λ, n; x/(x+n/t)) t^{−λ} dμ(t).
///
/// For density-form representations dμ = t^λ φ(t) dt.
pub fn approx_fn(rep: &GBFRep, n: u32, x: f64, tol: f64) -> Result<f64> {
    check_all_positive("approx_fn", &[("x", x), ("tol", tol)])?;
    if n == 0 {
        return Err(domain("approx_fn", "n must be positive"));
    }
    let l = rep.lambda;
    let integ = Integrator::with_tol(tol);
    let integral = match rep.kernel_form {
        KernelForm::Measure => rep
            .measure_or_density
            .integrate(|t| thorin_term(l, n, x, t), 0.0, &integ)?,
        KernelForm::Density => {
            rep.measure_or_density
                .integrate(|t| thorin_term(l, n, x, t).map(|v| v * t.powf(l)), l, &integ)?
        }
    };
    Ok(rep.a * x.powf(l) + rep.b + integral)
}
