//! The ratio g_λ(x) = x^λ Γ(x)/Γ(x+λ) and the densities and partial sums
//! attached to its Stieltjes representations.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::special::{digamma_difference, log_gamma_ratio, log_gamma_ratio_scaled, BERNOULLI_EVEN};

/// Compensated (Neumaier) summation.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub(crate) fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

fn check_pos(op: &'static str, name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(domain(op, format!("{name} must be positive, got {v}")))
    }
}

/// g_λ(x) = x^λ Γ(x) / Γ(λ + x).
pub fn g_lambda(lambda: f64, x: f64) -> Result<f64> {
    Ok((-log_g_neg(lambda, x)?).exp())
}

/// −ln g_λ(x).
pub fn log_g_neg(lambda: f64, x: f64) -> Result<f64> {
    check_pos("g_lambda", "lambda", lambda)?;
    check_pos("g_lambda", "x", x)?;
    log_gamma_ratio_scaled(x, lambda)
}

/// u − ln(1 + u).
fn u_minus_log1p(u: f64) -> f64 {
    if u.abs() < 0.1 {
        let mut acc = Neumaier::default();
        let mut pow = u * u;
        for k in 2..40 {
            let term = pow / k as f64;
            acc.add(if k % 2 == 0 { term } else { -term });
            if term.abs() < 1e-18 * acc.value().abs() {
                break;
            }
            pow *= u;
        }
        acc.value()
    } else {
        u - u.ln_1p()
    }
}

/// σ_λ(x) = λ/x + ψ(x) − ψ(x + λ).
pub fn sigma_lambda(lambda: f64, x: f64) -> Result<f64> {
    check_pos("sigma_lambda", "lambda", lambda)?;
    check_pos("sigma_lambda", "x", x)?;
    if x < 10.0 {
        return Ok(lambda / x - digamma_difference(x, lambda)?);
    }
    let xa = x + lambda;
    let mut s = u_minus_log1p(lambda / x) - lambda / (2.0 * x * xa);
    let (i2a, i2) = (1.0 / (xa * xa), 1.0 / (x * x));
    let (mut pa, mut p) = (i2a, i2);
    for (k, b) in BERNOULLI_EVEN.iter().take(8).enumerate() {
        s += b / (2.0 * (k as f64 + 1.0)) * (pa - p);
        pa *= i2a;
        p *= i2;
    }
    Ok(s)
}

/// g′_λ(x) = g_λ(x) σ_λ(x).
pub fn g_lambda_derivative(lambda: f64, x: f64) -> Result<f64> {
    Ok(g_lambda(lambda, x)? * sigma_lambda(lambda, x)?)
}

/// x^{2−λ} g′_λ(x) = x σ_λ(x) Γ(x+1)/Γ(x+λ).
pub fn weighted_derivative(lambda: f64, x: f64) -> Result<f64> {
    let ratio = (-log_gamma_ratio(x + 1.0, lambda - 1.0)?).exp();
    Ok(x * sigma_lambda(lambda, x)? * ratio)
}

/// B_n(1) − B_n(1 − λ) for n = 0..=13.
fn bernoulli_differences(lambda: f64) -> [f64; 14] {
    // B_0..B_13 with B_1 = −1/2
    let mut b = [0.0; 14];
    b[0] = 1.0;
    b[1] = -0.5;
    for k in 1..=6 {
        b[2 * k] = BERNOULLI_EVEN[k - 1];
    }
    let poly = |n: usize, x: f64| -> f64 {
        let mut binom = 1.0;
        let mut acc = 0.0;
        for (k, bk) in b.iter().enumerate().take(n + 1) {
            acc += binom * bk * x.powi((n - k) as i32);
            binom = binom * (n - k) as f64 / (k + 1) as f64;
        }
        acc
    };
    let mut d = [0.0; 14];
    for (n, slot) in d.iter_mut().enumerate() {
        *slot = poly(n, 1.0) - poly(n, 1.0 - lambda);
    }
    d
}

const SERIES_SWITCH: f64 = 0.1;

/// Φ(u) = (1 − e^{−λu})/(1 − e^{−u}) − λ.
pub fn phi_u(lambda: f64, u: f64) -> Result<f64> {
    check_pos("phi_u", "lambda", lambda)?;
    if !(u > 0.0) {
        return Err(domain("phi_u", format!("u must be positive, got {u}")));
    }
    if u.is_infinite() {
        return Ok(1.0 - lambda);
    }
    if u < SERIES_SWITCH {
        let d = bernoulli_differences(lambda);
        let mut acc = 0.0;
        let mut fact = 1.0;
        let mut pow = 1.0;
        for (n, dn) in d.iter().enumerate().skip(1) {
            fact *= n as f64;
            if n >= 2 {
                pow *= u;
                acc += dn * pow / fact;
            }
        }
        return Ok(acc);
    }
    Ok((-lambda * u).exp_m1() / (-u).exp_m1() - lambda)
}

/// Ξ(t) = −t^{−2} d/dt[(1 − e^{−λt})/(1 − e^{−t})].
pub fn xi_function(lambda: f64, t: f64) -> Result<f64> {
    check_pos("xi_function", "lambda", lambda)?;
    check_pos("xi_function", "t", t)?;
    if t < SERIES_SWITCH {
        let d = bernoulli_differences(lambda);
        let mut acc = 0.0;
        let mut fact = 1.0;
        let mut pow = 1.0;
        for (n, dn) in d.iter().enumerate().skip(1) {
            fact *= n as f64;
            if n >= 2 {
                acc += dn * (n as f64 - 1.0) * pow / fact;
                pow *= t;
            }
        }
        return Ok(-acc / (t * t));
    }
    let num = -(-lambda * t).exp_m1();
    let den = -(-t).exp_m1();
    Ok((num * (-t).exp() - lambda * (-lambda * t).exp() * den) / (t * t * den * den))
}

fn check_unit(op: &'static str, name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(domain(op, format!("{name} must lie in (0,1), got {v}")))
    }
}

fn check_xi(op: &'static str, xi: f64) -> Result<()> {
    if xi >= 0.0 && xi.is_finite() {
        Ok(())
    } else {
        Err(domain(op, format!("argument must be finite and >= 0, got {xi}")))
    }
}

/// The 1-periodic density (1 − λ)ξ on [0, λ), λ(1 − ξ) on [λ, 1).
pub fn phi_periodic(lambda: f64, xi: f64) -> Result<f64> {
    check_unit("phi_periodic", "lambda", lambda)?;
    check_xi("phi_periodic", xi)?;
    let frac = xi - xi.floor();
    Ok(if frac < lambda {
        (1.0 - lambda) * frac
    } else {
        lambda * (1.0 - frac)
    })
}

/// Σ_{k≤ξ} ((ξ−k)^σ − χ(ξ ≥ k+λ)(ξ−k−λ)^σ), the finite sum shared by the
/// σ-densities.
fn paired_power_sum(lambda: f64, sigma: f64, xi: f64) -> f64 {
    let mut acc = Neumaier::default();
    let kmax = xi.floor() as u64;
    for k in 0..=kmax {
        let d = xi - k as f64;
        let mut term = d.powf(sigma);
        let e = d - lambda;
        if e >= 0.0 {
            term -= e.powf(sigma);
        }
        acc.add(term);
    }
    acc.value()
}

/// φ_σ(ξ) = Σ_k (χ(ξ≥k)(ξ−k)^σ − χ(ξ≥k+λ)(ξ−k−λ)^σ) − λξ^σ for λ ∈ (0,1).
pub fn phi_sigma(lambda: f64, sigma: f64, xi: f64) -> Result<f64> {
    check_unit("phi_sigma", "lambda", lambda)?;
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(domain("phi_sigma", format!("sigma must lie in (0,1], got {sigma}")));
    }
    check_xi("phi_sigma", xi)?;
    if xi == 0.0 {
        return Ok(0.0);
    }
    Ok(paired_power_sum(lambda, sigma, xi) - lambda * xi.powf(sigma))
}

/// φ(ξ) = λξ^σ − Σ_k (χ(ξ≥k)(ξ−k)^σ − χ(ξ≥k+λ)(ξ−k−λ)^σ) for λ > 1.
pub fn varphi_neg(lambda: f64, sigma: f64, xi: f64) -> Result<f64> {
    if !(lambda > 1.0 && lambda.is_finite()) {
        return Err(domain("varphi_neg", format!("lambda must exceed 1, got {lambda}")));
    }
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(domain("varphi_neg", format!("sigma must lie in (0,1], got {sigma}")));
    }
    check_xi("varphi_neg", xi)?;
    if xi == 0.0 {
        return Ok(0.0);
    }
    if xi > 1e9 {
        return Err(Error::Overflow { op: "varphi_neg" });
    }
    let mut acc = Neumaier::default();
    acc.add(lambda * xi.powf(sigma));
    acc.add(-paired_power_sum(lambda, sigma, xi));
    Ok(acc.value())
}

/// λ = N + α with N a non-negative integer and α ∈ [0, 1).
pub fn split_lambda(lambda: f64) -> (u32, f64) {
    let n = lambda.floor();
    (n as u32, lambda - n)
}

/// S_n(N) = (N+α)(n+α)^σ − Σ_{k=0}^{n} (k+α)^σ + Σ_{k=0}^{n−N} k^σ.
pub fn s_n_partial(big_n: u32, alpha: f64, sigma: f64, n: u64) -> Result<f64> {
    check_unit("s_n_partial", "alpha", alpha)?;
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(domain("s_n_partial", format!("sigma must lie in (0,1], got {sigma}")));
    }
    if n < big_n as u64 {
        return Err(domain("s_n_partial", format!("n = {n} must be at least N = {big_n}")));
    }
    if n > 1_000_000_000 {
        return Err(Error::Overflow { op: "s_n_partial" });
    }
    let mut acc = Neumaier::default();
    acc.add((big_n as f64 + alpha) * (n as f64 + alpha).powf(sigma));
    // pair (k+α)^σ with (k−N)^σ so the running sum stays small
    for k in 0..=n {
        let mut term = -(k as f64 + alpha).powf(sigma);
        if k >= big_n as u64 {
            term += ((k - big_n as u64) as f64).powf(sigma);
        }
        acc.add(term);
    }
    Ok(acc.value())
}

/// Limit estimate for S_n as n → ∞.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SnLimit {
    pub n: u64,
    pub s_n: f64,
    pub s_n_tenth: f64,
    pub extrapolated: f64,
}

/// Estimates lim S_n from S_n and S_{n/10}, eliminating the leading
/// n^{σ−1} error term.
pub fn s_n_limit(big_n: u32, alpha: f64, sigma: f64, n: u64) -> Result<SnLimit> {
    let tenth = n / 10;
    if tenth < big_n as u64 || tenth == 0 {
        return Err(domain("s_n_limit", format!("n = {n} too small for N = {big_n}")));
    }
    let s_n = s_n_partial(big_n, alpha, sigma, n)?;
    let s_n_tenth = s_n_partial(big_n, alpha, sigma, tenth)?;
    let extrapolated = if sigma == 1.0 {
        s_n
    } else {
        let ratio = (n as f64 / tenth as f64).powf(sigma - 1.0);
        (s_n - ratio * s_n_tenth) / (1.0 - ratio)
    };
    Ok(SnLimit {
        n,
        s_n,
        s_n_tenth,
        extrapolated,
    })
}

fn check_gt_one(op: &'static str, lambda: f64) -> Result<()> {
    if lambda > 1.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(domain(op, format!("lambda must exceed 1, got {lambda}")))
    }
}

fn pos(v: f64) -> f64 {
    v.max(0.0)
}

/// φ(s) = Σ_k (k (s−k)_+ − (k+λ)(s−k−λ)_+), the density of Ξ.
pub fn xsigma_density(lambda: f64, s: f64) -> Result<f64> {
    check_gt_one("xsigma_density", lambda)?;
    check_xi("xsigma_density", s)?;
    let mut acc = Neumaier::default();
    for k in 0..=(s.floor() as u64) {
        let kf = k as f64;
        acc.add(kf * pos(s - kf) - (kf + lambda) * pos(s - kf - lambda));
    }
    Ok(acc.value())
}

/// φ₁(s) = Σ_k ((s−k)_+ − (s−k−λ)_+) − λ(s+1−λ)_+, so that φ(s+1) = φ(s) + φ₁(s).
pub fn xsigma_phi1(lambda: f64, s: f64) -> Result<f64> {
    check_gt_one("xsigma_phi1", lambda)?;
    check_xi("xsigma_phi1", s)?;
    let mut acc = Neumaier::default();
    for k in 0..=(s.floor() as u64) {
        let kf = k as f64;
        acc.add(pos(s - kf) - pos(s - kf - lambda));
    }
    acc.add(-lambda * pos(s + 1.0 - lambda));
    Ok(acc.value())
}

/// φ₂(s) = s + 1 + (λ−1)(s+1−λ)_+ − λ(s+2−λ)_+, so that φ₁(s+1) = φ₁(s) + φ₂(s).
pub fn xsigma_phi2(lambda: f64, s: f64) -> Result<f64> {
    check_gt_one("xsigma_phi2", lambda)?;
    check_xi("xsigma_phi2", s)?;
    Ok(s + 1.0 + (lambda - 1.0) * pos(s + 1.0 - lambda) - lambda * pos(s + 2.0 - lambda))
}

/// Closed forms for integer λ = N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegerForms {
    pub g_n: f64,
    pub neg_log_g_n: f64,
    pub sigma_n: f64,
    pub x_sigma_n: f64,
    pub deriv_weighted: f64,
}

/// g_N, −ln g_N, σ_N, xσ_N and x^{2−N} g′_N from their product and sum forms.
pub fn g_integer_closed_forms(big_n: u32, x: f64) -> Result<IntegerForms> {
    if big_n < 2 {
        return Err(domain("g_integer_closed_forms", format!("N must be >= 2, got {big_n}")));
    }
    check_pos("g_integer_closed_forms", "x", x)?;
    let mut g = 1.0;
    let mut neg_log = 0.0;
    let mut sigma = 0.0;
    let mut x_sigma = 0.0;
    let mut inv_prod = 1.0;
    for k in 1..big_n {
        let k = k as f64;
        g *= x / (x + k);
        neg_log += (k / x).ln_1p();
        sigma += k / (x * (x + k));
        x_sigma += k / (x + k);
        inv_prod /= x + k;
    }
    Ok(IntegerForms {
        g_n: g,
        neg_log_g_n: neg_log,
        sigma_n: sigma,
        x_sigma_n: x_sigma,
        deriv_weighted: inv_prod * x_sigma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_semi_infinite;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn g_lambda_examples() {
        for &x in &[0.01, 1.0, 37.0, 1e5] {
            assert!((g_lambda(1.0, x).unwrap() - 1.0).abs() < 1e-14);
        }
        assert!((g_lambda(2.0, 3.0).unwrap() - 0.75).abs() < 1e-14);
        // 1/Γ(3/2) = 2/√π
        let want = 2.0 / std::f64::consts::PI.sqrt();
        assert!(rel(g_lambda(0.5, 1.0).unwrap(), want) < 1e-13);
    }

    #[test]
    fn sigma_examples() {
        assert!(sigma_lambda(1.0, 0.7).unwrap().abs() < 1e-14);
        assert!(sigma_lambda(1.0, 70.0).unwrap().abs() < 1e-17);
        assert!((sigma_lambda(2.0, 1.0).unwrap() - 0.5).abs() < 1e-14);
        for &x in &[2.0, 9.99, 10.01, 500.0] {
            let f = g_integer_closed_forms(3, x).unwrap();
            assert!(rel(sigma_lambda(3.0, x).unwrap(), f.sigma_n) < 1e-11, "x={x}");
        }
    }

    #[test]
    fn sigma_laplace_representation() {
        let (l, x) = (1.5, 2.0);
        let r = integrate_semi_infinite(|t| (-x * t).exp() * (-phi_u(l, t).unwrap()), 0.0, 1e-13).unwrap();
        let s = sigma_lambda(l, x).unwrap();
        assert!(s > 0.0);
        assert!((r.value - s).abs() < 1e-11);
    }

    #[test]
    fn derivative_examples() {
        assert!(g_lambda_derivative(1.0, 5.0).unwrap().abs() < 1e-15);
        assert!((g_lambda_derivative(2.0, 3.0).unwrap() - 0.0625).abs() < 1e-14);
        assert!(g_lambda_derivative(0.5, 1.0).unwrap() < 0.0);
        for &(l, x) in &[(0.5, 0.3), (2.5, 4.0), (1.7, 40.0)] {
            let h = 1e-5 * x;
            let fd = (g_lambda(l, x + h).unwrap() - g_lambda(l, x - h).unwrap()) / (2.0 * h);
            assert!(rel(g_lambda_derivative(l, x).unwrap(), fd) < 1e-6);
        }
    }

    #[test]
    fn weighted_derivative_matches_integer_form() {
        for &x in &[0.05, 1.0, 12.0] {
            let f = g_integer_closed_forms(4, x).unwrap();
            assert!(rel(weighted_derivative(4.0, x).unwrap(), f.deriv_weighted) < 1e-11);
        }
    }

    #[test]
    fn phi_u_limits_and_series_switch() {
        assert!(phi_u(0.3, 1e-12).unwrap().abs() < 1e-12);
        assert_eq!(phi_u(0.3, f64::INFINITY).unwrap(), 0.7);
        assert!((phi_u(0.3, 200.0).unwrap() - 0.7).abs() < 1e-12);
        // 40-digit reference values on both sides of the series switch
        let table = [
            (
                0.25,
                [
                    0.004_706_846_883_536_056_2,
                    0.009_451_640_151_978_028_6,
                    0.019_050_466_791_352_900,
                ],
            ),
            (
                0.5,
                [
                    0.006_249_674_499_510_432_1,
                    0.012_497_396_484_210_343_7,
                    0.024_979_187_478_939_986,
                ],
            ),
            (
                0.9,
                [
                    0.002_234_958_608_275_945_6,
                    0.004_439_675_263_278_142_7,
                    0.008_757_505_124_929_314_1,
                ],
            ),
        ];
        for (l, want) in table {
            for (u, w) in [0.05, 0.1, 0.2].into_iter().zip(want) {
                assert!(rel(phi_u(l, u).unwrap(), w) < 1e-13, "l={l} u={u}");
            }
        }
    }

    #[test]
    fn phi_u_is_log_derivative_kernel() {
        // −(ln g_λ)′(x) = ∫ e^{−xu} Φ(u) du
        let (l, x) = (0.5, 2.0);
        let r = integrate_semi_infinite(|u| (-x * u).exp() * phi_u(l, u).unwrap(), 0.0, 1e-13).unwrap();
        let h = 1e-4;
        let fd = (log_g_neg(l, x + h).unwrap() - log_g_neg(l, x - h).unwrap()) / (2.0 * h);
        assert!((r.value - fd).abs() < 1e-8);
        assert!((r.value + sigma_lambda(l, x).unwrap()).abs() < 1e-11);
    }

    #[test]
    fn xi_examples() {
        assert!(xi_function(2.0, 10.0).unwrap() > 0.0);
        for &t in &[1e-3f64, 0.05, 0.0999, 0.1, 1.0, 10.0] {
            let want = (-t).exp() / (t * t);
            assert!(rel(xi_function(2.0, t).unwrap(), want) < 1e-12, "t={t}");
        }
    }

    #[test]
    fn xi_is_laplace_transform_of_density() {
        let (l, t) = (1.5, 1.0);
        let r = integrate_semi_infinite(|s| (-t * s).exp() * xsigma_density(l, s).unwrap(), 0.0, 1e-11).unwrap();
        assert!((r.value - xi_function(l, t).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn periodic_density_examples() {
        assert_eq!(phi_periodic(0.25, 0.0).unwrap(), 0.0);
        assert!((phi_periodic(0.25, 0.125).unwrap() - 0.09375).abs() < 1e-15);
        assert!((phi_periodic(0.25, 3.6).unwrap() - 0.1).abs() < 1e-14);
        // agrees with the σ = 1 defining sum
        for &xi in &[0.1, 0.7, 3.6, 11.2] {
            let direct = phi_sigma(0.25, 1.0, xi).unwrap();
            assert!((direct - phi_periodic(0.25, xi).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn phi_sigma_signs() {
        assert_eq!(phi_sigma(0.5, 0.5, 0.0).unwrap(), 0.0);
        assert!(phi_sigma(0.5, 0.5, 1.0).unwrap() < 0.0);
        assert!(phi_sigma(0.5, 0.5, 0.5).unwrap() > 0.0);
    }

    #[test]
    fn varphi_neg_examples() {
        assert_eq!(varphi_neg(2.5, 0.5, 0.0).unwrap(), 0.0);
        for i in 0..=1000 {
            let xi = i as f64 / 100.0;
            assert!(varphi_neg(2.5, 1.0, xi).unwrap() >= -1e-12);
        }
        assert!(varphi_neg(1.5, 0.5, 200.5).unwrap() < 0.0);
    }

    #[test]
    fn s_n_matches_varphi() {
        for &(nn, a, s, n) in &[(1u32, 0.5, 0.5, 200u64), (2, 0.25, 0.75, 1000), (3, 0.75, 0.25, 57)] {
            let lhs = s_n_partial(nn, a, s, n).unwrap();
            let rhs = varphi_neg(nn as f64 + a, s, n as f64 + a).unwrap();
            assert!((lhs - rhs).abs() < 1e-10, "{lhs} vs {rhs}");
        }
        assert!(s_n_partial(3, 0.5, 0.5, 2).is_err());
    }

    #[test]
    fn xsigma_density_and_recurrences() {
        for &s in &[0.0, 0.5, 1.0] {
            assert_eq!(xsigma_density(1.5, s).unwrap(), 0.0);
        }
        for i in 0..400 {
            let s = i as f64 * 0.05;
            let l = 2.3;
            let lhs = xsigma_density(l, s + 1.0).unwrap();
            let rhs = xsigma_density(l, s).unwrap() + xsigma_phi1(l, s).unwrap();
            assert!((lhs - rhs).abs() < 1e-11);
            let lhs = xsigma_phi1(l, s + 1.0).unwrap();
            let rhs = xsigma_phi1(l, s).unwrap() + xsigma_phi2(l, s).unwrap();
            assert!((lhs - rhs).abs() < 1e-11);
        }
    }

    #[test]
    fn integer_closed_forms() {
        assert!((g_integer_closed_forms(2, 3.0).unwrap().g_n - 0.75).abs() < 1e-15);
        assert!((g_integer_closed_forms(3, 1.0).unwrap().g_n - 1.0 / 6.0).abs() < 1e-15);
        assert!((g_integer_closed_forms(2, 1.0).unwrap().x_sigma_n - 0.5).abs() < 1e-15);
        for n in 2..6u32 {
            for &x in &[0.1, 1.3, 25.0] {
                let f = g_integer_closed_forms(n, x).unwrap();
                let l = n as f64;
                assert!(rel(f.g_n, g_lambda(l, x).unwrap()) < 1e-10);
                assert!(rel(f.neg_log_g_n, log_g_neg(l, x).unwrap()) < 1e-10);
                assert!(rel(f.x_sigma_n, x * sigma_lambda(l, x).unwrap()) < 1e-10);
            }
        }
        assert!(g_integer_closed_forms(1, 1.0).is_err());
    }
}
