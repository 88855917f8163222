//! Independent references for the AvMPDF functionals.
//!
//! Nothing here goes through the Bessel tables or the power series of `C_0`:
//! `χ` comes from the variation-of-constants formula for the periodic ODE,
//! Fourier functionals from the trapezoid rule, and the coefficients
//! `a_{k,p}` from their finite alternating sum or the `η`-integral.

use std::f64::consts::PI;

use super::AvmPoint;
use crate::quadrature::{circle_mean, integrate_converged, periodic_nodes, CompositeGauss};
use crate::{Error, Result};

/// `χ_{k,r}` on the `m_nodes` uniform nodes of [`periodic_nodes`], from
///
/// ```text
/// χ(φ) = e^{r cos φ} · k / (1 - e^{-2πk}) ∫_0^{2π} e^{-k s - r cos(φ - s)} ds,
/// ```
///
/// the unique periodic solution of `ψ' + kψ = k e^{-r cos φ}`, `χ = ψ e^{r cos φ}`.
/// The integral uses composite Gauss–Legendre. `k = 0` is rejected: the ODE
/// then fixes `χ` only up to a constant.
pub fn avm_chi_ode_oracle(point: AvmPoint, m_nodes: usize) -> Result<Vec<f64>> {
    let AvmPoint { k, r } = point;
    if m_nodes < 64 {
        return Err(Error::InvalidArgument(format!("need at least 64 nodes, got {m_nodes}")));
    }
    let denom = -(-2.0 * PI * k).exp_m1();
    if !(denom.abs() > 1e-300) || !denom.is_finite() {
        return Err(Error::Degenerate(format!("periodicity condition singular for k = {k}")));
    }
    let prefactor = k / denom;
    let panels = 16 + 4 * (r.abs() + k.abs()).ceil() as usize;
    let rule = CompositeGauss::new(20, panels);
    Ok(periodic_nodes(m_nodes)
        .map(|phi| {
            let integral = rule.integrate(0.0, 2.0 * PI, |s| (-k * s - r * (phi - s).cos()).exp());
            prefactor * integral * (r * phi.cos()).exp()
        })
        .collect())
}

/// `(C_n, S_n)` of samples on [`periodic_nodes`] by the trapezoid rule.
pub fn cs_from_samples(samples: &[f64], n: i64) -> (f64, f64) {
    let m = samples.len();
    let (mut cs, mut ss) = (0.0, 0.0);
    for (phi, &v) in periodic_nodes(m).zip(samples) {
        let (s, co) = (n as f64 * phi).sin_cos();
        cs += co * v;
        ss += s * v;
    }
    (cs / m as f64, ss / m as f64)
}

/// Samples of `χ_{k,r}` that avoid the Bessel tables entirely: the ODE
/// oracle for `k ≠ 0`, and `I_0(r) e^{r cos φ}` with `I_0` by quadrature for `k = 0`.
pub fn chi_reference_samples(point: AvmPoint, m_nodes: usize) -> Result<Vec<f64>> {
    if point.k == 0.0 {
        let r = point.r;
        let i0 = circle_mean(|p| (r * p.cos()).exp(), m_nodes.max(2048));
        return Ok(periodic_nodes(m_nodes).map(|p| i0 * (r * p.cos()).exp()).collect());
    }
    avm_chi_ode_oracle(point, m_nodes)
}

/// `(C_0, C_1, S_1)` from [`chi_reference_samples`] and the trapezoid rule.
pub fn functionals_by_quadrature(point: AvmPoint, m_nodes: usize) -> Result<(f64, f64, f64)> {
    let chi = chi_reference_samples(point, m_nodes)?;
    let (c0, _) = cs_from_samples(&chi, 0);
    let (c1, s1) = cs_from_samples(&chi, 1);
    Ok((c0, c1, s1))
}

fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `a_{k,p} = (1/(p!)²) Σ_{n=-p}^{p} (-1)^{n+1} n²/(n²+k²) C(2p, p+n)`.
pub fn avm_akp_alternating(k: f64, p: usize) -> f64 {
    if p == 0 {
        return 1.0;
    }
    let p64 = p as i64;
    let sum: f64 = (-p64..=p64)
        .filter(|&n| n != 0)
        .map(|n| {
            let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
            let n2 = (n * n) as f64;
            sign * n2 / (n2 + k * k) * binomial(2 * p as u64, (p64 + n) as u64)
        })
        .sum();
    let fact: f64 = (1..=p).map(|j| j as f64).product();
    sum / (fact * fact)
}

/// `η_{p,0}(k)` and, for `p >= 1`, `σ_{p,0}(k)` by quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaSigma {
    pub eta: f64,
    pub sigma: Option<f64>,
    pub error_estimate: f64,
}

/// ```text
/// η_{p,0}(k) = ∫_{-π}^{π} cos^{2p}(θ/2) cosh(kθ) dθ
/// σ_{p,0}(k) = ∫_{-π}^{π} cos^{2p-1}(θ/2) sin(θ/2) sinh(kθ) dθ
/// ```
pub fn avm_eta_sigma(k: f64, p: usize) -> Result<EtaSigma> {
    let tol = 1e-14;
    let eta = integrate_converged(-PI, PI, |t| (0.5 * t).cos().powi(2 * p as i32) * (k * t).cosh(), tol)?;
    let sigma = if p >= 1 {
        Some(integrate_converged(
            -PI,
            PI,
            |t| (0.5 * t).cos().powi(2 * p as i32 - 1) * (0.5 * t).sin() * (k * t).sinh(),
            tol,
        )?)
    } else {
        None
    };
    Ok(EtaSigma {
        eta: eta.value,
        sigma: sigma.map(|s| s.value),
        error_estimate: eta.error_estimate.max(sigma.map_or(0.0, |s| s.error_estimate)),
    })
}

/// `2 sinh(kπ) / k`, continuous at `k = 0`.
fn two_sinh_over_k(k: f64) -> f64 {
    if k == 0.0 {
        2.0 * PI
    } else {
        2.0 * (k * PI).sinh() / k
    }
}

/// `η_{p,0}(k) = (2p)! / (4^p Π_{n=1}^p (n² + k²)) · 2 sinh(kπ)/k`.
pub fn eta_closed_form(k: f64, p: usize) -> f64 {
    let ratio = (1..=p).fold(1.0, |acc, n| {
        let n = n as f64;
        acc * (2.0 * n) * (2.0 * n - 1.0) / (4.0 * (n * n + k * k))
    });
    ratio * two_sinh_over_k(k)
}

/// `a_{k,p} = 2^{2p-1} k η_{p,0}(k) / ((p!)² sinh(kπ))` with `η` by quadrature.
pub fn avm_akp_from_eta(k: f64, p: usize) -> Result<f64> {
    let eta = avm_eta_sigma(k, p)?.eta;
    // 2^{2p} / (p!)^2 accumulated as a product to stay in range
    let scale = (1..=p).fold(1.0, |acc, j| acc * 4.0 / (j * j) as f64);
    Ok(scale * eta / two_sinh_over_k(k))
}
