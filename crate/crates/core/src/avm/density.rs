use std::f64::consts::PI;

use num_complex::Complex64;

use super::{avm_functionals, AvmPoint};
use crate::bessel::{default_order, BesselEvaluator};
use crate::quadrature::periodic_nodes;
use crate::spectral::spectral_derivative;

/// The normalized density `ρ_{k,r} = χ_{k,r} / (2π C_0)` with its Bessel table.
///
/// `ψ = χ e^{-r cos φ}` has Fourier coefficients
/// `ψ̂_m = (-1)^m I_m(r) k (k - i m) / (k² + m²)` (with `ψ̂_0 = I_0(r)`), and
/// `χ̂_n = Σ_m ψ̂_m I_{n-m}(r)` follows from the Jacobi–Anger expansion of
/// `e^{r cos φ}`. The table is immutable after construction.
#[derive(Debug, Clone)]
pub struct AvmDensity {
    point: AvmPoint,
    c0: f64,
    /// `ψ̂_m` for `m = 0..=order`.
    psi_hat: Vec<Complex64>,
    bessel: BesselEvaluator,
}

fn psi_weight(k: f64, m: i64) -> Complex64 {
    if m == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let m = m as f64;
    Complex64::new(k * k, -k * m) / (k * k + m * m)
}

/// Build the density at `point`. `r` beyond roughly 300 overflows `C_0`.
pub fn avm_density(point: AvmPoint) -> AvmDensity {
    let order = default_order(point.r);
    // twice the truncation order covers every I_{n-m} with |n|, |m| <= order
    let bessel =
        crate::bessel::bessel_i_range(2 * order, point.r).expect("Bessel table overflow: |r| too large for the AvMPDF");
    let psi_hat = (0..=order as i64)
        .map(|m| {
            let parity = if m % 2 == 0 { 1.0 } else { -1.0 };
            psi_weight(point.k, m) * (parity * bessel.get(m))
        })
        .collect();
    AvmDensity {
        point,
        c0: avm_functionals(point).c0,
        psi_hat,
        bessel,
    }
}

impl AvmDensity {
    pub fn point(&self) -> AvmPoint {
        self.point
    }

    /// `C_0(k, r)` from the power series.
    pub fn c0(&self) -> f64 {
        self.c0
    }

    /// `2π C_0`.
    pub fn normalization(&self) -> f64 {
        2.0 * PI * self.c0
    }

    /// The flux constant `c = k / (2π C_0)` of the traveling-wave equation.
    pub fn flux_constant(&self) -> f64 {
        self.point.k / self.normalization()
    }

    fn order(&self) -> i64 {
        self.psi_hat.len() as i64 - 1
    }

    fn psi_hat(&self, m: i64) -> Complex64 {
        match self.psi_hat.get(m.unsigned_abs() as usize) {
            Some(c) if m >= 0 => *c,
            Some(c) => c.conj(),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// `ψ(φ) = χ(φ) e^{-r cos φ}`.
    pub fn psi(&self, phi: f64) -> f64 {
        let mut sum = self.psi_hat[0].re;
        for (m, c) in self.psi_hat.iter().enumerate().skip(1) {
            let (s, co) = (m as f64 * phi).sin_cos();
            // 2 Re(ψ̂_m e^{imφ})
            sum += 2.0 * (c.re * co - c.im * s);
        }
        sum
    }

    /// `χ_{k,r}(φ)`.
    pub fn chi(&self, phi: f64) -> f64 {
        self.psi(phi) * (self.point.r * phi.cos()).exp()
    }

    /// `ρ_{k,r}(φ)`.
    pub fn pdf(&self, phi: f64) -> f64 {
        self.chi(phi) / self.normalization()
    }

    /// Fourier coefficient `χ̂_n = (1/2π) ∫ χ e^{-inφ}`.
    pub fn chi_coefficient(&self, n: i64) -> Complex64 {
        let order = self.order();
        (-order..=order).map(|m| self.psi_hat(m) * self.bessel.get(n - m)).sum()
    }

    /// `(C_n, S_n)`.
    pub fn cs(&self, n: i64) -> (f64, f64) {
        let c = self.chi_coefficient(n);
        (c.re, -c.im)
    }

    /// Fourier coefficient `ρ̂_n` of the normalized density.
    pub fn fourier_coefficient(&self, n: i64) -> Complex64 {
        self.chi_coefficient(n) / self.normalization()
    }

    /// `ρ` on the `m` uniform nodes of [`periodic_nodes`].
    pub fn sample(&self, m: usize) -> Vec<f64> {
        periodic_nodes(m).map(|p| self.pdf(p)).collect()
    }

    /// Largest `|ρ' + (r sin φ + k) ρ - c|` over `m` nodes, with `ρ'` by
    /// spectral differentiation and `c = k / (2π C_0)`.
    pub fn traveling_wave_residual(&self, m: usize) -> f64 {
        let AvmPoint { k, r } = self.point;
        let rho = self.sample(m);
        let drho = spectral_derivative(&rho);
        let c = self.flux_constant();
        periodic_nodes(m)
            .zip(rho.iter().zip(&drho))
            .map(|(p, (&v, &dv))| (dv + (r * p.sin() + k) * v - c).abs())
            .fold(0.0, f64::max)
    }
}

/// `χ_{k,r}(φ)`.
pub fn avm_chi(point: AvmPoint, phi: f64) -> f64 {
    avm_density(point).chi(phi)
}

/// `(C_n, S_n)` at `point` from the Bessel expansion.
pub fn avm_cs_n(point: AvmPoint, n: i64) -> (f64, f64) {
    avm_density(point).cs(n)
}
