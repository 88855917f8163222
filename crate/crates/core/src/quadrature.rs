//! Reference quadrature rules.
//!
//! These are the ground truth the series evaluations are tested against:
//! the uniform trapezoid rule for smooth periodic integrands (spectrally
//! accurate) and composite Gauss–Legendre for smooth non-periodic ones.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

use crate::{Error, Result};

/// Default node count for periodic integrands on the circle.
pub const DEFAULT_PERIODIC_NODES: usize = 2048;

/// Uniform nodes `-π + 2πj/m`, `j = 0..m`.
pub fn periodic_nodes(m: usize) -> impl Iterator<Item = f64> {
    let h = 2.0 * PI / m as f64;
    (0..m).map(move |j| -PI + h * j as f64)
}

/// Trapezoid rule for `∫_{-π}^{π} f` with `m` uniform nodes.
pub fn trapezoid_periodic<F: Fn(f64) -> f64>(f: F, m: usize) -> f64 {
    let h = 2.0 * PI / m as f64;
    periodic_nodes(m).map(f).sum::<f64>() * h
}

/// Circle average `(1/2π) ∫_{-π}^{π} f` with `m` uniform nodes.
pub fn circle_mean<F: Fn(f64) -> f64>(f: F, m: usize) -> f64 {
    periodic_nodes(m).map(f).sum::<f64>() / m as f64
}

/// `I_n(r) = (1/2π) ∫ cos(nφ) e^{r cos φ} dφ` by the trapezoid rule.
///
/// Reference oracle for [`crate::bessel::bessel_i`]; `m_nodes >= 16`.
pub fn bessel_quadrature_oracle(n: i64, r: f64, m_nodes: usize) -> f64 {
    assert!(m_nodes >= 16, "need at least 16 nodes, got {m_nodes}");
    circle_mean(|phi| (n as f64 * phi).cos() * (r * phi.cos()).exp(), m_nodes)
}

/// Composite Gauss–Legendre rule: `panels` equal subintervals, `degree` nodes each.
#[derive(Debug, Clone)]
pub struct CompositeGauss {
    rule: GaussLegendre,
    panels: usize,
}

impl CompositeGauss {
    pub fn new(degree: usize, panels: usize) -> Self {
        let degree = NonZeroUsize::new(degree).expect("Gauss degree must be positive");
        Self {
            rule: GaussLegendre::new(degree),
            panels: panels.max(1),
        }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let h = (b - a) / self.panels as f64;
        (0..self.panels)
            .map(|i| {
                let lo = a + h * i as f64;
                self.rule.integrate(lo, lo + h, &f)
            })
            .sum()
    }
}

/// Outcome of [`integrate_converged`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Converged {
    pub value: f64,
    pub error_estimate: f64,
    pub panels: usize,
}

/// Composite 20-point Gauss–Legendre with panel doubling until two successive
/// estimates agree to `rel_tol` (relative to `max(1, |value|)`).
pub fn integrate_converged<F: Fn(f64) -> f64>(a: f64, b: f64, f: F, rel_tol: f64) -> Result<Converged> {
    let mut panels = 4;
    let mut previous = CompositeGauss::new(20, panels).integrate(a, b, &f);
    let mut estimate = f64::INFINITY;
    while panels < 4096 {
        panels *= 2;
        let value = CompositeGauss::new(20, panels).integrate(a, b, &f);
        estimate = (value - previous).abs();
        if estimate <= rel_tol * value.abs().max(1.0) {
            return Ok(Converged {
                value,
                error_estimate: estimate,
                panels,
            });
        }
        previous = value;
    }
    Err(Error::Quadrature { estimate })
}
