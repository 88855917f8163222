//! Fourier–Galerkin solver for the McKean–Vlasov equation
//!
//! ```text
//! ∂_t ρ = D ∂_θ² ρ + μ ∂_θ (ρ ∂_θ (W ⋆ ρ)),    W(θ) = -cos(θ - α).
//! ```
//!
//! Convention: `ρ(θ) = Σ_n ρ̂_n e^{inθ}`, so `ρ̂_0 = 1/(2π)` for a probability
//! density and `⟨e^{iθ}⟩_ρ = 2π ρ̂_{-1}`. Only `n >= 0` is stored; negative
//! modes are conjugates.
//!
//! `W ⋆ ρ` has the single mode pair `(W⋆ρ)^_{±1} = -π e^{∓iα} ρ̂_{±1}`, so with
//! `g = ∂_θ (W ⋆ ρ)`, `ĝ_1 = -iπ e^{-iα} ρ̂_1`, the Galerkin system is
//!
//! ```text
//! dρ̂_n/dt = -D n² ρ̂_n + i μ n (ρ̂_{n-1} ĝ_1 + ρ̂_{n+1} ĝ_{-1}).
//! ```
//!
//! The linearization at the uniform state gives mode 1 the eigenvalue
//! `-D + (μ/2) e^{-iα}`: growth rate `(μ/2) cos α - D`, rotation speed `(μ/2) sin α`.
//! Time stepping is the integrating-factor (Lawson) RK4 scheme, which treats
//! diffusion exactly.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::avm::AvmDensity;
use crate::quadrature::periodic_nodes;
use crate::spectral::{least_squares_slope, unwrap_phase};
use crate::{Error, Result};

pub const DEFAULT_MODES: usize = 128;
pub const DEFAULT_DT: f64 = 1e-3;
pub const DEFAULT_T: f64 = 50.0;
/// Amplitude of the `cos θ` perturbation used to start transition runs.
pub const DEFAULT_EPSILON: f64 = 0.05;

const BLOW_UP: f64 = 1e6;
const UNDEFINED_PHASE: f64 = 1e-12;

/// Model parameters `(μ, α, D)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub mu: f64,
    pub alpha: f64,
    pub d: f64,
}

impl Params {
    /// Unit diffusion.
    pub const fn new(mu: f64, alpha: f64) -> Self {
        Self { mu, alpha, d: 1.0 }
    }
}

/// Truncated Fourier state `ρ̂_0, …, ρ̂_N` at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralState {
    pub params: Params,
    pub t: f64,
    coeffs: Vec<Complex64>,
}

const MEAN: f64 = 1.0 / (2.0 * PI);

impl SpectralState {
    /// The incoherent state `ρ ≡ 1/(2π)`.
    pub fn uniform(params: Params, n_modes: usize) -> Self {
        assert!(n_modes >= 1, "need at least one Fourier mode");
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n_modes + 1];
        coeffs[0] = Complex64::new(MEAN, 0.0);
        Self { params, t: 0.0, coeffs }
    }

    /// `1/(2π) + ε cos θ`.
    pub fn perturbed(params: Params, n_modes: usize, epsilon: f64) -> Self {
        let mut s = Self::uniform(params, n_modes);
        s.coeffs[1] = Complex64::new(0.5 * epsilon, 0.0);
        s
    }

    /// Coefficients `ρ̂_0..=ρ̂_N`; `ρ̂_0` is reset to `1/(2π)` and made real.
    pub fn from_coefficients(params: Params, mut coeffs: Vec<Complex64>) -> Self {
        assert!(coeffs.len() >= 2, "need at least one Fourier mode");
        coeffs[0] = Complex64::new(MEAN, 0.0);
        Self { params, t: 0.0, coeffs }
    }

    /// `θ ↦ ρ_{k,r}(θ - shift)`, truncated to `n_modes`.
    pub fn from_density(params: Params, n_modes: usize, density: &AvmDensity, shift: f64) -> Self {
        let coeffs = (0..=n_modes as i64)
            .map(|n| density.fourier_coefficient(n) * Complex64::from_polar(1.0, -(n as f64) * shift))
            .collect();
        Self::from_coefficients(params, coeffs)
    }

    pub fn n_modes(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `ρ̂_n` for any integer `n`, zero beyond the truncation.
    pub fn coefficient(&self, n: i64) -> Complex64 {
        match self.coeffs.get(n.unsigned_abs() as usize) {
            Some(c) if n >= 0 => *c,
            Some(c) => c.conj(),
            None => Complex64::new(0.0, 0.0),
        }
    }

    pub fn density(&self, theta: f64) -> f64 {
        let mut sum = self.coeffs[0].re;
        for (n, c) in self.coeffs.iter().enumerate().skip(1) {
            let (s, co) = (n as f64 * theta).sin_cos();
            sum += 2.0 * (c.re * co - c.im * s);
        }
        sum
    }

    /// `ρ` on the `m` nodes of [`periodic_nodes`].
    pub fn sample(&self, m: usize) -> Vec<f64> {
        periodic_nodes(m).map(|t| self.density(t)).collect()
    }

    /// Same state rotated by `angle`: `θ ↦ ρ(θ - angle)`.
    pub fn rotated(&self, angle: f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c * Complex64::from_polar(1.0, -(n as f64) * angle))
            .collect();
        Self { coeffs, ..self.clone() }
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.n_modes(), other.n_modes(), "mode counts differ");
    }

    /// `‖ρ - σ‖_{L²} = (2π Σ_n |ρ̂_n - σ̂_n|²)^{1/2}` by Parseval.
    pub fn l2_distance(&self, other: &Self) -> f64 {
        self.check_compatible(other);
        let sq: f64 = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .enumerate()
            .map(|(n, (a, b))| if n == 0 { 1.0 } else { 2.0 } * (a - b).norm_sqr())
            .sum();
        (2.0 * PI * sq).sqrt()
    }

    /// `max_n |ρ̂_n - σ̂_n|`.
    pub fn max_coefficient_distance(&self, other: &Self) -> f64 {
        self.check_compatible(other);
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// `∫ |f - g| dθ` for two densities sampled on `m` uniform nodes.
pub fn l1_distance_sampled(f: &[f64], g: &[f64]) -> f64 {
    assert_eq!(f.len(), g.len());
    let h = 2.0 * PI / f.len() as f64;
    f.iter().zip(g).map(|(a, b)| (a - b).abs()).sum::<f64>() * h
}

/// `∫ |ρ - ρ_ref| dθ` on a 2048-point grid.
pub fn l1_distance(state: &SpectralState, reference: impl Fn(f64) -> f64) -> f64 {
    let m = 2048;
    let reference: Vec<f64> = periodic_nodes(m).map(reference).collect();
    l1_distance_sampled(&state.sample(m), &reference)
}

/// L¹ distance to the AvMPDF rotated so that its mean phase matches the state's.
pub fn aligned_l1_distance(state: &SpectralState, density: &AvmDensity) -> f64 {
    let shift = density.fourier_coefficient(1).arg() - state.coefficient(1).arg();
    l1_distance(state, |t| density.pdf(t - shift))
}

/// `(r_0, ψ)` with `r_0 e^{iψ} = ⟨e^{iθ}⟩_ρ = 2π conj(ρ̂_1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderParameter {
    pub r0: f64,
    /// Set to `0` when `r0` is too small for the phase to be defined.
    pub psi: f64,
    pub phase_defined: bool,
}

pub fn order_parameter(state: &SpectralState) -> OrderParameter {
    let z = 2.0 * PI * state.coefficient(1).conj();
    let r0 = z.norm();
    let phase_defined = r0 > UNDEFINED_PHASE;
    OrderParameter {
        r0,
        psi: if phase_defined { z.arg() + 0.0 } else { 0.0 },
        phase_defined,
    }
}

/// Eigenvalue of mode 1 linearized at the uniform state.
pub fn linear_mode1_eigenvalue(params: Params) -> Complex64 {
    Complex64::new(-params.d, 0.0) + 0.5 * params.mu * Complex64::from_polar(1.0, -params.alpha)
}

/// Growth rate `(μ/2) cos α - D` of mode 1 at the uniform state.
pub fn linear_mode1_rate(params: Params) -> f64 {
    linear_mode1_eigenvalue(params).re
}

fn nonlinear(params: Params, u: &[Complex64], out: &mut [Complex64]) {
    let g1 = Complex64::new(0.0, -PI) * Complex64::from_polar(1.0, -params.alpha) * u[1];
    let gm1 = g1.conj();
    let last = u.len() - 1;
    out[0] = Complex64::new(0.0, 0.0);
    for n in 1..=last {
        let above = if n < last { u[n + 1] } else { Complex64::new(0.0, 0.0) };
        let coupling = u[n - 1] * g1 + above * gm1;
        out[n] = Complex64::new(0.0, params.mu * n as f64) * coupling;
    }
}

/// `dρ̂_n/dt` for `n = 0..=N`.
pub fn rhs(state: &SpectralState) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); state.coeffs.len()];
    nonlinear(state.params, &state.coeffs, &mut out);
    let d = state.params.d;
    for (n, (o, c)) in out.iter_mut().zip(&state.coeffs).enumerate() {
        *o -= d * (n * n) as f64 * c;
    }
    out
}

/// Integrating-factor RK4 stepper with cached exponentials for one `dt`.
#[derive(Debug, Clone)]
pub struct Stepper {
    dt: f64,
    full: Vec<f64>,
    half: Vec<f64>,
    scratch: [Vec<Complex64>; 5],
}

impl Stepper {
    pub fn new(params: Params, n_modes: usize, dt: f64) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidArgument(format!("time step must be positive, got {dt}")));
        }
        let decay = |n: usize, h: f64| (-params.d * (n * n) as f64 * h).exp();
        let zero = vec![Complex64::new(0.0, 0.0); n_modes + 1];
        Ok(Self {
            dt,
            full: (0..=n_modes).map(|n| decay(n, dt)).collect(),
            half: (0..=n_modes).map(|n| decay(n, 0.5 * dt)).collect(),
            scratch: [zero.clone(), zero.clone(), zero.clone(), zero.clone(), zero],
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Advance `state` by one step in place.
    pub fn step(&mut self, state: &mut SpectralState) -> Result<()> {
        assert_eq!(
            state.coeffs.len(),
            self.full.len(),
            "stepper built for a different truncation"
        );
        let p = state.params;
        let h = self.dt;
        let [k1, k2, k3, k4, tmp] = &mut self.scratch;
        let u = &state.coeffs;

        nonlinear(p, u, k1);
        for n in 0..u.len() {
            tmp[n] = self.half[n] * (u[n] + 0.5 * h * k1[n]);
        }
        nonlinear(p, tmp, k2);
        for n in 0..u.len() {
            tmp[n] = self.half[n] * u[n] + 0.5 * h * k2[n];
        }
        nonlinear(p, tmp, k3);
        for n in 0..u.len() {
            tmp[n] = self.full[n] * u[n] + h * self.half[n] * k3[n];
        }
        nonlinear(p, tmp, k4);

        let u = &mut state.coeffs;
        for n in 1..u.len() {
            u[n] =
                self.full[n] * u[n] + h / 6.0 * (self.full[n] * k1[n] + 2.0 * self.half[n] * (k2[n] + k3[n]) + k4[n]);
        }
        state.t += h;
        if u.iter().any(|c| !(c.norm() <= BLOW_UP)) {
            return Err(Error::Instability {
                t: state.t,
                suggested_dt: 0.5 * h,
            });
        }
        Ok(())
    }
}

/// One integrating-factor RK4 step of size `dt`.
pub fn step(state: &SpectralState, dt: f64) -> Result<SpectralState> {
    let mut next = state.clone();
    Stepper::new(state.params, state.n_modes(), dt)?.step(&mut next)?;
    Ok(next)
}

/// One diagnostics row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Record {
    pub t: f64,
    pub r0: f64,
    pub psi: f64,
    /// Phase slope since the previous row; `NaN` where undefined.
    pub speed_est: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    pub records: Vec<Record>,
}

impl Diagnostics {
    fn observe(&mut self, state: &SpectralState) {
        let op = order_parameter(state);
        let speed_est = match self.records.last() {
            Some(prev) if op.phase_defined && prev.r0 > UNDEFINED_PHASE => {
                let dpsi = crate::spectral::wrap_angle(op.psi - prev.psi);
                dpsi / (state.t - prev.t)
            }
            _ => f64::NAN,
        };
        self.records.push(Record {
            t: state.t,
            r0: op.r0,
            psi: op.psi,
            speed_est,
        });
    }

    pub fn last(&self) -> Option<&Record> {
        self.records.last()
    }
}

/// Integrate to time `t_end` (measured from `initial.t`), observing every
/// `observe_every` steps and at the end. The step is adjusted down so that
/// an integer number of steps lands exactly on `t_end`.
pub fn evolve(
    initial: &SpectralState,
    t_end: f64,
    dt: f64,
    observe_every: usize,
) -> Result<(Diagnostics, SpectralState)> {
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "final time must be positive, got {t_end}"
        )));
    }
    if observe_every == 0 {
        return Err(Error::InvalidArgument("observe_every must be at least 1".into()));
    }
    if !(dt > 0.0) {
        return Err(Error::InvalidArgument(format!("time step must be positive, got {dt}")));
    }
    let steps = (t_end / dt).ceil().max(1.0) as usize;
    let h = t_end / steps as f64;
    let mut stepper = Stepper::new(initial.params, initial.n_modes(), h)?;
    let mut state = initial.clone();
    let t0 = state.t;
    let mut diag = Diagnostics::default();
    diag.observe(&state);
    for i in 1..=steps {
        stepper.step(&mut state)?;
        // avoid drift in t from repeated addition
        state.t = t0 + i as f64 * h;
        if i % observe_every == 0 || i == steps {
            diag.observe(&state);
        }
    }
    Ok((diag, state))
}

/// Least-squares slope of the unwrapped phase over records with `t ∈ [t_start, t_end]`.
pub fn wave_speed_estimate(diag: &Diagnostics, t_start: f64, t_end: f64) -> Result<f64> {
    let window: Vec<&Record> = diag.records.iter().filter(|r| r.t >= t_start && r.t <= t_end).collect();
    if window.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "window [{t_start}, {t_end}] holds fewer than two records"
        )));
    }
    if window.iter().any(|r| r.r0 <= 1e-8) {
        return Err(Error::UndefinedSpeed);
    }
    let t: Vec<f64> = window.iter().map(|r| r.t).collect();
    let psi = unwrap_phase(&window.iter().map(|r| r.psi).collect::<Vec<_>>());
    Ok(least_squares_slope(&t, &psi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::avm::{avm_density, AvmPoint};
    use crate::quadrature::circle_mean;

    #[test]
    fn uniform_is_steady() {
        let s = SpectralState::uniform(Params::new(3.0, 0.4), 16);
        assert!(rhs(&s).iter().all(|c| c.norm() == 0.0));
        let next = step(&s, 0.1).unwrap();
        assert_eq!(next.coefficients(), s.coefficients());
        let op = order_parameter(&s);
        assert_eq!((op.r0, op.psi, op.phase_defined), (0.0, 0.0, false));
    }

    #[test]
    fn order_parameter_matches_quadrature() {
        let d = avm_density(AvmPoint::new(0.7, 2.0));
        let s = SpectralState::from_density(Params::new(3.0, 0.3), 64, &d, 0.9);
        let re = 2.0 * PI * circle_mean(|t| s.density(t) * t.cos(), 1024);
        let im = 2.0 * PI * circle_mean(|t| s.density(t) * t.sin(), 1024);
        let op = order_parameter(&s);
        assert!((op.r0 - re.hypot(im)).abs() < 1e-13);
        assert!((op.psi - im.atan2(re)).abs() < 1e-12);
    }

    #[test]
    fn diffusion_only_decay() {
        let p = Params {
            mu: 0.0,
            alpha: 0.0,
            d: 0.5,
        };
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 9];
        coeffs[3] = Complex64::new(0.01, 0.02);
        let s = SpectralState::from_coefficients(p, coeffs);
        let next = step(&s, 0.2).unwrap();
        let want = s.coefficient(3) * (-0.5 * 9.0 * 0.2f64).exp();
        assert!((next.coefficient(3) - want).norm() < 1e-16);
        assert_eq!(next.coefficient(0).re, MEAN);
    }

    #[test]
    fn linear_rate_closed_form() {
        assert_eq!(linear_mode1_rate(Params::new(2.0, 0.0)), 0.0);
        let e = linear_mode1_eigenvalue(Params::new(3.0, PI / 6.0));
        assert!((e.im + 0.75).abs() < 1e-15);
    }

    #[test]
    fn blow_up_is_reported() {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 5];
        coeffs[1] = Complex64::new(1e7, 0.0);
        let s = SpectralState::from_coefficients(Params::new(1.0, 0.0), coeffs);
        assert!(matches!(step(&s, 1e-3), Err(Error::Instability { .. })));
        assert!(step(&s, 0.0).is_err());
    }

    #[test]
    fn evolve_lands_on_final_time() {
        let s = SpectralState::perturbed(Params::new(1.0, 0.0), 8, 0.05);
        let (diag, end) = evolve(&s, 0.95, 0.1, 3).unwrap();
        assert_eq!(end.t, 0.95);
        assert_eq!(diag.last().unwrap().t, 0.95);
        assert_eq!(diag.records.len(), 1 + 3 + 1);
        assert!(wave_speed_estimate(&diag, 0.0, 1.0).unwrap().abs() < 1e-14);
    }

    #[test]
    fn rotation_and_distances() {
        let d = avm_density(AvmPoint::new(1.0, 1.5));
        let s = SpectralState::from_density(Params::new(3.0, 0.5), 48, &d, 0.0);
        let rot = s.rotated(0.8);
        assert!((rot.density(1.1) - s.density(0.3)).abs() < 1e-14);
        assert!(aligned_l1_distance(&rot, &d) < 1e-12);
        assert!(s.l2_distance(&s) == 0.0);
    }
}
