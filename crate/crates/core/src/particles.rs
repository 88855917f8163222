//! Euler–Maruyama simulation of `N` noisy Sakaguchi–Kuramoto oscillators
//!
//! ```text
//! dθ_i = (μ/N) Σ_j sin(θ_j - θ_i - α) dt + √(2D) dB_i,
//! ```
//!
//! with the sum over all `j` (self-interaction included). Because the coupling
//! has one harmonic, the sum collapses to the mean field
//! `Z = R e^{iΨ} = (1/N) Σ_j e^{iθ_j}`: the drift is `μ R sin(Ψ - θ_i - α)`,
//! so a step costs `O(N)`.
//!
//! Randomness comes from [`ChaCha8Rng`] seeded with a `u64`; the same seed and
//! parameters reproduce the trajectory bit for bit.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::avm::AvmDensity;
use crate::spectral::{least_squares_slope, unwrap_phase, wrap_angle};
use crate::{Error, Result};

/// Name of the generator, for output metadata.
pub const RNG_NAME: &str = "ChaCha8Rng (rand_chacha 0.9), StandardNormal (rand_distr 0.5)";

pub const DEFAULT_N: usize = 50_000;
pub const DEFAULT_BINS: usize = 64;

/// `(μ, α, D)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleParams {
    pub mu: f64,
    pub alpha: f64,
    pub d: f64,
}

impl ParticleParams {
    pub const fn new(mu: f64, alpha: f64) -> Self {
        Self { mu, alpha, d: 1.0 }
    }
}

#[derive(Debug, Clone)]
pub struct ParticleEnsemble {
    pub params: ParticleParams,
    pub t: f64,
    phases: Vec<f64>,
    // cos/sin of `phases`, refreshed whenever a phase changes
    cos: Vec<f64>,
    sin: Vec<f64>,
    rng: ChaCha8Rng,
    seed: u64,
    steps: u64,
}

impl ParticleEnsemble {
    /// `n` phases drawn uniformly from `[-π, π)` with the ensemble's own generator.
    pub fn new(params: ParticleParams, n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phases = (0..n).map(|_| rng.random_range(-PI..PI)).collect();
        Self::assemble(params, phases, rng, seed)
    }

    /// Given initial phases (wrapped on entry); `seed` drives the noise.
    pub fn from_phases(params: ParticleParams, phases: Vec<f64>, seed: u64) -> Self {
        let phases = phases.into_iter().map(wrap_angle).collect();
        Self::assemble(params, phases, ChaCha8Rng::seed_from_u64(seed), seed)
    }

    fn assemble(params: ParticleParams, phases: Vec<f64>, rng: ChaCha8Rng, seed: u64) -> Self {
        assert!(!phases.is_empty(), "ensemble needs at least one particle");
        let (sin, cos) = phases.iter().map(|p: &f64| p.sin_cos()).unzip();
        Self {
            params,
            t: 0.0,
            phases,
            cos,
            sin,
            rng,
            seed,
            steps: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// `Z = (1/N) Σ_j e^{iθ_j}`, summed in index order.
    pub fn mean_field(&self) -> Complex64 {
        let n = self.len() as f64;
        let (c, s) = self
            .cos
            .iter()
            .zip(&self.sin)
            .fold((0.0, 0.0), |(c, s), (a, b)| (c + a, s + b));
        Complex64::new(c / n, s / n)
    }

    /// `(R, Ψ)`.
    pub fn order_parameter(&self) -> (f64, f64) {
        let z = self.mean_field();
        (z.norm(), z.arg())
    }

    /// Interaction drift per particle via the mean field.
    pub fn drift(&self) -> Vec<f64> {
        let w = self.rotated_mean_field();
        self.cos
            .iter()
            .zip(&self.sin)
            .map(|(&c, &s)| self.params.mu * (w.im * c - w.re * s))
            .collect()
    }

    /// Interaction drift per particle from the pairwise sum, `O(N²)`.
    pub fn drift_pairwise(&self) -> Vec<f64> {
        let n = self.len() as f64;
        let ParticleParams { mu, alpha, .. } = self.params;
        self.phases
            .iter()
            .map(|&ti| mu / n * self.phases.iter().map(|&tj| (tj - ti - alpha).sin()).sum::<f64>())
            .collect()
    }

    // `Z e^{-iα}`: the drift is `μ Im(Z e^{-iα} e^{-iθ_i})`
    fn rotated_mean_field(&self) -> Complex64 {
        self.mean_field() * Complex64::from_polar(1.0, -self.params.alpha)
    }

    /// One Euler–Maruyama step.
    ///
    /// The cached `cos θ_i, sin θ_i` are advanced by rotating through the
    /// increment, which avoids a full `sin_cos` per particle, and recomputed
    /// from the phases every [`RESYNC_EVERY`] steps.
    pub fn em_step(&mut self, dt: f64) {
        assert!(dt > 0.0, "time step must be positive");
        let w = self.rotated_mean_field() * self.params.mu;
        let noise = (2.0 * self.params.d * dt).sqrt();
        for i in 0..self.phases.len() {
            let (c, s) = (self.cos[i], self.sin[i]);
            let drift = w.im * c - w.re * s;
            let xi: f64 = self.rng.sample(StandardNormal);
            let delta = drift * dt + noise * xi;
            self.phases[i] = wrap_step(self.phases[i] + delta);
            let (sd, cd) = small_sin_cos(delta);
            self.cos[i] = c * cd - s * sd;
            self.sin[i] = s * cd + c * sd;
        }
        self.steps += 1;
        if self.steps.is_multiple_of(RESYNC_EVERY) {
            self.resync();
        }
        self.t += dt;
    }

    fn resync(&mut self) {
        for ((p, c), s) in self.phases.iter().zip(&mut self.cos).zip(&mut self.sin) {
            (*s, *c) = p.sin_cos();
        }
    }
}

/// Steps between exact recomputations of the cached `cos θ_i, sin θ_i`.
pub const RESYNC_EVERY: u64 = 64;

/// `(sin x, cos x)`; Taylor polynomials (truncation below `1e-19` for `|x| <= 1/2`)
/// with a library fallback for larger arguments.
#[inline]
fn small_sin_cos(x: f64) -> (f64, f64) {
    if x.abs() > 0.5 {
        return x.sin_cos();
    }
    let x2 = x * x;
    let sin = x
        * (1.0
            - x2 / 6.0
                * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0 * (1.0 - x2 / 110.0 * (1.0 - x2 / 156.0))))));
    let cos = 1.0
        - x2 / 2.0
            * (1.0
                - x2 / 12.0
                    * (1.0
                        - x2 / 30.0 * (1.0 - x2 / 56.0 * (1.0 - x2 / 90.0 * (1.0 - x2 / 132.0 * (1.0 - x2 / 182.0))))));
    (sin, cos)
}

// increments are small, so one conditional shift almost always suffices
#[inline]
fn wrap_step(x: f64) -> f64 {
    let y = if x >= PI {
        x - 2.0 * PI
    } else if x < -PI {
        x + 2.0 * PI
    } else {
        x
    };
    if (-PI..PI).contains(&y) {
        y
    } else {
        wrap_angle(y)
    }
}

/// Phase histogram in the frame co-rotating with `Ψ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub counts: Vec<u64>,
    pub samples: u64,
}

impl Histogram {
    pub fn new(bins: usize) -> Self {
        assert!(bins >= 1, "need at least one bin");
        Self {
            counts: vec![0; bins],
            samples: 0,
        }
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn width(&self) -> f64 {
        2.0 * PI / self.bins() as f64
    }

    pub fn centers(&self) -> impl Iterator<Item = f64> + '_ {
        let w = self.width();
        (0..self.bins()).map(move |b| -PI + (b as f64 + 0.5) * w)
    }

    /// Add every phase relative to `psi`.
    pub fn accumulate(&mut self, phases: &[f64], psi: f64) {
        let bins = self.bins();
        let scale = bins as f64 / (2.0 * PI);
        for &p in phases {
            let x = wrap_angle(p - psi) + PI;
            let b = ((x * scale) as usize).min(bins - 1);
            self.counts[b] += 1;
        }
        self.samples += phases.len() as u64;
    }
}

/// Settings for [`simulate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    pub t_end: f64,
    pub dt: f64,
    pub observe_every: usize,
    /// Statistics and histogram only use `t >= transient`.
    pub transient: f64,
    pub bins: usize,
}

impl SimulationConfig {
    /// Defaults: `dt = 1e-3`, observe every 10 steps, transient `T/2`, 64 bins.
    pub fn new(t_end: f64) -> Self {
        Self {
            t_end,
            dt: 1e-3,
            observe_every: 10,
            transient: 0.5 * t_end,
            bins: DEFAULT_BINS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleRecord {
    pub t: f64,
    pub r: f64,
    pub psi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleDiagnostics {
    pub records: Vec<EnsembleRecord>,
    pub histogram: Histogram,
    pub transient: f64,
}

/// Number of batches used for the batch-means standard error.
pub const BATCHES: usize = 20;

impl EnsembleDiagnostics {
    fn stationary(&self) -> impl Iterator<Item = &EnsembleRecord> {
        self.records.iter().filter(move |r| r.t >= self.transient)
    }

    /// Time average of `R` after the transient.
    pub fn mean_r(&self) -> f64 {
        let v: Vec<f64> = self.stationary().map(|r| r.r).collect();
        v.iter().sum::<f64>() / v.len() as f64
    }

    /// Standard error of [`Self::mean_r`] from [`BATCHES`] batch means.
    pub fn standard_error_r(&self) -> f64 {
        let v: Vec<f64> = self.stationary().map(|r| r.r).collect();
        let size = v.len() / BATCHES;
        if size == 0 {
            return f64::NAN;
        }
        let means: Vec<f64> = v
            .chunks_exact(size)
            .take(BATCHES)
            .map(|c| c.iter().sum::<f64>() / size as f64)
            .collect();
        let m = means.iter().sum::<f64>() / BATCHES as f64;
        let var = means.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (BATCHES - 1) as f64;
        (var / BATCHES as f64).sqrt()
    }

    /// Slope of the unwrapped mean phase `Ψ(t)` after the transient.
    pub fn drift_rate(&self) -> Result<f64> {
        let (t, psi): (Vec<f64>, Vec<f64>) = self.stationary().map(|r| (r.t, r.psi)).unzip();
        if t.len() < 2 {
            return Err(Error::InvalidArgument("fewer than two stationary records".into()));
        }
        Ok(least_squares_slope(&t, &unwrap_phase(&psi)))
    }
}

/// Run the ensemble to `t_end`, recording `(t, R, Ψ)` and a co-rotating histogram.
pub fn simulate(ens: &mut ParticleEnsemble, cfg: SimulationConfig) -> Result<EnsembleDiagnostics> {
    if !(cfg.t_end > 0.0) || !(cfg.dt > 0.0) || cfg.observe_every == 0 || cfg.bins == 0 {
        return Err(Error::InvalidArgument(format!("invalid simulation settings {cfg:?}")));
    }
    let steps = (cfg.t_end / cfg.dt).ceil().max(1.0) as usize;
    let h = cfg.t_end / steps as f64;
    let t0 = ens.t;
    let mut diag = EnsembleDiagnostics {
        records: Vec::with_capacity(steps / cfg.observe_every + 2),
        histogram: Histogram::new(cfg.bins),
        transient: t0 + cfg.transient,
    };
    let observe = |ens: &ParticleEnsemble, diag: &mut EnsembleDiagnostics| {
        let (r, psi) = ens.order_parameter();
        diag.records.push(EnsembleRecord { t: ens.t, r, psi });
        if ens.t >= diag.transient {
            diag.histogram.accumulate(ens.phases(), psi);
        }
    };
    observe(ens, &mut diag);
    for i in 1..=steps {
        ens.em_step(h);
        ens.t = t0 + i as f64 * h;
        if i % cfg.observe_every == 0 || i == steps {
            observe(ens, &mut diag);
        }
    }
    Ok(diag)
}

/// Normalized histogram and its L¹ distance to a reference.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDensity {
    pub centers: Vec<f64>,
    pub density: Vec<f64>,
    pub l1_distance: f64,
}

/// Normalize the histogram and compare with `reference` at the bin centers.
///
/// With `Some(density)` the AvMPDF is rotated so that its mean phase sits at
/// zero, matching the co-rotating frame; `None` compares with the uniform density.
pub fn empirical_density(diag: &EnsembleDiagnostics, reference: Option<&AvmDensity>) -> Result<EmpiricalDensity> {
    let hist = &diag.histogram;
    if hist.samples == 0 {
        return Err(Error::EmptyHistogram);
    }
    let w = hist.width();
    let norm = hist.samples as f64 * w;
    let centers: Vec<f64> = hist.centers().collect();
    let density: Vec<f64> = hist.counts.iter().map(|&c| c as f64 / norm).collect();
    let reference_at = |x: f64| match reference {
        // ⟨e^{iφ}⟩ = 2π conj(ρ̂_1), so the mean phase is -arg ρ̂_1
        Some(d) => d.pdf(x - d.fourier_coefficient(1).arg()),
        None => 1.0 / (2.0 * PI),
    };
    let l1_distance = centers
        .iter()
        .zip(&density)
        .map(|(&x, &h)| (h - reference_at(x)).abs())
        .sum::<f64>()
        * w;
    Ok(EmpiricalDensity {
        centers,
        density,
        l1_distance,
    })
}
