//! The self-consistency system for traveling waves and its bifurcation branch.
//!
//! A normalized AvMPDF `ρ_{k,r}` solves the traveling-wave equation for
//! coupling `μ` and frustration `α` exactly when
//!
//! ```text
//! ℛ_1(k, r) = 1/μ,    𝒯_1(k, r) = tan α.
//! ```
//!
//! For `α ∈ [0, π/2)` the second equation has a unique root `k = K_α(r) >= tan α`
//! for each `r` (since `k ↦ 𝒯_1(k, r)` is increasing), and `r ↦ μ(r) = 1/|ℛ_1(K_α(r), r)|`
//! increases from `μ_α = 2 sec α`. The system is therefore solved as two nested
//! scalar root problems. The case `α ∈ (π/2, π]` is mapped back by
//! `(μ, α, k) ↦ (-μ, π - α, -k)`.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;

use crate::avm::{avm_functionals, AvmFunctionals, AvmPoint};
use crate::bessel::bessel_i_ratio;
use crate::roots::{expand_upper, solve_bracketed, Tolerance};
use crate::{Error, Result};

/// Default upper end of `r` for branch tracing.
pub const DEFAULT_R_MAX: f64 = 30.0;

const HALF_PI_TOL: f64 = 1e-14;

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && (0.0..=PI).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "frustration α must lie in [0, π], got {alpha}"
        )))
    }
}

fn is_half_pi(alpha: f64) -> bool {
    (alpha - FRAC_PI_2).abs() < HALF_PI_TOL
}

/// One solution `(μ, α, k, r, c)` of the self-consistency system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchPoint {
    pub mu: f64,
    pub alpha: f64,
    pub k: f64,
    /// Branch representative `r >= 0`; `-r` is the mirrored solution.
    pub r: f64,
    /// Flux constant `c = k / (2π C_0(k, r))`.
    pub c: f64,
    /// `max(| |ℛ_1| - 1/|μ| |, |𝒯_1 - tan α|)`.
    pub residual: f64,
}

impl BranchPoint {
    pub fn point(&self) -> AvmPoint {
        AvmPoint::new(self.k, self.r)
    }

    /// Order parameter `r_0 = r / μ`.
    pub fn order_parameter(&self) -> f64 {
        self.r / self.mu.abs()
    }
}

/// Residual of the system in modulus form.
///
/// `ℛ_1` carries `sign(k)`, which vanishes on the symmetric branch `k = 0`;
/// comparing moduli keeps the `α ∈ {0, π}` cases meaningful.
pub fn residual(mu: f64, alpha: f64, f: &AvmFunctionals) -> f64 {
    let r1 = (f.modulus() - 1.0 / mu.abs()).abs();
    let t1 = (f.cal_t1 - alpha.tan()).abs();
    r1.max(t1)
}

/// Residual of the equivalent component form `𝒞_1 = cos α / μ`, `𝒮_1 = sin α / μ`.
pub fn component_residual(mu: f64, alpha: f64, f: &AvmFunctionals) -> f64 {
    (f.cal_c1 - alpha.cos() / mu)
        .abs()
        .max((f.cal_s1 - alpha.sin() / mu).abs())
}

/// The pitchfork point `(μ_α, k)` = `(2 sec α, tan α)`.
pub fn bifurcation_point(alpha: f64) -> Result<(f64, f64)> {
    check_alpha(alpha)?;
    if is_half_pi(alpha) {
        return Err(Error::Degenerate(
            "α = π/2: the incoherent state is the only solution for every μ".into(),
        ));
    }
    Ok((2.0 / alpha.cos(), alpha.tan()))
}

fn inner_tolerance(target: f64) -> Tolerance {
    Tolerance {
        f_abs: 1e-14 * target.abs().max(1.0),
        ..Tolerance::default()
    }
}

fn solve_k_counted(alpha: f64, r: f64) -> Result<(f64, usize)> {
    check_alpha(alpha)?;
    if alpha >= FRAC_PI_2 || is_half_pi(alpha) {
        return Err(Error::InvalidArgument(format!("need α ∈ [0, π/2), got {alpha}")));
    }
    let target = alpha.tan();
    if alpha == 0.0 {
        return Ok((0.0, 0));
    }
    if r == 0.0 {
        return Ok((target, 0));
    }
    let f = |k: f64| Ok(avm_functionals(AvmPoint::new(k, r)).cal_t1 - target);
    // 𝒯_1(k, r) < k, so a nonnegative value here is rounding at tiny r
    if f(target)? >= 0.0 {
        return Ok((target, 0));
    }
    let (lo, hi) = expand_upper(f, target, 2.0 * target + 1.0, 200)?;
    let root = solve_bracketed(f, lo, hi, inner_tolerance(target))?;
    Ok((root.x, root.iterations))
}

/// The unique `k` with `𝒯_1(k, r) = tan α`, for `α ∈ [0, π/2)`.
///
/// `r = 0` returns the onset value `tan α`.
pub fn solve_k_given_r(alpha: f64, r: f64) -> Result<f64> {
    solve_k_counted(alpha, r).map(|(k, _)| k)
}

/// Coupling `μ = 1/|ℛ_1(K_α(r), r)|` at which the branch passes through `r`.
pub fn mu_on_branch(alpha: f64, r: f64) -> Result<f64> {
    let k = solve_k_given_r(alpha, r)?;
    Ok(1.0 / avm_functionals(AvmPoint::new(k, r)).modulus())
}

fn assemble(alpha: f64, mu: f64, k: f64, r: f64) -> BranchPoint {
    let f = avm_functionals(AvmPoint::new(k, r));
    BranchPoint {
        mu,
        alpha,
        k,
        r,
        c: k / (2.0 * PI * f.c0),
        residual: residual(mu, alpha, &f),
    }
}

fn branch_point_counted(alpha: f64, r: f64) -> Result<(BranchPoint, usize)> {
    let (k, iterations) = solve_k_counted(alpha, r)?;
    let mu = 1.0 / avm_functionals(AvmPoint::new(k, r)).modulus();
    Ok((assemble(alpha, mu, k, r), iterations))
}

/// The branch point with amplitude `r >= 0` for `α ∈ [0, π/2)`.
pub fn branch_point_at(alpha: f64, r: f64) -> Result<BranchPoint> {
    branch_point_counted(alpha, r.abs()).map(|(p, _)| p)
}

/// Nontrivial solution at `(μ, α)`, or `None` when only the incoherent state exists.
pub fn solve_selfconsistency(mu: f64, alpha: f64) -> Result<Option<BranchPoint>> {
    check_alpha(alpha)?;
    if !mu.is_finite() {
        return Err(Error::InvalidArgument(format!("coupling must be finite, got {mu}")));
    }
    if is_half_pi(alpha) {
        return Ok(None);
    }
    if alpha > FRAC_PI_2 {
        return Ok(solve_selfconsistency(-mu, PI - alpha)?.map(|p| {
            let mirrored = assemble(alpha, mu, -p.k, p.r);
            BranchPoint {
                residual: mirrored.residual,
                ..mirrored
            }
        }));
    }
    let (mu_alpha, _) = bifurcation_point(alpha)?;
    if mu <= mu_alpha {
        return Ok(None);
    }
    let target = 1.0 / mu;
    let g = |r: f64| {
        let k = solve_k_given_r(alpha, r)?;
        Ok(avm_functionals(AvmPoint::new(k, r)).modulus() - target)
    };
    let (lo, hi) = expand_upper(g, 0.0, 1.0, 60)?;
    let root = solve_bracketed(
        g,
        lo,
        hi,
        Tolerance {
            f_abs: 1e-15,
            ..Tolerance::default()
        },
    )?;
    let r = root.x;
    let k = solve_k_given_r(alpha, r)?;
    Ok(Some(assemble(alpha, mu, k, r)))
}

/// A sampled branch `Γ_α` with its solver metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchCurve {
    pub alpha: f64,
    /// Points in order of increasing `r`, starting at the onset `r = 0`.
    pub points: Vec<BranchPoint>,
    pub r_step: f64,
    /// Inner root-finder iterations per point.
    pub iterations: Vec<usize>,
    /// Index and cause of the first point that failed, if any.
    pub failure: Option<(usize, Error)>,
}

/// Sample the branch on `n_points` equally spaced amplitudes in `[0, r_max]`.
///
/// Grid points are solved in parallel and assembled in grid order. On failure
/// the curve holds every point before the failing index.
pub fn trace_branch(alpha: f64, r_max: f64, n_points: usize) -> Result<BranchCurve> {
    check_alpha(alpha)?;
    if alpha >= FRAC_PI_2 || is_half_pi(alpha) {
        return Err(Error::InvalidArgument(format!(
            "branch tracing needs α ∈ [0, π/2), got {alpha}"
        )));
    }
    if !(r_max > 0.0) || n_points < 2 {
        return Err(Error::InvalidArgument(format!(
            "need r_max > 0 and at least two points, got r_max = {r_max}, n = {n_points}"
        )));
    }
    let r_step = r_max / (n_points - 1) as f64;
    let solved: Vec<Result<(BranchPoint, usize)>> = (0..n_points)
        .into_par_iter()
        .map(|i| {
            let r = if i + 1 == n_points { r_max } else { r_step * i as f64 };
            branch_point_counted(alpha, r)
        })
        .collect();
    let mut curve = BranchCurve {
        alpha,
        points: Vec::with_capacity(n_points),
        r_step,
        iterations: Vec::with_capacity(n_points),
        failure: None,
    };
    for (i, s) in solved.into_iter().enumerate() {
        match s {
            Ok((p, it)) => {
                curve.points.push(p);
                curve.iterations.push(it);
            }
            Err(e) => {
                curve.failure = Some((i, e));
                break;
            }
        }
    }
    Ok(curve)
}

/// Stationary coherent state of the symmetric model `α = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VonMisesState {
    pub mu: f64,
    pub r: f64,
}

impl VonMisesState {
    /// `e^{r cos θ} / (2π I_0(r))`, evaluated as `e^{r (cos θ - 1)} / (2π e^{-r} I_0(r))`.
    pub fn pdf(&self, theta: f64) -> f64 {
        let scaled_i0 = crate::quadrature::circle_mean(|p| (self.r * (p.cos() - 1.0)).exp(), 2048);
        (self.r * (theta.cos() - 1.0)).exp() / (2.0 * PI * scaled_i0)
    }
}

/// For `μ > 2`, the von Mises state with `I_1(r) / (r I_0(r)) = 1/μ`; `None` otherwise.
pub fn stationary_vonmises(mu: f64) -> Result<Option<VonMisesState>> {
    if !mu.is_finite() {
        return Err(Error::InvalidArgument(format!("coupling must be finite, got {mu}")));
    }
    if mu <= 2.0 {
        return Ok(None);
    }
    let target = 1.0 / mu;
    let h = |r: f64| {
        if r == 0.0 {
            Ok(0.5 - target)
        } else {
            Ok(bessel_i_ratio(1, r)? / r - target)
        }
    };
    let (lo, hi) = expand_upper(h, 0.0, 1.0, 60)?;
    let root = solve_bracketed(
        h,
        lo,
        hi,
        Tolerance {
            f_abs: 1e-16,
            ..Tolerance::default()
        },
    )?;
    Ok(Some(VonMisesState { mu, r: root.x }))
}
