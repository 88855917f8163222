//! The asymmetrically extended von Mises family.
//!
//! For real `k, r`, `χ_{k,r}` is the `2π`-periodic solution of
//!
//! ```text
//! χ'(φ) + (r sin φ + k) χ(φ) = k,
//! ```
//!
//! continued to `χ_{0,r} = I_0(r) e^{r cos φ}` and `χ_{k,0} ≡ 1`. Its
//! normalization `ρ_{k,r} = χ_{k,r} / (2π C_0)` is the traveling-wave profile
//! of the mean-field equation.
//!
//! Fourier functionals are
//!
//! ```text
//! C_n = (1/2π) ∫ cos(nφ) χ,   S_n = (1/2π) ∫ sin(nφ) χ,
//! 𝒞_n = C_n / (r C_0),        𝒮_n = -S_n / (r C_0),
//! 𝒯_n = 𝒮_n / 𝒞_n,            ℛ_n = sign(k) √(𝒞_n² + 𝒮_n²).
//! ```
//!
//! Two independent production routes exist:
//!
//! * [`avm_functionals`] uses the even power series
//!   `C_0 = 1 + Σ_{p≥1} a_{k,p} (r/2)^{2p}` together with `C_1 = ½ ∂_r C_0`
//!   and `S_1 = -(k/r)(C_0 - 1)`. Every term is positive, and the factor
//!   `r²` is divided out analytically so the `r → 0` limits are exact.
//! * [`AvmDensity`] evaluates `χ` and all `C_n, S_n` from the Bessel
//!   expansion of `χ e^{-r cos φ}` (a discrete convolution with `I_n(r)`).
//!
//! The [`oracle`] submodule holds the quadrature and ODE references.

mod density;
pub mod oracle;

pub use density::{avm_chi, avm_cs_n, avm_density, AvmDensity};

/// A point `(k, r)`: wave speed and rescaled order parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AvmPoint {
    pub k: f64,
    pub r: f64,
}

impl AvmPoint {
    pub const fn new(k: f64, r: f64) -> Self {
        Self { k, r }
    }
}

/// `C_0, C_1, S_1` and the normalized first-mode functionals at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AvmFunctionals {
    pub c0: f64,
    pub c1: f64,
    pub s1: f64,
    pub cal_c1: f64,
    pub cal_s1: f64,
    pub cal_t1: f64,
    pub cal_r1: f64,
}

impl AvmFunctionals {
    /// `√(𝒞_1² + 𝒮_1²)`, i.e. `|ℛ_1|` without the sign convention.
    pub fn modulus(&self) -> f64 {
        self.cal_c1.hypot(self.cal_s1)
    }
}

/// `sign(0) = 0`, matching the definition of `ℛ_n`.
pub(crate) fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `a_{k,p} = (2p)! / ((p!)² Π_{n=1}^p (n² + k²))`.
pub fn avm_akp(k: f64, p: usize) -> f64 {
    (1..=p).fold(1.0, |a, n| {
        let n = n as f64;
        a * (2.0 * n) * (2.0 * n - 1.0) / (n * n * (n * n + k * k))
    })
}

/// Ratio `a_{k,p} / a_{k,p-1}`.
fn akp_ratio(k: f64, p: usize) -> f64 {
    let p = p as f64;
    2.0 * p * (2.0 * p - 1.0) / (p * p * (p * p + k * k))
}

const RESCALE_ABOVE: f64 = 1e200;

/// Partial sums of the scaled series
/// `A = Σ_{p≥1} a_{k,p} r^{2p-2} / 4^p` and `B = Σ_{p≥1} p a_{k,p} r^{2p-2} / 4^p`,
/// so that `C_0 = 1 + r² A`, `C_1 = r B`, `S_1 = -k r A`.
#[derive(Debug, Clone, Copy)]
struct ScaledSums {
    a: f64,
    b: f64,
    /// All sums carry a factor `1e-200^rescales`.
    rescales: i32,
    last_term: f64,
    terms: usize,
}

impl ScaledSums {
    fn one(&self) -> f64 {
        (1.0 / RESCALE_ABOVE).powi(self.rescales)
    }

    fn rescaled_c0(&self, r: f64) -> f64 {
        self.one() + r * r * self.a
    }
}

/// Sum the scaled series; `p_max = None` runs until the tail is below `1e-17` of the sum.
fn scaled_sums(k: f64, r: f64, p_max: Option<usize>) -> ScaledSums {
    let x = 0.25 * r * r;
    let mut term = 0.25 * akp_ratio(k, 1);
    let mut s = ScaledSums {
        a: term,
        b: term,
        rescales: 0,
        last_term: term,
        terms: 1,
    };
    let limit = p_max.unwrap_or(usize::MAX);
    let mut p = 1usize;
    while p < limit {
        p += 1;
        let ratio = akp_ratio(k, p) * x;
        term *= ratio;
        s.a += term;
        s.b += p as f64 * term;
        s.last_term = term;
        s.terms = p;
        if p_max.is_none() && ratio < 0.5 && p as f64 * term <= 1e-17 * s.b {
            break;
        }
        if term > RESCALE_ABOVE {
            term /= RESCALE_ABOVE;
            s.a /= RESCALE_ABOVE;
            s.b /= RESCALE_ABOVE;
            s.last_term /= RESCALE_ABOVE;
            s.rescales += 1;
        }
        if term == 0.0 {
            break;
        }
    }
    s
}

/// First-mode functionals from the power series of `C_0`.
///
/// Valid for all real `(k, r)`, including the traces `r = 0` and `k = 0`:
/// `𝒞_1(k,0) = 1/(2(k²+1))`, `𝒮_1(k,0) = k/(2(k²+1))`, `𝒯_1(k,0) = k`.
/// The raw values `c0, c1, s1` overflow for `|r|` beyond a few hundred;
/// the normalized ones do not.
pub fn avm_functionals(point: AvmPoint) -> AvmFunctionals {
    let AvmPoint { k, r } = point;
    let s = scaled_sums(k, r, None);
    let c0_scaled = s.rescaled_c0(r);
    let cal_c1 = s.b / c0_scaled;
    let cal_s1 = k * s.a / c0_scaled;
    let unscale = RESCALE_ABOVE.powi(s.rescales);
    AvmFunctionals {
        c0: c0_scaled * unscale,
        c1: r * s.b * unscale,
        s1: 0.0 - k * r * s.a * unscale,
        cal_c1,
        cal_s1,
        cal_t1: k * (s.a / s.b),
        cal_r1: sign(k) * cal_c1.hypot(cal_s1),
    }
}

/// `C_0` from the truncated series `1 + Σ_{p=1}^{p_max} a_{k,p} (r/2)^{2p}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct C0Series {
    pub value: f64,
    /// Last retained term relative to the sum.
    pub last_relative_term: f64,
    /// `false` when the last retained term exceeds `1e-14` of the sum.
    pub converged: bool,
}

pub fn avm_c0_series(point: AvmPoint, p_max: usize) -> C0Series {
    let AvmPoint { k, r } = point;
    if r == 0.0 || p_max == 0 {
        return C0Series {
            value: 1.0,
            last_relative_term: 0.0,
            converged: true,
        };
    }
    let s = scaled_sums(k, r, Some(p_max));
    let unscale = RESCALE_ABOVE.powi(s.rescales);
    let value = s.rescaled_c0(r) * unscale;
    let last_relative_term = r * r * s.last_term * unscale / value;
    C0Series {
        value,
        last_relative_term,
        converged: last_relative_term <= 1e-14,
    }
}

/// Number of series terms [`avm_functionals`] uses at `(k, r)`.
pub fn series_terms(point: AvmPoint) -> usize {
    scaled_sums(point.k, point.r, None).terms
}
