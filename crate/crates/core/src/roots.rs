//! Bracketed scalar root finding for monotone problems.

use crate::{Error, Result};

/// Stopping rule for [`solve_bracketed`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Accept `x` once `|f(x)| <= f_abs`.
    pub f_abs: f64,
    /// Accept once the bracket is narrower than `x_rel * max(1, |x|)`.
    pub x_rel: f64,
    pub max_iterations: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            f_abs: 1e-13,
            x_rel: 4.0 * f64::EPSILON,
            max_iterations: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub f: f64,
    pub iterations: usize,
}

/// Find a sign change of `f` on `[lo, hi]`.
///
/// Secant (regula falsi with the Illinois modification) steps are used while
/// they shrink the bracket quickly; otherwise the step falls back to bisection.
pub fn solve_bracketed<F>(mut f: F, lo: f64, hi: f64, tol: Tolerance) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(Root {
            x: a,
            f: fa,
            iterations: 0,
        });
    }
    if fb == 0.0 {
        return Ok(Root {
            x: b,
            f: fb,
            iterations: 0,
        });
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket { lo: a, hi: b });
    }
    let mut side = 0i8;
    let mut best = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    for it in 1..=tol.max_iterations {
        let width = b - a;
        let mut x = (a * fb - b * fa) / (fb - fa);
        // keep secant steps strictly inside and away from the ends
        let guard = 0.01 * width;
        if !x.is_finite() || x <= a + guard || x >= b - guard {
            x = 0.5 * (a + b);
        }
        let fx = f(x)?;
        if fx.abs() < best.1.abs() {
            best = (x, fx);
        }
        if fx.abs() <= tol.f_abs {
            return Ok(Root {
                x,
                f: fx,
                iterations: it,
            });
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = x;
            fb = fx;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
        if b - a <= tol.x_rel * x.abs().max(1.0) {
            return Ok(Root {
                x: best.0,
                f: best.1,
                iterations: it,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: tol.max_iterations,
        last: best.0,
        residual: best.1.abs(),
    })
}

/// Double `hi` (starting above `lo`) until `f(lo)` and `f(hi)` differ in sign.
pub fn expand_upper<F>(mut f: F, lo: f64, mut hi: f64, max_doublings: usize) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let f_lo = f(lo)?;
    for _ in 0..max_doublings {
        let f_hi = f(hi)?;
        if f_hi.signum() != f_lo.signum() || f_hi == 0.0 {
            return Ok((lo, hi));
        }
        hi = lo + 2.0 * (hi - lo);
    }
    Err(Error::Bracket { lo, hi })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = solve_bracketed(|x| Ok(x * x - 2.0), 0.0, 3.0, Tolerance::default()).unwrap();
        assert!((r.x - 2f64.sqrt()).abs() < 1e-14);
        assert!(r.iterations < 40);
    }

    #[test]
    fn steep_monotone_function() {
        let r = solve_bracketed(|x| Ok((20.0 * x).exp() - 5.0), -1.0, 2.0, Tolerance::default()).unwrap();
        assert!((r.x - 5f64.ln() / 20.0).abs() < 1e-14);
    }

    #[test]
    fn reports_missing_bracket() {
        let err = solve_bracketed(|x| Ok(x * x + 1.0), -1.0, 1.0, Tolerance::default()).unwrap_err();
        assert_eq!(err, Error::Bracket { lo: -1.0, hi: 1.0 });
    }

    #[test]
    fn expands_until_sign_change() {
        let (lo, hi) = expand_upper(|x| Ok(x - 100.0), 0.0, 1.0, 20).unwrap();
        assert_eq!(lo, 0.0);
        assert!((100.0..=128.0).contains(&hi));
        assert!(expand_upper(|_| Ok(-1.0), 0.0, 1.0, 5).is_err());
    }
}
