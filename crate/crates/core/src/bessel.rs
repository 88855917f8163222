//! Modified Bessel functions of the first kind, `I_n(r)`, for integer `n`
//! and real `r`.
//!
//! Two evaluation routes are used:
//!
//! * `|r| <= 30`: direct power series
//!   `I_n(r) = Σ_p (r/2)^{n+2p} / (p! (n+p)!)`, summed in double-double
//!   arithmetic. All terms are positive, so the only error is the final
//!   rounding; the unrounded pair is available through
//!   [`bessel_i_compensated`] and [`BesselEvaluator::compensated`].
//! * `|r| > 30`: backward (Miller) recurrence normalized with the
//!   generating-function identity `Σ_{n∈ℤ} I_n(r) = e^r`.
//!
//! Negative orders and arguments are folded with `I_{-n} = I_n` and
//! `I_n(-r) = (-1)^n I_n(r)`.

use twofloat::TwoFloat;

use crate::{Error, Result};

/// Largest `|r|` handled by the power series.
pub const SERIES_LIMIT: f64 = 30.0;

/// Truncation order that makes `I_n(r) / I_0(r) < 1e-16` for `n > default_order(r)`.
pub fn default_order(r: f64) -> usize {
    let a = r.abs();
    let n = (a + 12.0 * a.sqrt() + 12.0).ceil() as usize;
    n.max(20)
}

fn check_argument(r: f64) -> Result<()> {
    if r.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "Bessel argument must be finite, got {r}"
        )))
    }
}

fn parity_sign(n: i64, r: f64) -> f64 {
    if r < 0.0 && n.rem_euclid(2) == 1 {
        -1.0
    } else {
        1.0
    }
}

/// `I_n(x)` for `x >= 0`, `n >= 0` by power series in double-double.
fn series_dd(n: usize, x: f64) -> TwoFloat {
    if x == 0.0 {
        return if n == 0 {
            TwoFloat::from(1.0)
        } else {
            TwoFloat::from(0.0)
        };
    }
    let half = TwoFloat::from(x) / 2.0;
    let mut term = TwoFloat::from(1.0);
    for j in 1..=n {
        term = term * half / (j as f64);
        if term.hi() == 0.0 {
            return TwoFloat::from(0.0);
        }
    }
    let q = half * half;
    let mut sum = term;
    let mut p = 1usize;
    loop {
        term = term * q / ((p * (n + p)) as f64);
        sum += term;
        if term.hi() <= 1e-34 * sum.hi() {
            break;
        }
        p += 1;
    }
    sum
}

/// Scaled values `e^{-x} I_j(x)` for `j = 0..=n_max`, `x > 0`, by Miller's algorithm.
fn miller_scaled(n_max: usize, x: f64) -> Vec<f64> {
    let start = n_max.max(default_order(x)) + 32;
    let mut out = vec![0.0; n_max + 1];
    let two_over_x = 2.0 / x;
    let mut above = 0.0_f64; // I_{j+1}
    let mut current = 1e-280_f64; // I_j
    let mut sum = 0.0_f64;
    for j in (1..=start).rev() {
        if j <= n_max {
            out[j] = current;
        }
        sum += 2.0 * current;
        let below = above + (j as f64) * two_over_x * current;
        above = current;
        current = below;
        if current > 1e250 {
            let s = 1e-250;
            current *= s;
            above *= s;
            sum *= s;
            for v in out.iter_mut() {
                *v *= s;
            }
        }
    }
    out[0] = current;
    sum += current;
    for v in out.iter_mut() {
        *v /= sum;
    }
    out
}

fn unscale(scaled: f64, x: f64) -> Result<f64> {
    let half = (0.5 * x).exp();
    let v = scaled * half * half;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Range { what: "I_n", r: x })
    }
}

/// `I_n(r)` for any integer order and finite real argument.
pub fn bessel_i(n: i64, r: f64) -> Result<f64> {
    check_argument(r)?;
    let order = n.unsigned_abs() as usize;
    let x = r.abs();
    let v = if x <= SERIES_LIMIT {
        series_dd(order, x).hi()
    } else {
        unscale(miller_scaled(order, x)[order], x)?
    };
    Ok(parity_sign(n, r) * v)
}

/// `I_n(r) / I_0(r)`, finite for every finite `r` (no overflow at large `|r|`).
pub fn bessel_i_ratio(n: i64, r: f64) -> Result<f64> {
    check_argument(r)?;
    let order = n.unsigned_abs() as usize;
    let x = r.abs();
    let ratio = if x <= SERIES_LIMIT {
        (series_dd(order, x) / series_dd(0, x)).hi()
    } else {
        let scaled = miller_scaled(order, x);
        scaled[order] / scaled[0]
    };
    Ok(parity_sign(n, r) * ratio)
}

/// `I_n(r)` as an unevaluated double-double sum.
///
/// Only available on the power-series range `|r| <= 30`.
pub fn bessel_i_compensated(n: i64, r: f64) -> Result<TwoFloat> {
    check_argument(r)?;
    if r.abs() > SERIES_LIMIT {
        return Err(Error::InvalidArgument(format!(
            "compensated Bessel values need |r| <= {SERIES_LIMIT}, got {r}"
        )));
    }
    let v = series_dd(n.unsigned_abs() as usize, r.abs());
    Ok(v * parity_sign(n, r))
}

/// Table of `I_0(r), …, I_{n_max}(r)` at a fixed argument.
#[derive(Debug, Clone, PartialEq)]
pub struct BesselEvaluator {
    r: f64,
    values: Vec<f64>,
    // low-order parts of the double-double series; empty on the Miller route
    tails: Vec<f64>,
}

/// Evaluate all orders `0..=n_max` at `r`.
pub fn bessel_i_range(n_max: usize, r: f64) -> Result<BesselEvaluator> {
    check_argument(r)?;
    let x = r.abs();
    let (mut values, mut tails) = if x <= SERIES_LIMIT {
        (0..=n_max)
            .map(|n| {
                let v = series_dd(n, x);
                (v.hi(), v.lo())
            })
            .unzip()
    } else {
        let values = miller_scaled(n_max, x)
            .into_iter()
            .map(|s| unscale(s, x))
            .collect::<Result<Vec<_>>>()?;
        (values, Vec::new())
    };
    if r < 0.0 {
        for n in (1..=n_max).step_by(2) {
            values[n] = -values[n];
            if let Some(t) = tails.get_mut(n) {
                *t = -*t;
            }
        }
    }
    Ok(BesselEvaluator { r, values, tails })
}

impl BesselEvaluator {
    /// Table truncated at [`default_order`]`(r)`.
    pub fn with_default_order(r: f64) -> Result<Self> {
        bessel_i_range(default_order(r), r)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `I_n(r)` for any integer `n`; orders beyond the table are truncated to zero.
    pub fn get(&self, n: i64) -> f64 {
        self.values.get(n.unsigned_abs() as usize).copied().unwrap_or(0.0)
    }

    /// `I_n(r)` as a double-double pair. On the Miller route the low part is zero.
    pub fn compensated(&self, n: i64) -> TwoFloat {
        let idx = n.unsigned_abs() as usize;
        match (self.values.get(idx), self.tails.get(idx)) {
            (Some(&hi), Some(&lo)) => TwoFloat::new_add(hi, lo),
            (Some(&hi), None) => TwoFloat::from(hi),
            _ => TwoFloat::from(0.0),
        }
    }
}
