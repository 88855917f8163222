//! Small helpers for periodic grids and phase time series.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Derivative of a periodic function sampled on `m` uniform nodes over `[-π, π)`.
///
/// The Nyquist mode (even `m`) is dropped, as usual for odd derivatives.
pub fn spectral_derivative(samples: &[f64]) -> Vec<f64> {
    let m = samples.len();
    let mut planner = FftPlanner::new();
    let forward = planner.plan_fft_forward(m);
    let inverse = planner.plan_fft_inverse(m);
    let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    forward.process(&mut buf);
    for (j, c) in buf.iter_mut().enumerate() {
        let wavenumber = if 2 * j < m {
            j as f64
        } else if 2 * j == m {
            0.0
        } else {
            j as f64 - m as f64
        };
        *c *= Complex64::new(0.0, wavenumber);
    }
    inverse.process(&mut buf);
    buf.iter().map(|c| c.re / m as f64).collect()
}

/// Remove `2π` jumps from a sequence of wrapped phases.
pub fn unwrap_phase(wrapped: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(wrapped.len());
    let mut offset = 0.0;
    let mut prev: Option<f64> = None;
    for &p in wrapped {
        if let Some(q) = prev {
            let d = p - q;
            if d > PI {
                offset -= 2.0 * PI;
            } else if d < -PI {
                offset += 2.0 * PI;
            }
        }
        out.push(p + offset);
        prev = Some(p);
    }
    out
}

/// Least-squares slope of `y` against `x`.
pub fn least_squares_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (sxy, sxx) = x.iter().zip(y).fold((0.0, 0.0), |(sxy, sxx), (&a, &b)| {
        (sxy + (a - mx) * (b - my), sxx + (a - mx) * (a - mx))
    });
    sxy / sxx
}

/// Wrap an angle to `[-π, π)`.
#[inline]
pub fn wrap_angle(x: f64) -> f64 {
    (x + PI).rem_euclid(2.0 * PI) - PI
}
