//! Mean-field analysis of noisy Sakaguchi–Kuramoto oscillators.
//!
//! The crate is organized bottom-up:
//!
//! * [`bessel`]: modified Bessel functions `I_n(r)` of integer order.
//! * [`quadrature`]: reference quadrature rules used as independent oracles.
//! * [`avm`]: the asymmetrically extended von Mises density `χ_{k,r}`, its
//!   Fourier functionals and power-series coefficients.
//! * [`consistency`]: the two-equation self-consistency system in `(k, r)`,
//!   the pitchfork point `2 sec α` and branch tracing.
//! * [`meanfield`]: Fourier–Galerkin integration of the nonlinear
//!   Fokker–Planck (McKean–Vlasov) equation.
//! * [`particles`]: Euler–Maruyama simulation of the finite-`N` Langevin system.
//! * [`output`] and [`verify`]: self-describing CSV output and the invariant
//!   checks exposed by the command-line tool.
//!
//! All angles are in radians and the noise strength defaults to `D = 1`.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod avm;
pub mod bessel;
pub mod consistency;
mod error;
pub mod meanfield;
pub mod output;
pub mod particles;
pub mod quadrature;
pub mod roots;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
