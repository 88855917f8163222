//! Modified Bessel functions `I_n(r)` and the identities they satisfy.
//!
//! `cargo run --example bessel_identities -- 10`

use sakaguchi::bessel::{bessel_i, BesselEvaluator};
use sakaguchi::verify::{alternating_square_sum_residual, jacobi_anger_residual};

fn main() -> sakaguchi::Result<()> {
    let r: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(5.0);
    let table = BesselEvaluator::with_default_order(r)?;
    println!("I_n({r}) for n = 0..=8:");
    for n in 0..=8 {
        println!("  n = {n}: {:.16e}", table.get(n));
    }
    println!(
        "sum (-1)^n I_n^2 - 1        = {:e}",
        alternating_square_sum_residual(&table)
    );
    println!("Jacobi-Anger max residual   = {:e}", jacobi_anger_residual(&table));
    println!("I_3(-r) = -I_3(r)           : {}", bessel_i(3, -r)? == -bessel_i(3, r)?);
    Ok(())
}
