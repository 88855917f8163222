//! The symmetric case `α = 0`: stationary von Mises states above `μ = 2`.
//!
//! `cargo run --example kuramoto_vonmises`

use sakaguchi::consistency::stationary_vonmises;

fn main() -> sakaguchi::Result<()> {
    println!("{:>6} {:>14} {:>14}", "mu", "r", "order param");
    for mu in [1.5, 2.0, 2.2, 2.5, 3.0, 4.0, 6.0, 10.0] {
        match stationary_vonmises(mu)? {
            Some(s) => println!("{mu:6.2} {:14.10} {:14.10}", s.r, s.r / mu),
            None => println!("{mu:6.2} {:>14} {:>14}", "incoherent", "0"),
        }
    }
    Ok(())
}
