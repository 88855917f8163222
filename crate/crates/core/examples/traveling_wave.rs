//! Solve for the coherent traveling wave at a given coupling and frustration.
//!
//! `cargo run --example traveling_wave -- 3.0 0.5235987755982988`

use sakaguchi::consistency::{bifurcation_point, solve_selfconsistency};

fn main() -> sakaguchi::Result<()> {
    let mut args = std::env::args()
        .skip(1)
        .map(|a| a.parse::<f64>().expect("numeric argument"));
    let mu = args.next().unwrap_or(3.0);
    let alpha = args.next().unwrap_or(std::f64::consts::FRAC_PI_6);

    let (mu_alpha, k_onset) = bifurcation_point(alpha)?;
    println!("onset at mu = {mu_alpha:.6} with speed tan(alpha) = {k_onset:.6}");
    match solve_selfconsistency(mu, alpha)? {
        None => println!("mu = {mu}: only the incoherent state exists"),
        Some(p) => {
            println!("mu = {mu}: wave speed k = {:.12}", p.k);
            println!(
                "          amplitude r = {:.12}, order parameter r/mu = {:.12}",
                p.r,
                p.order_parameter()
            );
            println!("          flux constant c = {:.12}, residual = {:e}", p.c, p.residual);
        }
    }
    Ok(())
}
