//! Spectral solution of the mean-field PDE on both sides of the onset.
//!
//! Below onset the perturbed uniform state decays; above it the solution
//! settles onto the traveling wave predicted by the self-consistency solver.
//!
//! `cargo run --example pde_transition`

use std::f64::consts::FRAC_PI_6;

use sakaguchi::avm::avm_density;
use sakaguchi::consistency::solve_selfconsistency;
use sakaguchi::meanfield::{
    aligned_l1_distance, evolve, linear_mode1_rate, wave_speed_estimate, Params, SpectralState,
};

fn main() -> sakaguchi::Result<()> {
    for mu in [2.0, 3.0] {
        let params = Params::new(mu, FRAC_PI_6);
        let initial = SpectralState::perturbed(params, 128, 0.05);
        let (diag, end) = evolve(&initial, 50.0, 1e-3, 100)?;
        let last = diag.last().expect("at least one record");
        println!("mu = {mu}: linear mode-1 rate {:+.6}", linear_mode1_rate(params));
        println!("  r0(50) = {:.6e}", last.r0);
        if let Some(p) = solve_selfconsistency(mu, FRAC_PI_6)? {
            let speed = wave_speed_estimate(&diag, 40.0, 50.0)?;
            println!("  measured speed {speed:.10}, predicted {:.10}", p.k);
            println!("  predicted r0 {:.10}", p.order_parameter());
            println!(
                "  L1 distance to the traveling wave {:.3e}",
                aligned_l1_distance(&end, &avm_density(p.point()))
            );
        }
    }
    Ok(())
}
