//! Trace the coherent branch from onset and print `(r, k, μ)` along it.
//!
//! `cargo run --example branch_tracing -- 1.0471975511965976 8`

use sakaguchi::consistency::trace_branch;

fn main() -> sakaguchi::Result<()> {
    let mut args = std::env::args()
        .skip(1)
        .map(|a| a.parse::<f64>().expect("numeric argument"));
    let alpha = args.next().unwrap_or(std::f64::consts::FRAC_PI_3);
    let r_max = args.next().unwrap_or(8.0);

    let curve = trace_branch(alpha, r_max, 17)?;
    println!("{:>8} {:>14} {:>14} {:>10}", "r", "k", "mu", "residual");
    for p in &curve.points {
        println!("{:8.3} {:14.10} {:14.10} {:10.1e}", p.r, p.k, p.mu, p.residual);
    }
    if let Some((i, e)) = curve.failure {
        println!("stopped at point {i}: {e}");
    }
    Ok(())
}
