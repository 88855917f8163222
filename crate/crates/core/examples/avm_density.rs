//! The asymmetric von Mises density `ρ_{k,r}` and its Fourier functionals.
//!
//! `cargo run --example avm_density -- 1.0 2.0`

use std::f64::consts::PI;

use sakaguchi::avm::{avm_density, avm_functionals, AvmPoint};

fn main() {
    let mut args = std::env::args()
        .skip(1)
        .map(|a| a.parse::<f64>().expect("numeric argument"));
    let k = args.next().unwrap_or(1.0);
    let r = args.next().unwrap_or(2.0);
    let point = AvmPoint::new(k, r);

    let f = avm_functionals(point);
    println!("k = {k}, r = {r}");
    println!("  C0 = {:.12}  C1 = {:.12}  S1 = {:.12}", f.c0, f.c1, f.s1);
    println!("  cal C1 = {:.12}  cal S1 = {:.12}", f.cal_c1, f.cal_s1);
    println!("  cal T1 = {:.12}  cal R1 = {:.12}", f.cal_t1, f.cal_r1);

    let d = avm_density(point);
    println!("  flux constant c = {:.12}", d.flux_constant());
    println!("  traveling-wave residual = {:e}", d.traveling_wave_residual(1024));
    println!("profile:");
    for j in 0..16 {
        let phi = -PI + 2.0 * PI * j as f64 / 16.0;
        let bar = "#".repeat((d.pdf(phi) * 120.0) as usize);
        println!("  {phi:+.3} {:.5} {bar}", d.pdf(phi));
    }
}
