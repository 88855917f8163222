//! Run the built-in numerical self-checks and print a pass/fail table.
//!
//! `cargo run --example verify_suite -- avm`

use sakaguchi::verify::{run_suite, Suite};

fn main() {
    let suite: Suite = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("suite is identities, avm, consistency or all"))
        .unwrap_or(Suite::All);
    let checks = run_suite(suite);
    for c in &checks {
        println!("{c}");
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    println!("{} checks, {failed} failed", checks.len());
    std::process::exit(i32::from(failed > 0));
}
