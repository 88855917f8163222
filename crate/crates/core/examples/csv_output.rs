//! Write a traced branch as a self-describing CSV and read it back.
//!
//! `cargo run --example csv_output`

use sakaguchi::consistency::trace_branch;
use sakaguchi::output::{parse_table, write_branch, Metadata};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alpha = 0.4;
    let curve = trace_branch(alpha, 3.0, 7)?;
    let meta = Metadata::new("branch").with("alpha", alpha).with("r_max", 3.0);
    let mut buf = Vec::new();
    write_branch(&mut buf, &meta, &curve.points)?;
    let text = String::from_utf8(buf)?;
    print!("{text}");

    let table = parse_table(&text)?;
    let mu = table.column("mu").ok_or("missing mu column")?;
    println!(
        "parsed {} rows; mu rises from {:.4} to {:.4}",
        table.rows.len(),
        mu[0],
        mu[mu.len() - 1]
    );
    Ok(())
}
