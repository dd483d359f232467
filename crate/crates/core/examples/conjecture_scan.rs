//! Rank bound on every WRPS tile of every 3-state rule.

use wrps::experiments::{conjecture_scan, lag_stratified_expectation, ScanMode};

fn main() -> wrps::Result<()> {
    let s = conjecture_scan(3, 3, 3, ScanMode::Exhaustive)?;
    println!(
        "{} rules, {} tiles, {} in proved cases, {} counterexamples",
        s.rules,
        s.tiles_checked,
        s.proved_case_checked,
        s.counterexamples.len()
    );
    println!("\nlag and rank strata for (tau, sigma) = (2, 2), n = 3:");
    for row in lag_stratified_expectation(3, 2, 2, None, 0)? {
        println!("lag {} rank {}: {} rules ({:.5})", row.stratum.lag, row.stratum.rank, row.count, row.freq);
    }
    Ok(())
}
