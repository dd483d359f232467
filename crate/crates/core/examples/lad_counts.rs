//! Exhaustive LAD counts against `n^(tau(n-2)) (n^tau - (n-1)^tau)`.

use wrps::decidability::{count_d_exhaustive, DEFAULT_LAD_CAP};

fn main() -> wrps::Result<()> {
    println!("{:>2} {:>3} {:>8} {:>10} {:>8}", "n", "tau", "count", "total", "formula");
    for (n, tau) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (4, 1), (4, 2), (5, 1)] {
        let c = count_d_exhaustive(n, tau, DEFAULT_LAD_CAP)?;
        println!("{:>2} {:>3} {:>8} {:>10} {:>8}", n, tau, c.count, c.total, c.formula);
    }
    Ok(())
}
