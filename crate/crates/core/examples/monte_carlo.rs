//! `n P(rule has a WRPS with periods in the set)` for growing `n`.

use wrps::experiments::{asymptotic_constant, exhaustive_probability, monte_carlo_probability, PeriodSet};
use wrps::rules::DEFAULT_RULE_CAP;
use wrps::stats::Z_99;

fn main() -> wrps::Result<()> {
    for set in ["1x1", "2x2", "1x2"] {
        let periods: PeriodSet = set.parse()?;
        match asymptotic_constant(&periods) {
            Ok(c) => println!("{periods}: constant {c}"),
            Err(e) => println!("{periods}: {e}"),
        }
        for n in [2, 3] {
            let e = exhaustive_probability(n, &periods, DEFAULT_RULE_CAP)?;
            println!("  n={n:<3} exact {}  nP {:.4}", e.exact().expect("exhaustive"), e.scaled(Z_99).0);
        }
        for n in [4, 6, 8] {
            let e = monte_carlo_probability(n, &periods, 20_000, 1 + n as u64)?;
            let (np, lo, hi) = e.scaled(Z_99);
            println!("  n={n:<3} nP {np:.4} [{lo:.4}, {hi:.4}]");
        }
    }
    Ok(())
}
