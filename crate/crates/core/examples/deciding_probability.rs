//! Exact deciding probability for simple labels, a Monte Carlo check, and
//! the conditional probability for a label with a repeated state.

use wrps::decidability::{decay_of_nonsimple_conditional, monte_carlo_deciding, p_decides_simple};
use wrps::labelgraph::Label;
use wrps::stats::Z_99;

fn main() -> wrps::Result<()> {
    for (n, tau) in [(3, 2), (4, 2), (5, 3)] {
        let p = p_decides_simple(n, tau)?;
        println!("n={n} tau={tau}: P = {}  given the arc: {}", p.joint, p.conditional);
    }
    let (a, b) = (Label::parse(4, "01")?, Label::parse(4, "23")?);
    let est = monte_carlo_deciding(4, &a, &b, 200_000, 5)?;
    let (lo, hi) = est.wilson(Z_99);
    println!("\nsampled at n=4: {:.5} in [{lo:.5}, {hi:.5}], exact {:.5}", est.estimate(), 7.0 / 256.0);

    let (a, b) = (Label::parse(4, "0102")?, Label::parse(4, "1111")?);
    println!("\nP(A => B | A -> B) for A = {a}, B = {b}");
    for row in decay_of_nonsimple_conditional(&[4, 6, 8, 12], &a, &b, 20_000, 5)? {
        println!("n={:<3} {:.4} [{:.4}, {:.4}]", row.n, row.estimate, row.ci_lo, row.ci_hi);
    }
    Ok(())
}
