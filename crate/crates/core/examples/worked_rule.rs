//! The 3-state rule 102222210 and its period (3, 6) solution.

use wrps::labelgraph::find_wrps;
use wrps::rules::parse_rule;
use wrps::tiles::{check_rank_conjecture, tile_stats};

fn main() -> wrps::Result<()> {
    let rule = parse_rule("102222210", 3)?;
    for tau in 1..=3 {
        for rec in find_wrps(&rule, tau, 6)? {
            let st = tile_stats(&rec.tile);
            let check = check_rank_conjecture(&rec.tile);
            println!("tau={} sigma={} p={} s={} lag={} rank={}", tau, rec.tile.sigma(), st.p, st.s, st.lag, st.rank);
            print!("{}", rec.tile.to_text());
            println!("rank bound {} holds: {}\n", check.bound, check.holds);
        }
    }
    Ok(())
}
