//! Out-neighbours in the label digraph and which arcs decide.

use wrps::decidability::{decides, decides_by_simulation};
use wrps::labelgraph::{find_ps, out_neighbors, Label};
use wrps::rules::parse_rule;

fn main() -> wrps::Result<()> {
    let rule = parse_rule("102222210", 3)?;
    for word in ["022", "221", "012"] {
        let a = Label::parse(3, word)?;
        for b in out_neighbors(&rule, &a) {
            println!("{a} -> {b}  decides: {} (simulated: {})", decides(&rule, &a, &b), decides_by_simulation(&rule, &a, &b));
        }
    }
    println!();
    for rec in find_ps(&rule, 2, 4)? {
        let labels: Vec<String> = rec.labels.iter().map(|l| l.to_string()).collect();
        println!("cycle {}  deciding {:?}", labels.join(" -> "), rec.deciding);
    }
    Ok(())
}
