//! Frontier speed behind a perturbation, and a blocked non-robust solution.

use wrps::dynamics::{blocking_perturbation, measure_velocity, Perturbation};
use wrps::labelgraph::find_ps;
use wrps::rules::{parse_rule, random_rule};

fn main() -> wrps::Result<()> {
    let rule = parse_rule("102222210", 3)?;
    let tile = wrps::tiles::Tile::from_rows(3, &[[0, 2, 2, 2, 1, 1], [2, 2, 1, 1, 0, 2], [1, 1, 0, 2, 2, 2]])?;
    for seed in 0..5 {
        let v = measure_velocity(&rule, &tile, &Perturbation::Uniform { seed }, 900)?;
        println!("seed {seed}: v_hat {:.4}, s_T = {}, bound {:?}", v.v_hat, v.final_frontier(), v.certified_bound);
    }
    let v = measure_velocity(&rule, &tile, &Perturbation::Uniform { seed: 0 }, 90)?;
    v.write_csv(std::io::stdout())?;

    // a periodic solution that some perturbation stops
    for seed in 0.. {
        let r = random_rule(3, seed)?;
        let Some(rec) = find_ps(&r, 2, 3)?.into_iter().find(|rec| !rec.is_deciding()) else { continue };
        let p = blocking_perturbation(&r, &rec.tile)?.expect("not weakly robust");
        let v = measure_velocity(&r, &rec.tile, &p, 600)?;
        println!("\nrule {r} tile {:?}: {p:?} leaves the frontier at {}", rec.tile.rows().collect::<Vec<_>>(), v.final_frontier());
        break;
    }
    Ok(())
}
