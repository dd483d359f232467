//! Census of simple tiles against `phi(d) C(n,s) (s-1)!`.

use wrps::tiles::{count_simple_tiles, enumerate_simple_tiles, simple_structure, simple_tile_census, DEFAULT_TILE_CAP};

fn main() -> wrps::Result<()> {
    for (n, tau, sigma) in [(3, 1, 1), (4, 2, 1), (4, 2, 2), (5, 2, 2), (4, 3, 3)] {
        let census = simple_tile_census(n, tau, sigma, DEFAULT_TILE_CAP)?;
        for (s, count) in census {
            println!("n={n} {tau}x{sigma} s={s}: {count} (formula {})", count_simple_tiles(n, tau, sigma, s)?);
        }
    }
    let t = enumerate_simple_tiles(4, 2, 2, DEFAULT_TILE_CAP)?.find(|t| t.states().len() == 2).expect("exists");
    print!("\n{}", t.to_text());
    println!("{:?}", simple_structure(&t)?);
    Ok(())
}
