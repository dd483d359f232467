//! Simple tiles: structure, closed-form counts and brute-force censuses.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use super::{is_simple, shift_between, validate_ps_tile, CircularShift, Tile};
use crate::arith::{binomial, factorial, gcd, phi};
use crate::error::{Error, Result};
use crate::rules::State;

/// Default cap on `n^(tau*sigma)` for exhaustive tile enumeration.
pub const DEFAULT_TILE_CAP: u64 = 10_000_000;

/// Row and column circular shifts of a simple tile and their common order `d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimpleStructure {
    /// Smallest `i >= 1` with row `i` a shift of row 0 (0 if none).
    pub row_step: usize,
    pub row_shift: CircularShift,
    pub col_step: usize,
    pub col_shift: CircularShift,
    pub d: usize,
}

fn first_shifted(lines: &[Vec<State>]) -> (usize, CircularShift) {
    let len = lines[0].len();
    (1..lines.len())
        .find_map(|k| shift_between(&lines[0], &lines[k]).map(|off| (k, CircularShift::new(off, len))))
        .unwrap_or((0, CircularShift::identity(len)))
}

/// Computes `pi_T^r`, `pi_T^c` and verifies `ord(pi_T^r) = ord(pi_T^c) = d`,
/// `d | gcd(tau, sigma)` and `s(T) = tau * sigma / d`.
pub fn simple_structure(tile: &Tile) -> Result<SimpleStructure> {
    let lag = tile.pairs().len() - tile.states().len();
    if lag != 0 {
        return Err(Error::NotSimple { lag });
    }
    let rows: Vec<Vec<State>> = tile.rows().map(<[State]>::to_vec).collect();
    let cols = tile.columns();
    let (row_step, row_shift) = first_shifted(&rows);
    let (col_step, col_shift) = first_shifted(&cols);
    for (lines, step, shift, what) in [(&rows, row_step, row_shift, "row"), (&cols, col_step, col_shift, "column")] {
        if step > 0 {
            let m = lines.len();
            if let Some(k) = (0..m).find(|&k| lines[(k + step) % m] != shift.apply(&lines[k])) {
                return Err(Error::Structure(format!("{what} {} is not the shift of {what} {k}", (k + step) % m)));
            }
        }
    }
    let d = row_shift.order();
    if col_shift.order() != d {
        return Err(Error::Structure(format!("row order {d} != column order {}", col_shift.order())));
    }
    let (tau, sigma) = (tile.tau(), tile.sigma());
    if !gcd(tau, sigma).is_multiple_of(d) {
        return Err(Error::Structure(format!("order {d} does not divide gcd({tau}, {sigma})")));
    }
    let s = tile.states().len();
    if s * d != tau * sigma {
        return Err(Error::Structure(format!("s = {s} but tau*sigma/d = {}", tau * sigma / d)));
    }
    Ok(SimpleStructure { row_step, row_shift, col_step, col_shift, d })
}

/// Number of simple tiles (up to rotation) with periods `tau`, `sigma` and
/// `s` states over `Z_n`: `phi(d) * C(n, s) * (s-1)!` with `d = tau*sigma/s`.
pub fn count_simple_tiles(n: usize, tau: usize, sigma: usize, s: usize) -> Result<u128> {
    let inadmissible = || Error::InadmissibleStateCount { tau, sigma, s };
    if s == 0 || !(tau * sigma).is_multiple_of(s) {
        return Err(inadmissible());
    }
    let d = tau * sigma / s;
    if !gcd(tau, sigma).is_multiple_of(d) {
        return Err(inadmissible());
    }
    let c = binomial(n as u128, s as u128).ok_or(Error::Overflow("binomial"))?;
    let f = factorial(s as u128 - 1).ok_or(Error::Overflow("factorial"))?;
    (phi(d) as u128)
        .checked_mul(c)
        .and_then(|x| x.checked_mul(f))
        .ok_or(Error::Overflow("simple tile count"))
}

/// All `tau x sigma` arrays over `Z_n` in odometer order.
struct Arrays {
    n: usize,
    tau: usize,
    sigma: usize,
    cells: Vec<State>,
    done: bool,
}

impl Iterator for Arrays {
    type Item = Tile;
    fn next(&mut self) -> Option<Tile> {
        if self.done {
            return None;
        }
        let out = Tile { n: self.n, tau: self.tau, sigma: self.sigma, cells: self.cells.clone() };
        self.done = true;
        for c in self.cells.iter_mut().rev() {
            *c += 1;
            if (*c as usize) < self.n {
                self.done = false;
                break;
            }
            *c = 0;
        }
        Some(out)
    }
}

/// Every simple PS tile with the given dimensions, as raw arrays (rotations of
/// one tile all appear; use [`Tile::canonical`] to deduplicate).
pub fn enumerate_simple_tiles(
    n: usize,
    tau: usize,
    sigma: usize,
    cap: u64,
) -> Result<impl Iterator<Item = Tile>> {
    if tau == 0 || sigma == 0 || n == 0 {
        return Err(Error::MalformedTile(format!("empty census {n} states {tau}x{sigma}")));
    }
    let size = (n as f64).powi((tau * sigma) as i32);
    if size > cap as f64 {
        return Err(Error::CapExceeded { size, cap });
    }
    let arrays = Arrays { n, tau, sigma, cells: vec![0; tau * sigma], done: false };
    Ok(arrays.filter(|t| is_simple(t) && validate_ps_tile(t).is_valid()))
}

/// Exhaustive count of simple tiles up to rotation, keyed by state count.
pub fn simple_tile_census(n: usize, tau: usize, sigma: usize, cap: u64) -> Result<BTreeMap<usize, u128>> {
    let mut classes: HashSet<Tile> = HashSet::new();
    for t in enumerate_simple_tiles(n, tau, sigma, cap)? {
        classes.insert(t.canonical());
    }
    let mut by_s = BTreeMap::new();
    for t in classes {
        *by_s.entry(t.states().len()).or_insert(0) += 1;
    }
    Ok(by_s)
}

/// Positions `a[i][j] = b[k][m]` with `a[i][j+1] != b[k][m+1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StateBreak {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub m: usize,
}

/// For two distinct simple tiles of a common rule, finds a shared state whose
/// right neighbours differ. Returns `None` exactly when the state sets are disjoint.
pub fn shared_state_break(t1: &Tile, t2: &Tile) -> Result<Option<StateBreak>> {
    for t in [t1, t2] {
        if !is_simple(t) {
            return Err(Error::NotSimple { lag: t.pairs().len() - t.states().len() });
        }
    }
    let succ = |t: &Tile| -> BTreeMap<(State, State), State> {
        (0..t.tau())
            .flat_map(|i| (0..t.sigma()).map(move |j| (i, j)))
            .map(|(i, j)| ((t.get(i, j), t.get(i, j + 1)), t.get(i + 1, j + 1)))
            .collect()
    };
    let (s1, s2) = (succ(t1), succ(t2));
    for (pair, v) in &s1 {
        if s2.get(pair).is_some_and(|w| w != v) {
            return Err(Error::InconsistentAssignments(pair.0, pair.1));
        }
    }
    if t1.tau() == t2.tau() && t1.sigma() == t2.sigma() && t1.canonical() == t2.canonical() {
        return Err(Error::IdenticalTiles);
    }
    for i in 0..t1.tau() {
        for j in 0..t1.sigma() {
            for k in 0..t2.tau() {
                for m in 0..t2.sigma() {
                    if t1.get(i, j) == t2.get(k, m) && t1.get(i, j + 1) != t2.get(k, m + 1) {
                        return Ok(Some(StateBreak { i, j, k, m }));
                    }
                }
            }
        }
    }
    Ok(None)
}
