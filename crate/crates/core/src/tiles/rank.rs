//! Rank of a tile and the rank lower-bound conjecture.
//!
//! The rank is the largest number of columns that together hold `x * tau`
//! distinct states, i.e. a maximum family of repeat-free, pairwise disjoint
//! columns.

use serde::Serialize;

use super::{shift_between, tile_stats, Tile};
use crate::arith::gcd;
use crate::rules::State;

fn repeat_free(col: &[State]) -> bool {
    let mut v = col.to_vec();
    v.sort_unstable();
    v.windows(2).all(|w| w[0] != w[1])
}

fn share_state(a: &[State], b: &[State]) -> bool {
    a.iter().any(|x| b.contains(x))
}

/// Conflict graph over the repeat-free columns: (column indices, adjacency).
fn conflict_graph(tile: &Tile) -> (Vec<usize>, Vec<Vec<bool>>) {
    let cols = tile.columns();
    let idx: Vec<usize> = (0..tile.sigma()).filter(|&j| repeat_free(&cols[j])).collect();
    let adj = idx
        .iter()
        .map(|&a| idx.iter().map(|&b| a != b && share_state(&cols[a], &cols[b])).collect())
        .collect();
    (idx, adj)
}

fn max_independent(cands: &[usize], adj: &[Vec<bool>]) -> usize {
    let Some((&v, rest)) = cands.split_first() else {
        return 0;
    };
    let without_v: Vec<usize> = rest.iter().copied().filter(|&u| !adj[v][u]).collect();
    let take = 1 + max_independent(&without_v, adj);
    if without_v.len() == rest.len() {
        // v has no neighbour left, taking it is optimal
        return take;
    }
    take.max(max_independent(rest, adj))
}

/// Exact rank.
///
/// Columns are grouped into components of the "shares a state" relation.
/// Components that are cliques (the situation in simple tiles, where columns
/// sharing a state are rotations of each other) contribute one column; other
/// components fall back to an exact independent-set search.
pub fn rank(tile: &Tile) -> usize {
    let (idx, adj) = conflict_graph(tile);
    let m = idx.len();
    let mut comp = vec![usize::MAX; m];
    let mut total = 0;
    for start in 0..m {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut members = vec![start];
        comp[start] = start;
        let mut k = 0;
        while k < members.len() {
            let v = members[k];
            for u in 0..m {
                if adj[v][u] && comp[u] == usize::MAX {
                    comp[u] = start;
                    members.push(u);
                }
            }
            k += 1;
        }
        let clique = members.iter().all(|&a| members.iter().all(|&b| a == b || adj[a][b]));
        total += if clique { 1 } else { max_independent(&members, &adj) };
    }
    total
}

/// Lexicographically smallest set of `k` repeat-free, pairwise disjoint columns.
pub fn independent_columns(tile: &Tile, k: usize) -> Option<Vec<usize>> {
    fn search(pos: usize, idx: &[usize], adj: &[Vec<bool>], chosen: &mut Vec<usize>, k: usize) -> bool {
        if chosen.len() == k {
            return true;
        }
        for c in pos..idx.len() {
            if chosen.iter().all(|&o| !adj[o][c]) {
                chosen.push(c);
                if search(c + 1, idx, adj, chosen, k) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let (idx, adj) = conflict_graph(tile);
    let mut chosen = Vec::new();
    search(0, &idx, &adj, &mut chosen, k).then(|| chosen.into_iter().map(|c| idx[c]).collect())
}

/// Outcome of checking `rank(T) >= x - lag` with `x = sigma / gcd(tau, sigma)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankCheck {
    pub rank: usize,
    pub lag: usize,
    pub x: usize,
    pub bound: i64,
    pub holds: bool,
    /// First `k >= 1` with row `k` a circular shift of row 0, else `tau`.
    pub tau_tilde: usize,
    /// `p(T) = tau_tilde * sigma`.
    pub semi_simple: bool,
    /// `tau = 2` or `sigma = 2`, where the bound is a theorem.
    pub proved_case: bool,
    /// Leftmost `x - lag` repeat-free disjoint columns when the bound holds.
    pub index_set: Option<Vec<usize>>,
}

pub fn check_rank_conjecture(tile: &Tile) -> RankCheck {
    let stats = tile_stats(tile);
    let (tau, sigma) = (tile.tau(), tile.sigma());
    let x = sigma / gcd(tau, sigma);
    let bound = x as i64 - stats.lag as i64;
    let holds = stats.rank as i64 >= bound;
    let tau_tilde = (1..tau).find(|&k| shift_between(tile.row(0), tile.row(k)).is_some()).unwrap_or(tau);
    let index_set = if holds { independent_columns(tile, bound.max(0) as usize) } else { None };
    RankCheck {
        rank: stats.rank,
        lag: stats.lag,
        x,
        bound,
        holds,
        tau_tilde,
        semi_simple: stats.p == tau_tilde * sigma,
        proved_case: tau == 2 || sigma == 2,
        index_set,
    }
}
