//! Deciding arcs and label assignment digraphs (LADs).
//!
//! `A` decides `B` (`A => B`) when `A -> B` and, whatever state `c_0` starts
//! to the right of a column repeating `A`, the iteration
//! `c_{j+1} = f(a_{j mod tau}, c_j)` eventually meets `b_{j mod tau}`.
//!
//! The LAD of `A` has nodes `(i, j)` for `i < tau`, `j < n` and one arc
//! `(i, j) -> (i+1, f(a_i, j))`. `A -> B` iff the LAD contains the cycle
//! through `(0, b_0), ..., (tau-1, b_{tau-1})` (membership in `E(A,B)`), and
//! `A => B` iff additionally every node reaches `(0, b_0)` (membership in
//! `D(A,B)`).

mod counting;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::labelgraph::{right_extends, Label};
use crate::rng;
use crate::rules::{random_rule_with, Rule, State};
use crate::stats::Proportion;

pub use counting::{
    combinatorial_identity_s, count_d_exhaustive, decay_of_nonsimple_conditional, p_decides_simple, DecayRow,
    DecidingProbability, IdentityValue, LadCount, DEFAULT_LAD_CAP,
};

/// A `tau`-partite functional digraph on parts `0..tau`, each with `n` nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lad {
    n: usize,
    tau: usize,
    /// `succ[i * n + j]` is the state `j'` with `(i, j) -> (i+1 mod tau, j')`.
    succ: Vec<State>,
}

impl Lad {
    /// Builds a LAD from explicit arc targets, `succ[i * n + j]`.
    pub fn from_arcs(n: usize, tau: usize, succ: Vec<State>) -> Result<Self> {
        if tau == 0 || succ.len() != n * tau {
            return Err(Error::InvalidArgument(format!("{} arcs for {tau} parts of {n} nodes", succ.len())));
        }
        if let Some(&state) = succ.iter().find(|&&s| s as usize >= n) {
            return Err(Error::LabelState { n, state });
        }
        Ok(Lad { n, tau, succ })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn node_count(&self) -> usize {
        self.n * self.tau
    }

    /// Target of the arc leaving `(i, j)`, as a node `(i', j')`.
    pub fn next(&self, i: usize, j: State) -> (usize, State) {
        ((i + 1) % self.tau, self.succ[i * self.n + j as usize])
    }

    /// Condition (1): the cycle `(0, b_0) -> ... -> (tau-1, b_{tau-1}) -> (0, b_0)`.
    pub fn in_e(&self, b: &Label) -> bool {
        b.len() == self.tau
            && b.word().iter().all(|&s| (s as usize) < self.n)
            && (0..self.tau).all(|i| self.next(i, b.at(i)).1 == b.at(i + 1))
    }

    /// Conditions (1) and (2): the cycle is present and every node reaches `(0, b_0)`.
    pub fn in_d(&self, b: &Label) -> bool {
        if !self.in_e(b) {
            return false;
        }
        let (n, tau) = (self.n, self.tau);
        // reverse adjacency in CSR form
        let mut start = vec![0usize; n * tau + 1];
        for i in 0..tau {
            for j in 0..n {
                let (pi, pj) = self.next(i, j as State);
                start[pi * n + pj as usize + 1] += 1;
            }
        }
        for k in 0..n * tau {
            start[k + 1] += start[k];
        }
        let mut fill = start.clone();
        let mut preds = vec![0usize; n * tau];
        for i in 0..tau {
            for j in 0..n {
                let (pi, pj) = self.next(i, j as State);
                let t = pi * n + pj as usize;
                preds[fill[t]] = i * n + j;
                fill[t] += 1;
            }
        }
        let root = b.at(0) as usize;
        let mut seen = vec![false; n * tau];
        seen[root] = true;
        let mut stack = vec![root];
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &u in &preds[start[v]..start[v + 1]] {
                if !seen[u] {
                    seen[u] = true;
                    reached += 1;
                    stack.push(u);
                }
            }
        }
        reached == n * tau
    }
}

/// The LAD `G_{tau,n}(f, A)`.
pub fn build_lad(rule: &Rule, a: &Label) -> Lad {
    let (n, tau) = (rule.n(), a.len());
    let succ = (0..tau).flat_map(|i| (0..n as State).map(move |j| rule.apply(a.at(i), j))).collect();
    Lad { n, tau, succ }
}

/// `A => B`, decided on the LAD. Labels of different lengths never decide.
pub fn decides(rule: &Rule, a: &Label, b: &Label) -> bool {
    a.len() == b.len() && build_lad(rule, a).in_d(b)
}

/// `A => B` by direct iteration of `c_{j+1} = f(a_{j mod tau}, c_j)` from
/// every `c_0`, for `n * tau + tau` steps.
pub fn decides_by_simulation(rule: &Rule, a: &Label, b: &Label) -> bool {
    if !right_extends(rule, a, b).unwrap_or(false) {
        return false;
    }
    let tau = a.len();
    let steps = rule.n() * tau + tau;
    (0..rule.n() as State).all(|c0| {
        let mut c = c0;
        for j in 0..steps {
            if c == b.at(j) {
                return true;
            }
            c = rule.apply(a.at(j), c);
        }
        false
    })
}

/// Frequency of `A => B` over `samples` uniformly random `n`-state rules.
pub fn monte_carlo_deciding(n: usize, a: &Label, b: &Label, samples: u64, seed: u64) -> Result<Proportion> {
    if samples == 0 {
        return Err(Error::NoSamples);
    }
    if n < 2 {
        return Err(Error::StateCount(n));
    }
    for l in [a, b] {
        if let Some(&state) = l.word().iter().find(|&&s| s as usize >= n) {
            return Err(Error::LabelState { n, state });
        }
    }
    let hits = rng::count_hits(seed, samples, |r| {
        let rule = random_rule_with(n, r).expect("n >= 2 checked by caller");
        decides(&rule, a, b)
    });
    Ok(Proportion::new(hits, samples))
}
