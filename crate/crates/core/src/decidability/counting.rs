//! Exact and sampled deciding probabilities.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Serialize, Serializer};

use super::decides;
use crate::arith::{binomial, pow};
use crate::error::{Error, Result};
use crate::labelgraph::Label;
use crate::rng;
use crate::rules::{random_rule_with, State};
use crate::stats::{Proportion, Z_99};

/// Default cap on `n^(tau*n)` for exhaustive LAD enumeration.
pub const DEFAULT_LAD_CAP: u64 = 10_000_000;

/// Exhaustive count of LADs in `D(A, B)` next to the closed form
/// `n^(tau(n-2)) (n^tau - (n-1)^tau)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LadCount {
    pub n: usize,
    pub tau: usize,
    pub count: u64,
    pub total: u128,
    pub formula: u128,
    #[serde(rename = "match")]
    pub matches: bool,
}

fn lad_formula(n: usize, tau: usize) -> Option<u128> {
    let (n, tau) = (n as u128, tau as u32);
    let head = pow(n, tau * (n as u32 - 2))?;
    let p = pow(n, tau)? - pow(n - 1, tau)?;
    head.checked_mul(p)
}

/// Counts the `tau`-partite functional digraphs on `n` nodes per part in
/// which every node reaches `(0, 0)` through the cycle `(0,0) -> (1,0) -> ...`.
///
/// For a simple `A` the `tau` relevant rule rows are independent and uniform,
/// so each digraph corresponds to exactly one restriction of the rule, and
/// relabelling each part maps any `B` to `0^tau`. Arcs out of the cycle nodes
/// are fixed by condition (1); the other `tau(n-1)` arcs are enumerated.
pub fn count_d_exhaustive(n: usize, tau: usize, cap: u64) -> Result<LadCount> {
    if n < 2 {
        return Err(Error::StateCount(n));
    }
    if tau == 0 {
        return Err(Error::InvalidArgument("tau must be positive".into()));
    }
    let size = (n as f64).powf((tau * n) as f64);
    if size > cap as f64 {
        return Err(Error::CapExceeded { size, cap });
    }
    let total = pow(n as u128, (tau * n) as u32).ok_or(Error::Overflow("LAD total"))?;
    let formula = lad_formula(n, tau).ok_or(Error::Overflow("LAD formula"))?;
    let nodes = n * tau;
    let free: Vec<usize> = (0..nodes).filter(|k| k % n != 0).collect();
    let mut succ = vec![0 as State; nodes];
    // 0 unknown, 1 reaches the root, 2 does not, 3 on the current path
    let mut mark = vec![0u8; nodes];
    let mut path = Vec::with_capacity(nodes);
    let mut count = 0u64;
    loop {
        mark.fill(0);
        for i in 0..tau {
            mark[i * n] = 1;
        }
        let mut all = true;
        for v0 in 0..nodes {
            let mut v = v0;
            path.clear();
            while mark[v] == 0 {
                mark[v] = 3;
                path.push(v);
                let part = (v / n + 1) % tau;
                v = part * n + succ[v] as usize;
            }
            let verdict = if mark[v] == 1 { 1 } else { 2 };
            for &u in &path {
                mark[u] = verdict;
            }
            if verdict == 2 {
                all = false;
                break;
            }
        }
        if all {
            count += 1;
        }
        // odometer over the free arcs
        let mut k = 0;
        loop {
            if k == free.len() {
                return Ok(LadCount { n, tau, count, total, matches: count as u128 == formula, formula });
            }
            let slot = &mut succ[free[k]];
            *slot += 1;
            if (*slot as usize) < n {
                break;
            }
            *slot = 0;
            k += 1;
        }
    }
}

fn ratio_as_string<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// `P(A => B)` for a simple `A` and its value conditional on `A -> B`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecidingProbability {
    pub n: usize,
    pub tau: usize,
    #[serde(serialize_with = "ratio_as_string")]
    pub joint: BigRational,
    #[serde(serialize_with = "ratio_as_string")]
    pub conditional: BigRational,
}

/// `P(A => B) = (n^tau - (n-1)^tau) / n^tau * 1 / n^tau` for simple `A`.
pub fn p_decides_simple(n: usize, tau: usize) -> Result<DecidingProbability> {
    if n < 2 {
        return Err(Error::StateCount(n));
    }
    if tau == 0 || tau > n {
        return Err(Error::NoSimpleLabel { n, tau });
    }
    let nt = BigInt::from(n).pow(tau as u32);
    let mt = BigInt::from(n - 1).pow(tau as u32);
    let conditional = BigRational::new(&nt - mt, nt.clone());
    let joint = &conditional / BigRational::from_integer(nt);
    Ok(DecidingProbability { n, tau, joint, conditional })
}

/// Both sides of the nested-sum identity for `S_m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IdentityValue {
    pub sum: u128,
    pub closed: u128,
}

/// `S_m` with `A_{k,l} = C(n-1, k) (l+1)^k (n-1-l)^(n-1-k)`, evaluated by
/// direct summation and by `n^((m+1)(n-2)) [P_{m+1} + k_{m+1} (n-1)^m]`,
/// `P_m = n^m - (n-1)^m`.
pub fn combinatorial_identity_s(n: usize, m: usize, k_next: usize) -> Result<IdentityValue> {
    if n < 2 {
        return Err(Error::StateCount(n));
    }
    if m == 0 || k_next >= n {
        return Err(Error::InvalidArgument(format!("need m >= 1 and k <= n - 1, got m = {m}, k = {k_next}")));
    }
    let ovf = || Error::Overflow("identity term");
    let n128 = n as u128;
    let a = |k: usize, l: usize| -> Result<u128> {
        let c = binomial(n128 - 1, k as u128).ok_or_else(ovf)?;
        let x = pow(l as u128 + 1, k as u32).ok_or_else(ovf)?;
        let y = pow((n - 1 - l) as u128, (n - 1 - k) as u32).ok_or_else(ovf)?;
        c.checked_mul(x).and_then(|v| v.checked_mul(y)).ok_or_else(ovf)
    };
    let base = pow(n128, n as u32 - 2).ok_or_else(ovf)?;
    fn nested(
        m: usize,
        l: usize,
        n: usize,
        base: u128,
        a: &dyn Fn(usize, usize) -> Result<u128>,
        memo: &mut BTreeMap<(usize, usize), u128>,
    ) -> Result<u128> {
        if let Some(&v) = memo.get(&(m, l)) {
            return Ok(v);
        }
        let mut acc: u128 = 0;
        for k in 0..n {
            let inner = if m == 1 { (k as u128 + 1) * base } else { nested(m - 1, k, n, base, a, memo)? };
            let term = a(k, l)?.checked_mul(inner).ok_or(Error::Overflow("identity term"))?;
            acc = acc.checked_add(term).ok_or(Error::Overflow("identity sum"))?;
        }
        memo.insert((m, l), acc);
        Ok(acc)
    }
    let sum = nested(m, k_next, n, base, &a, &mut BTreeMap::new())?;
    let m32 = m as u32;
    let p_next = pow(n128, m32 + 1).ok_or_else(ovf)? - pow(n128 - 1, m32 + 1).ok_or_else(ovf)?;
    let bracket = p_next + k_next as u128 * pow(n128 - 1, m32).ok_or_else(ovf)?;
    let closed = pow(n128, (m32 + 1) * (n as u32 - 2)).ok_or_else(ovf)?.checked_mul(bracket).ok_or_else(ovf)?;
    Ok(IdentityValue { sum, closed })
}

/// One row of [`decay_of_nonsimple_conditional`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayRow {
    pub n: usize,
    pub samples: u64,
    pub hits: u64,
    pub estimate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

/// Estimates `P(A => B | A -> B)` for each `n`, with 99% Wilson intervals.
///
/// Conditioning on `A -> B` fixes the entries `f(a_i, b_i) = b_{i+1}`; the
/// remaining entries stay uniform. The run for `n` uses master seed `seed + n`.
pub fn decay_of_nonsimple_conditional(
    n_list: &[usize],
    a: &Label,
    b: &Label,
    samples: u64,
    seed: u64,
) -> Result<Vec<DecayRow>> {
    if a.len() != b.len() {
        return Err(Error::LabelLength(a.len(), b.len()));
    }
    let tau = a.len();
    let mut forced: BTreeMap<(State, State), State> = BTreeMap::new();
    for i in 0..tau {
        if forced.insert((a.at(i), b.at(i)), b.at(i + 1)).is_some_and(|v| v != b.at(i + 1)) {
            return Err(Error::ExtensionImpossible);
        }
    }
    if samples == 0 {
        return Ok(Vec::new());
    }
    let top = a.word().iter().chain(b.word()).copied().max().unwrap_or(0);
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        if n < 2 {
            return Err(Error::StateCount(n));
        }
        if top as usize >= n {
            return Err(Error::LabelState { n, state: top });
        }
        let hits = rng::count_hits(seed.wrapping_add(n as u64), samples, |r| {
            let mut rule = random_rule_with(n, r).expect("n >= 2");
            for (&(x, y), &v) in &forced {
                rule = rule.with_value(x, y, v);
            }
            decides(&rule, a, b)
        });
        let p = Proportion::new(hits, samples);
        let (ci_lo, ci_hi) = p.wilson(Z_99);
        rows.push(DecayRow { n, samples, hits, estimate: p.estimate(), ci_lo, ci_hi });
    }
    Ok(rows)
}
