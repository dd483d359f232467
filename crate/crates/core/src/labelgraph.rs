//! The label digraph `D_{tau,f}`.
//!
//! Nodes are labels (length-`tau` columns) and `A -> B` when `B` can stand to
//! the right of `A`, i.e. `f(a_i, b_i) = b_{i+1}` with indices mod `tau`.
//! Closed walks are periodic solutions; walks whose arcs all decide are the
//! weakly robust ones.

use std::collections::HashSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decidability::decides;
use crate::error::{Error, Result};
use crate::rules::{Rule, State};
use crate::tiles::{is_aperiodic, validate_ps_tile, Tile};

/// Default cap on the number of start labels a search may visit.
pub const DEFAULT_NODE_CAP: u64 = 10_000_000;

/// A column word `a_0 ... a_{tau-1}`, read cyclically.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Label(Vec<State>);

impl Label {
    pub fn new(n: usize, word: Vec<State>) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::LabelLength(0, 1));
        }
        if let Some(&state) = word.iter().find(|&&s| s as usize >= n) {
            return Err(Error::LabelState { n, state });
        }
        Ok(Label(word))
    }

    /// Parses a digit string such as `"021"`.
    pub fn parse(n: usize, digits: &str) -> Result<Self> {
        let word = digits
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as State).ok_or(Error::LabelState { n, state: State::MAX }))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn word(&self) -> &[State] {
        &self.0
    }

    #[inline]
    pub fn at(&self, i: usize) -> State {
        self.0[i % self.0.len()]
    }

    /// No state occurs twice.
    pub fn is_simple(&self) -> bool {
        let mut v = self.0.clone();
        v.sort_unstable();
        v.windows(2).all(|w| w[0] != w[1])
    }

    /// `0 1 ... tau-1`, the canonical simple label.
    pub fn simple(n: usize, tau: usize) -> Result<Self> {
        if tau > n {
            return Err(Error::NoSimpleLabel { n, tau });
        }
        Self::new(n, (0..tau as State).collect())
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Label({self})")
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&s| s < 10) {
            for s in &self.0 {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl From<Label> for Vec<State> {
    fn from(l: Label) -> Self {
        l.0
    }
}

/// `A -> B`: `f(a_i, b_i) = b_{i+1 mod tau}` for every `i`.
pub fn right_extends(rule: &Rule, a: &Label, b: &Label) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::LabelLength(a.len(), b.len()));
    }
    Ok((0..a.len()).all(|i| rule.apply(a.at(i), b.at(i)) == b.at(i + 1)))
}

/// Every `B` with `A -> B`. A right neighbour is fixed by `b_0`, so there are at most `n`.
pub fn out_neighbors(rule: &Rule, a: &Label) -> Vec<Label> {
    out_neighbors_within(rule, a, None)
}

fn out_neighbors_within(rule: &Rule, a: &Label, subset: Option<&[bool]>) -> Vec<Label> {
    let tau = a.len();
    let allowed = |s: State| subset.is_none_or(|m| m[s as usize]);
    let mut out = Vec::new();
    'seed: for b0 in 0..rule.n() as State {
        if !allowed(b0) {
            continue;
        }
        let mut word = Vec::with_capacity(tau);
        word.push(b0);
        let mut b = b0;
        for i in 0..tau {
            b = rule.apply(a.at(i), b);
            if i + 1 < tau {
                if !allowed(b) {
                    continue 'seed;
                }
                word.push(b);
            }
        }
        if b == b0 {
            out.push(Label(word));
        }
    }
    out
}

/// Search limits for [`find_ps_with`] and [`find_wrps_with`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    /// Largest admissible number of labels (`n^tau`, or `|subset|^tau`).
    pub node_cap: u64,
    /// Restricts the search to labels over these states.
    pub state_subset: Option<Vec<State>>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { node_cap: DEFAULT_NODE_CAP, state_subset: None }
    }
}

/// A cycle `A_0 -> ... -> A_{sigma-1} -> A_0` and the tile it induces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleRecord {
    pub labels: Vec<Label>,
    /// Whether `A_j => A_{j+1}`, per arc.
    pub deciding: Vec<bool>,
    #[serde(serialize_with = "tile_as_text")]
    pub tile: Tile,
}

fn tile_as_text<S: serde::Serializer>(t: &Tile, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&t.to_text())
}

impl CycleRecord {
    fn from_labels(rule: &Rule, labels: Vec<Label>) -> Self {
        let sigma = labels.len();
        let deciding = (0..sigma).map(|j| decides(rule, &labels[j], &labels[(j + 1) % sigma])).collect();
        let cols: Vec<&[State]> = labels.iter().map(Label::word).collect();
        let tile = Tile::from_columns(rule.n(), &cols).expect("labels are well formed");
        CycleRecord { labels, deciding, tile }
    }

    pub fn is_deciding(&self) -> bool {
        self.deciding.iter().all(|&d| d)
    }

    /// Rotates the cycle so that its tile is the canonical tile.
    fn canonicalize(self, rule: &Rule) -> Self {
        let canon = self.tile.canonical();
        let (tau, sigma) = (canon.tau(), canon.sigma());
        for dr in 0..tau {
            for dc in 0..sigma {
                if self.tile.rotated(dr, dc) == canon {
                    let labels = (0..sigma)
                        .map(|j| {
                            let w = self.labels[(j + dc) % sigma].word();
                            Label((0..tau).map(|i| w[(i + dr) % tau]).collect())
                        })
                        .collect();
                    return Self::from_labels(rule, labels);
                }
            }
        }
        unreachable!("canonical form is a rotation")
    }
}

fn label_space(n: usize, tau: usize, config: &SearchConfig) -> Result<Vec<State>> {
    let alphabet: Vec<State> = match &config.state_subset {
        Some(s) => {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            if let Some(&state) = s.iter().find(|&&x| x as usize >= n) {
                return Err(Error::LabelState { n, state });
            }
            s
        }
        None => (0..n as State).collect(),
    };
    let size = (alphabet.len() as f64).powi(tau as i32);
    if size > config.node_cap as f64 {
        return Err(Error::CapExceeded { size, cap: config.node_cap });
    }
    Ok(alphabet)
}

fn all_labels(alphabet: &[State], tau: usize) -> Vec<Label> {
    let mut out = vec![Vec::with_capacity(tau)];
    for _ in 0..tau {
        out = out
            .into_iter()
            .flat_map(|w: Vec<State>| {
                alphabet.iter().map(move |&s| {
                    let mut w = w.clone();
                    w.push(s);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(Label).collect()
}

/// Closed walks of length at most `sigma_max` whose first label is the least
/// label on the walk.
fn closed_walks_from(
    rule: &Rule,
    start: &Label,
    sigma_max: usize,
    subset: Option<&[bool]>,
    deciding_only: bool,
    out: &mut Vec<Vec<Label>>,
) {
    fn dfs(
        rule: &Rule,
        start: &Label,
        path: &mut Vec<Label>,
        sigma_max: usize,
        subset: Option<&[bool]>,
        deciding_only: bool,
        out: &mut Vec<Vec<Label>>,
    ) {
        let last = path.last().expect("path starts at the start label").clone();
        for b in out_neighbors_within(rule, &last, subset) {
            if b < *start || (deciding_only && !decides(rule, &last, &b)) {
                continue;
            }
            if b == *start {
                out.push(path.clone());
            }
            if path.len() < sigma_max {
                path.push(b);
                dfs(rule, start, path, sigma_max, subset, deciding_only, out);
                path.pop();
            }
        }
    }
    let mut path = vec![start.clone()];
    dfs(rule, start, &mut path, sigma_max, subset, deciding_only, out);
}

fn search(
    rule: &Rule,
    tau: usize,
    sigma_max: usize,
    config: &SearchConfig,
    wrps: bool,
) -> Result<Vec<CycleRecord>> {
    if tau == 0 || sigma_max == 0 {
        return Ok(Vec::new());
    }
    let n = rule.n();
    let alphabet = label_space(n, tau, config)?;
    let mask: Option<Vec<bool>> = config.state_subset.as_ref().map(|_| {
        let mut m = vec![false; n];
        for &s in &alphabet {
            m[s as usize] = true;
        }
        m
    });
    let starts = all_labels(&alphabet, tau);
    let walks: Vec<Vec<Label>> = starts
        .par_iter()
        .flat_map_iter(|start| {
            // a deciding walk never leaves the aperiodic labels
            if wrps && !is_aperiodic(start.word()) {
                return Vec::new();
            }
            let mut out = Vec::new();
            closed_walks_from(rule, start, sigma_max, mask.as_deref(), wrps, &mut out);
            out
        })
        .collect();
    let mut seen = HashSet::new();
    let mut records = Vec::new();
    for labels in walks {
        if wrps && !labels.iter().all(|l| is_aperiodic(l.word())) {
            continue;
        }
        let rec = CycleRecord::from_labels(rule, labels);
        if !validate_ps_tile(&rec.tile).is_valid() {
            continue;
        }
        if seen.insert(rec.tile.canonical()) {
            records.push(rec.canonicalize(rule));
        }
    }
    records.sort_by(|a, b| (a.tile.sigma(), &a.tile).cmp(&(b.tile.sigma(), &b.tile)));
    Ok(records)
}

/// All periodic solutions with temporal period exactly `tau` and spatial
/// period at most `sigma_max`, one record per tile up to rotation.
pub fn find_ps(rule: &Rule, tau: usize, sigma_max: usize) -> Result<Vec<CycleRecord>> {
    find_ps_with(rule, tau, sigma_max, &SearchConfig::default())
}

pub fn find_ps_with(rule: &Rule, tau: usize, sigma_max: usize, config: &SearchConfig) -> Result<Vec<CycleRecord>> {
    search(rule, tau, sigma_max, config, false)
}

/// The weakly robust periodic solutions among [`find_ps`]: every arc decides
/// and every column is aperiodic.
pub fn find_wrps(rule: &Rule, tau: usize, sigma_max: usize) -> Result<Vec<CycleRecord>> {
    find_wrps_with(rule, tau, sigma_max, &SearchConfig::default())
}

pub fn find_wrps_with(rule: &Rule, tau: usize, sigma_max: usize, config: &SearchConfig) -> Result<Vec<CycleRecord>> {
    search(rule, tau, sigma_max, config, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::{enumerate_rules, parse_rule, random_rule, DEFAULT_RULE_CAP};

    fn worked() -> Rule {
        parse_rule("102222210", 3).unwrap()
    }

    fn worked_tile() -> Tile {
        Tile::from_rows(3, &[[0, 2, 2, 2, 1, 1], [2, 2, 1, 1, 0, 2], [1, 1, 0, 2, 2, 2]]).unwrap()
    }

    fn lab(s: &str) -> Label {
        Label::parse(10, s).unwrap()
    }

    #[test]
    fn right_extension_examples() {
        let r = worked();
        assert!(right_extends(&r, &lab("021"), &lab("221")).unwrap());
        assert!(!right_extends(&r, &lab("021"), &lab("222")).unwrap());
        assert!(out_neighbors(&r, &lab("021")).contains(&lab("221")));
        assert!(matches!(right_extends(&r, &lab("02"), &lab("221")), Err(Error::LabelLength(2, 3))));
        // identity in the second argument: exactly the constant labels
        let id = Rule::from_fn(3, |_, b| b).unwrap();
        for a in all_labels(&[0, 1, 2], 3) {
            assert_eq!(out_neighbors(&id, &a), vec![lab("000"), lab("111"), lab("222")]);
        }
        // fixed columns
        let proj = Rule::from_fn(3, |a, b| if a == b { a } else { 0 }).unwrap();
        assert!(right_extends(&proj, &lab("12"), &lab("12")).is_ok());
        assert!(right_extends(&proj, &lab("11"), &lab("11")).unwrap());
    }

    #[test]
    fn tau_one_is_a_fixed_point_condition() {
        for seed in 0..50 {
            let r = random_rule(4, seed).unwrap();
            for a in 0..4 {
                for b in 0..4 {
                    let got = right_extends(&r, &Label(vec![a]), &Label(vec![b])).unwrap();
                    assert_eq!(got, r.apply(a, b) == b);
                }
            }
        }
    }

    #[test]
    fn out_neighbors_match_brute_force() {
        for (n, tau) in [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3), (3, 4)] {
            let labels = all_labels(&(0..n as State).collect::<Vec<_>>(), tau);
            for seed in 0..20 {
                let r = random_rule(n, seed).unwrap();
                for a in &labels {
                    let fast: HashSet<Label> = out_neighbors(&r, a).into_iter().collect();
                    let brute: HashSet<Label> =
                        labels.iter().filter(|b| right_extends(&r, a, b).unwrap()).cloned().collect();
                    assert_eq!(fast, brute);
                    assert!(fast.len() <= n);
                }
            }
        }
    }

    #[test]
    fn worked_rule_has_its_tile() {
        let r = worked();
        let canon = worked_tile().canonical();
        let ps = find_ps(&r, 3, 6).unwrap();
        let rec = ps.iter().find(|c| c.tile == canon).expect("PS present");
        assert!(rec.is_deciding());
        let wrps = find_wrps(&r, 3, 6).unwrap();
        assert!(wrps.iter().any(|c| c.tile == canon));
        for c in &ps {
            assert!(validate_ps_tile(&c.tile).is_valid());
            assert!(c.tile.is_consistent_with(&r));
            let sigma = c.labels.len();
            for j in 0..sigma {
                assert!(right_extends(&r, &c.labels[j], &c.labels[(j + 1) % sigma]).unwrap());
            }
        }
    }

    #[test]
    fn no_duplicate_tiles() {
        for seed in 0..200 {
            let r = random_rule(3, seed).unwrap();
            for tau in 1..=3 {
                let ps = find_ps(&r, tau, 4).unwrap();
                let canon: HashSet<Tile> = ps.iter().map(|c| c.tile.canonical()).collect();
                assert_eq!(canon.len(), ps.len());
                assert!(ps.iter().all(|c| c.tile == c.tile.canonical()));
            }
        }
    }

    /// Oracle: every valid tile consistent with the rule, by brute force.
    fn ps_tiles_brute(rule: &Rule, tau: usize, sigma: usize) -> HashSet<Tile> {
        let n = rule.n();
        let total = n.pow((tau * sigma) as u32);
        let mut out = HashSet::new();
        for code in 0..total {
            let mut c = code;
            let cells: Vec<State> = (0..tau * sigma)
                .map(|_| {
                    let v = (c % n) as State;
                    c /= n;
                    v
                })
                .collect();
            let t = Tile::new(n, tau, sigma, cells).unwrap();
            if t.is_consistent_with(rule) && validate_ps_tile(&t).is_valid() {
                out.insert(t.canonical());
            }
        }
        out
    }

    #[test]
    fn find_ps_matches_tile_brute_force() {
        for seed in 0..60 {
            let r = random_rule(3, seed).unwrap();
            for (tau, sigma_max) in [(1, 4), (2, 3), (3, 2)] {
                let found: HashSet<Tile> = find_ps(&r, tau, sigma_max).unwrap().into_iter().map(|c| c.tile).collect();
                let brute: HashSet<Tile> = (1..=sigma_max).flat_map(|s| ps_tiles_brute(&r, tau, s)).collect();
                assert_eq!(found, brute, "rule {r} tau {tau}");
            }
        }
    }

    #[test]
    fn identity_rule_has_no_temporal_period_above_one() {
        let id = Rule::from_fn(3, |_, b| b).unwrap();
        for tau in 2..=4 {
            assert!(find_ps(&id, tau, 4).unwrap().is_empty());
        }
    }

    #[test]
    fn fixed_point_rules_at_n2() {
        let count = enumerate_rules(2, DEFAULT_RULE_CAP)
            .unwrap()
            .filter(|r| !find_ps(r, 1, 1).unwrap().is_empty())
            .count();
        assert_eq!(count, 12);
    }

    #[test]
    fn wrps_subset_of_ps() {
        for seed in 0..1000 {
            let r = random_rule(3, seed).unwrap();
            for tau in 1..=3 {
                let ps: HashSet<Tile> = find_ps(&r, tau, 3).unwrap().into_iter().map(|c| c.tile).collect();
                for w in find_wrps(&r, tau, 3).unwrap() {
                    assert!(ps.contains(&w.tile));
                    assert!(w.is_deciding());
                    assert!(w.tile.periodic_columns().is_empty());
                }
                let deciding: HashSet<Tile> =
                    find_ps(&r, tau, 3).unwrap().into_iter().filter(|c| c.is_deciding()).map(|c| c.tile).collect();
                let wrps: HashSet<Tile> = find_wrps(&r, tau, 3).unwrap().into_iter().map(|c| c.tile).collect();
                assert_eq!(deciding, wrps);
            }
        }
    }

    #[test]
    fn single_cell_wrps_matches_direct_scan() {
        let mut via_digraph = 0;
        let mut direct = 0;
        for r in enumerate_rules(3, DEFAULT_RULE_CAP).unwrap() {
            if !find_wrps(&r, 1, 1).unwrap().is_empty() {
                via_digraph += 1;
            }
            let attracting = (0..3).any(|a| {
                r.apply(a, a) == a
                    && (0..3).all(|c0| {
                        let mut c = c0;
                        for _ in 0..3 {
                            c = r.apply(a, c);
                        }
                        c == a
                    })
            });
            if attracting {
                direct += 1;
            }
        }
        assert_eq!(via_digraph, direct);
        assert!(direct > 0);
    }

    #[test]
    fn subset_restriction_and_caps() {
        let r = worked();
        let cfg = SearchConfig { node_cap: 100, state_subset: Some(vec![0, 1, 2]) };
        assert_eq!(find_wrps_with(&r, 3, 6, &cfg).unwrap(), find_wrps(&r, 3, 6).unwrap());
        let cfg = SearchConfig { node_cap: 10, state_subset: None };
        assert!(matches!(find_ps_with(&r, 3, 6, &cfg), Err(Error::CapExceeded { .. })));
        let cfg = SearchConfig { node_cap: 100, state_subset: Some(vec![1, 2]) };
        for c in find_ps_with(&r, 3, 6, &cfg).unwrap() {
            assert!(!c.tile.states().contains(&0));
        }
    }

    #[test]
    fn record_json_uses_tile_text() {
        let r = worked();
        let rec = find_wrps(&r, 3, 6).unwrap().into_iter().find(|c| c.tile.sigma() == 6).unwrap();
        let v: serde_json::Value = serde_json::to_value(&rec).unwrap();
        assert_eq!(v["labels"].as_array().unwrap().len(), 6);
        assert_eq!(v["deciding"], serde_json::json!([true, true, true, true, true, true]));
        assert!(v["tile"].as_str().unwrap().starts_with("3 6 3\n"));
    }
}
