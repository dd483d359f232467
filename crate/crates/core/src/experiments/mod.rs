//! Ensemble studies over random rules.
//!
//! The central quantity is the probability that a uniformly random `n`-state
//! rule has a weakly robust periodic solution with `(tau, sigma)` in a given
//! period set. It is computed exactly by enumerating every rule for small `n`
//! and estimated by Monte Carlo otherwise, stratified by the lag and rank of
//! the tiles found.

mod report;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{gcd, phi};
use crate::error::{Error, Result};
use crate::labelgraph::{find_ps_with, find_wrps_with, CycleRecord, SearchConfig};
use crate::rng;
use crate::rules::{format_rule, random_rule_with, rule_at, rule_space_size, Rule};
use crate::stats::{Proportion, Z_99};
use crate::tiles::{check_rank_conjecture, tile_stats, RankCheck};

pub use report::{ExperimentReport, ReportRow};

/// A finite nonempty set of `(tau, sigma)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PeriodSet {
    pairs: BTreeSet<(usize, usize)>,
}

impl PeriodSet {
    pub fn new<I: IntoIterator<Item = (usize, usize)>>(pairs: I) -> Result<Self> {
        let pairs: BTreeSet<(usize, usize)> = pairs.into_iter().collect();
        if pairs.is_empty() {
            return Err(Error::PeriodSet("empty".into()));
        }
        if let Some(&(t, s)) = pairs.iter().find(|&&(t, s)| t == 0 || s == 0) {
            return Err(Error::PeriodSet(format!("({t}, {s}) has a zero period")));
        }
        Ok(PeriodSet { pairs })
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn contains(&self, tau: usize, sigma: usize) -> bool {
        self.pairs.contains(&(tau, sigma))
    }

    /// Largest spatial period wanted for each temporal period.
    fn sigma_max_by_tau(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for &(t, s) in &self.pairs {
            let e = m.entry(t).or_insert(0);
            *e = s.max(*e);
        }
        m
    }
}

/// Parses `"1x1,2x2"`.
impl FromStr for PeriodSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let pairs = s
            .split(',')
            .map(|p| {
                let (t, g) = p.trim().split_once('x').ok_or_else(|| Error::PeriodSet(format!("{p:?} is not TAUxSIGMA")))?;
                let parse = |v: &str| v.trim().parse::<usize>().map_err(|_| Error::PeriodSet(format!("bad number {v:?}")));
                Ok((parse(t)?, parse(g)?))
            })
            .collect::<Result<Vec<_>>>()?;
        PeriodSet::new(pairs)
    }
}

impl fmt::Display for PeriodSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(|(t, s)| format!("{t}x{s}")).collect();
        f.write_str(&parts.join(","))
    }
}

/// Every WRPS of `rule` whose periods lie in `periods`.
pub fn wrps_in_periods(rule: &Rule, periods: &PeriodSet, config: &SearchConfig) -> Result<Vec<CycleRecord>> {
    in_periods(rule, periods, config, find_wrps_with)
}

/// Every PS of `rule` whose periods lie in `periods`.
pub fn ps_in_periods(rule: &Rule, periods: &PeriodSet, config: &SearchConfig) -> Result<Vec<CycleRecord>> {
    in_periods(rule, periods, config, find_ps_with)
}

type Search = fn(&Rule, usize, usize, &SearchConfig) -> Result<Vec<CycleRecord>>;

fn in_periods(rule: &Rule, periods: &PeriodSet, config: &SearchConfig, search: Search) -> Result<Vec<CycleRecord>> {
    let mut out = Vec::new();
    for (tau, sigma_max) in periods.sigma_max_by_tau() {
        for rec in search(rule, tau, sigma_max, config)? {
            if periods.contains(tau, rec.tile.sigma()) {
                out.push(rec);
            }
        }
    }
    Ok(out)
}

/// One WRPS of `rule` with periods in `periods`, if any.
pub fn exists_wrps(rule: &Rule, periods: &PeriodSet) -> Result<Option<CycleRecord>> {
    Ok(wrps_in_periods(rule, periods, &SearchConfig::default())?.into_iter().next())
}

/// `c(T, Sigma) = sum of phi(sigma)` over pairs with `sigma | tau`.
///
/// For such a pair the expected number of simple WRPS tiles with the minimal
/// state count `tau` is `phi(sigma) C(n, tau) (tau-1)! n^-tau (tau/n + o(1/n))`,
/// which is `phi(sigma)/n + o(1/n)`. Without such a pair the leading order is
/// `1/n^x` with `x = min sigma/gcd(tau, sigma) > 1`, returned in the error.
pub fn asymptotic_constant(periods: &PeriodSet) -> Result<usize> {
    let c: usize = periods.pairs().filter(|&(t, s)| t % s == 0).map(|(_, s)| phi(s)).sum();
    if c == 0 {
        let x = periods.pairs().map(|(t, s)| s / gcd(t, s)).min().expect("period sets are nonempty");
        return Err(Error::NoDivisiblePair { x });
    }
    Ok(c)
}

/// `(tau, sigma, lag, rank)` of a WRPS tile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Stratum {
    pub tau: usize,
    pub sigma: usize,
    pub lag: usize,
    pub rank: usize,
}

/// Rules having a WRPS, and rules having a PS, in a stratum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StratumCount {
    #[serde(flatten)]
    pub stratum: Stratum,
    pub count: u64,
    pub ps_count: u64,
}

/// Frequency of rules with a WRPS in the period set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbabilityEstimate {
    pub n: usize,
    pub periods: String,
    /// Rules with at least one WRPS in the period set.
    pub hits: u64,
    /// Rules with at least one PS in the period set.
    pub ps_hits: u64,
    /// Rules examined.
    pub total: u64,
    /// Whether every rule was examined.
    pub exhaustive: bool,
    pub seed: Option<u64>,
    pub strata: Vec<StratumCount>,
}

impl ProbabilityEstimate {
    pub fn proportion(&self) -> Proportion {
        Proportion::new(self.hits, self.total)
    }

    pub fn frequency(&self) -> f64 {
        self.proportion().estimate()
    }

    /// Wilson interval; a point interval when exhaustive.
    pub fn interval(&self, z: f64) -> (f64, f64) {
        if self.exhaustive {
            let p = self.frequency();
            (p, p)
        } else {
            self.proportion().wilson(z)
        }
    }

    /// `n * P` and its interval.
    pub fn scaled(&self, z: f64) -> (f64, f64, f64) {
        let n = self.n as f64;
        let (lo, hi) = self.interval(z);
        (n * self.frequency(), n * lo, n * hi)
    }

    /// The exact fraction for exhaustive runs.
    pub fn exact(&self) -> Option<BigRational> {
        self.exhaustive.then(|| BigRational::new(BigInt::from(self.hits), BigInt::from(self.total)))
    }

    pub fn stratum(&self, s: Stratum) -> u64 {
        self.strata.iter().find(|c| c.stratum == s).map_or(0, |c| c.count)
    }
}

/// Per stratum: (rules with a WRPS, rules with a PS).
#[derive(Default)]
struct Tally {
    hits: u64,
    ps_hits: u64,
    total: u64,
    strata: BTreeMap<Stratum, (u64, u64)>,
}

impl Tally {
    fn add(&mut self, (wrps, ps): (BTreeSet<Stratum>, BTreeSet<Stratum>)) {
        self.total += 1;
        self.hits += !wrps.is_empty() as u64;
        self.ps_hits += !ps.is_empty() as u64;
        for k in wrps {
            self.strata.entry(k).or_default().0 += 1;
        }
        for k in ps {
            self.strata.entry(k).or_default().1 += 1;
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.hits += other.hits;
        self.ps_hits += other.ps_hits;
        self.total += other.total;
        for (k, (w, p)) in other.strata {
            let e = self.strata.entry(k).or_default();
            e.0 += w;
            e.1 += p;
        }
        self
    }
}

fn strata(records: &[CycleRecord]) -> BTreeSet<Stratum> {
    records
        .iter()
        .map(|r| {
            let st = tile_stats(&r.tile);
            Stratum { tau: r.tile.tau(), sigma: r.tile.sigma(), lag: st.lag, rank: st.rank }
        })
        .collect()
}

/// Strata of the rule's WRPS and of its PS in `periods`.
fn analyze(rule: &Rule, periods: &PeriodSet) -> Result<(BTreeSet<Stratum>, BTreeSet<Stratum>)> {
    let config = SearchConfig::default();
    let wrps = wrps_in_periods(rule, periods, &config)?;
    let ps = ps_in_periods(rule, periods, &config)?;
    Ok((strata(&wrps), strata(&ps)))
}

fn finish(n: usize, periods: &PeriodSet, tally: Tally, exhaustive: bool, seed: Option<u64>) -> ProbabilityEstimate {
    ProbabilityEstimate {
        n,
        periods: periods.to_string(),
        hits: tally.hits,
        ps_hits: tally.ps_hits,
        total: tally.total,
        exhaustive,
        seed,
        strata: tally.strata.into_iter().map(|(stratum, (count, ps_count))| StratumCount { stratum, count, ps_count }).collect(),
    }
}

/// Exact fraction of `n`-state rules with a WRPS in `periods`, by enumeration.
pub fn exhaustive_probability(n: usize, periods: &PeriodSet, cap: u64) -> Result<ProbabilityEstimate> {
    if n < 2 {
        return Err(Error::StateCount(n));
    }
    let size = rule_space_size(n);
    if size > cap as f64 {
        return Err(Error::CapExceeded { size, cap });
    }
    let tally = (0..size as u64)
        .into_par_iter()
        .map(|i| -> Result<Tally> {
            let mut t = Tally::default();
            t.add(analyze(&rule_at(n, i)?, periods)?);
            Ok(t)
        })
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
    Ok(finish(n, periods, tally, true, None))
}

/// Samples per random stream in Monte Carlo runs.
const CHUNK: u64 = rng::CHUNK;

/// Frequency of rules with a WRPS in `periods` over `samples` random rules.
///
/// Chunk `c` of `CHUNK` consecutive samples draws its rules from stream `c`.
pub fn monte_carlo_probability(n: usize, periods: &PeriodSet, samples: u64, seed: u64) -> Result<ProbabilityEstimate> {
    if samples == 0 {
        return Err(Error::NoSamples);
    }
    if n < 2 {
        return Err(Error::StateCount(n));
    }
    let tally = (0..samples.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| -> Result<Tally> {
            let mut r = rng::stream(seed, c);
            let mut t = Tally::default();
            for _ in 0..CHUNK.min(samples - c * CHUNK) {
                t.add(analyze(&random_rule_with(n, &mut r)?, periods)?);
            }
            Ok(t)
        })
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
    Ok(finish(n, periods, tally, false, Some(seed)))
}

/// Per-stratum frequency row of [`lag_stratified_expectation`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StratumRow {
    #[serde(flatten)]
    pub stratum: Stratum,
    pub count: u64,
    pub total: u64,
    pub freq: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

/// Frequencies of WRPS with periods `(tau, sigma)` per lag and rank.
/// `samples = None` enumerates every rule.
pub fn lag_stratified_expectation(
    n: usize,
    tau: usize,
    sigma: usize,
    samples: Option<u64>,
    seed: u64,
) -> Result<Vec<StratumRow>> {
    let periods = PeriodSet::new([(tau, sigma)])?;
    let est = match samples {
        None => exhaustive_probability(n, &periods, crate::rules::DEFAULT_RULE_CAP)?,
        Some(m) => monte_carlo_probability(n, &periods, m, seed)?,
    };
    Ok(est
        .strata
        .iter()
        .map(|c| {
            let p = Proportion::new(c.count, est.total);
            let (ci_lo, ci_hi) = if est.exhaustive { (p.estimate(), p.estimate()) } else { p.wilson(Z_99) };
            StratumRow { stratum: c.stratum, count: c.count, total: est.total, freq: p.estimate(), ci_lo, ci_hi }
        })
        .collect())
}

/// Rules to scan in [`conjecture_scan`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ScanMode {
    Exhaustive,
    Sample { samples: u64, seed: u64 },
}

/// A WRPS tile violating `rank >= x - lag`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub rule: String,
    pub tile: String,
    pub check: RankCheck,
}

/// Outcome of checking the rank bound on every WRPS tile found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureScan {
    pub n: usize,
    pub tau_max: usize,
    pub sigma_max: usize,
    pub rules: u64,
    /// (rule, tile) pairs checked.
    pub tiles_checked: u64,
    /// Checked pairs with `tau = 2` or `sigma = 2`.
    pub proved_case_checked: u64,
    /// Checked pairs where the bound is met with an explicit index set.
    pub index_sets: u64,
    pub counterexamples: Vec<Counterexample>,
}

impl ConjectureScan {
    pub fn proved_case_failures(&self) -> usize {
        self.counterexamples.iter().filter(|c| c.check.proved_case).count()
    }
}

#[derive(Default)]
struct ScanTally {
    rules: u64,
    tiles: u64,
    proved: u64,
    index_sets: u64,
    bad: Vec<Counterexample>,
}

impl ScanTally {
    fn add(&mut self, rule: &Rule, tau_max: usize, sigma_max: usize) -> Result<()> {
        self.rules += 1;
        for tau in 1..=tau_max {
            for rec in find_wrps_with(rule, tau, sigma_max, &SearchConfig::default())? {
                let check = check_rank_conjecture(&rec.tile);
                self.tiles += 1;
                self.proved += check.proved_case as u64;
                self.index_sets += check.index_set.is_some() as u64;
                if !check.holds {
                    self.bad.push(Counterexample { rule: format_rule(rule), tile: rec.tile.to_text(), check });
                }
            }
        }
        Ok(())
    }

    fn merge(mut self, o: ScanTally) -> ScanTally {
        self.rules += o.rules;
        self.tiles += o.tiles;
        self.proved += o.proved;
        self.index_sets += o.index_sets;
        self.bad.extend(o.bad);
        self
    }
}

/// Runs the rank check on every WRPS tile with `tau <= tau_max`,
/// `sigma <= sigma_max` of the scanned rules.
pub fn conjecture_scan(n: usize, tau_max: usize, sigma_max: usize, mode: ScanMode) -> Result<ConjectureScan> {
    if n < 2 {
        return Err(Error::StateCount(n));
    }
    let tally = match mode {
        ScanMode::Exhaustive => {
            let size = rule_space_size(n);
            let cap = crate::rules::DEFAULT_RULE_CAP;
            if size > cap as f64 {
                return Err(Error::CapExceeded { size, cap });
            }
            (0..size as u64)
                .into_par_iter()
                .map(|i| -> Result<ScanTally> {
                    let mut t = ScanTally::default();
                    t.add(&rule_at(n, i)?, tau_max, sigma_max)?;
                    Ok(t)
                })
                .try_reduce(ScanTally::default, |a, b| Ok(a.merge(b)))?
        }
        ScanMode::Sample { samples, seed } => {
            if samples == 0 {
                return Err(Error::NoSamples);
            }
            (0..samples.div_ceil(CHUNK))
                .into_par_iter()
                .map(|c| -> Result<ScanTally> {
                    let mut r = rng::stream(seed, c);
                    let mut t = ScanTally::default();
                    for _ in 0..CHUNK.min(samples - c * CHUNK) {
                        t.add(&random_rule_with(n, &mut r)?, tau_max, sigma_max)?;
                    }
                    Ok(t)
                })
                .try_reduce(ScanTally::default, |a, b| Ok(a.merge(b)))?
        }
    };
    let mut counterexamples = tally.bad;
    counterexamples.sort_by(|a, b| (&a.rule, &a.tile).cmp(&(&b.rule, &b.tile)));
    Ok(ConjectureScan {
        n,
        tau_max,
        sigma_max,
        rules: tally.rules,
        tiles_checked: tally.tiles,
        proved_case_checked: tally.proved,
        index_sets: tally.index_sets,
        counterexamples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::{enumerate_rules, parse_rule, DEFAULT_RULE_CAP};
    use crate::tiles::Tile;

    /// Direct scan: a state `a` with `f(a,a) = a` that every state reaches under `c -> f(a,c)`.
    fn has_attracting_fixed_point(r: &Rule) -> bool {
        let n = r.n() as u16;
        (0..n).any(|a| {
            r.apply(a, a) == a
                && (0..n).all(|c0| {
                    let mut c = c0;
                    for _ in 0..n {
                        c = r.apply(a, c);
                    }
                    c == a
                })
        })
    }

    fn single() -> PeriodSet {
        PeriodSet::new([(1, 1)]).unwrap()
    }

    #[test]
    fn period_sets() {
        let p: PeriodSet = "2x2, 1x1".parse().unwrap();
        assert_eq!(p.to_string(), "1x1,2x2");
        assert!("".parse::<PeriodSet>().is_err());
        assert!("2x0".parse::<PeriodSet>().is_err());
        assert!("22".parse::<PeriodSet>().is_err());
        assert!(PeriodSet::new([]).is_err());
    }

    #[test]
    fn constants() {
        assert_eq!(asymptotic_constant(&single()).unwrap(), 1);
        assert_eq!(asymptotic_constant(&"2x2".parse().unwrap()).unwrap(), 1);
        for tau in 1..8 {
            assert_eq!(asymptotic_constant(&PeriodSet::new([(tau, 1)]).unwrap()).unwrap(), 1);
        }
        assert_eq!(asymptotic_constant(&"2x2,2x1".parse().unwrap()).unwrap(), 2);
        assert_eq!(asymptotic_constant(&"6x3".parse().unwrap()).unwrap(), 2);
        assert!(matches!(asymptotic_constant(&"1x2".parse().unwrap()), Err(Error::NoDivisiblePair { x: 2 })));
        assert!(matches!(asymptotic_constant(&"2x3,1x2".parse().unwrap()), Err(Error::NoDivisiblePair { x: 2 })));
    }

    #[test]
    fn worked_rule_witness() {
        let r = parse_rule("102222210", 3).unwrap();
        let w = exists_wrps(&r, &"3x6".parse().unwrap()).unwrap().unwrap();
        let t = Tile::from_rows(3, &[[0, 2, 2, 2, 1, 1], [2, 2, 1, 1, 0, 2], [1, 1, 0, 2, 2, 2]]).unwrap();
        assert_eq!(w.tile, t.canonical());
        let zero = Rule::from_fn(3, |_, _| 0).unwrap();
        for sigma in 1..=4 {
            assert!(exists_wrps(&zero, &PeriodSet::new([(2, sigma)]).unwrap()).unwrap().is_none());
        }
    }

    #[test]
    fn single_cell_solutions_match_direct_scan() {
        for r in enumerate_rules(2, DEFAULT_RULE_CAP).unwrap() {
            assert_eq!(exists_wrps(&r, &single()).unwrap().is_some(), has_attracting_fixed_point(&r));
        }
        let direct = enumerate_rules(3, DEFAULT_RULE_CAP).unwrap().filter(has_attracting_fixed_point).count();
        for n in [2, 3] {
            let e = exhaustive_probability(n, &single(), DEFAULT_RULE_CAP).unwrap();
            // 1 - (1 - 1/n^2)^n
            let nn = (n * n) as u64;
            let expect = BigRational::new(
                BigInt::from(nn.pow(n as u32) - (nn - 1).pow(n as u32)),
                BigInt::from(nn.pow(n as u32)),
            );
            assert_eq!(e.exact().unwrap(), expect);
            if n == 3 {
                assert_eq!(e.hits as usize, direct);
            }
        }
        assert_eq!(exhaustive_probability(2, &single(), DEFAULT_RULE_CAP).unwrap().exact().unwrap().to_string(), "7/16");
    }

    #[test]
    fn monte_carlo_matches_exhaustive() {
        let exact = exhaustive_probability(2, &single(), DEFAULT_RULE_CAP).unwrap();
        let mc = monte_carlo_probability(2, &single(), 16 * 50, 3).unwrap();
        assert!(mc.proportion().z_score(exact.frequency()).abs() < 4.0);
        let exact = exhaustive_probability(3, &single(), DEFAULT_RULE_CAP).unwrap();
        let mc = monte_carlo_probability(3, &single(), 19683 * 10, 7).unwrap();
        let (lo, hi) = mc.interval(Z_99);
        assert!(lo <= exact.frequency() && exact.frequency() <= hi);
        assert!(matches!(monte_carlo_probability(3, &single(), 0, 1), Err(Error::NoSamples)));
    }

    #[test]
    fn monte_carlo_is_reproducible() {
        let p: PeriodSet = "1x1,2x1".parse().unwrap();
        let a = monte_carlo_probability(4, &p, 5000, 11).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| monte_carlo_probability(4, &p, 5000, 11).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn strata_are_consistent() {
        let p: PeriodSet = "2x1,1x1,2x2".parse().unwrap();
        let e = exhaustive_probability(3, &p, DEFAULT_RULE_CAP).unwrap();
        let max = e.strata.iter().map(|c| c.count).max().unwrap();
        assert!(e.hits >= max && e.ps_hits >= e.hits);
        assert!(e.strata.iter().all(|c| c.count <= c.ps_count));
        assert!(e.strata.iter().all(|c| p.contains(c.stratum.tau, c.stratum.sigma)));
        assert!(e.stratum(Stratum { tau: 1, sigma: 1, lag: 0, rank: 1 }) > 0);
        let rows = lag_stratified_expectation(3, 2, 1, None, 0).unwrap();
        assert!(!rows.is_empty());
        assert!(rows.iter().all(|r| r.stratum.tau == 2 && r.stratum.sigma == 1 && r.freq <= 1.0));
    }

    #[test]
    fn scan_small() {
        let s = conjecture_scan(2, 2, 2, ScanMode::Exhaustive).unwrap();
        assert_eq!(s.rules, 16);
        assert!(s.tiles_checked > 0);
        assert!(s.counterexamples.is_empty());
        let s = conjecture_scan(3, 2, 2, ScanMode::Sample { samples: 2000, seed: 1 }).unwrap();
        assert_eq!(s.rules, 2000);
        assert_eq!(s.proved_case_failures(), 0);
    }
}
