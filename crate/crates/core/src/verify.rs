//! Self-checks run by `wrps verify`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::decidability::{
    combinatorial_identity_s, count_d_exhaustive, decides, decides_by_simulation, p_decides_simple, DEFAULT_LAD_CAP,
};
use crate::dynamics::{frontier_trace_by_evolution, measure_velocity, Perturbation};
use crate::error::{Error, Result};
use crate::experiments::{conjecture_scan, exhaustive_probability, PeriodSet, ScanMode};
use crate::labelgraph::{find_wrps, Label};
use crate::rng;
use crate::rules::{enumerate_rules, parse_rule, random_rule_with, State, DEFAULT_RULE_CAP};
use crate::tiles::{count_simple_tiles, simple_tile_census, Tile, DEFAULT_TILE_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Formulas,
    Oracles,
    Conjectures,
    All,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "formulas" => Ok(Suite::Formulas),
            "oracles" => Ok(Suite::Oracles),
            "conjectures" => Ok(Suite::Conjectures),
            "all" => Ok(Suite::All),
            _ => Err(Error::InvalidArgument(format!("unknown suite {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}/{}: {}", self.suite, self.name, self.detail)
    }
}

fn check(suite: &'static str, name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Check {
    Check { suite, name: name.into(), pass, detail: detail.into() }
}

pub fn run(suite: Suite) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    if matches!(suite, Suite::Formulas | Suite::All) {
        out.extend(formulas()?);
    }
    if matches!(suite, Suite::Oracles | Suite::All) {
        out.extend(oracles()?);
    }
    if matches!(suite, Suite::Conjectures | Suite::All) {
        out.extend(conjectures()?);
    }
    Ok(out)
}

fn formulas() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (n, tau) in [(2, 1), (2, 2), (3, 1), (3, 2), (4, 1), (4, 2)] {
        let c = count_d_exhaustive(n, tau, DEFAULT_LAD_CAP)?;
        out.push(check(
            "formulas",
            format!("lad-count n={n} tau={tau}"),
            c.matches,
            format!("{} of {}, formula {}", c.count, c.total, c.formula),
        ));
    }
    let p = p_decides_simple(3, 2)?;
    out.push(check(
        "formulas",
        "deciding-probability n=3 tau=2",
        p.joint.to_string() == "5/81" && p.conditional.to_string() == "5/9",
        format!("joint {}, conditional {}", p.joint, p.conditional),
    ));
    let mut bad = 0;
    let mut total = 0;
    for n in 2..=5 {
        for m in 1..=4 {
            for k in 0..n {
                let v = combinatorial_identity_s(n, m, k)?;
                total += 1;
                bad += (v.sum != v.closed) as usize;
            }
        }
    }
    out.push(check("formulas", "nested-sum identity", bad == 0, format!("{bad} mismatches in {total}")));
    for (n, tau, sigma) in [(3, 1, 1), (4, 2, 2), (4, 2, 1), (5, 2, 2)] {
        let census = simple_tile_census(n, tau, sigma, DEFAULT_TILE_CAP)?;
        let mut ok = true;
        for s in 1..=n {
            let formula = count_simple_tiles(n, tau, sigma, s).unwrap_or(0);
            ok &= census.get(&s).copied().unwrap_or(0) == formula;
        }
        out.push(check("formulas", format!("simple-tiles {n},{tau},{sigma}"), ok, format!("{census:?}")));
    }
    let single = PeriodSet::new([(1, 1)])?;
    for (n, expect) in [(2, "7/16"), (3, "217/729")] {
        let e = exhaustive_probability(n, &single, DEFAULT_RULE_CAP)?;
        let got = e.exact().expect("exhaustive").to_string();
        out.push(check("formulas", format!("fixed-point n={n}"), got == expect, format!("{got}, expected {expect}")));
    }
    Ok(out)
}

fn oracles() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let rule = parse_rule("102222210", 3)?;
    let tile = Tile::from_rows(3, &[[0, 2, 2, 2, 1, 1], [2, 2, 1, 1, 0, 2], [1, 1, 0, 2, 2, 2]])?;
    let found = find_wrps(&rule, 3, 6)?;
    out.push(check(
        "oracles",
        "worked tile",
        found.iter().any(|r| r.tile == tile.canonical()),
        format!("{} WRPS with tau = 3", found.len()),
    ));

    let mut mismatches = 0;
    let mut cases = 0;
    for tau in 1..=2 {
        let labels: Vec<Label> = (0..1usize << tau)
            .map(|c| Label::new(2, (0..tau).map(|i| (c >> i & 1) as State).collect()).expect("binary label"))
            .collect();
        for r in enumerate_rules(2, DEFAULT_RULE_CAP)? {
            for a in &labels {
                for b in &labels {
                    cases += 1;
                    mismatches += (decides(&r, a, b) != decides_by_simulation(&r, a, b)) as usize;
                }
            }
        }
    }
    let mut g = rng::stream(0, 0);
    for _ in 0..10_000 {
        let n = 3 + rng::below(&mut g, 2) as usize;
        let tau = 1 + rng::below(&mut g, 3) as usize;
        let r = random_rule_with(n, &mut g)?;
        let mut draw = || Label::new(n, (0..tau).map(|_| rng::below(&mut g, n as u32) as State).collect());
        let (a, b) = (draw()?, draw()?);
        cases += 1;
        mismatches += (decides(&r, &a, &b) != decides_by_simulation(&r, &a, &b)) as usize;
    }
    out.push(check("oracles", "simulation vs LAD", mismatches == 0, format!("{mismatches} mismatches in {cases}")));

    let p = Perturbation::Uniform { seed: 1 };
    let v = measure_velocity(&rule, &tile, &p, 180)?;
    let plain = frontier_trace_by_evolution(&rule, &tile, &p, 180, 1024)?;
    out.push(check(
        "oracles",
        "lock-time velocity vs evolution",
        v.trace == plain,
        format!("v_hat {:.4}, bound {:?}", v.v_hat, v.certified_bound),
    ));
    Ok(out)
}

fn conjectures() -> Result<Vec<Check>> {
    let s = conjecture_scan(3, 3, 3, ScanMode::Exhaustive)?;
    Ok(vec![
        check(
            "conjectures",
            "rank bound n=3 tau,sigma<=3",
            s.counterexamples.is_empty(),
            format!("{} tiles over {} rules, {} counterexamples", s.tiles_checked, s.rules, s.counterexamples.len()),
        ),
        check(
            "conjectures",
            "rank bound proved cases",
            s.proved_case_failures() == 0,
            format!("{} tiles with tau = 2 or sigma = 2", s.proved_case_checked),
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_parse() {
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn formulas_and_oracles_pass() {
        for c in run(Suite::Formulas).unwrap().into_iter().chain(run(Suite::Oracles).unwrap()) {
            assert!(c.pass, "{c}");
        }
    }
}
