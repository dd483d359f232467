//! Machine-readable experiment output.

use serde::Serialize;

use super::ProbabilityEstimate;
use crate::error::{Error, Result};
use crate::rng::PRNG_ID;
use crate::stats::{Proportion, Z_99};

/// One CSV row. Unstratified totals leave `tau..rank` empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub n: usize,
    pub tau: Option<usize>,
    pub sigma: Option<usize>,
    pub lag: Option<usize>,
    pub rank: Option<usize>,
    pub count: u64,
    pub total: u64,
    pub freq: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub seed: Option<u64>,
}

/// Per-`n` totals with the scaled quantity `n * P`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub n: usize,
    pub hits: u64,
    pub ps_hits: u64,
    pub total: u64,
    pub exhaustive: bool,
    pub exact: Option<String>,
    pub freq: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub n_p: f64,
    pub n_p_lo: f64,
    pub n_p_hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub version: &'static str,
    pub prng: &'static str,
    pub periods: String,
    pub seed: Option<u64>,
    pub rule_cap: u64,
    pub z: f64,
    /// `sum phi(sigma)` over pairs with `sigma | tau`, when there is one.
    pub constant: Option<usize>,
    /// Wall-clock time, filled in by the caller.
    pub runtime_ms: Option<u64>,
    pub summary: Vec<Summary>,
    pub rows: Vec<ReportRow>,
}

impl ExperimentReport {
    pub fn new(estimates: &[ProbabilityEstimate], seed: Option<u64>, rule_cap: u64, constant: Option<usize>) -> Self {
        let z = Z_99;
        let mut summary = Vec::new();
        let mut rows = Vec::new();
        for e in estimates {
            let (ci_lo, ci_hi) = e.interval(z);
            let (n_p, n_p_lo, n_p_hi) = e.scaled(z);
            summary.push(Summary {
                n: e.n,
                hits: e.hits,
                ps_hits: e.ps_hits,
                total: e.total,
                exhaustive: e.exhaustive,
                exact: e.exact().map(|q| q.to_string()),
                freq: e.frequency(),
                ci_lo,
                ci_hi,
                n_p,
                n_p_lo,
                n_p_hi,
            });
            rows.push(ReportRow {
                n: e.n,
                tau: None,
                sigma: None,
                lag: None,
                rank: None,
                count: e.hits,
                total: e.total,
                freq: e.frequency(),
                ci_lo,
                ci_hi,
                seed: e.seed,
            });
            for c in &e.strata {
                let p = Proportion::new(c.count, e.total);
                let (ci_lo, ci_hi) = if e.exhaustive { (p.estimate(), p.estimate()) } else { p.wilson(z) };
                rows.push(ReportRow {
                    n: e.n,
                    tau: Some(c.stratum.tau),
                    sigma: Some(c.stratum.sigma),
                    lag: Some(c.stratum.lag),
                    rank: Some(c.stratum.rank),
                    count: c.count,
                    total: e.total,
                    freq: p.estimate(),
                    ci_lo,
                    ci_hi,
                    seed: e.seed,
                });
            }
        }
        ExperimentReport {
            version: env!("CARGO_PKG_VERSION"),
            prng: PRNG_ID,
            periods: estimates.first().map(|e| e.periods.clone()).unwrap_or_default(),
            seed,
            rule_cap,
            z,
            constant,
            runtime_ms: None,
            summary,
            rows,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }

    /// Rows as CSV with header `n,tau,sigma,lag,rank,count,total,freq,ci_lo,ci_hi,seed`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}
