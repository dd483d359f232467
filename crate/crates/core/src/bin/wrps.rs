use std::io::{self, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use wrps::decidability::{count_d_exhaustive, DEFAULT_LAD_CAP};
use wrps::dynamics::{measure_velocity, minimum_horizon, Perturbation, VelocityEstimate};
use wrps::experiments::{
    asymptotic_constant, exhaustive_probability, monte_carlo_probability, ExperimentReport, PeriodSet,
    ProbabilityEstimate,
};
use wrps::labelgraph::{find_ps, find_wrps, CycleRecord};
use wrps::rules::{format_rule, parse_rule, DEFAULT_RULE_CAP};
use wrps::tiles::{count_simple_tiles, simple_tile_census, tile_stats, Tile, DEFAULT_TILE_CAP};
use wrps::verify::{self, Suite};
use wrps::Error;

const DEFAULT_SEED: u64 = 1;

#[derive(Parser)]
#[command(name = "wrps", version, about = "Periodic solutions of 2-neighbor cellular automata")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Seed for randomized steps; echoed in the output.
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    seed: u64,
    /// Worker threads; defaults to the available cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the PS and WRPS of one rule.
    AnalyzeRule {
        #[arg(long)]
        n: usize,
        /// Rule name: values in reverse alphabetical order of the pairs.
        #[arg(long)]
        rule: String,
        #[arg(long, default_value_t = 3)]
        tau_max: usize,
        #[arg(long, default_value_t = 6)]
        sigma_max: usize,
        #[arg(long)]
        wrps_only: bool,
        /// Measure the frontier of every WRPS for this many steps.
        #[arg(long)]
        velocity_horizon: Option<usize>,
    },
    /// Exact WRPS frequencies over every rule.
    Enumerate {
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        /// Period pairs as TAUxSIGMA, comma separated.
        #[arg(long, default_value = "1x1")]
        periods: String,
        #[arg(long, default_value_t = DEFAULT_RULE_CAP)]
        cap: u64,
    },
    /// Exhaustive LAD count against the closed form.
    CountLads {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        tau: usize,
        #[arg(long, default_value_t = DEFAULT_LAD_CAP)]
        cap: u64,
    },
    /// Simple-tile census against the closed form.
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        tau: usize,
        #[arg(long)]
        sigma: usize,
        #[arg(long, default_value_t = DEFAULT_TILE_CAP)]
        cap: u64,
    },
    /// Monte Carlo WRPS frequencies.
    Estimate {
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(long, default_value = "1x1")]
        periods: String,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
    /// Run a self-check suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

enum Failure {
    Usage(String),
    Run(String),
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::StateCount(_)
            | Error::RuleArity { .. }
            | Error::RuleDigit { .. }
            | Error::DigitNameUnsupported(_)
            | Error::PeriodSet(_)
            | Error::InvalidArgument(_)
            | Error::LabelState { .. }
            | Error::NoSimpleLabel { .. }
            | Error::Horizon { .. }
            | Error::NoSamples => Failure::Usage(e.to_string()),
            _ => Failure::Run(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("wrps: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Run(m)) => {
            eprintln!("wrps: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("wrps: {m}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let out = &mut io::stdout().lock();
    match &cli.cmd {
        Cmd::AnalyzeRule { n, rule, tau_max, sigma_max, wrps_only, velocity_horizon } => {
            analyze(cli, out, *n, rule, *tau_max, *sigma_max, *wrps_only, *velocity_horizon)
        }
        Cmd::Enumerate { n, periods, cap } => {
            let periods: PeriodSet = periods.parse()?;
            let start = Instant::now();
            let est = n.iter().map(|&n| exhaustive_probability(n, &periods, *cap)).collect::<Result<Vec<_>, _>>()?;
            report(cli, out, &est, &periods, None, *cap, start)
        }
        Cmd::Estimate { n, periods, samples } => {
            let periods: PeriodSet = periods.parse()?;
            let start = Instant::now();
            let est = n
                .iter()
                .map(|&n| monte_carlo_probability(n, &periods, *samples, cli.seed.wrapping_add(n as u64)))
                .collect::<Result<Vec<_>, _>>()?;
            report(cli, out, &est, &periods, Some(cli.seed), DEFAULT_RULE_CAP, start)
        }
        Cmd::CountLads { n, tau, cap } => {
            let c = count_d_exhaustive(*n, *tau, *cap)?;
            match cli.format {
                Format::Json => emit(out, serde_json::to_string(&c).expect("serializable")),
                Format::Csv => emit(out, csv_rows(&[&c])),
                Format::Text => emit(
                    out,
                    format!("n={} tau={}: {} of {} (formula {}) {}", c.n, c.tau, c.count, c.total, c.formula, verdict(c.matches)),
                ),
            }
        }
        Cmd::Census { n, tau, sigma, cap } => census(cli, out, *n, *tau, *sigma, *cap),
        Cmd::Verify { suite } => {
            let suite: Suite = suite.parse()?;
            let checks = verify::run(suite)?;
            match cli.format {
                Format::Json => emit(out, serde_json::to_string_pretty(&checks).expect("serializable")),
                Format::Csv => emit(out, csv_rows(&checks.iter().collect::<Vec<_>>())),
                Format::Text => emit(out, checks.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("\n")),
            }?;
            if checks.iter().all(|c| c.pass) {
                Ok(())
            } else {
                Err(Failure::Checks)
            }
        }
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn emit(out: &mut impl Write, text: String) -> Result<(), Failure> {
    let text = text.trim_end();
    writeln!(out, "{text}").map_err(|e| Failure::Run(e.to_string()))
}

fn csv_rows<T: Serialize>(rows: &[&T]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("flat rows");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
}

fn report(
    cli: &Cli,
    out: &mut impl Write,
    est: &[ProbabilityEstimate],
    periods: &PeriodSet,
    seed: Option<u64>,
    cap: u64,
    start: Instant,
) -> Result<(), Failure> {
    let mut rep = ExperimentReport::new(est, seed, cap, asymptotic_constant(periods).ok());
    rep.runtime_ms = Some(start.elapsed().as_millis() as u64);
    match cli.format {
        Format::Json => emit(out, rep.to_json()),
        Format::Csv => emit(out, rep.to_csv()?),
        Format::Text => {
            let mut s = format!("periods {}  seed {:?}  constant {:?}\n", rep.periods, rep.seed, rep.constant);
            for r in &rep.summary {
                let exact = r.exact.as_deref().map(|q| format!(" = {q}")).unwrap_or_default();
                s.push_str(&format!(
                    "n={:<3} WRPS {}/{}{}  PS {}  nP {:.4} [{:.4}, {:.4}]\n",
                    r.n, r.hits, r.total, exact, r.ps_hits, r.n_p, r.n_p_lo, r.n_p_hi
                ));
            }
            emit(out, s)
        }
    }
}

#[derive(Serialize)]
struct CensusRow {
    s: usize,
    count: u128,
    formula: u128,
    #[serde(rename = "match")]
    matches: bool,
}

fn census(cli: &Cli, out: &mut impl Write, n: usize, tau: usize, sigma: usize, cap: u64) -> Result<(), Failure> {
    let counts = simple_tile_census(n, tau, sigma, cap)?;
    let rows: Vec<CensusRow> = (1..=n)
        .filter_map(|s| {
            let formula = count_simple_tiles(n, tau, sigma, s).ok()?;
            let count = counts.get(&s).copied().unwrap_or(0);
            Some(CensusRow { s, count, formula, matches: count == formula })
        })
        .collect();
    let all = rows.iter().all(|r| r.matches) && counts.keys().all(|s| rows.iter().any(|r| r.s == *s));
    match cli.format {
        Format::Json => emit(
            out,
            serde_json::json!({ "n": n, "tau": tau, "sigma": sigma, "rows": rows, "match": all }).to_string(),
        ),
        Format::Csv => emit(out, csv_rows(&rows.iter().collect::<Vec<_>>())),
        Format::Text => {
            let mut s = String::new();
            for r in &rows {
                s.push_str(&format!("s={}: {} tiles, formula {} {}\n", r.s, r.count, r.formula, verdict(r.matches)));
            }
            emit(out, s)
        }
    }
}

#[derive(Serialize)]
struct Velocity {
    horizon: usize,
    v_hat: f64,
    certified_bound: Option<f64>,
    final_frontier: i64,
    truncated: bool,
}

#[derive(Serialize)]
struct Found {
    tau: usize,
    sigma: usize,
    wrps: bool,
    rows: Vec<String>,
    labels: Vec<String>,
    deciding: Vec<bool>,
    p: usize,
    s: usize,
    lag: usize,
    rank: usize,
    velocity: Option<Velocity>,
}

#[derive(Serialize)]
struct Analysis {
    n: usize,
    rule: String,
    tau_max: usize,
    sigma_max: usize,
    seed: u64,
    solutions: Vec<Found>,
}

fn digits(row: &[u16]) -> String {
    if row.iter().all(|&s| s < 10) {
        row.iter().map(|s| s.to_string()).collect()
    } else {
        row.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
    }
}

#[allow(clippy::too_many_arguments)]
fn analyze(
    cli: &Cli,
    out: &mut impl Write,
    n: usize,
    name: &str,
    tau_max: usize,
    sigma_max: usize,
    wrps_only: bool,
    horizon: Option<usize>,
) -> Result<(), Failure> {
    let rule = parse_rule(name, n)?;
    let mut records: Vec<CycleRecord> = Vec::new();
    for tau in 1..=tau_max {
        records.extend(if wrps_only { find_wrps(&rule, tau, sigma_max)? } else { find_ps(&rule, tau, sigma_max)? });
    }
    let mut traces: Vec<VelocityEstimate> = Vec::new();
    let mut solutions = Vec::new();
    for rec in records {
        let tile: &Tile = &rec.tile;
        let wrps = rec.is_deciding();
        let velocity = match horizon {
            Some(h) if wrps => {
                let h = h.max(minimum_horizon(&rule, tile));
                let v = measure_velocity(&rule, tile, &Perturbation::Uniform { seed: cli.seed }, h)?;
                let summary = Velocity {
                    horizon: v.horizon(),
                    v_hat: v.v_hat,
                    certified_bound: v.certified_bound,
                    final_frontier: v.final_frontier(),
                    truncated: v.truncated,
                };
                traces.push(v);
                Some(summary)
            }
            _ => None,
        };
        let st = tile_stats(tile);
        solutions.push(Found {
            tau: tile.tau(),
            sigma: tile.sigma(),
            wrps,
            rows: tile.rows().map(digits).collect(),
            labels: rec.labels.iter().map(|l| l.to_string()).collect(),
            deciding: rec.deciding.clone(),
            p: st.p,
            s: st.s,
            lag: st.lag,
            rank: st.rank,
            velocity,
        });
    }
    let a = Analysis { n, rule: format_rule(&rule), tau_max, sigma_max, seed: cli.seed, solutions };
    match cli.format {
        Format::Json => emit(out, serde_json::to_string_pretty(&a).expect("serializable")),
        Format::Csv => {
            // frontier trace of the first measured WRPS
            let Some(v) = traces.first() else {
                return Err(Failure::Usage("csv output needs --velocity-horizon and at least one WRPS".into()));
            };
            let mut buf = Vec::new();
            v.write_csv(&mut buf)?;
            emit(out, String::from_utf8(buf).expect("utf-8"))
        }
        Format::Text => {
            let mut s = format!("rule {} (n = {}), seed {}\n", a.rule, n, cli.seed);
            for f in &a.solutions {
                let kind = if f.wrps { "WRPS" } else { "PS" };
                s.push_str(&format!(
                    "{kind} tau={} sigma={} lag={} rank={} rows {}\n",
                    f.tau,
                    f.sigma,
                    f.lag,
                    f.rank,
                    f.rows.join("/")
                ));
                if let Some(v) = &f.velocity {
                    s.push_str(&format!("  v_hat {:.4} over {} steps, bound {:?}\n", v.v_hat, v.horizon, v.certified_bound));
                }
            }
            emit(out, s)
        }
    }
}
