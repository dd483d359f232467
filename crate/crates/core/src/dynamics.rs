//! Finite-window evolution, the agreement frontier and expansion velocity.
//!
//! Configurations evolve by `x_{t+1}(i) = f(x_t(i-1), x_t(i))`. A window holds
//! the states of a finite run of sites; one step loses its leftmost site, so
//! every state a window reports is the true value on the infinite lattice.
//!
//! The periodic background of a tile is `xi_t(i) = a[t mod tau][i mod sigma]`.
//! A proper configuration agrees with it at every site `i < 0`. Its frontier
//! `s_t` is the largest site up to which it still agrees with the background.

use std::io::Write;

use serde::Serialize;

use crate::decidability::decides;
use crate::error::{Error, Result};
use crate::labelgraph::Label;
use crate::rng;
use crate::rules::{Rule, State};
use crate::tiles::{validate_ps_tile, Tile};

/// States at sites `offset .. offset + cells.len()` at time `time`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Window {
    pub offset: i64,
    pub time: usize,
    pub cells: Vec<State>,
}

impl Window {
    pub fn new(offset: i64, time: usize, cells: Vec<State>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::WindowExhausted { width: 0, steps: 0 });
        }
        Ok(Window { offset, time, cells })
    }

    /// The background of `tile` on sites `offset .. offset + width` at time `time`.
    pub fn periodic(tile: &Tile, time: usize, offset: i64, width: usize) -> Self {
        let cells = (0..width as i64).map(|k| background(tile, time, offset + k)).collect();
        Window { offset, time, cells }
    }

    /// A proper configuration at time 0 on sites `left .. right`: the
    /// background at sites `< 0`, `perturbation` from site 0 on.
    pub fn proper(tile: &Tile, perturbation: &Perturbation, left: i64, right: i64) -> Result<Self> {
        if right <= left {
            return Err(Error::WindowExhausted { width: 0, steps: 0 });
        }
        let width = right.max(0) as usize;
        let init = perturbation.sites(tile, width)?;
        let cells = (left..right).map(|x| if x < 0 { background(tile, 0, x) } else { init[x as usize] }).collect();
        Ok(Window { offset: left, time: 0, cells })
    }

    pub fn width(&self) -> usize {
        self.cells.len()
    }

    /// State at site `x`, if the window covers it.
    pub fn get(&self, x: i64) -> Option<State> {
        let k = x - self.offset;
        (k >= 0 && (k as usize) < self.cells.len()).then(|| self.cells[k as usize])
    }

    pub fn right_edge(&self) -> i64 {
        self.offset + self.cells.len() as i64 - 1
    }
}

/// `xi_t(x)` for the tile's periodic solution.
#[inline]
pub fn background(tile: &Tile, t: usize, x: i64) -> State {
    tile.get(t % tile.tau(), x.rem_euclid(tile.sigma() as i64) as usize)
}

/// Advances a window `steps` times. Each step drops the leftmost site.
pub fn evolve(rule: &Rule, window: &Window, steps: usize) -> Result<Window> {
    if steps >= window.width() {
        return Err(Error::WindowExhausted { width: window.width(), steps });
    }
    let mut cells = window.cells.clone();
    for _ in 0..steps {
        for k in 0..cells.len() - 1 {
            cells[k] = rule.apply(cells[k], cells[k + 1]);
        }
        cells.pop();
    }
    // the update above writes site x+1 into slot x; the window moved right by `steps`
    Ok(Window { offset: window.offset + steps as i64, time: window.time + steps, cells })
}

/// Largest `x` in the window with every window site `y <= x` equal to the
/// background at the window's time; `None` if the leftmost site already differs.
pub fn frontier(tile: &Tile, window: &Window) -> Option<i64> {
    let first_bad = (0..window.width())
        .find(|&k| window.cells[k] != background(tile, window.time, window.offset + k as i64));
    match first_bad {
        Some(0) => None,
        Some(k) => Some(window.offset + k as i64 - 1),
        None => Some(window.right_edge()),
    }
}

/// `2^(-min |x|)` over sites where the windows differ, 0 if they agree on
/// their common range.
pub fn metric(x: &Window, y: &Window) -> Result<f64> {
    let lo = x.offset.max(y.offset);
    let hi = x.right_edge().min(y.right_edge());
    if x.time != y.time || lo > hi {
        return Err(Error::WindowMismatch);
    }
    let closest = (lo..=hi).filter(|&s| x.get(s) != y.get(s)).map(|s| s.unsigned_abs()).min();
    Ok(match closest {
        None => 0.0,
        Some(d) => 0.5f64.powi(d.min(2000) as i32),
    })
}

/// How the sites `x >= 0` of a proper configuration are filled at time 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Perturbation {
    /// Independent uniform states, drawn site by site from stream 0 of `seed`.
    Uniform { seed: u64 },
    /// Every site `x >= 0` in the given state.
    Constant(State),
    /// Explicit states at sites `0, 1, ...`; the background beyond them.
    Cells(Vec<State>),
    /// The background except for one site.
    SingleCell { site: usize, state: State },
}

impl Perturbation {
    /// Initial states of sites `0 .. width`.
    pub fn sites(&self, tile: &Tile, width: usize) -> Result<Vec<State>> {
        let n = tile.n();
        let check = |s: State| if (s as usize) < n { Ok(s) } else { Err(Error::LabelState { n, state: s }) };
        Ok(match self {
            Perturbation::Uniform { seed } => {
                let mut r = rng::stream(*seed, 0);
                (0..width).map(|_| rng::below(&mut r, n as u32) as State).collect()
            }
            Perturbation::Constant(s) => vec![check(*s)?; width],
            Perturbation::Cells(cells) => {
                for &s in cells {
                    check(s)?;
                }
                (0..width).map(|x| cells.get(x).copied().unwrap_or_else(|| background(tile, 0, x as i64))).collect()
            }
            Perturbation::SingleCell { site, state } => {
                check(*state)?;
                (0..width).map(|x| if x == *site { *state } else { background(tile, 0, x as i64) }).collect()
            }
        })
    }
}

/// Frontier trace of one proper configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VelocityEstimate {
    /// `s_0, ..., s_T`.
    pub trace: Vec<i64>,
    /// `min s_t / t` over `T/2 <= t <= T`.
    pub v_hat: f64,
    /// `1 / (tau n)` when every column decides its right neighbour.
    pub certified_bound: Option<f64>,
    /// The trace hit the site cap, so it is a lower bound beyond that point.
    pub truncated: bool,
}

impl VelocityEstimate {
    pub fn horizon(&self) -> usize {
        self.trace.len() - 1
    }

    pub fn final_frontier(&self) -> i64 {
        *self.trace.last().expect("trace has s_0")
    }

    /// Writes the trace as CSV with columns `t,s_t`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::InvalidArgument(format!("csv: {e}"));
        w.write_record(["t", "s_t"]).map_err(io)?;
        for (t, s) in self.trace.iter().enumerate() {
            w.write_record([t.to_string(), s.to_string()]).map_err(io)?;
        }
        w.flush().map_err(|e| Error::InvalidArgument(format!("csv: {e}")))?;
        Ok(())
    }
}

fn check_ps(rule: &Rule, tile: &Tile) -> Result<()> {
    if !tile.is_consistent_with(rule) {
        return Err(Error::NotPeriodicSolution("a cell disagrees with the rule".into()));
    }
    if let Some(v) = validate_ps_tile(tile).violations.first() {
        return Err(Error::NotPeriodicSolution(format!("{v:?}")));
    }
    Ok(())
}

/// Whether every column of the tile decides the column to its right.
pub fn is_weakly_robust(rule: &Rule, tile: &Tile) -> bool {
    let cols: Vec<Label> = tile.columns().into_iter().map(|c| Label::new(tile.n(), c).expect("tile states")).collect();
    let sigma = cols.len();
    (0..sigma).all(|j| decides(rule, &cols[j], &cols[(j + 1) % sigma]))
}

/// Shortest admissible horizon, `10 tau n`.
pub fn minimum_horizon(rule: &Rule, tile: &Tile) -> usize {
    10 * tile.tau() * rule.n()
}

/// Runs a proper configuration for `horizon` steps and records `s_t`.
pub fn measure_velocity(rule: &Rule, tile: &Tile, perturbation: &Perturbation, horizon: usize) -> Result<VelocityEstimate> {
    measure_velocity_capped(rule, tile, perturbation, horizon, 4 * horizon + 64)
}

/// As [`measure_velocity`], following at most `max_sites` sites right of the origin.
///
/// Sites `< 0` never change, and once every site up to `x - 1` agrees with
/// the background from time `L(x-1)` on, site `x` agrees forever from the
/// first `t >= L(x-1)` at which it agrees. So `s_t = max {x : L(x) <= t}`,
/// and each site only has to be simulated up to its own lock time `L(x)`.
pub fn measure_velocity_capped(
    rule: &Rule,
    tile: &Tile,
    perturbation: &Perturbation,
    horizon: usize,
    max_sites: usize,
) -> Result<VelocityEstimate> {
    check_ps(rule, tile)?;
    let minimum = minimum_horizon(rule, tile);
    if horizon < minimum {
        return Err(Error::Horizon { horizon, minimum });
    }
    let init = perturbation.sites(tile, max_sites)?;
    // prev[t] = state of site x-1 at time t, valid for t < prev_lock
    let mut prev: Vec<State> = Vec::new();
    let mut prev_lock = 0usize;
    let mut locks: Vec<usize> = Vec::new();
    for (x, &c0) in init.iter().enumerate() {
        let x = x as i64;
        let mut series = Vec::with_capacity(prev_lock + 1);
        let mut c = c0;
        let mut lock = None;
        #[allow(clippy::needless_range_loop)] // prev is only read for t < prev_lock
        for t in 0..=horizon {
            if t >= prev_lock && c == background(tile, t, x) {
                lock = Some(t);
                break;
            }
            series.push(c);
            let left = if t < prev_lock { prev[t] } else { background(tile, t, x - 1) };
            c = rule.apply(left, c);
        }
        match lock {
            Some(l) => {
                locks.push(l);
                prev = series;
                prev_lock = l;
            }
            None => break,
        }
    }
    let truncated = locks.len() == max_sites;
    let mut trace = Vec::with_capacity(horizon + 1);
    let mut x = 0usize;
    for t in 0..=horizon {
        while x < locks.len() && locks[x] <= t {
            x += 1;
        }
        trace.push(x as i64 - 1);
    }
    let v_hat = (horizon / 2..=horizon)
        .filter(|&t| t > 0)
        .map(|t| trace[t] as f64 / t as f64)
        .fold(f64::INFINITY, f64::min);
    let certified_bound = is_weakly_robust(rule, tile).then(|| 1.0 / (tile.tau() * rule.n()) as f64);
    Ok(VelocityEstimate { trace, v_hat, certified_bound, truncated })
}

/// Frontier trace by plain window evolution, for sites `< width`.
///
/// The window starts `horizon + 1` sites left of the origin so that site
/// `-1` is still covered at the horizon.
pub fn frontier_trace_by_evolution(
    rule: &Rule,
    tile: &Tile,
    perturbation: &Perturbation,
    horizon: usize,
    width: usize,
) -> Result<Vec<i64>> {
    check_ps(rule, tile)?;
    let mut w = Window::proper(tile, perturbation, -(horizon as i64) - 1, width as i64)?;
    let mut trace = Vec::with_capacity(horizon + 1);
    for t in 0..=horizon {
        if t > 0 {
            w = evolve(rule, &w, 1)?;
        }
        trace.push(frontier(tile, &w).expect("sites left of the origin follow the background"));
    }
    Ok(trace)
}

/// For a periodic solution that is not weakly robust: a single-cell
/// perturbation at the right neighbour of a non-deciding column, with a state
/// whose iteration never meets the decided label. The frontier stays put.
pub fn blocking_perturbation(rule: &Rule, tile: &Tile) -> Result<Option<Perturbation>> {
    check_ps(rule, tile)?;
    let (tau, sigma, n) = (tile.tau(), tile.sigma(), rule.n());
    for j in 0..sigma {
        let a = tile.column(j);
        let b = tile.column(j + 1);
        for c0 in 0..n as State {
            let mut c = c0;
            let meets = (0..n * tau + tau).any(|k| {
                let hit = c == b[k % tau];
                c = rule.apply(a[k % tau], c);
                hit
            });
            if !meets {
                return Ok(Some(Perturbation::SingleCell { site: j + 1, state: c0 }));
            }
        }
    }
    Ok(None)
}
