//! Tiles: the `tau x sigma` certificates of periodic solutions.
//!
//! Row `i` of a tile is the configuration at time `i`, column `j` is site `j`.
//! Under the update `x_{t+1}(j) = f(x_t(j-1), x_t(j))` a tile of a periodic
//! solution satisfies `a[i+1][j+1] = f(a[i][j], a[i][j+1])`, indices taken
//! mod `tau` and `sigma`.

mod census;
mod rank;
mod shift;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rules::{Rule, State};

pub use census::{
    count_simple_tiles, enumerate_simple_tiles, shared_state_break, simple_structure, simple_tile_census,
    SimpleStructure, StateBreak, DEFAULT_TILE_CAP,
};
pub use rank::{check_rank_conjecture, independent_columns, rank, RankCheck};
pub use shift::{
    apply_shift, is_aperiodic, minimal_period, preimages_with_order, shift_between, shifts_with_order,
    CircularShift,
};

/// A `tau x sigma` array of states in `Z_n`, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "TileJson", into = "TileJson")]
pub struct Tile {
    n: usize,
    tau: usize,
    sigma: usize,
    cells: Vec<State>,
}

impl Tile {
    pub fn new(n: usize, tau: usize, sigma: usize, cells: Vec<State>) -> Result<Self> {
        if tau == 0 || sigma == 0 {
            return Err(Error::MalformedTile(format!("empty tile {tau}x{sigma}")));
        }
        if cells.len() != tau * sigma {
            return Err(Error::MalformedTile(format!(
                "{} cells for a {tau}x{sigma} tile",
                cells.len()
            )));
        }
        if let Some(pos) = cells.iter().position(|&c| c as usize >= n) {
            return Err(Error::MalformedTile(format!(
                "cell ({}, {}) = {} is not a state of Z_{n}",
                pos / sigma,
                pos % sigma,
                cells[pos]
            )));
        }
        Ok(Tile { n, tau, sigma, cells })
    }

    pub fn from_rows<R: AsRef<[State]>>(n: usize, rows: &[R]) -> Result<Self> {
        let tau = rows.len();
        let sigma = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != sigma) {
            return Err(Error::MalformedTile("ragged rows".into()));
        }
        Self::new(n, tau, sigma, rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect())
    }

    /// Places the given labels on successive columns.
    pub fn from_columns<C: AsRef<[State]>>(n: usize, columns: &[C]) -> Result<Self> {
        let sigma = columns.len();
        let tau = columns.first().map_or(0, |c| c.as_ref().len());
        if columns.iter().any(|c| c.as_ref().len() != tau) {
            return Err(Error::MalformedTile("columns of different lengths".into()));
        }
        let mut cells = vec![0; tau * sigma];
        for (j, col) in columns.iter().enumerate() {
            for (i, &v) in col.as_ref().iter().enumerate() {
                cells[i * sigma + j] = v;
            }
        }
        Self::new(n, tau, sigma, cells)
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn tau(&self) -> usize {
        self.tau
    }
    pub fn sigma(&self) -> usize {
        self.sigma
    }
    pub fn cells(&self) -> &[State] {
        &self.cells
    }

    /// Cell `a[i][j]`, indices reduced mod `tau` and `sigma`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> State {
        self.cells[(i % self.tau) * self.sigma + (j % self.sigma)]
    }

    pub fn row(&self, i: usize) -> &[State] {
        let i = i % self.tau;
        &self.cells[i * self.sigma..(i + 1) * self.sigma]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[State]> {
        self.cells.chunks(self.sigma)
    }

    pub fn column(&self, j: usize) -> Vec<State> {
        (0..self.tau).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<State>> {
        (0..self.sigma).map(|j| self.column(j)).collect()
    }

    /// Rotation moving row `dr` and column `dc` to the origin.
    pub fn rotated(&self, dr: usize, dc: usize) -> Tile {
        let cells = (0..self.tau)
            .flat_map(|i| (0..self.sigma).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i + dr, j + dc))
            .collect();
        Tile { cells, ..*self }
    }

    /// Distinct states appearing in the tile.
    pub fn states(&self) -> BTreeSet<State> {
        self.cells.iter().copied().collect()
    }

    /// Distinct horizontal pairs `(a[i][j], a[i][j+1])`.
    pub fn pairs(&self) -> BTreeSet<(State, State)> {
        (0..self.tau)
            .flat_map(|i| (0..self.sigma).map(move |j| (i, j)))
            .map(|(i, j)| (self.get(i, j), self.get(i, j + 1)))
            .collect()
    }

    /// Whether `rule` reproduces every cell of the tile from the row above.
    pub fn is_consistent_with(&self, rule: &Rule) -> bool {
        rule.n() >= self.n
            && (0..self.tau).all(|i| {
                (0..self.sigma).all(|j| rule.apply(self.get(i, j), self.get(i, j + 1)) == self.get(i + 1, j + 1))
            })
    }

    /// Minimal-period check on each column.
    pub fn periodic_columns(&self) -> Vec<(usize, usize)> {
        (0..self.sigma)
            .filter_map(|j| {
                let p = minimal_period(&self.column(j));
                (p < self.tau).then_some((j, p))
            })
            .collect()
    }

    /// Lexicographically smallest (row-major) of all `tau * sigma` joint rotations.
    pub fn canonical(&self) -> Tile {
        let mut best = self.cells.clone();
        let mut buf = vec![0; self.cells.len()];
        for dr in 0..self.tau {
            for dc in 0..self.sigma {
                for i in 0..self.tau {
                    for j in 0..self.sigma {
                        buf[i * self.sigma + j] = self.get(i + dr, j + dc);
                    }
                }
                if buf < best {
                    best.copy_from_slice(&buf);
                }
            }
        }
        Tile { cells: best, ..*self }
    }

    /// Tile text format: `tau sigma n` followed by `tau` rows.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.tau, self.sigma, self.n);
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Tile> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::MalformedTile("missing header".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::MalformedTile(format!("bad header token {t:?}"))))
            .collect::<Result<_>>()?;
        let [tau, sigma, n] = dims[..] else {
            return Err(Error::MalformedTile("header must be `tau sigma n`".into()));
        };
        let mut cells = Vec::with_capacity(tau * sigma);
        for (i, line) in lines.enumerate() {
            let row: Vec<State> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::MalformedTile(format!("bad cell {t:?}"))))
                .collect::<Result<_>>()?;
            if row.len() != sigma {
                return Err(Error::MalformedTile(format!("row {i} has {} cells, expected {sigma}", row.len())));
            }
            cells.extend(row);
        }
        Tile::new(n, tau, sigma, cells)
    }
}

impl fmt::Debug for Tile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "Tile[n={}; {}]", self.n, rows.join(" / "))
    }
}

impl fmt::Display for Tile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_text().trim_end())
    }
}

impl FromStr for Tile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Tile::parse_text(s)
    }
}

#[derive(Serialize, Deserialize)]
struct TileJson {
    tau: usize,
    sigma: usize,
    n: usize,
    cells: Vec<Vec<State>>,
}

impl TryFrom<TileJson> for Tile {
    type Error = Error;
    fn try_from(j: TileJson) -> Result<Self> {
        let t = Tile::from_rows(j.n, &j.cells)?;
        if t.tau != j.tau || t.sigma != j.sigma {
            return Err(Error::MalformedTile("dimensions disagree with cells".into()));
        }
        Ok(t)
    }
}

impl From<Tile> for TileJson {
    fn from(t: Tile) -> Self {
        TileJson { tau: t.tau, sigma: t.sigma, n: t.n, cells: t.rows().map(<[State]>::to_vec).collect() }
    }
}

/// One reason a tile fails to be the tile of a periodic solution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// Equal horizontal pairs at `first` and `second` with different successors.
    AssignmentConflict { first: (usize, usize), second: (usize, usize) },
    /// A row with a smaller period.
    PeriodicRow { row: usize, period: usize },
    /// Rows repeat with a smaller temporal period.
    ReducibleTemporalPeriod { period: usize },
}

/// Result of [`validate_ps_tile`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks uniqueness of assignment, aperiodic rows and a minimal temporal period.
pub fn validate_ps_tile(tile: &Tile) -> ValidationReport {
    let mut violations = Vec::new();
    let n = tile.n;
    // first occurrence of each pair, indexed a * n + b
    let mut seen: Vec<Option<(usize, usize)>> = vec![None; n * n];
    'outer: for i in 0..tile.tau {
        for j in 0..tile.sigma {
            let key = tile.get(i, j) as usize * n + tile.get(i, j + 1) as usize;
            match seen[key] {
                None => seen[key] = Some((i, j)),
                Some((k, m)) => {
                    if tile.get(k + 1, m + 1) != tile.get(i + 1, j + 1) {
                        violations.push(Violation::AssignmentConflict { first: (k, m), second: (i, j) });
                        break 'outer;
                    }
                }
            }
        }
    }
    for (row, r) in tile.rows().enumerate() {
        let period = minimal_period(r);
        if period < tile.sigma {
            violations.push(Violation::PeriodicRow { row, period });
        }
    }
    let tau = tile.tau;
    if let Some(period) =
        (1..tau).filter(|p| tau.is_multiple_of(*p)).find(|&p| (0..tau).all(|i| tile.row(i) == tile.row(i + p)))
    {
        violations.push(Violation::ReducibleTemporalPeriod { period });
    }
    ValidationReport { violations }
}

/// Assignment number, state count, lag and rank of a tile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TileStats {
    pub p: usize,
    pub s: usize,
    pub lag: usize,
    pub rank: usize,
}

pub fn tile_stats(tile: &Tile) -> TileStats {
    let p = tile.pairs().len();
    let s = tile.states().len();
    TileStats { p, s, lag: p - s, rank: rank(tile) }
}

/// Zero lag.
pub fn is_simple(tile: &Tile) -> bool {
    tile.pairs().len() == tile.states().len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::parse_rule;

    pub(crate) fn worked_tile() -> Tile {
        Tile::from_rows(3, &[[0, 2, 2, 2, 1, 1], [2, 2, 1, 1, 0, 2], [1, 1, 0, 2, 2, 2]]).unwrap()
    }

    #[test]
    fn worked_tile_is_valid_and_consistent() {
        let t = worked_tile();
        assert!(validate_ps_tile(&t).is_valid());
        assert!(t.is_consistent_with(&parse_rule("102222210", 3).unwrap()));
        assert!(t.periodic_columns().is_empty());
    }

    #[test]
    fn invalid_tiles() {
        let t = Tile::from_rows(2, &[[0, 0]]).unwrap();
        assert_eq!(validate_ps_tile(&t).violations, vec![Violation::PeriodicRow { row: 0, period: 1 }]);
        let t = Tile::from_rows(2, &[[0], [0]]).unwrap();
        assert_eq!(validate_ps_tile(&t).violations, vec![Violation::ReducibleTemporalPeriod { period: 1 }]);
        // (0,1) -> 1 in row 0 but (0,1) -> 0 in row 1
        let t = Tile::from_rows(2, &[[0, 1], [0, 1], [1, 0]]).unwrap();
        let v = validate_ps_tile(&t).violations;
        assert!(matches!(v[0], Violation::AssignmentConflict { .. }), "{v:?}");
    }

    #[test]
    fn stats_of_reference_tiles() {
        let t1 = Tile::from_rows(4, &[[0, 1, 2, 3], [2, 3, 0, 1]]).unwrap();
        assert_eq!(tile_stats(&t1), TileStats { p: 4, s: 4, lag: 0, rank: 2 });
        assert!(is_simple(&t1));
        let t2 = Tile::from_rows(3, &[[0, 1, 2, 1], [2, 1, 0, 1]]).unwrap();
        assert_eq!(tile_stats(&t2), TileStats { p: 4, s: 3, lag: 1, rank: 1 });
        assert!(!is_simple(&t2));
        let t0 = Tile::from_rows(1, &[[0]]).unwrap();
        assert_eq!(tile_stats(&t0), TileStats { p: 1, s: 1, lag: 0, rank: 1 });
        assert!(is_simple(&t0));
    }

    #[test]
    fn canonical_form() {
        let a = Tile::from_rows(2, &[[1, 0], [0, 1]]).unwrap();
        let b = Tile::from_rows(2, &[[0, 1], [1, 0]]).unwrap();
        assert_eq!(a.canonical(), b);
        let t = worked_tile();
        assert_eq!(t.canonical(), t.rotated(0, 1).canonical());
        assert_eq!(t.canonical(), t.rotated(2, 5).canonical());
        assert_eq!(t.canonical().canonical(), t.canonical());
    }

    #[test]
    fn text_and_json_formats() {
        let t = worked_tile();
        assert_eq!(t.to_text(), "3 6 3\n0 2 2 2 1 1\n2 2 1 1 0 2\n1 1 0 2 2 2\n");
        assert_eq!(Tile::parse_text(&t.to_text()).unwrap(), t);
        let j = serde_json::to_string(&t).unwrap();
        assert_eq!(j, r#"{"tau":3,"sigma":6,"n":3,"cells":[[0,2,2,2,1,1],[2,2,1,1,0,2],[1,1,0,2,2,2]]}"#);
        assert_eq!(serde_json::from_str::<Tile>(&j).unwrap(), t);
        assert!(Tile::parse_text("2 2 2\n0 1\n").is_err());
        assert!(Tile::parse_text("1 2 2\n0 5\n").is_err());
        assert!(Tile::parse_text("1 2\n0 1\n").is_err());
    }
}
