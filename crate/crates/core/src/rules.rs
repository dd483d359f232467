//! Rules `f: Z_n x Z_n -> Z_n` of 2-neighbor cellular automata.
//!
//! A rule is named by listing its values for all pairs in reverse
//! alphabetical order, from `(n-1, n-1)` down to `(0, 0)`. For `n <= 10` the
//! name is a digit string (`102222210`); for larger `n` it is a list of
//! comma-separated decimal values.

use std::fmt;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// A cell state, `0..n`.
pub type State = u16;

/// Default cap on the size of exhaustive rule enumerations.
pub const DEFAULT_RULE_CAP: u64 = 100_000_000;

/// Local update table of an `n`-state, 2-neighbor rule.
///
/// The table is stored densely with `f(a, b)` at index `a * n + b`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RuleJson", into = "RuleJson")]
pub struct Rule {
    n: usize,
    table: Vec<State>,
}

impl Rule {
    /// Builds a rule from a table indexed by `a * n + b`.
    pub fn from_table(n: usize, table: Vec<State>) -> Result<Self> {
        if n < 2 {
            return Err(Error::StateCount(n));
        }
        if table.len() != n * n {
            return Err(Error::RuleArity { n, expected: n * n, found: table.len() });
        }
        if let Some((position, v)) = table.iter().enumerate().find(|(_, &v)| v as usize >= n) {
            return Err(Error::RuleDigit { n, position, value: v.to_string() });
        }
        Ok(Rule { n, table })
    }

    /// Builds a rule from a closure `f(a, b)`.
    pub fn from_fn(n: usize, f: impl Fn(State, State) -> State) -> Result<Self> {
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n as State {
            for b in 0..n as State {
                table.push(f(a, b));
            }
        }
        Self::from_table(n, table)
    }

    /// Builds a rule from values listed in reverse alphabetical order.
    pub fn from_name_values(n: usize, values: &[State]) -> Result<Self> {
        if n < 2 {
            return Err(Error::StateCount(n));
        }
        if values.len() != n * n {
            return Err(Error::RuleArity { n, expected: n * n, found: values.len() });
        }
        let mut table = vec![0; n * n];
        for (k, &v) in values.iter().enumerate() {
            if v as usize >= n {
                return Err(Error::RuleDigit { n, position: k, value: v.to_string() });
            }
            table[n * n - 1 - k] = v;
        }
        Ok(Rule { n, table })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn apply(&self, a: State, b: State) -> State {
        self.table[a as usize * self.n + b as usize]
    }

    /// Raw table indexed by `a * n + b`.
    pub fn table(&self) -> &[State] {
        &self.table
    }

    /// Values in reverse alphabetical order (the order used by rule names).
    pub fn name_values(&self) -> Vec<State> {
        self.table.iter().rev().copied().collect()
    }

    /// Returns a copy with `f(a, b) = v`.
    pub fn with_value(&self, a: State, b: State, v: State) -> Rule {
        let mut out = self.clone();
        out.table[a as usize * self.n + b as usize] = v;
        out
    }
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rule(n={}, {})", self.n, format_rule(self))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rule(self))
    }
}

#[derive(Serialize, Deserialize)]
struct RuleJson {
    n: usize,
    table: Vec<State>,
}

impl TryFrom<RuleJson> for Rule {
    type Error = Error;
    fn try_from(j: RuleJson) -> Result<Self> {
        Rule::from_name_values(j.n, &j.table)
    }
}

impl From<Rule> for RuleJson {
    fn from(r: Rule) -> Self {
        RuleJson { n: r.n, table: r.name_values() }
    }
}

/// Parses a rule name for an `n`-state rule.
///
/// Digit strings are accepted for `n <= 10`; comma-separated decimal values
/// are accepted for any `n`.
pub fn parse_rule(name: &str, n: usize) -> Result<Rule> {
    if n < 2 {
        return Err(Error::StateCount(n));
    }
    let name = name.trim();
    let values: Vec<State> = if name.contains(',') {
        name.split(',')
            .enumerate()
            .map(|(position, tok)| {
                let tok = tok.trim();
                tok.parse::<State>()
                    .ok()
                    .filter(|&v| (v as usize) < n)
                    .ok_or_else(|| Error::RuleDigit { n, position, value: tok.to_string() })
            })
            .collect::<Result<_>>()?
    } else {
        if n > 10 && !name.is_empty() {
            return Err(Error::DigitNameUnsupported(n));
        }
        name.chars()
            .enumerate()
            .map(|(position, c)| {
                c.to_digit(10)
                    .filter(|&d| (d as usize) < n)
                    .map(|d| d as State)
                    .ok_or_else(|| Error::RuleDigit { n, position, value: c.to_string() })
            })
            .collect::<Result<_>>()?
    };
    Rule::from_name_values(n, &values)
}

/// Formats a rule as its name: digits for `n <= 10`, comma-separated otherwise.
pub fn format_rule(rule: &Rule) -> String {
    let values = rule.name_values();
    if rule.n <= 10 {
        values.iter().map(|v| char::from(b'0' + *v as u8)).collect()
    } else {
        values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
    }
}

/// Uniformly random rule drawn from `rng`; entries are drawn in table order.
pub fn random_rule_with<R: RngCore + ?Sized>(n: usize, rng: &mut R) -> Result<Rule> {
    if n < 2 {
        return Err(Error::StateCount(n));
    }
    let table = (0..n * n).map(|_| rng::below(rng, n as u32) as State).collect();
    Ok(Rule { n, table })
}

/// Uniformly random rule, deterministic in `seed` (stream 0 of the seed).
pub fn random_rule(n: usize, seed: u64) -> Result<Rule> {
    random_rule_with(n, &mut rng::stream(seed, 0))
}

/// Number of `n`-state rules, `n^(n^2)`, as a float (may be huge).
pub fn rule_space_size(n: usize) -> f64 {
    (n as f64).powf((n * n) as f64)
}

/// Iterator over every `n`-state rule in lexicographic order of names.
pub struct RuleEnumerator {
    n: usize,
    digits: Vec<State>,
    done: bool,
}

impl Iterator for RuleEnumerator {
    type Item = Rule;

    fn next(&mut self) -> Option<Rule> {
        if self.done {
            return None;
        }
        let rule = Rule::from_name_values(self.n, &self.digits).expect("digits in range");
        // odometer over name digits, last position fastest
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if (self.digits[i] as usize) < self.n {
                break;
            }
            self.digits[i] = 0;
        }
        Some(rule)
    }
}

/// Enumerates all `n`-state rules, refusing when `n^(n^2)` exceeds `cap`.
pub fn enumerate_rules(n: usize, cap: u64) -> Result<RuleEnumerator> {
    if n < 2 {
        return Err(Error::StateCount(n));
    }
    let size = rule_space_size(n);
    if size > cap as f64 {
        return Err(Error::CapExceeded { size, cap });
    }
    Ok(RuleEnumerator { n, digits: vec![0; n * n], done: false })
}

/// Rule number `index` in name-lexicographic order.
pub fn rule_at(n: usize, mut index: u64) -> Result<Rule> {
    let mut values = vec![0 as State; n * n];
    for v in values.iter_mut().rev() {
        *v = (index % n as u64) as State;
        index /= n as u64;
    }
    Rule::from_name_values(n, &values)
}
