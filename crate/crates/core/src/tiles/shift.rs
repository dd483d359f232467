//! Circular shifts of words (rows of length sigma, labels of length tau).

use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::rules::State;

/// The circular shift `a_0 a_1 ... -> a_i a_{i+1} ...` on words of a fixed length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CircularShift {
    pub offset: usize,
    pub len: usize,
}

impl CircularShift {
    pub fn new(offset: usize, len: usize) -> Self {
        assert!(len > 0, "circular shift on empty words");
        CircularShift { offset: offset % len, len }
    }

    pub fn identity(len: usize) -> Self {
        Self::new(0, len)
    }

    /// Smallest `k >= 1` with `pi^k = id` on all words of this length.
    pub fn order(&self) -> usize {
        self.len / gcd(self.len, self.offset)
    }

    pub fn apply(&self, word: &[State]) -> Vec<State> {
        apply_shift(word, self.offset)
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.len - self.offset, self.len)
    }
}

/// Rotates `word` left by `offset`: result`[k]` = word`[(k + offset) mod len]`.
pub fn apply_shift(word: &[State], offset: usize) -> Vec<State> {
    if word.is_empty() {
        return Vec::new();
    }
    let len = word.len();
    (0..len).map(|k| word[(k + offset) % len]).collect()
}

/// Smallest period `p` (dividing the length) with `w[k] = w[k + p mod len]`.
pub fn minimal_period(word: &[State]) -> usize {
    let len = word.len();
    (1..=len)
        .filter(|p| len.is_multiple_of(*p))
        .find(|&p| (0..len).all(|k| word[k] == word[(k + p) % len]))
        .unwrap_or(len)
}

pub fn is_aperiodic(word: &[State]) -> bool {
    minimal_period(word) == word.len()
}

/// Offset of a circular shift taking `from` to `to`, if any.
pub fn shift_between(from: &[State], to: &[State]) -> Option<usize> {
    if from.len() != to.len() {
        return None;
    }
    let len = from.len();
    (0..len.max(1)).find(|&i| (0..len).all(|k| from[(k + i) % len] == to[k]))
}

/// All shifts of length-`len` words that have order exactly `d`.
pub fn shifts_with_order(len: usize, d: usize) -> Vec<CircularShift> {
    (0..len).map(|i| CircularShift::new(i, len)).filter(|s| s.order() == d).collect()
}

/// Distinct words `B` with `A = pi(B)` for some shift `pi` of order `d`.
pub fn preimages_with_order(word: &[State], d: usize) -> Vec<Vec<State>> {
    let mut out: Vec<Vec<State>> = shifts_with_order(word.len(), d)
        .into_iter()
        .map(|s| s.inverse().apply(word))
        .collect();
    out.sort();
    out.dedup();
    out
}
