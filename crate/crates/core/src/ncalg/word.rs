use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Position `(i, j)` of a generator `u_ij`, 1-based. The derived order is
/// row-major.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GeneratorIndex {
    pub row: usize,
    pub col: usize,
}

impl GeneratorIndex {
    pub fn new(row: usize, col: usize, n: usize) -> Result<Self> {
        if row == 0 || col == 0 || row > n || col > n {
            return Err(Error::IndexOutOfRange(format!("u[{},{}] with N = {}", row, col, n)));
        }
        Ok(GeneratorIndex { row, col })
    }

    pub fn letter(self, n: usize) -> u8 {
        ((self.row - 1) * n + (self.col - 1)) as u8
    }

    pub fn from_letter(letter: u8, n: usize) -> Self {
        let l = letter as usize;
        GeneratorIndex { row: l / n + 1, col: l % n + 1 }
    }
}

/// A word in the generators, stored as row-major letter codes.
///
/// `Ord` is degree-lexicographic and only serves as a stable storage and
/// print order; the rewriting order lives in [`MonomialOrder`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: u8) -> Self {
        Word(vec![l])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    /// Nondecreasing in row-major order.
    pub fn is_sorted(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// `prefix ++ middle ++ suffix` where prefix and suffix are slices of self.
    pub fn splice(&self, start: usize, end: usize, middle: &[u8]) -> Word {
        let mut v = Vec::with_capacity(self.len() - (end - start) + middle.len());
        v.extend_from_slice(&self.0[..start]);
        v.extend_from_slice(middle);
        v.extend_from_slice(&self.0[end..]);
        Word(v)
    }

    pub fn indices(&self, n: usize) -> Vec<GeneratorIndex> {
        self.0.iter().map(|&l| GeneratorIndex::from_letter(l, n)).collect()
    }

    pub fn display(&self, n: usize) -> String {
        if self.is_empty() {
            return "1".into();
        }
        self.indices(n)
            .iter()
            .map(|g| format!("u[{},{}]", g.row, g.col))
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The rewriting order: degree, then the weight `sum i*j` over the
/// letters `u_ij`, then row-major lexicographic.
///
/// The weight term makes the diagonal word `u_11 u_22 ... u_NN` the
/// leading word of the quantum determinant, while every quadratic
/// relation still sorts a descending pair into an ascending one.
#[derive(Clone, Copy, Debug)]
pub struct MonomialOrder {
    n: usize,
}

impl MonomialOrder {
    pub fn new(n: usize) -> Self {
        MonomialOrder { n }
    }

    pub fn letter_weight(&self, l: u8) -> u64 {
        let g = GeneratorIndex::from_letter(l, self.n);
        (g.row * g.col) as u64
    }

    pub fn weight(&self, w: &[u8]) -> u64 {
        w.iter().map(|&l| self.letter_weight(l)).sum()
    }

    pub fn key(&self, w: &Word) -> MonomialKey {
        MonomialKey { degree: w.len(), weight: self.weight(&w.0), word: w.clone() }
    }

    pub fn cmp(&self, a: &Word, b: &Word) -> Ordering {
        a.len()
            .cmp(&b.len())
            .then_with(|| self.weight(&a.0).cmp(&self.weight(&b.0)))
            .then_with(|| a.0.cmp(&b.0))
    }
}

/// Sort key realizing [`MonomialOrder`] through the derived `Ord`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonomialKey {
    pub degree: usize,
    pub weight: u64,
    pub word: Word,
}

impl fmt::Display for GeneratorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u[{},{}]", self.row, self.col)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_major_letters() {
        let n = 3;
        let a = GeneratorIndex::new(1, 3, n).unwrap();
        let b = GeneratorIndex::new(2, 1, n).unwrap();
        assert!(a < b);
        assert!(a.letter(n) < b.letter(n));
        assert_eq!(GeneratorIndex::from_letter(b.letter(n), n), b);
        assert!(GeneratorIndex::new(1, 4, n).is_err());
    }

    #[test]
    fn determinant_word_leads() {
        let n = 2;
        let ord = MonomialOrder::new(n);
        let l = |i, j| GeneratorIndex::new(i, j, n).unwrap().letter(n);
        let diag = Word(vec![l(1, 1), l(2, 2)]);
        let anti = Word(vec![l(1, 2), l(2, 1)]);
        assert_eq!(ord.cmp(&diag, &anti), Ordering::Greater);
        // quadratic orientation still sorts
        let desc = Word(vec![l(2, 1), l(1, 1)]);
        let asc = Word(vec![l(1, 1), l(2, 1)]);
        assert_eq!(ord.cmp(&desc, &asc), Ordering::Greater);
    }
}
