use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::word::{GeneratorIndex, Word};
use crate::error::{Error, Result};
use crate::scalar::ScalarQ;

/// A finite linear combination of words with [`ScalarQ`] coefficients.
///
/// Values produced by [`crate::ncalg::Algebra`] are in normal form; the
/// raw arithmetic here (`concat_mul`, `add`, ...) does not reduce.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NcPoly {
    n: usize,
    terms: BTreeMap<Word, ScalarQ>,
}

impl NcPoly {
    pub fn zero(n: usize) -> Self {
        NcPoly { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        NcPoly::constant(n, ScalarQ::one())
    }

    pub fn constant(n: usize, c: ScalarQ) -> Self {
        NcPoly::term(n, Word::empty(), c)
    }

    pub fn term(n: usize, w: Word, c: ScalarQ) -> Self {
        let mut p = NcPoly::zero(n);
        p.add_term(w, c);
        p
    }

    pub fn word(n: usize, w: Word) -> Self {
        NcPoly::term(n, w, ScalarQ::one())
    }

    /// The generator `u_ij`.
    pub fn generator(n: usize, row: usize, col: usize) -> Result<Self> {
        let g = GeneratorIndex::new(row, col, n)?;
        Ok(NcPoly::word(n, Word::letter(g.letter(n))))
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &ScalarQ)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Word, ScalarQ> {
        self.terms
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Word, ScalarQ)>) -> Self {
        let mut p = NcPoly::zero(n);
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    pub fn coeff(&self, w: &Word) -> ScalarQ {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// Coefficient of the empty word.
    pub fn constant_term(&self) -> ScalarQ {
        self.coeff(&Word::empty())
    }

    /// The scalar value when the polynomial has no non-empty words.
    pub fn as_scalar(&self) -> Option<ScalarQ> {
        if self.terms.keys().all(|w| w.is_empty()) {
            Some(self.constant_term())
        } else {
            None
        }
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, w: Word, c: ScalarQ) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get() + &c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &NcPoly, c: &ScalarQ) {
        if c.is_zero() {
            return;
        }
        for (w, a) in &other.terms {
            self.add_term(w.clone(), a * c);
        }
    }

    pub fn add(&self, other: &NcPoly) -> NcPoly {
        let mut r = self.clone();
        r.add_scaled(other, &ScalarQ::one());
        r
    }

    pub fn sub(&self, other: &NcPoly) -> NcPoly {
        let mut r = self.clone();
        r.add_scaled(other, &ScalarQ::from_int(-1));
        r
    }

    pub fn scale(&self, c: &ScalarQ) -> NcPoly {
        if c.is_zero() {
            return NcPoly::zero(self.n);
        }
        NcPoly { n: self.n, terms: self.terms.iter().map(|(w, a)| (w.clone(), a * c)).collect() }
    }

    pub fn neg(&self) -> NcPoly {
        self.scale(&ScalarQ::from_int(-1))
    }

    /// Concatenation product without reduction.
    pub fn concat_mul(&self, other: &NcPoly) -> NcPoly {
        let mut r = NcPoly::zero(self.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                r.add_term(a.concat(b), ca * cb);
            }
        }
        r
    }

    /// Applies a coefficient map termwise, dropping zeros.
    pub fn map_coeffs(&self, f: impl Fn(&Word, &ScalarQ) -> ScalarQ) -> NcPoly {
        NcPoly::from_terms(self.n, self.terms.iter().map(|(w, c)| (w.clone(), f(w, c))))
    }

    pub fn to_json(&self) -> Vec<JsonTerm> {
        self.terms
            .iter()
            .map(|(w, c)| {
                let (num, den) = c.to_sparse_pair();
                JsonTerm {
                    word: w.indices(self.n).iter().map(|g| [g.row, g.col]).collect(),
                    coeff_num: num,
                    coeff_den: den,
                }
            })
            .collect()
    }

    pub fn from_json(n: usize, terms: &[JsonTerm]) -> Result<NcPoly> {
        let mut p = NcPoly::zero(n);
        for t in terms {
            let mut letters = Vec::with_capacity(t.word.len());
            for [i, j] in &t.word {
                letters.push(GeneratorIndex::new(*i, *j, n)?.letter(n));
            }
            let c = ScalarQ::from_sparse_pair(&t.coeff_num, &t.coeff_den)?;
            p.add_term(Word(letters), c);
        }
        Ok(p)
    }

    pub fn check_rank(&self, other: &NcPoly) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Shape(format!("rank {} vs rank {}", self.n, other.n)));
        }
        Ok(())
    }
}

/// One term of the canonical JSON serialization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub word: Vec<[usize; 2]>,
    pub coeff_num: String,
    pub coeff_den: String,
}

impl fmt::Display for NcPoly {
    /// Canonical print: terms in degree-lexicographic order, e.g.
    /// `1 + q^-1*u[1,2]*u[2,1]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            let (mut text, mut paren) = c.render();
            let negative = text.starts_with('-') && !paren;
            if negative {
                text = text[1..].to_string();
            }
            // A leading minus inside a sum stays inside the parentheses.
            if first {
                if negative {
                    f.write_str("-")?;
                }
            } else if negative {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            first = false;
            if w.is_empty() {
                if paren {
                    write!(f, "({})", text)?;
                } else {
                    f.write_str(&text)?;
                }
                continue;
            }
            if text == "1" {
                paren = false;
                text.clear();
            }
            if text.is_empty() {
                f.write_str(&w.display(self.n))?;
            } else if paren {
                write!(f, "({})*{}", text, w.display(self.n))?;
            } else {
                write!(f, "{}*{}", text, w.display(self.n))?;
            }
        }
        Ok(())
    }
}
