//! The projection Φ onto a smaller quantum group (or the circle when N = 2)
//! and the conditional expectation `E(x) = (1 ⊗ hΦ)Δ(x)` onto the
//! quantized interval.

use std::collections::BTreeMap;

use super::algebra::Algebra;
use super::haar::haar_n2;
use super::poly::NcPoly;
use super::word::{GeneratorIndex, Word};
use crate::error::{Error, Result};
use crate::scalar::ScalarQ;

/// Image of Φ: an element of rank N − 1, or a Laurent polynomial in `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PhiImage {
    Rank(NcPoly),
    Circle(BTreeMap<i64, ScalarQ>),
}

/// Φ together with the algebra it lands in.
#[derive(Clone, Debug)]
pub struct Projection {
    source: Algebra,
    target: Option<Algebra>,
}

impl Projection {
    pub fn new(source: Algebra) -> Result<Self> {
        let n = source.rank();
        let target = if n >= 3 { Some(Algebra::with_bound(n - 1, source.degree_bound())?) } else { None };
        Ok(Projection { source, target })
    }

    pub fn source(&self) -> &Algebra {
        &self.source
    }

    pub fn target(&self) -> Option<&Algebra> {
        self.target.as_ref()
    }

    fn phi_word_circle(w: &Word) -> Option<i64> {
        let mut e = 0i64;
        for g in w.indices(2) {
            match (g.row, g.col) {
                (1, 1) => e += 1,
                (2, 2) => e -= 1,
                _ => return None,
            }
        }
        Some(e)
    }

    /// Φ on a word at N ≥ 3; `None` when the word is sent to zero.
    fn phi_word_rank(n: usize, w: &Word) -> Option<Word> {
        let mut out = Vec::with_capacity(w.len());
        for g in w.indices(n) {
            if g.row < n && g.col < n {
                out.push(GeneratorIndex { row: g.row, col: g.col }.letter(n - 1));
            } else if g.row != g.col {
                return None;
            }
        }
        Some(Word(out))
    }

    pub fn phi(&self, p: &NcPoly) -> Result<PhiImage> {
        let n = self.source.rank();
        match &self.target {
            None => {
                let mut out: BTreeMap<i64, ScalarQ> = BTreeMap::new();
                for (w, c) in p.terms() {
                    if let Some(e) = Projection::phi_word_circle(w) {
                        let v = out.get(&e).cloned().unwrap_or_default() + c.clone();
                        if v.is_zero() {
                            out.remove(&e);
                        } else {
                            out.insert(e, v);
                        }
                    }
                }
                Ok(PhiImage::Circle(out))
            }
            Some(t) => {
                let mut raw = NcPoly::zero(n - 1);
                for (w, c) in p.terms() {
                    if let Some(img) = Projection::phi_word_rank(n, w) {
                        raw.add_term(img, c.clone());
                    }
                }
                Ok(PhiImage::Rank(t.reduce(&raw)?))
            }
        }
    }

    /// `hΦ` on a single word of the source algebra.
    pub fn h_phi_word(&self, w: &Word) -> Result<ScalarQ> {
        let n = self.source.rank();
        match &self.target {
            None => Ok(match Projection::phi_word_circle(w) {
                Some(0) => ScalarQ::one(),
                _ => ScalarQ::zero(),
            }),
            Some(t) => {
                if n != 3 {
                    return Err(Error::UnsupportedRank(n));
                }
                match Projection::phi_word_rank(n, w) {
                    None => Ok(ScalarQ::zero()),
                    Some(img) => haar_n2(t, &NcPoly::word(2, img)),
                }
            }
        }
    }

    /// `E(x) = x_(1) · hΦ(x_(2))`, for N ∈ {2, 3}.
    pub fn cond_expectation(&self, p: &NcPoly) -> Result<NcPoly> {
        let n = self.source.rank();
        if n != 2 && n != 3 {
            return Err(Error::UnsupportedRank(n));
        }
        self.source.coproduct(p)?.slice_right(|w| self.h_phi_word(w))
    }
}

/// Writes `p` as `sum_k c_k y^k` if possible, by peeling off leading words.
pub fn as_polynomial_in(alg: &Algebra, p: &NcPoly, y: &NcPoly) -> Result<Option<Vec<ScalarQ>>> {
    let order = alg.system().order();
    let lead = |x: &NcPoly| x.terms().map(|(w, _)| w.clone()).max_by(|a, b| order.cmp(a, b));
    let dy = y.degree().max(1);
    let max_k = p.degree() / dy + 1;
    let mut powers = vec![alg.one()];
    for k in 1..=max_k {
        if alg.system().check_degree(k * y.degree()).is_err() {
            break;
        }
        powers.push(alg.mul(&powers[k - 1], y)?);
    }
    let mut rest = p.clone();
    let mut coeffs = vec![ScalarQ::zero(); powers.len()];
    while let Some(lw) = lead(&rest) {
        let k = match powers.iter().position(|pk| lead(pk).as_ref() == Some(&lw)) {
            Some(k) => k,
            None => return Ok(None),
        };
        let c = rest.coeff(&lw).checked_div(&powers[k].coeff(&lw))?;
        rest = rest.sub(&powers[k].scale(&c));
        coeffs[k] = &coeffs[k] + &c;
    }
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    Ok(Some(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_examples() {
        let a3 = Algebra::with_bound(3, 4).unwrap();
        let p3 = Projection::new(a3.clone()).unwrap();
        assert_eq!(p3.phi(&a3.generator(1, 3).unwrap()).unwrap(), PhiImage::Rank(NcPoly::zero(2)));
        assert_eq!(p3.phi(&a3.generator(2, 2).unwrap()).unwrap(), PhiImage::Rank(NcPoly::generator(2, 2, 2).unwrap()));
        let a2 = Algebra::with_bound(2, 4).unwrap();
        let p2 = Projection::new(a2.clone()).unwrap();
        let mut w = BTreeMap::new();
        w.insert(1, ScalarQ::one());
        assert_eq!(p2.phi(&a2.generator(1, 1).unwrap()).unwrap(), PhiImage::Circle(w));
    }

    #[test]
    fn expectation_of_x1_is_y1() {
        let a = Algebra::with_bound(2, 6).unwrap();
        let p = Projection::new(a.clone()).unwrap();
        let x1 = a.x(1).unwrap();
        assert_eq!(p.cond_expectation(&x1).unwrap(), a.y(1).unwrap());
        assert_eq!(p.cond_expectation(&a.one()).unwrap(), a.one());
    }
}
