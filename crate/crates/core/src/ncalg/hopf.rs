use std::collections::BTreeMap;
use std::fmt;

use super::algebra::Algebra;
use super::poly::NcPoly;
use super::word::{GeneratorIndex, Word};
use crate::error::Result;
use crate::scalar::ScalarQ;

/// Element of the tensor square, each leg in normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor2 {
    n: usize,
    terms: BTreeMap<(Word, Word), ScalarQ>,
}

impl Tensor2 {
    pub fn zero(n: usize) -> Self {
        Tensor2 { n, terms: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Word, Word), &ScalarQ)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, left: Word, right: Word, c: ScalarQ) {
        if c.is_zero() {
            return;
        }
        let key = (left, right);
        let v = match self.terms.get(&key) {
            Some(old) => old + &c,
            None => c,
        };
        if v.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, v);
        }
    }

    /// Adds `c * a ⊗ b`.
    pub fn add_product(&mut self, a: &NcPoly, b: &NcPoly, c: &ScalarQ) {
        for (wa, ca) in a.terms() {
            for (wb, cb) in b.terms() {
                self.add_term(wa.clone(), wb.clone(), &(c * ca) * cb);
            }
        }
    }

    pub fn sub(&self, other: &Tensor2) -> Tensor2 {
        let mut out = self.clone();
        for ((l, r), c) in &other.terms {
            out.add_term(l.clone(), r.clone(), -c);
        }
        out
    }

    /// `(f ⊗ 1)` for a scalar functional `f` on words.
    pub fn slice_left(&self, mut f: impl FnMut(&Word) -> Result<ScalarQ>) -> Result<NcPoly> {
        let mut out = NcPoly::zero(self.n);
        for ((l, r), c) in &self.terms {
            let v = f(l)?;
            if !v.is_zero() {
                out.add_term(r.clone(), &v * c);
            }
        }
        Ok(out)
    }

    /// `(1 ⊗ f)` for a scalar functional `f` on words.
    pub fn slice_right(&self, mut f: impl FnMut(&Word) -> Result<ScalarQ>) -> Result<NcPoly> {
        let mut out = NcPoly::zero(self.n);
        for ((l, r), c) in &self.terms {
            let v = f(r)?;
            if !v.is_zero() {
                out.add_term(l.clone(), &v * c);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Tensor2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((l, r), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})*{} ⊗ {}", c, l.display(self.n), r.display(self.n))?;
        }
        Ok(())
    }
}

/// Element of the triple tensor power, used for coassociativity.
pub type Tensor3 = BTreeMap<(Word, Word, Word), ScalarQ>;

fn add3(t: &mut Tensor3, key: (Word, Word, Word), c: ScalarQ) {
    if c.is_zero() {
        return;
    }
    let v = match t.get(&key) {
        Some(old) => old + &c,
        None => c,
    };
    if v.is_zero() {
        t.remove(&key);
    } else {
        t.insert(key, v);
    }
}

impl Algebra {
    /// Coproduct of a single word: `sum_K u_{I,K} ⊗ u_{K,J}` with legs reduced.
    pub fn coproduct_word(&self, w: &Word) -> Result<Tensor2> {
        let n = self.rank();
        self.system().check_degree(w.len())?;
        let idx = w.indices(n);
        let m = idx.len();
        let mut out = Tensor2::zero(n);
        let mut ks = vec![1usize; m];
        loop {
            let left = Word(
                idx.iter().zip(&ks).map(|(g, &k)| GeneratorIndex { row: g.row, col: k }.letter(n)).collect(),
            );
            let right = Word(
                idx.iter().zip(&ks).map(|(g, &k)| GeneratorIndex { row: k, col: g.col }.letter(n)).collect(),
            );
            let l = self.normal_form_word(&left);
            let r = self.normal_form_word(&right);
            out.add_product(&l, &r, &ScalarQ::one());
            // odometer over k-tuples
            let mut p = 0;
            loop {
                if p == m {
                    return Ok(out);
                }
                ks[p] += 1;
                if ks[p] <= n {
                    break;
                }
                ks[p] = 1;
                p += 1;
            }
        }
    }

    pub fn coproduct(&self, p: &NcPoly) -> Result<Tensor2> {
        let mut out = Tensor2::zero(self.rank());
        for (w, c) in p.terms() {
            let t = self.coproduct_word(w)?;
            for ((l, r), tc) in t.terms {
                out.add_term(l, r, c * &tc);
            }
        }
        Ok(out)
    }

    /// `(Δ ⊗ 1)Δ(p)`.
    pub fn coproduct_left_twice(&self, p: &NcPoly) -> Result<Tensor3> {
        let mut out = Tensor3::new();
        for ((l, r), c) in self.coproduct(p)?.terms {
            for ((a, b), c2) in self.coproduct_word(&l)?.terms {
                add3(&mut out, (a, b, r.clone()), &c * &c2);
            }
        }
        Ok(out)
    }

    /// `(1 ⊗ Δ)Δ(p)`.
    pub fn coproduct_right_twice(&self, p: &NcPoly) -> Result<Tensor3> {
        let mut out = Tensor3::new();
        for ((l, r), c) in self.coproduct(p)?.terms {
            for ((a, b), c2) in self.coproduct_word(&r)?.terms {
                add3(&mut out, (l.clone(), a, b), &c * &c2);
            }
        }
        Ok(out)
    }

    /// Counit of a word: product of `δ_ij` over its letters.
    pub fn counit_word(&self, w: &Word) -> ScalarQ {
        let diag = w.indices(self.rank()).iter().all(|g| g.row == g.col);
        if diag {
            ScalarQ::one()
        } else {
            ScalarQ::zero()
        }
    }

    pub fn counit(&self, p: &NcPoly) -> ScalarQ {
        let mut acc = ScalarQ::zero();
        for (w, c) in p.terms() {
            if !self.counit_word(w).is_zero() {
                acc += c;
            }
        }
        acc
    }

    /// `S(u_ij) = (-q)^{i-j} D_{<N> minus {j}, <N> minus {i}}`, i.e. `u_ji^*`.
    pub fn antipode_generator(&self, i: usize, j: usize) -> Result<NcPoly> {
        self.star_generator(j, i)
    }

    /// Anti-multiplicative extension of the cofactor map.
    pub fn antipode(&self, p: &NcPoly) -> Result<NcPoly> {
        let n = self.rank();
        self.system().check_degree(p.degree() * (n - 1))?;
        let table: Vec<NcPoly> = (0..(n * n) as u8)
            .map(|l| {
                let g = GeneratorIndex::from_letter(l, n);
                self.antipode_generator(g.row, g.col)
            })
            .collect::<Result<_>>()?;
        let mut out = NcPoly::zero(n);
        for (w, c) in p.terms() {
            let mut acc = self.one();
            for &l in w.letters().iter().rev() {
                acc = self.mul(&acc, &table[l as usize])?;
            }
            out.add_scaled(&acc, c);
        }
        Ok(out)
    }

    /// `m(S ⊗ 1)Δ(p)`; equals `ε(p)·1` in a Hopf algebra.
    pub fn antipode_left_convolution(&self, p: &NcPoly) -> Result<NcPoly> {
        let n = self.rank();
        let mut out = NcPoly::zero(n);
        for ((l, r), c) in self.coproduct(p)?.terms {
            let s = self.antipode(&NcPoly::word(n, l))?;
            out.add_scaled(&self.mul(&s, &NcPoly::word(n, r))?, &c);
        }
        Ok(out)
    }

    /// `m(1 ⊗ S)Δ(p)`.
    pub fn antipode_right_convolution(&self, p: &NcPoly) -> Result<NcPoly> {
        let n = self.rank();
        let mut out = NcPoly::zero(n);
        for ((l, r), c) in self.coproduct(p)?.terms {
            let s = self.antipode(&NcPoly::word(n, r))?;
            out.add_scaled(&self.mul(&NcPoly::word(n, l), &s)?, &c);
        }
        Ok(out)
    }

    /// `(ε ⊗ 1)Δ(p)`.
    pub fn counit_left_slice(&self, p: &NcPoly) -> Result<NcPoly> {
        self.coproduct(p)?.slice_left(|w| Ok(self.counit_word(w)))
    }

    /// `(1 ⊗ ε)Δ(p)`.
    pub fn counit_right_slice(&self, p: &NcPoly) -> Result<NcPoly> {
        self.coproduct(p)?.slice_right(|w| Ok(self.counit_word(w)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coproduct_of_u11() {
        let a = Algebra::with_bound(2, 4).unwrap();
        let t = a.coproduct(&a.generator(1, 1).unwrap()).unwrap();
        let mut expect = Tensor2::zero(2);
        expect.add_product(&a.generator(1, 1).unwrap(), &a.generator(1, 1).unwrap(), &ScalarQ::one());
        expect.add_product(&a.generator(1, 2).unwrap(), &a.generator(2, 1).unwrap(), &ScalarQ::one());
        assert_eq!(t, expect);
    }

    #[test]
    fn coproduct_of_one() {
        let a = Algebra::with_bound(2, 4).unwrap();
        let t = a.coproduct(&a.one()).unwrap();
        let mut expect = Tensor2::zero(2);
        expect.add_term(Word::empty(), Word::empty(), ScalarQ::one());
        assert_eq!(t, expect);
    }

    #[test]
    fn counit_values() {
        let a = Algebra::with_bound(2, 4).unwrap();
        assert!(a.counit(&a.generator(1, 2).unwrap()).is_zero());
        let p = a.mul(&a.generator(1, 1).unwrap(), &a.generator(2, 2).unwrap()).unwrap();
        assert!(a.counit(&p).is_one());
    }

    #[test]
    fn antipode_of_u22() {
        let a = Algebra::with_bound(2, 4).unwrap();
        assert_eq!(a.antipode(&a.generator(2, 2).unwrap()).unwrap(), a.generator(1, 1).unwrap());
    }

    #[test]
    fn counit_axiom_on_u21_u12() {
        let a = Algebra::with_bound(2, 4).unwrap();
        let p = a.mul(&a.generator(2, 1).unwrap(), &a.generator(1, 2).unwrap()).unwrap();
        assert_eq!(a.counit_left_slice(&p).unwrap(), p);
        assert_eq!(a.counit_right_slice(&p).unwrap(), p);
    }
}
