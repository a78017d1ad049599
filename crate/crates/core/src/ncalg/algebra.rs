use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use super::poly::NcPoly;
use super::rewrite::{raw_minor, RewriteSystem, Strategy, DEFAULT_DEGREE_BOUND};
use super::word::{GeneratorIndex, Word};
use crate::error::{Error, Result};
use crate::scalar::ScalarQ;

/// O(SL_q(N)) with a completed rewriting system and a normal-form cache.
///
/// Cloning is cheap; clones share the rules and the cache.
#[derive(Clone)]
pub struct Algebra {
    inner: Arc<Inner>,
}

struct Inner {
    sys: RewriteSystem,
    cache: RwLock<HashMap<Word, NcPoly>>,
    star_letters: RwLock<Option<Vec<NcPoly>>>,
}

impl std::fmt::Debug for Algebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Algebra")
            .field("n", &self.rank())
            .field("degree_bound", &self.inner.sys.degree_bound())
            .field("rules", &self.inner.sys.rule_count())
            .finish()
    }
}

impl Algebra {
    pub fn new(n: usize) -> Result<Self> {
        Algebra::with_bound(n, DEFAULT_DEGREE_BOUND)
    }

    pub fn with_bound(n: usize, degree_bound: usize) -> Result<Self> {
        let sys = RewriteSystem::complete_rules(n, degree_bound)?;
        Ok(Algebra::from_system(sys))
    }

    pub fn from_system(sys: RewriteSystem) -> Self {
        Algebra {
            inner: Arc::new(Inner {
                sys,
                cache: RwLock::new(HashMap::new()),
                star_letters: RwLock::new(None),
            }),
        }
    }

    pub fn rank(&self) -> usize {
        self.inner.sys.rank()
    }

    pub fn system(&self) -> &RewriteSystem {
        &self.inner.sys
    }

    pub fn degree_bound(&self) -> usize {
        self.inner.sys.degree_bound()
    }

    pub fn generator(&self, row: usize, col: usize) -> Result<NcPoly> {
        NcPoly::generator(self.rank(), row, col)
    }

    pub fn one(&self) -> NcPoly {
        NcPoly::one(self.rank())
    }

    pub fn zero(&self) -> NcPoly {
        NcPoly::zero(self.rank())
    }

    pub fn scalar(&self, c: ScalarQ) -> NcPoly {
        NcPoly::constant(self.rank(), c)
    }

    fn check(&self, p: &NcPoly) -> Result<()> {
        if p.rank() != self.rank() {
            return Err(Error::Shape(format!(
                "element of rank {} used in the rank {} algebra",
                p.rank(),
                self.rank()
            )));
        }
        self.inner.sys.check_degree(p.degree())
    }

    /// Normal form of a single word, memoized.
    pub fn normal_form_word(&self, w: &Word) -> NcPoly {
        if let Some(hit) = self.inner.cache.read().unwrap().get(w) {
            return hit.clone();
        }
        let n = self.rank();
        let result = match self.inner.sys.find_redex(w.letters(), Strategy::LeftOutermost) {
            None => NcPoly::word(n, w.clone()),
            Some((s, e, r)) => {
                let rule = self.inner.sys.rules_slot(r);
                let mut acc = NcPoly::zero(n);
                for (rw, rc) in rule.rhs.terms() {
                    let nw = w.splice(s, e, rw.letters());
                    acc.add_scaled(&self.normal_form_word(&nw), rc);
                }
                acc
            }
        };
        self.inner.cache.write().unwrap().insert(w.clone(), result.clone());
        result
    }

    /// Canonical normal form.
    pub fn reduce(&self, p: &NcPoly) -> Result<NcPoly> {
        self.check(p)?;
        let mut out = NcPoly::zero(self.rank());
        for (w, c) in p.terms() {
            out.add_scaled(&self.normal_form_word(w), c);
        }
        Ok(out)
    }

    /// Uncached reduction with an explicit strategy.
    pub fn reduce_with(&self, p: &NcPoly, strategy: Strategy) -> Result<NcPoly> {
        self.check(p)?;
        Ok(self.inner.sys.reduce_with(p, strategy))
    }

    pub fn is_normal(&self, p: &NcPoly) -> bool {
        p.terms().all(|(w, _)| self.inner.sys.is_normal_word(w.letters()))
    }

    pub fn mul(&self, a: &NcPoly, b: &NcPoly) -> Result<NcPoly> {
        a.check_rank(b)?;
        if a.rank() != self.rank() {
            return Err(Error::Shape(format!(
                "element of rank {} used in the rank {} algebra",
                a.rank(),
                self.rank()
            )));
        }
        self.inner.sys.check_degree(a.degree() + b.degree())?;
        let mut out = NcPoly::zero(self.rank());
        for (wa, ca) in a.terms() {
            for (wb, cb) in b.terms() {
                out.add_scaled(&self.normal_form_word(&wa.concat(wb)), &(ca * cb));
            }
        }
        Ok(out)
    }

    pub fn mul_all(&self, factors: &[NcPoly]) -> Result<NcPoly> {
        let mut acc = self.one();
        for f in factors {
            acc = self.mul(&acc, f)?;
        }
        Ok(acc)
    }

    pub fn pow(&self, a: &NcPoly, k: usize) -> Result<NcPoly> {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.mul(&acc, a)?;
        }
        Ok(acc)
    }

    /// `ab - ba`.
    pub fn commutator(&self, a: &NcPoly, b: &NcPoly) -> Result<NcPoly> {
        Ok(self.mul(a, b)?.sub(&self.mul(b, a)?))
    }

    /// Quantum minor with sorted rows `I` and columns `J` of equal size.
    pub fn quantum_minor(&self, rows: &[usize], cols: &[usize]) -> Result<NcPoly> {
        let n = self.rank();
        if rows.len() != cols.len() {
            return Err(Error::Shape(format!(
                "minor needs as many rows as columns, got {} and {}",
                rows.len(),
                cols.len()
            )));
        }
        for list in [rows, cols] {
            if list.iter().any(|&i| i == 0 || i > n) {
                return Err(Error::IndexOutOfRange(format!("minor index list {:?} for N = {}", list, n)));
            }
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidArgument(format!(
                    "minor index list {:?} must be strictly increasing",
                    list
                )));
            }
        }
        if rows.is_empty() {
            return Ok(self.one());
        }
        self.reduce(&raw_minor(n, rows, cols))
    }

    /// Complementary minor `D_{<N> minus {i}, <N> minus {j}}`.
    fn complement_minor(&self, i: usize, j: usize) -> Result<NcPoly> {
        let n = self.rank();
        let rows: Vec<usize> = (1..=n).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (1..=n).filter(|&c| c != j).collect();
        self.quantum_minor(&rows, &cols)
    }

    /// `u_ij^* = (-q)^{j-i} D_{<N> minus {i}, <N> minus {j}}`.
    pub fn star_generator(&self, i: usize, j: usize) -> Result<NcPoly> {
        let m = self.complement_minor(i, j)?;
        Ok(m.scale(&ScalarQ::neg_q_pow(j as i64 - i as i64)))
    }

    fn star_table(&self) -> Result<Vec<NcPoly>> {
        if let Some(t) = self.inner.star_letters.read().unwrap().as_ref() {
            return Ok(t.clone());
        }
        let n = self.rank();
        let mut table = Vec::with_capacity(n * n);
        for l in 0..(n * n) as u8 {
            let g = GeneratorIndex::from_letter(l, n);
            table.push(self.star_generator(g.row, g.col)?);
        }
        *self.inner.star_letters.write().unwrap() = Some(table.clone());
        Ok(table)
    }

    /// The involution: antilinear (coefficients are real here) and
    /// anti-multiplicative.
    pub fn star(&self, p: &NcPoly) -> Result<NcPoly> {
        let n = self.rank();
        self.inner.sys.check_degree(p.degree() * (n - 1))?;
        let table = self.star_table()?;
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

    /// `z_i = u_{Ni}`.
    pub fn z(&self, i: usize) -> Result<NcPoly> {
        self.generator(self.rank(), i)
    }

    pub fn z_star(&self, i: usize) -> Result<NcPoly> {
        self.star(&self.z(i)?)
    }

    /// `x_i = z_i z_i^*`.
    pub fn x(&self, i: usize) -> Result<NcPoly> {
        self.mul(&self.z(i)?, &self.z_star(i)?)
    }

    /// `y_j = x_1 + ... + x_j`.
    pub fn y(&self, j: usize) -> Result<NcPoly> {
        if j == 0 || j > self.rank() {
            return Err(Error::IndexOutOfRange(format!("y_{} for N = {}", j, self.rank())));
        }
        let mut acc = self.zero();
        for i in 1..=j {
            acc = acc.add(&self.x(i)?);
        }
        Ok(acc)
    }

    /// Alias used by the sphere checks.
    pub fn sphere_element(&self, i: usize) -> Result<NcPoly> {
        self.z(i)
    }

    /// Both reduction strategies agree on `p`.
    pub fn confluent_on(&self, p: &NcPoly) -> Result<bool> {
        let a = self.reduce_with(p, Strategy::LeftOutermost)?;
        let b = self.reduce_with(p, Strategy::RightInnermost)?;
        Ok(a == b)
    }

    /// Normal words of exactly the given degree.
    pub fn normal_words(&self, degree: usize) -> Vec<Word> {
        let letters = (self.rank() * self.rank()) as u8;
        let mut layer = vec![Word::empty()];
        for _ in 0..degree {
            let mut next = Vec::new();
            for w in &layer {
                for l in 0..letters {
                    let mut v = w.0.clone();
                    v.push(l);
                    if self.inner.sys.is_normal_word(&v) {
                        next.push(Word(v));
                    }
                }
            }
            layer = next;
        }
        layer
    }

    pub fn cache_len(&self) -> usize {
        self.inner.cache.read().unwrap().len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg2() -> Algebra {
        Algebra::with_bound(2, 6).unwrap()
    }

    #[test]
    fn u22_u11_normal_form() {
        let a = alg2();
        let p = a.mul(&a.generator(2, 2).unwrap(), &a.generator(1, 1).unwrap()).unwrap();
        assert_eq!(p.to_string(), "1 + q^-1*u[1,2]*u[2,1]");
    }

    #[test]
    fn u11_u22_normal_form() {
        let a = alg2();
        let p = a.mul(&a.generator(1, 1).unwrap(), &a.generator(2, 2).unwrap()).unwrap();
        assert_eq!(p.to_string(), "1 + q*u[1,2]*u[2,1]");
    }

    #[test]
    fn star_is_involutive_on_generators() {
        let a = alg2();
        for i in 1..=2 {
            for j in 1..=2 {
                let g = a.generator(i, j).unwrap();
                assert_eq!(a.star(&a.star(&g).unwrap()).unwrap(), g);
            }
        }
    }

    #[test]
    fn minor_rejects_bad_lists() {
        let a = alg2();
        assert!(matches!(a.quantum_minor(&[2, 1], &[1, 2]), Err(Error::InvalidArgument(_))));
        assert!(matches!(a.quantum_minor(&[1, 3], &[1, 2]), Err(Error::IndexOutOfRange(_))));
        assert!(matches!(a.quantum_minor(&[1], &[1, 2]), Err(Error::Shape(_))));
    }

    #[test]
    fn cache_matches_uncached() {
        let a = alg2();
        for w in a.normal_words(2) {
            let rev = Word(w.0.iter().rev().copied().collect());
            let p = NcPoly::word(2, rev);
            assert_eq!(a.reduce(&p).unwrap(), a.reduce_with(&p, Strategy::RightInnermost).unwrap());
        }
    }
}
