//! The quantized enveloping algebra U_q(su(N)) as free words in
//! `E_r, F_r, K_r, K_r^{-1}`, its Hopf structure, the vector representation
//! π, the dual pairing with O(SU_q(N)), the left actions `d_η` and `∂_η`,
//! and the exterior-algebra representation σ.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ncalg::{Algebra, GeneratorIndex, NcPoly, Word};
use crate::scalar::ScalarQ;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LetterKind {
    E,
    F,
    K,
    Kinv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UqLetter {
    pub kind: LetterKind,
    pub index: usize,
}

impl UqLetter {
    pub fn new(kind: LetterKind, index: usize, n: usize) -> Result<Self> {
        if index == 0 || index >= n {
            return Err(Error::IndexOutOfRange(format!(
                "U_q letter index {} outside 1..{} for N = {}",
                index,
                n.saturating_sub(1),
                n
            )));
        }
        Ok(UqLetter { kind, index })
    }

    fn star(self) -> UqLetter {
        let kind = match self.kind {
            LetterKind::E => LetterKind::F,
            LetterKind::F => LetterKind::E,
            k => k,
        };
        UqLetter { kind, index: self.index }
    }

    fn counit(self) -> ScalarQ {
        match self.kind {
            LetterKind::K | LetterKind::Kinv => ScalarQ::one(),
            _ => ScalarQ::zero(),
        }
    }
}

impl fmt::Display for UqLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            LetterKind::E => "E",
            LetterKind::F => "F",
            LetterKind::K => "K",
            LetterKind::Kinv => "Kinv",
        };
        write!(f, "{}[{}]", name, self.index)
    }
}

pub type UqWord = Vec<UqLetter>;

/// Formal linear combination of letter words. No relations are imposed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UqElement {
    n: usize,
    terms: BTreeMap<UqWord, ScalarQ>,
}

/// `sum c · a ⊗ b` over pairs of letter words.
pub type UqTensor = BTreeMap<(UqWord, UqWord), ScalarQ>;

fn add_entry<K: Ord>(map: &mut BTreeMap<K, ScalarQ>, key: K, c: ScalarQ) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
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

impl UqElement {
    pub fn zero(n: usize) -> Self {
        UqElement { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        UqElement::scalar(n, ScalarQ::one())
    }

    pub fn scalar(n: usize, c: ScalarQ) -> Self {
        let mut e = UqElement::zero(n);
        add_entry(&mut e.terms, Vec::new(), c);
        e
    }

    pub fn from_word(n: usize, word: UqWord, c: ScalarQ) -> Self {
        let mut e = UqElement::zero(n);
        add_entry(&mut e.terms, word, c);
        e
    }

    pub fn letter(n: usize, kind: LetterKind, index: usize) -> Result<Self> {
        Ok(UqElement::from_word(n, vec![UqLetter::new(kind, index, n)?], ScalarQ::one()))
    }

    pub fn e(n: usize, r: usize) -> Result<Self> {
        UqElement::letter(n, LetterKind::E, r)
    }

    pub fn f(n: usize, r: usize) -> Result<Self> {
        UqElement::letter(n, LetterKind::F, r)
    }

    pub fn k(n: usize, r: usize) -> Result<Self> {
        UqElement::letter(n, LetterKind::K, r)
    }

    pub fn kinv(n: usize, r: usize) -> Result<Self> {
        UqElement::letter(n, LetterKind::Kinv, r)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&UqWord, &ScalarQ)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &UqElement) -> UqElement {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            add_entry(&mut out.terms, w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &UqElement) -> UqElement {
        self.add(&other.scale(&ScalarQ::from_int(-1)))
    }

    pub fn scale(&self, c: &ScalarQ) -> UqElement {
        let mut out = UqElement::zero(self.n);
        for (w, v) in &self.terms {
            add_entry(&mut out.terms, w.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &UqElement) -> UqElement {
        let mut out = UqElement::zero(self.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut w = a.clone();
                w.extend_from_slice(b);
                add_entry(&mut out.terms, w, ca * cb);
            }
        }
        out
    }

    pub fn mul_all(n: usize, factors: &[UqElement]) -> UqElement {
        factors.iter().fold(UqElement::one(n), |acc, f| acc.mul(f))
    }

    /// Anti-multiplicative extension of a letter map.
    fn anti_map(&self, f: impl Fn(UqLetter) -> (UqLetter, ScalarQ)) -> UqElement {
        let mut out = UqElement::zero(self.n);
        for (w, c) in &self.terms {
            let mut coeff = c.clone();
            let mut nw = Vec::with_capacity(w.len());
            for &l in w.iter().rev() {
                let (m, s) = f(l);
                coeff = &coeff * &s;
                nw.push(m);
            }
            add_entry(&mut out.terms, nw, coeff);
        }
        out
    }

    /// Multiplicative extension of a letter map.
    fn hom_map(&self, f: impl Fn(UqLetter) -> (UqLetter, ScalarQ)) -> UqElement {
        let mut out = UqElement::zero(self.n);
        for (w, c) in &self.terms {
            let mut coeff = c.clone();
            let mut nw = Vec::with_capacity(w.len());
            for &l in w {
                let (m, s) = f(l);
                coeff = &coeff * &s;
                nw.push(m);
            }
            add_entry(&mut out.terms, nw, coeff);
        }
        out
    }

    /// The involution: `E* = F`, `K* = K`, anti-multiplicative, and the
    /// identity on the (real) coefficients.
    pub fn star(&self) -> UqElement {
        self.anti_map(|l| (l.star(), ScalarQ::one()))
    }

    pub fn counit(&self) -> ScalarQ {
        let mut acc = ScalarQ::zero();
        for (w, c) in &self.terms {
            if w.iter().all(|l| !l.counit().is_zero()) {
                acc += c;
            }
        }
        acc
    }

    /// `S(E) = -qE`, `S(F) = -q^{-1}F`, `S(K) = K^{-1}`.
    pub fn antipode(&self) -> UqElement {
        self.anti_map(|l| match l.kind {
            LetterKind::E => (l, -ScalarQ::q_pow(1)),
            LetterKind::F => (l, -ScalarQ::q_pow(-1)),
            LetterKind::K => (UqLetter { kind: LetterKind::Kinv, index: l.index }, ScalarQ::one()),
            LetterKind::Kinv => (UqLetter { kind: LetterKind::K, index: l.index }, ScalarQ::one()),
        })
    }

    pub fn antipode_inv(&self) -> UqElement {
        self.anti_map(|l| match l.kind {
            LetterKind::E => (l, -ScalarQ::q_pow(-1)),
            LetterKind::F => (l, -ScalarQ::q_pow(1)),
            LetterKind::K => (UqLetter { kind: LetterKind::Kinv, index: l.index }, ScalarQ::one()),
            LetterKind::Kinv => (UqLetter { kind: LetterKind::K, index: l.index }, ScalarQ::one()),
        })
    }

    /// `ν(K) = K^{-1}`, `ν(E) = -F`, `ν(F) = -E`, extended multiplicatively.
    pub fn nu(&self) -> UqElement {
        self.hom_map(|l| match l.kind {
            LetterKind::E => (UqLetter { kind: LetterKind::F, index: l.index }, ScalarQ::from_int(-1)),
            LetterKind::F => (UqLetter { kind: LetterKind::E, index: l.index }, ScalarQ::from_int(-1)),
            LetterKind::K => (UqLetter { kind: LetterKind::Kinv, index: l.index }, ScalarQ::one()),
            LetterKind::Kinv => (UqLetter { kind: LetterKind::K, index: l.index }, ScalarQ::one()),
        })
    }

    /// `Δ(E) = E ⊗ K + K^{-1} ⊗ E`, likewise for F; K is grouplike.
    pub fn coproduct(&self) -> UqTensor {
        let mut out = UqTensor::new();
        for (w, c) in &self.terms {
            let mut acc: UqTensor = UqTensor::new();
            acc.insert((Vec::new(), Vec::new()), c.clone());
            for &l in w {
                let k = UqLetter { kind: LetterKind::K, index: l.index };
                let kinv = UqLetter { kind: LetterKind::Kinv, index: l.index };
                let pieces: Vec<(UqLetter, UqLetter)> = match l.kind {
                    LetterKind::E | LetterKind::F => vec![(l, k), (kinv, l)],
                    _ => vec![(l, l)],
                };
                let mut next = UqTensor::new();
                for ((a, b), v) in &acc {
                    for &(x, y) in &pieces {
                        let mut na = a.clone();
                        na.push(x);
                        let mut nb = b.clone();
                        nb.push(y);
                        add_entry(&mut next, (na, nb), v.clone());
                    }
                }
                acc = next;
            }
            for (key, v) in acc {
                add_entry(&mut out, key, v);
            }
        }
        out
    }

    /// Every letter has index below `bound`.
    pub fn indices_below(&self, bound: usize) -> bool {
        self.terms.keys().all(|w| w.iter().all(|l| l.index < bound))
    }
}

impl fmt::Display for UqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            let (text, paren) = c.render();
            let (neg, body) = match text.strip_prefix('-') {
                Some(rest) if !paren => (true, rest.to_string()),
                _ => (false, text.clone()),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let word: Vec<String> = w.iter().map(|l| l.to_string()).collect();
            let body = if paren { format!("({})", body) } else { body };
            if w.is_empty() {
                write!(f, "{}", body)?;
            } else if body == "1" {
                write!(f, "{}", word.join("*"))?;
            } else {
                write!(f, "{}*{}", body, word.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Square matrix over ScalarQ, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub dim: usize,
    pub entries: Vec<ScalarQ>,
}

impl Matrix {
    pub fn zero(dim: usize) -> Self {
        Matrix { dim, entries: vec![ScalarQ::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Matrix::zero(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = ScalarQ::one();
        }
        m
    }

    /// Entry at 1-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &ScalarQ {
        &self.entries[(i - 1) * self.dim + (j - 1)]
    }

    fn at(&self, i: usize, j: usize) -> &ScalarQ {
        &self.entries[i * self.dim + j]
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let d = self.dim;
        let mut out = Matrix::zero(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        out.entries[i * d + j] = &out.entries[i * d + j] + &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        Matrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &ScalarQ) -> Matrix {
        Matrix { dim: self.dim, entries: self.entries.iter().map(|a| a * c).collect() }
    }

    pub fn transpose(&self) -> Matrix {
        let d = self.dim;
        let mut out = Matrix::zero(d);
        for i in 0..d {
            for j in 0..d {
                out.entries[j * d + i] = self.at(i, j).clone();
            }
        }
        out
    }

    pub fn kron(&self, other: &Matrix) -> Matrix {
        let (a, b) = (self.dim, other.dim);
        let d = a * b;
        let mut out = Matrix::zero(d);
        for i in 0..a {
            for j in 0..a {
                let x = self.at(i, j);
                if x.is_zero() {
                    continue;
                }
                for k in 0..b {
                    for l in 0..b {
                        let y = other.at(k, l);
                        if !y.is_zero() {
                            out.entries[(i * b + k) * d + (j * b + l)] = x * y;
                        }
                    }
                }
            }
        }
        out
    }
}

/// s-exponent of `π(K_r)` at basis index `i` (both 1-based):
/// `q^{(δ_{i,r+1} - δ_{i,r})/2} = s^{δ_{i,r+1} - δ_{i,r}}`.
fn k_exponent(r: usize, i: usize) -> i64 {
    (i == r + 1) as i64 - (i == r) as i64
}

fn letter_matrix(n: usize, l: UqLetter) -> Matrix {
    let mut m = Matrix::zero(n);
    let r = l.index;
    match l.kind {
        LetterKind::E => m.entries[r * n + (r - 1)] = ScalarQ::one(),
        LetterKind::F => m.entries[(r - 1) * n + r] = ScalarQ::one(),
        LetterKind::K | LetterKind::Kinv => {
            let sign = if l.kind == LetterKind::K { 1 } else { -1 };
            for i in 1..=n {
                m.entries[(i - 1) * n + (i - 1)] = ScalarQ::s_pow(sign * k_exponent(r, i));
            }
        }
    }
    m
}

/// The vector representation π on ℂ^N.
pub fn pi_rep(eta: &UqElement) -> Matrix {
    let n = eta.n;
    let mut out = Matrix::zero(n);
    for (w, c) in &eta.terms {
        let mut m = Matrix::identity(n);
        for &l in w {
            m = m.mul(&letter_matrix(n, l));
        }
        out = out.add(&m.scale(c));
    }
    out
}

/// `(π ⊗ π)Δ(η)` as an `N² × N²` matrix.
pub fn pi_pi_coproduct(eta: &UqElement) -> Matrix {
    let n = eta.n;
    let mut out = Matrix::zero(n * n);
    for ((a, b), c) in eta.coproduct() {
        let ma = pi_rep(&UqElement::from_word(n, a, ScalarQ::one()));
        let mb = pi_rep(&UqElement::from_word(n, b, ScalarQ::one()));
        out = out.add(&ma.kron(&mb).scale(&c));
    }
    out
}

/// `R̂ = q Σ e_ii⊗e_ii + (q - q^{-1}) Σ_{i<j} e_ii⊗e_jj + Σ_{i≠j} e_ij⊗e_ji`.
pub fn r_hat(n: usize) -> Matrix {
    let d = n * n;
    let mut m = Matrix::zero(d);
    let pos = |i: usize, j: usize| i * n + j;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                m.entries[pos(i, i) * d + pos(i, i)] = ScalarQ::q_pow(1);
            } else {
                // e_ij ⊗ e_ji sends e_j ⊗ e_i to e_i ⊗ e_j
                m.entries[pos(i, j) * d + pos(j, i)] = ScalarQ::one();
                if i < j {
                    m.entries[pos(i, j) * d + pos(i, j)] = ScalarQ::q_minus_qinv();
                }
            }
        }
    }
    m
}

/// `R̂` commutes with `(π⊗π)Δ(η)`.
pub fn rmatrix_commutes(eta: &UqElement) -> bool {
    let r = r_hat(eta.n);
    let p = pi_pi_coproduct(eta);
    r.mul(&p) == p.mul(&r)
}

/// Checks the intertwiner property for `E_r`, `F_r` and `K_r`.
pub fn verify_rmatrix(r: usize, n: usize) -> Result<bool> {
    let gens = [UqElement::e(n, r)?, UqElement::f(n, r)?, UqElement::k(n, r)?, UqElement::kinv(n, r)?];
    Ok(gens.iter().all(rmatrix_commutes))
}

/// Sparse vector in `(ℂ^N)^{⊗m}`, basis tuples 1-based.
type TensorVec = BTreeMap<Vec<usize>, ScalarQ>;

/// Applies `π^{⊗m}(Δ^{(m-1)}(l))` to `v`, or its transpose when `row` is set.
fn apply_letter_tensor(l: UqLetter, v: &TensorVec, row: bool) -> TensorVec {
    let r = l.index;
    let mut out = TensorVec::new();
    match l.kind {
        LetterKind::K | LetterKind::Kinv => {
            let sign = if l.kind == LetterKind::K { 1 } else { -1 };
            for (idx, c) in v {
                let e: i64 = idx.iter().map(|&i| sign * k_exponent(r, i)).sum();
                add_entry(&mut out, idx.clone(), c * &ScalarQ::s_pow(e));
            }
        }
        LetterKind::E | LetterKind::F => {
            // matrix unit e_{a,b}: column action moves index b to a
            let (a, b) = if l.kind == LetterKind::E { (r + 1, r) } else { (r, r + 1) };
            let (from, to) = if row { (a, b) } else { (b, a) };
            for (idx, c) in v {
                for p in 0..idx.len() {
                    if idx[p] != from {
                        continue;
                    }
                    // K^{-1} on the left of position p, K on the right
                    let mut e = 0i64;
                    for (t, &i) in idx.iter().enumerate() {
                        if t < p {
                            e -= k_exponent(r, i);
                        } else if t > p {
                            e += k_exponent(r, i);
                        }
                    }
                    let mut nidx = idx.clone();
                    nidx[p] = to;
                    add_entry(&mut out, nidx, c * &ScalarQ::s_pow(e));
                }
            }
        }
    }
    out
}

/// `π^{⊗m}(Δ^{(m-1)}(η)) e_J`, as a map from index tuples to coefficients.
fn column_action(eta: &UqElement, cols: &[usize]) -> TensorVec {
    let mut out = TensorVec::new();
    for (w, c) in &eta.terms {
        let mut v = TensorVec::new();
        v.insert(cols.to_vec(), c.clone());
        for &l in w.iter().rev() {
            v = apply_letter_tensor(l, &v, false);
            if v.is_empty() {
                break;
            }
        }
        for (k, x) in v {
            add_entry(&mut out, k, x);
        }
    }
    out
}

/// `e_I^T π^{⊗m}(Δ^{(m-1)}(η))`.
fn row_action(eta: &UqElement, rows: &[usize]) -> TensorVec {
    let mut out = TensorVec::new();
    for (w, c) in &eta.terms {
        let mut v = TensorVec::new();
        v.insert(rows.to_vec(), c.clone());
        for &l in w.iter() {
            v = apply_letter_tensor(l, &v, true);
            if v.is_empty() {
                break;
            }
        }
        for (k, x) in v {
            add_entry(&mut out, k, x);
        }
    }
    out
}

fn split_word(n: usize, w: &Word) -> (Vec<usize>, Vec<usize>) {
    let idx = w.indices(n);
    (idx.iter().map(|g| g.row).collect(), idx.iter().map(|g| g.col).collect())
}

fn word_from(n: usize, rows: &[usize], cols: &[usize]) -> Word {
    Word(rows.iter().zip(cols).map(|(&r, &c)| GeneratorIndex { row: r, col: c }.letter(n)).collect())
}

fn check_ranks(eta: &UqElement, p: &NcPoly) -> Result<()> {
    if eta.n != p.rank() {
        return Err(Error::Shape(format!(
            "U_q element of rank {} paired with an element of rank {}",
            eta.n,
            p.rank()
        )));
    }
    Ok(())
}

/// The dual pairing `⟨η, p⟩` determined by `⟨η, u_ij⟩ = π_ij(η)`.
pub fn pairing(eta: &UqElement, p: &NcPoly) -> Result<ScalarQ> {
    check_ranks(eta, p)?;
    let n = eta.n;
    let mut acc = ScalarQ::zero();
    for (w, c) in p.terms() {
        let (rows, cols) = split_word(n, w);
        let v = column_action(eta, &cols);
        if let Some(x) = v.get(&rows) {
            acc += &(c * x);
        }
    }
    Ok(acc)
}

/// `d_K` scaling exponent (in s) of a word for `K_r`.
fn k_word_exponent(n: usize, r: usize, w: &[u8]) -> i64 {
    // d_{K_r}(u_ij) = q^{(δ_ir - δ_{i,r+1})/2} u_ij
    w.iter()
        .map(|&l| {
            let i = l as usize / n + 1;
            -k_exponent(r, i)
        })
        .sum()
}

/// One letter of the left action on a raw polynomial (no reduction).
fn act_letter_raw(n: usize, l: UqLetter, p: &NcPoly) -> NcPoly {
    let r = l.index;
    let mut out = NcPoly::zero(n);
    for (w, c) in p.terms() {
        let letters = w.letters();
        match l.kind {
            LetterKind::K => out.add_term(w.clone(), c * &ScalarQ::s_pow(k_word_exponent(n, r, letters))),
            LetterKind::Kinv => out.add_term(w.clone(), c * &ScalarQ::s_pow(-k_word_exponent(n, r, letters))),
            LetterKind::E | LetterKind::F => {
                // d_E(u_ij) = -q^{-1} δ_{i,r+1} u_{i-1,j}; d_F(u_ij) = -q δ_ir u_{i+1,j}
                let (src, dst, coeff) = if l.kind == LetterKind::E {
                    (r + 1, r, -ScalarQ::q_pow(-1))
                } else {
                    (r, r + 1, -ScalarQ::q_pow(1))
                };
                for p_ in 0..letters.len() {
                    let g = GeneratorIndex::from_letter(letters[p_], n);
                    if g.row != src {
                        continue;
                    }
                    let e = k_word_exponent(n, r, &letters[..p_]) - k_word_exponent(n, r, &letters[p_ + 1..]);
                    let mut nw = letters.to_vec();
                    nw[p_] = GeneratorIndex { row: dst, col: g.col }.letter(n);
                    out.add_term(Word(nw), &(c * &coeff) * &ScalarQ::s_pow(e));
                }
            }
        }
    }
    out
}

/// Left action `d_η` via the generator formulas and twisted Leibniz rules;
/// a word acts with its rightmost letter first.
pub fn act_d(alg: &Algebra, eta: &UqElement, p: &NcPoly) -> Result<NcPoly> {
    check_ranks(eta, p)?;
    let n = eta.n;
    let mut out = NcPoly::zero(n);
    for (w, c) in &eta.terms {
        let mut cur = p.clone();
        for &l in w.iter().rev() {
            let raw = act_letter_raw(n, l, &cur);
            cur = if matches!(l.kind, LetterKind::K | LetterKind::Kinv) { raw } else { alg.reduce(&raw)? };
            if cur.is_zero() {
                break;
            }
        }
        out.add_scaled(&cur, c);
    }
    Ok(out)
}

/// Oracle for [`act_d`]: `d_η(x) = ⟨S^{-1}(η), x_(1)⟩ x_(2)`.
pub fn act_d_oracle(alg: &Algebra, eta: &UqElement, p: &NcPoly) -> Result<NcPoly> {
    check_ranks(eta, p)?;
    let n = eta.n;
    let s_inv = eta.antipode_inv();
    let mut raw = NcPoly::zero(n);
    for (w, c) in p.terms() {
        let (rows, cols) = split_word(n, w);
        for (ks, x) in row_action(&s_inv, &rows) {
            raw.add_term(word_from(n, &ks, &cols), c * &x);
        }
    }
    alg.reduce(&raw)
}

/// `∂_η(x) = x_(1) ⟨η, x_(2)⟩`, N = 2 only.
pub fn act_del(alg: &Algebra, eta: &UqElement, p: &NcPoly) -> Result<NcPoly> {
    check_ranks(eta, p)?;
    if eta.n != 2 {
        return Err(Error::UnsupportedRank(eta.n));
    }
    let n = 2;
    let mut raw = NcPoly::zero(n);
    for (w, c) in p.terms() {
        let (rows, cols) = split_word(n, w);
        for (ks, x) in column_action(eta, &cols) {
            raw.add_term(word_from(n, &rows, &ks), c * &x);
        }
    }
    alg.reduce(&raw)
}

/// `M_ℓ = E_ℓ` and `M_i = E_i M_{i+1} - q^{-1} M_{i+1} E_i`, with ℓ = N - 1.
pub fn m_element(n: usize, i: usize) -> Result<UqElement> {
    let l = n.saturating_sub(1);
    if i == 0 || i > l {
        return Err(Error::IndexOutOfRange(format!("M_{} for ℓ = {}", i, l)));
    }
    let mut m = UqElement::e(n, l)?;
    for j in (i..l).rev() {
        let e = UqElement::e(n, j)?;
        m = e.mul(&m).sub(&m.mul(&e).scale(&ScalarQ::q_pow(-1)));
    }
    Ok(m)
}

/// `N_i = K_i K_{i+1} ... K_ℓ`.
pub fn n_element(n: usize, i: usize) -> Result<UqElement> {
    let l = n.saturating_sub(1);
    if i == 0 || i > l {
        return Err(Error::IndexOutOfRange(format!("N_{} for ℓ = {}", i, l)));
    }
    let factors: Vec<UqElement> = (i..=l).map(|j| UqElement::k(n, j)).collect::<Result<_>>()?;
    Ok(UqElement::mul_all(n, &factors))
}

/// Defining relations of U_q(su(N)) as `(name, lhs, rhs)` pairs.
pub fn uq_relations(n: usize) -> Result<Vec<(String, UqElement, UqElement)>> {
    let l = n - 1;
    let mut rels = Vec::new();
    let one = UqElement::one(n);
    let qmq = ScalarQ::q_minus_qinv();
    for i in 1..=l {
        let (e, f, k, ki) = (UqElement::e(n, i)?, UqElement::f(n, i)?, UqElement::k(n, i)?, UqElement::kinv(n, i)?);
        rels.push((format!("K{}*Kinv{} = 1", i, i), k.mul(&ki), one.clone()));
        rels.push((format!("Kinv{}*K{} = 1", i, i), ki.mul(&k), one.clone()));
        for j in 1..=l {
            let (ej, fj, kj) = (UqElement::e(n, j)?, UqElement::f(n, j)?, UqElement::k(n, j)?);
            if i < j {
                rels.push((format!("K{}K{} = K{}K{}", i, j, j, i), k.mul(&kj), kj.mul(&k)));
            }
            // K_i E_j = q^{δ_ij - δ_{i,j-1}/2 - δ_{i,j+1}/2} E_j K_i, in s-exponents
            let se = 2 * (i == j) as i64 - (i + 1 == j) as i64 - (i == j + 1) as i64;
            rels.push((format!("K{} E{}", i, j), k.mul(&ej), ej.mul(&k).scale(&ScalarQ::s_pow(se))));
            rels.push((format!("K{} F{}", i, j), k.mul(&fj), fj.mul(&k).scale(&ScalarQ::s_pow(-se))));
            let comm = e.mul(&fj).sub(&fj.mul(&e));
            let rhs = if i == j {
                k.mul(&k).sub(&ki.mul(&ki)).scale(&ScalarQ::one().checked_div(&qmq)?)
            } else {
                UqElement::zero(n)
            };
            rels.push((format!("[E{}, F{}]", i, j), comm, rhs));
            let diff = i.abs_diff(j);
            if diff > 1 && i < j {
                rels.push((format!("[E{}, E{}] = 0", i, j), e.mul(&ej).sub(&ej.mul(&e)), UqElement::zero(n)));
                rels.push((format!("[F{}, F{}] = 0", i, j), f.mul(&fj).sub(&fj.mul(&f)), UqElement::zero(n)));
            }
            if diff == 1 {
                let qq = &ScalarQ::q_pow(1) + &ScalarQ::q_pow(-1);
                let serre = |a: &UqElement, b: &UqElement| {
                    a.mul(a).mul(b).sub(&a.mul(b).mul(a).scale(&qq)).add(&b.mul(a).mul(a))
                };
                rels.push((format!("Serre E{} E{}", i, j), serre(&e, &ej), UqElement::zero(n)));
                rels.push((format!("Serre F{} F{}", i, j), serre(&f, &fj), UqElement::zero(n)));
            }
        }
    }
    Ok(rels)
}

/// Element of the exterior algebra `Λ(ℂ^ℓ)`; subsets are bitmasks with
/// bit `j - 1` standing for `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtVector {
    l: usize,
    terms: BTreeMap<u32, ScalarQ>,
}

pub fn subset_mask(set: &[usize]) -> u32 {
    set.iter().fold(0, |m, &j| m | (1 << (j - 1)))
}

pub fn mask_subset(mask: u32) -> Vec<usize> {
    (1..=32).filter(|&j| mask & (1 << (j - 1)) != 0).collect()
}

impl ExtVector {
    pub fn zero(l: usize) -> Self {
        ExtVector { l, terms: BTreeMap::new() }
    }

    pub fn basis(l: usize, set: &[usize]) -> Self {
        let mut v = ExtVector::zero(l);
        v.add_term(subset_mask(set), ScalarQ::one());
        v
    }

    pub fn dim(&self) -> usize {
        self.l
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&u32, &ScalarQ)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mask: u32) -> ScalarQ {
        self.terms.get(&mask).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, mask: u32, c: ScalarQ) {
        add_entry(&mut self.terms, mask, c);
    }

    pub fn add(&self, other: &ExtVector) -> ExtVector {
        let mut out = self.clone();
        for (&m, c) in &other.terms {
            out.add_term(m, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &ScalarQ) -> ExtVector {
        let mut out = ExtVector::zero(self.l);
        for (&m, v) in &self.terms {
            out.add_term(m, v * c);
        }
        out
    }
}

fn check_ext_index(j: usize, l: usize) -> Result<()> {
    if j == 0 || j > l {
        return Err(Error::IndexOutOfRange(format!("exterior index {} outside 1..{}", j, l)));
    }
    Ok(())
}

/// `ε_j^q(e_I) = (-q)^{-#(I ∩ <j>)} e_{I ∪ {j}}` for `j ∉ I`, else 0.
pub fn eps_q(j: usize, v: &ExtVector) -> Result<ExtVector> {
    check_ext_index(j, v.l)?;
    let bit = 1u32 << (j - 1);
    let mut out = ExtVector::zero(v.l);
    for (&m, c) in &v.terms {
        if m & bit != 0 {
            continue;
        }
        let below = (m & (bit - 1)).count_ones() as i64;
        out.add_term(m | bit, c * &ScalarQ::neg_q_pow(-below));
    }
    Ok(out)
}

/// Adjoint of [`eps_q`] for the orthonormal basis `{e_I}`.
pub fn eps_q_dag(j: usize, v: &ExtVector) -> Result<ExtVector> {
    check_ext_index(j, v.l)?;
    let bit = 1u32 << (j - 1);
    let mut out = ExtVector::zero(v.l);
    for (&m, c) in &v.terms {
        if m & bit == 0 {
            continue;
        }
        let below = (m & (bit - 1)).count_ones() as i64;
        out.add_term(m & !bit, c * &ScalarQ::neg_q_pow(-below));
    }
    Ok(out)
}

fn sigma_letter(l: UqLetter, v: &ExtVector) -> ExtVector {
    let r = l.index;
    let (br, br1) = (1u32 << (r - 1), 1u32 << r);
    let mut out = ExtVector::zero(v.l);
    for (&m, c) in &v.terms {
        let has_r = m & br != 0;
        let has_r1 = m & br1 != 0;
        match l.kind {
            LetterKind::E => {
                if has_r1 && !has_r {
                    out.add_term((m & !br1) | br, c.clone());
                }
            }
            LetterKind::F => {
                if has_r && !has_r1 {
                    out.add_term((m & !br) | br1, c.clone());
                }
            }
            LetterKind::K | LetterKind::Kinv => {
                let e = has_r as i64 - has_r1 as i64;
                let e = if l.kind == LetterKind::K { e } else { -e };
                out.add_term(m, c * &ScalarQ::s_pow(e));
            }
        }
    }
    out
}

/// The representation σ of U_q(su(ℓ)) on `Λ(ℂ^ℓ)`; letters must have
/// index below ℓ.
pub fn sigma_rep(eta: &UqElement, v: &ExtVector) -> Result<ExtVector> {
    if !eta.indices_below(v.l) {
        return Err(Error::OutOfSubalgebra(format!("σ is defined only for letters with index below ℓ = {}", v.l)));
    }
    let mut out = ExtVector::zero(v.l);
    for (w, c) in &eta.terms {
        let mut cur = v.clone();
        for &l in w.iter().rev() {
            cur = sigma_letter(l, &cur);
        }
        out = out.add(&cur.scale(c));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_examples() {
        let e = pi_rep(&UqElement::e(2, 1).unwrap());
        assert!(e.get(2, 1).is_one());
        assert!(e.get(1, 2).is_zero());
        let k = pi_rep(&UqElement::k(2, 1).unwrap());
        assert_eq!(k.get(1, 1), &ScalarQ::s_pow(-1));
        assert_eq!(k.get(2, 2), &ScalarQ::s_pow(1));
        let kk = UqElement::k(2, 1).unwrap().mul(&UqElement::kinv(2, 1).unwrap());
        assert_eq!(pi_rep(&kk), Matrix::identity(2));
        for r in 1..=2 {
            let f = pi_rep(&UqElement::f(3, r).unwrap());
            assert_eq!(f, pi_rep(&UqElement::e(3, r).unwrap()).transpose());
        }
    }

    #[test]
    fn hopf_examples() {
        let f = UqElement::f(2, 1).unwrap();
        let mut expect = UqTensor::new();
        let (fl, kl, kil) = (
            UqLetter { kind: LetterKind::F, index: 1 },
            UqLetter { kind: LetterKind::K, index: 1 },
            UqLetter { kind: LetterKind::Kinv, index: 1 },
        );
        expect.insert((vec![fl], vec![kl]), ScalarQ::one());
        expect.insert((vec![kil], vec![fl]), ScalarQ::one());
        assert_eq!(f.coproduct(), expect);
        assert!(UqElement::e(2, 1).unwrap().counit().is_zero());
        assert_eq!(UqElement::k(2, 1).unwrap().antipode(), UqElement::kinv(2, 1).unwrap());
    }

    #[test]
    fn rmatrix_examples() {
        assert!(verify_rmatrix(1, 2).unwrap());
        assert!(verify_rmatrix(2, 3).unwrap());
        assert!(rmatrix_commutes(&UqElement::one(3)));
    }

    #[test]
    fn pairing_examples() {
        let a = Algebra::with_bound(2, 4).unwrap();
        let e = UqElement::e(2, 1).unwrap();
        assert!(pairing(&e, &a.generator(2, 1).unwrap()).unwrap().is_one());
        let k = UqElement::k(2, 1).unwrap();
        assert_eq!(pairing(&k, &a.generator(1, 1).unwrap()).unwrap(), ScalarQ::s_pow(-1));
        let p = a.mul(&a.generator(1, 1).unwrap(), &a.generator(2, 2).unwrap()).unwrap();
        assert_eq!(pairing(&UqElement::one(2), &p).unwrap(), a.counit(&p));
    }

    #[test]
    fn action_examples() {
        let a = Algebra::with_bound(2, 4).unwrap();
        let u = |i, j| a.generator(i, j).unwrap();
        let k = UqElement::k(2, 1).unwrap();
        let e = UqElement::e(2, 1).unwrap();
        let f = UqElement::f(2, 1).unwrap();
        assert_eq!(act_d(&a, &k, &u(1, 1)).unwrap(), u(1, 1).scale(&ScalarQ::s_pow(1)));
        assert_eq!(act_d(&a, &e, &u(2, 1)).unwrap(), u(1, 1).scale(&-ScalarQ::q_pow(-1)));
        assert_eq!(act_d(&a, &f, &u(1, 2)).unwrap(), u(2, 2).scale(&-ScalarQ::q_pow(1)));
        assert_eq!(act_del(&a, &k, &u(2, 1)).unwrap(), u(2, 1).scale(&ScalarQ::s_pow(-1)));
        assert_eq!(act_del(&a, &UqElement::one(2), &u(1, 2)).unwrap(), u(1, 2));
    }

    #[test]
    fn exterior_examples() {
        let empty = ExtVector::basis(2, &[]);
        assert_eq!(eps_q(1, &empty).unwrap(), ExtVector::basis(2, &[1]));
        let e1 = ExtVector::basis(2, &[1]);
        assert_eq!(eps_q(2, &e1).unwrap(), ExtVector::basis(2, &[1, 2]).scale(&ScalarQ::neg_q_pow(-1)));
        assert!(eps_q(1, &e1).unwrap().is_zero());
    }

    #[test]
    fn sigma_examples() {
        let e = UqElement::e(3, 1).unwrap();
        assert_eq!(sigma_rep(&e, &ExtVector::basis(2, &[2])).unwrap(), ExtVector::basis(2, &[1]));
        let k = UqElement::k(3, 1).unwrap();
        assert_eq!(
            sigma_rep(&k, &ExtVector::basis(2, &[1])).unwrap(),
            ExtVector::basis(2, &[1]).scale(&ScalarQ::s_pow(1))
        );
        assert!(sigma_rep(&e, &ExtVector::basis(2, &[])).unwrap().is_zero());
        let e2 = UqElement::e(3, 2).unwrap();
        assert!(matches!(sigma_rep(&e2, &ExtVector::basis(2, &[])), Err(Error::OutOfSubalgebra(_))));
    }

    #[test]
    fn m_and_n_elements() {
        assert_eq!(m_element(2, 1).unwrap(), UqElement::e(2, 1).unwrap());
        let e1 = UqElement::e(3, 1).unwrap();
        let e2 = UqElement::e(3, 2).unwrap();
        let expect = e1.mul(&e2).sub(&e2.mul(&e1).scale(&ScalarQ::q_pow(-1)));
        assert_eq!(m_element(3, 1).unwrap(), expect);
        assert_eq!(n_element(3, 2).unwrap(), UqElement::k(3, 2).unwrap());
        assert!(m_element(3, 3).is_err());
    }
}
