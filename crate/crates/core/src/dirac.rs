//! Twisted antiholomorphic forms over quantum projective space, the
//! operators `∂̄`, `∂̄†`, and the twisted derivations `∇_i`.
//!
//! A form is a finite sum `Σ_I x_I ⊗ e_I` with `x_I` in O(SU_q(N)) and
//! `e_I` the standard basis of `Λ(ℂ^ℓ)`, ℓ = N − 1.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::json;

use crate::error::{Error, Result};
use crate::ncalg::{haar_n2, Algebra, NcPoly};
use crate::report::{Report, Status};
use crate::scalar::ScalarQ;
use crate::uqact::{
    act_d, eps_q, eps_q_dag, m_element, mask_subset, n_element, sigma_rep, ExtVector, LetterKind, UqElement,
    UqLetter,
};

/// `Σ_I x_I ⊗ e_I` with twist `M`; subsets are bitmasks, bit `j - 1` for `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormElement {
    n: usize,
    m: i64,
    comps: BTreeMap<u32, NcPoly>,
}

impl FormElement {
    pub fn zero(n: usize, m: i64) -> Self {
        FormElement { n, m, comps: BTreeMap::new() }
    }

    /// `x ⊗ e_I`.
    pub fn single(m: i64, x: NcPoly, set: &[usize]) -> Result<Self> {
        let n = x.rank();
        let l = n - 1;
        if set.iter().any(|&j| j == 0 || j > l) {
            return Err(Error::IndexOutOfRange(format!("subset {:?} not inside 1..{}", set, l)));
        }
        let mut out = FormElement::zero(n, m);
        out.add_component(crate::uqact::subset_mask(set), x);
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> usize {
        self.n - 1
    }

    pub fn twist(&self) -> i64 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&u32, &NcPoly)> {
        self.comps.iter()
    }

    pub fn component(&self, mask: u32) -> NcPoly {
        self.comps.get(&mask).cloned().unwrap_or_else(|| NcPoly::zero(self.n))
    }

    pub fn add_component(&mut self, mask: u32, x: NcPoly) {
        let v = match self.comps.remove(&mask) {
            Some(old) => old.add(&x),
            None => x,
        };
        if !v.is_zero() {
            self.comps.insert(mask, v);
        }
    }

    pub fn add(&self, other: &FormElement) -> FormElement {
        let mut out = self.clone();
        for (&mask, x) in &other.comps {
            out.add_component(mask, x.clone());
        }
        out
    }

    pub fn sub(&self, other: &FormElement) -> FormElement {
        self.add(&other.scale(&-ScalarQ::one()))
    }

    pub fn scale(&self, c: &ScalarQ) -> FormElement {
        let mut out = FormElement::zero(self.n, self.m);
        for (&mask, x) in &self.comps {
            out.add_component(mask, x.scale(c));
        }
        out
    }

    /// Exterior degrees `#I` that carry a nonzero component.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.comps.keys().map(|m| m.count_ones() as usize).collect();
        d.dedup();
        d
    }

    /// The grading operator `γ(x ⊗ e_I) = (-1)^{#I} x ⊗ e_I`.
    pub fn gamma(&self) -> FormElement {
        let mut out = FormElement::zero(self.n, self.m);
        for (&mask, x) in &self.comps {
            let x = if mask.count_ones() % 2 == 1 { x.neg() } else { x.clone() };
            out.add_component(mask, x);
        }
        out
    }

    /// Largest polynomial degree among the components.
    pub fn poly_degree(&self) -> usize {
        self.comps.values().map(|x| x.degree()).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let comps: Vec<serde_json::Value> = self
            .comps
            .iter()
            .map(|(&mask, x)| json!({ "subset": mask_subset(mask), "poly": x.to_string() }))
            .collect();
        json!({ "N": self.n, "M": self.m, "components": comps })
    }

    /// `(T ⊗ 1)` and `(1 ⊗ S)` combined: `Σ_I f(x_I) ⊗ g(e_I)`.
    fn map_tensor(
        &self,
        mut f: impl FnMut(&NcPoly) -> Result<NcPoly>,
        g: impl Fn(&ExtVector) -> Result<ExtVector>,
    ) -> Result<FormElement> {
        let l = self.ell();
        let mut out = FormElement::zero(self.n, self.m);
        for (&mask, x) in &self.comps {
            let mut e = ExtVector::zero(l);
            e.add_term(mask, ScalarQ::one());
            let v = g(&e)?;
            if v.is_zero() {
                continue;
            }
            let fx = f(x)?;
            if fx.is_zero() {
                continue;
            }
            for (&m2, c) in v.terms() {
                out.add_component(m2, fx.scale(c));
            }
        }
        Ok(out)
    }
}

impl fmt::Display for FormElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&mask, x) in &self.comps {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let set: Vec<String> = mask_subset(mask).iter().map(|j| j.to_string()).collect();
            write!(f, "({}) ⊗ e{{{}}}", x, set.join(","))?;
        }
        Ok(())
    }
}

fn check_form_rank(alg: &Algebra, w: &FormElement) -> Result<()> {
    if alg.rank() != w.n {
        return Err(Error::Shape(format!("form of rank {} used with an algebra of rank {}", w.n, alg.rank())));
    }
    if w.n < 2 {
        return Err(Error::UnsupportedRank(w.n));
    }
    Ok(())
}

/// s-exponent of the `K_ℓ` eigenvalue required on the `e_I` component.
fn gamma_exponent(m: i64, mask: u32, l: usize) -> i64 {
    let top = (mask >> (l - 1)) & 1;
    m - mask.count_ones() as i64 - top as i64
}

/// Each component `x_I` is a `d_{K_ℓ}`-eigenvector with the eigenvalue
/// prescribed by `M` and `I`.
pub fn gamma_member(alg: &Algebra, w: &FormElement) -> Result<bool> {
    check_form_rank(alg, w)?;
    let l = w.ell();
    let k = UqElement::k(w.n, l)?;
    for (&mask, x) in &w.comps {
        let target = x.scale(&ScalarQ::s_pow(gamma_exponent(w.m, mask, l)));
        if act_d(alg, &k, x)? != target {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Σ c · d_{η(1)}(x_I) ⊗ σ(η(2)) e_I` over the coproduct of `η`.
pub fn twisted_action(alg: &Algebra, eta: &UqElement, w: &FormElement) -> Result<FormElement> {
    check_form_rank(alg, w)?;
    let mut out = FormElement::zero(w.n, w.m);
    for ((w1, w2), c) in eta.coproduct() {
        let left = UqElement::from_word(w.n, w1, c);
        let right = UqElement::from_word(w.n, w2, ScalarQ::one());
        let term = w.map_tensor(|x| act_d(alg, &left, x), |e| sigma_rep(&right, e))?;
        out = out.add(&term);
    }
    Ok(out)
}

/// Generators `K_r, E_r, F_r` with `r < ℓ`.
fn invariance_generators(n: usize) -> Result<Vec<UqElement>> {
    let l = n - 1;
    let mut gens = Vec::new();
    for r in 1..l {
        for kind in [LetterKind::K, LetterKind::E, LetterKind::F] {
            gens.push(UqElement::letter(n, kind, r)?);
        }
    }
    Ok(gens)
}

/// Γ membership plus invariance under the twisted action of U_q(su(ℓ)).
pub fn omega_member(alg: &Algebra, w: &FormElement) -> Result<bool> {
    if !gamma_member(alg, w)? {
        return Ok(false);
    }
    for eta in invariance_generators(w.n)? {
        let lhs = twisted_action(alg, &eta, w)?;
        if lhs != w.scale(&eta.counit()) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn dbar_terms(n: usize) -> Result<Vec<(UqElement, UqElement)>> {
    (1..n)
        .map(|i| {
            let (mi, ni) = (m_element(n, i)?, n_element(n, i)?);
            Ok((ni.mul(&mi.star()), mi.mul(&ni)))
        })
        .collect()
}

/// `∂̄ = Σ_i d_{N_i M_i^*} ⊗ ε_i^q`.
pub fn dbar(alg: &Algebra, w: &FormElement) -> Result<FormElement> {
    check_form_rank(alg, w)?;
    let mut out = FormElement::zero(w.n, w.m);
    for (i, (op, _)) in dbar_terms(w.n)?.into_iter().enumerate() {
        out = out.add(&w.map_tensor(|x| act_d(alg, &op, x), |e| eps_q(i + 1, e))?);
    }
    Ok(out)
}

/// `∂̄† = Σ_i d_{M_i N_i} ⊗ (ε_i^q)^*`.
pub fn dbar_dagger(alg: &Algebra, w: &FormElement) -> Result<FormElement> {
    check_form_rank(alg, w)?;
    let mut out = FormElement::zero(w.n, w.m);
    for (i, (_, op)) in dbar_terms(w.n)?.into_iter().enumerate() {
        out = out.add(&w.map_tensor(|x| act_d(alg, &op, x), |e| eps_q_dag(i + 1, e))?);
    }
    Ok(out)
}

/// `(x ⊗ 1)ω`.
pub fn left_mul(alg: &Algebra, x: &NcPoly, w: &FormElement) -> Result<FormElement> {
    check_form_rank(alg, w)?;
    w.map_tensor(|y| alg.mul(x, y), |e| Ok(e.clone()))
}

/// `∂̄((x ⊗ 1)ω) - (x ⊗ 1)∂̄(ω)`.
pub fn commutator_dbar(alg: &Algebra, x: &NcPoly, w: &FormElement) -> Result<FormElement> {
    let a = dbar(alg, &left_mul(alg, x, w)?)?;
    let b = left_mul(alg, x, &dbar(alg, w)?)?;
    Ok(a.sub(&b))
}

/// `∂̄†((x ⊗ 1)ω) - (x ⊗ 1)∂̄†(ω)`.
pub fn commutator_dbar_dagger(alg: &Algebra, x: &NcPoly, w: &FormElement) -> Result<FormElement> {
    let a = dbar_dagger(alg, &left_mul(alg, x, w)?)?;
    let b = left_mul(alg, x, &dbar_dagger(alg, w)?)?;
    Ok(a.sub(&b))
}

/// `F_i F_{i+1} ... F_ℓ` (or the E-version).
fn chain(n: usize, i: usize, kind: LetterKind) -> Result<UqElement> {
    let l = n - 1;
    let word = (i..=l).map(|j| UqLetter::new(kind, j, n)).collect::<Result<Vec<_>>>()?;
    Ok(UqElement::from_word(n, word, ScalarQ::one()))
}

fn check_nabla_index(n: usize, i: usize) -> Result<()> {
    if n < 2 || i == 0 || i >= n {
        return Err(Error::IndexOutOfRange(format!("∇_{} for N = {}", i, n)));
    }
    Ok(())
}

/// Closed form of `[∂̄, x ⊗ 1]`: `q^{-1} Σ_i (-q)^{i-ℓ} d_{F_i...F_ℓ}(x) ⊗ ε_i^q`, applied to `ω`.
pub fn commutator_dbar_closed(alg: &Algebra, x: &NcPoly, w: &FormElement) -> Result<FormElement> {
    check_form_rank(alg, w)?;
    let n = w.n;
    let l = n - 1;
    let mut out = FormElement::zero(n, w.m);
    for i in 1..=l {
        let c = &ScalarQ::q_pow(-1) * &ScalarQ::neg_q_pow(i as i64 - l as i64);
        let dx = act_d(alg, &chain(n, i, LetterKind::F)?, x)?.scale(&c);
        out = out.add(&w.map_tensor(|y| alg.mul(&dx, y), |e| eps_q(i, e))?);
    }
    Ok(out)
}

/// Closed form of `[∂̄†, x ⊗ 1]`: `Σ_i d_{E_i...E_ℓ}(x) ⊗ (ε_i^q)^*`, applied to `ω`.
pub fn commutator_dbar_dagger_closed(alg: &Algebra, x: &NcPoly, w: &FormElement) -> Result<FormElement> {
    check_form_rank(alg, w)?;
    let n = w.n;
    let mut out = FormElement::zero(n, w.m);
    for i in 1..n {
        let dx = act_d(alg, &chain(n, i, LetterKind::E)?, x)?;
        out = out.add(&w.map_tensor(|y| alg.mul(&dx, y), |e| eps_q_dag(i, e))?);
    }
    Ok(out)
}

/// `∇_i = (-q)^{i-N} d_{F_i ... F_ℓ}`.
pub fn nabla_i(alg: &Algebra, x: &NcPoly, i: usize) -> Result<NcPoly> {
    let n = alg.rank();
    check_nabla_index(n, i)?;
    let d = act_d(alg, &chain(n, i, LetterKind::F)?, x)?;
    Ok(d.scale(&ScalarQ::neg_q_pow(i as i64 - n as i64)))
}

/// `∇(x) = Σ_i ∇_i(x) ⊗ e_i`, recorded with twist 0.
pub fn nabla(alg: &Algebra, x: &NcPoly) -> Result<FormElement> {
    let n = alg.rank();
    let mut out = FormElement::zero(n, 0);
    for i in 1..n {
        out.add_component(1 << (i - 1), nabla_i(alg, x, i)?);
    }
    Ok(out)
}

/// `⟨ω, ξ⟩ = Σ_I h(ω_I^* ξ_I)`, linear in the second variable; N = 2 only.
pub fn inner_product_n2(alg: &Algebra, w: &FormElement, xi: &FormElement) -> Result<ScalarQ> {
    check_form_rank(alg, w)?;
    check_form_rank(alg, xi)?;
    let mut acc = ScalarQ::zero();
    for (mask, x) in &w.comps {
        if let Some(y) = xi.comps.get(mask) {
            acc += &haar_n2(alg, &alg.mul(&alg.star(x)?, y)?)?;
        }
    }
    Ok(acc)
}

/// Ordered monomials `z_1^{a_1}...z_N^{a_N} (z_1^*)^{b_1}...(z_N^*)^{b_N}`
/// with `Σa = a` and `Σb = b`.
pub fn sphere_monomials(alg: &Algebra, a: usize, b: usize) -> Result<Vec<NcPoly>> {
    let n = alg.rank();
    let mut out = Vec::new();
    for za in multisets(n, a) {
        for zb in multisets(n, b) {
            let mut factors = Vec::with_capacity(a + b);
            for &i in &za {
                factors.push(alg.z(i)?);
            }
            for &i in &zb {
                factors.push(alg.z_star(i)?);
            }
            out.push(alg.mul_all(&factors)?);
        }
    }
    Ok(out)
}

/// Non-decreasing index sequences of length `k` in `1..=n`.
fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for s in &out {
            let start = s.last().copied().unwrap_or(1);
            for i in start..=n {
                let mut t = s.clone();
                t.push(i);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// Maximum number of sphere letters in a corpus monomial.
pub const CORPUS_MAX_LETTERS: usize = 4;

/// The fixed form corpus: every `x ⊗ e_I` with `x` an ordered monomial in
/// at most four letters `z_i, z_j^*` that lies in `Γ_M`. Since `d_{K_ℓ}`
/// scales `z` by `q^{-1/2}` and `z^*` by `q^{1/2}`, membership only depends
/// on the letter counts, so the filter is applied to the counts and then
/// confirmed with [`gamma_member`] on a representative.
pub fn form_corpus(alg: &Algebra, m: i64) -> Result<Vec<FormElement>> {
    let n = alg.rank();
    let l = n - 1;
    let mut out = Vec::new();
    for mask in 0u32..(1 << l) {
        let need = gamma_exponent(m, mask, l);
        for total in 0..=CORPUS_MAX_LETTERS {
            for b in 0..=total {
                let a = total - b;
                if b as i64 - a as i64 != need {
                    continue;
                }
                if alg.system().check_degree(a + (n - 1) * b).is_err() {
                    continue;
                }
                let set = mask_subset(mask);
                for x in sphere_monomials(alg, a, b)? {
                    out.push(FormElement::single(m, x, &set)?);
                }
            }
        }
    }
    if let Some(first) = out.first() {
        if !gamma_member(alg, first)? {
            return Err(Error::InvalidArgument("corpus filter disagrees with the Γ test".into()));
        }
    }
    Ok(out)
}

/// Elements of `Ω_M` built from the corpus: the `U_q(su(ℓ))`-invariant
/// corpus members together with their images under `∂̄` and `∂̄†`.
pub fn omega_corpus(alg: &Algebra, m: i64) -> Result<Vec<FormElement>> {
    let mut base = Vec::new();
    for w in form_corpus(alg, m)? {
        if omega_member(alg, &w)? {
            base.push(w);
        }
    }
    let mut out = base.clone();
    for w in &base {
        for img in [dbar(alg, w)?, dbar_dagger(alg, w)?] {
            if !img.is_zero() {
                out.push(img);
            }
        }
    }
    Ok(out)
}

fn poly_witness(label: &str, p: &NcPoly) -> serde_json::Value {
    json!({ label: p.to_string() })
}

/// Twisted-derivation commutation identities for `∇_i` on the sphere
/// generators, and the gradient identity for `y_ℓ`. N ∈ {2, 3}.
pub fn verify_gradient_suite(alg: &Algebra) -> Result<Report> {
    let n = alg.rank();
    if n != 2 && n != 3 {
        return Err(Error::UnsupportedRank(n));
    }
    let l = n - 1;
    let mut rep = Report::new();
    let q2 = ScalarQ::q_pow(2);
    let z: Vec<NcPoly> = (1..=n).map(|i| alg.z(i)).collect::<Result<_>>()?;
    let zs: Vec<NcPoly> = (1..=n).map(|i| alg.z_star(i)).collect::<Result<_>>()?;
    let x: Vec<NcPoly> = (1..=n).map(|i| alg.x(i)).collect::<Result<_>>()?;
    let y: Vec<NcPoly> = (1..=n).map(|i| alg.y(i)).collect::<Result<_>>()?;

    for i in 1..=l {
        for r in 1..=n {
            let v = nabla_i(alg, &z[r - 1], i)?;
            rep.record(
                format!("nabla_vanish_z[i={},r={}]", i, r),
                "∇_i(z_r) = 0",
                v.is_zero(),
                || poly_witness("residual", &v),
            );
            let lhs = nabla_i(alg, &zs[r - 1], i)?;
            let rhs = alg.star_generator(i, r)?.scale(&ScalarQ::neg_q_pow(i as i64 - n as i64));
            let d = lhs.sub(&rhs);
            rep.record(
                format!("nabla_zstar[i={},r={}]", i, r),
                "∇_i(z_r^*) = (-q)^{i-N} u_ir^*",
                d.is_zero(),
                || poly_witness("residual", &d),
            );
        }
        let lhs = nabla_i(alg, &y[l - 1], i)?;
        let c = -(&ScalarQ::s_pow(-3) * &ScalarQ::neg_q_pow(i as i64 - n as i64));
        let rhs = alg.mul(&alg.star_generator(i, n)?, &z[n - 1])?.scale(&c);
        let d = lhs.sub(&rhs);
        rep.record(
            format!("nabla_y_ell[i={}]", i),
            "∇_i(y_ℓ) = -q^{-3/2}(-q)^{i-N} u_iN^* z_N",
            d.is_zero(),
            || poly_witness("residual", &d),
        );
    }

    // twisted Leibniz rule on pairs of sphere generators
    let kl = UqElement::k(n, l)?;
    let kl_inv = UqElement::kinv(n, l)?;
    let letters: Vec<(String, &NcPoly)> = (1..=n)
        .flat_map(|r| [(format!("z{}", r), &z[r - 1]), (format!("z{}*", r), &zs[r - 1])])
        .collect();
    for i in 1..=l {
        for (na, a) in &letters {
            for (nb, b) in &letters {
                let lhs = nabla_i(alg, &alg.mul(a, b)?, i)?;
                let rhs = alg
                    .mul(&nabla_i(alg, a, i)?, &act_d(alg, &kl_inv, b)?)?
                    .add(&alg.mul(&act_d(alg, &kl, a)?, &nabla_i(alg, b, i)?)?);
                let d = lhs.sub(&rhs);
                rep.record(
                    format!("twisted_leibniz[i={},{}·{}]", i, na, nb),
                    "∇_i(xy) = ∇_i(x) d_{K_ℓ^{-1}}(y) + d_{K_ℓ}(x) ∇_i(y)",
                    d.is_zero(),
                    || poly_witness("residual", &d),
                );
            }
        }
    }

    for i in 1..=l {
        for s in 1..=n {
            for r in 1..=n {
                let id = format!("z_commutes_nabla_zstar[i={},s={},r={}]", i, s, r);
                let stmt = "z_s ∇_i(z_r^*) = ∇_i(z_r^*) z_s for s ≠ r";
                if s == r {
                    rep.skip(id, stmt, "hypothesis s ≠ r");
                    continue;
                }
                let g = nabla_i(alg, &zs[r - 1], i)?;
                let d = alg.commutator(&z[s - 1], &g)?;
                rep.record(id, stmt, d.is_zero(), || poly_witness("residual", &d));
            }
        }
        for s in 1..=n {
            for r in (s + 1)..=n {
                let g = nabla_i(alg, &zs[r - 1], i)?;
                let d = alg.commutator(&zs[s - 1], &g)?;
                rep.record(
                    format!("zstar_commutes_nabla_zstar[i={},s={},r={}]", i, s, r),
                    "z_s^* ∇_i(z_r^*) = ∇_i(z_r^*) z_s^* for s < r",
                    d.is_zero(),
                    || poly_witness("residual", &d),
                );
                let g = nabla_i(alg, &x[r - 1], i)?;
                let d = alg.mul(&x[s - 1], &g)?.sub(&alg.mul(&g, &x[s - 1])?.scale(&q2));
                rep.record(
                    format!("x_q_commutes_nabla_x[i={},s={},r={}]", i, s, r),
                    "x_s ∇_i(x_r) = q^2 ∇_i(x_r) x_s for s < r",
                    d.is_zero(),
                    || poly_witness("residual", &d),
                );
            }
        }
        for r in 1..=n {
            let g = nabla_i(alg, &y[r - 1], i)?;
            for s in 1..=r {
                for (name, stmt, a) in [
                    ("x_q_commutes_nabla_y", "x_s ∇_i(y_r) = q^2 ∇_i(y_r) x_s for s ≤ r", &x[s - 1]),
                    ("y_q_commutes_nabla_y", "y_s ∇_i(y_r) = q^2 ∇_i(y_r) y_s for s ≤ r", &y[s - 1]),
                ] {
                    let d = alg.mul(a, &g)?.sub(&alg.mul(&g, a)?.scale(&q2));
                    rep.record(format!("{}[i={},s={},r={}]", name, i, s, r), stmt, d.is_zero(), || {
                        poly_witness("residual", &d)
                    });
                }
            }
        }
    }

    let stmt = "Σ_i ∇_i(y_ℓ)^* ∇_i(y_ℓ) = q^{-1} y_ℓ (1 - q^2 y_ℓ)";
    match gradient_identity_residual(alg) {
        Ok(d) => rep.record("gradient_identity", stmt, d.is_zero(), || poly_witness("residual", &d)),
        Err(e @ Error::BoundExceeded { .. }) => {
            rep.push("gradient_identity", stmt, Status::Fail, Some(json!({ "error": e.to_string() })))
        }
        Err(e) => return Err(e),
    }
    Ok(rep)
}

/// Degree bound needed by [`verify_gradient_suite`]: the gradient identity
/// multiplies `∇_i(y_ℓ)^*` (degree `N(N-1)`) by `∇_i(y_ℓ)` (degree `N`).
pub fn gradient_suite_bound(n: usize) -> usize {
    n * n
}

/// `Σ_i ∇_i(y_ℓ)^* ∇_i(y_ℓ) - q^{-1} y_ℓ (1 - q^2 y_ℓ)`, reduced.
pub fn gradient_identity_residual(alg: &Algebra) -> Result<NcPoly> {
    let n = alg.rank();
    if n < 2 {
        return Err(Error::UnsupportedRank(n));
    }
    let l = n - 1;
    let y = alg.y(l)?;
    let mut lhs = alg.zero();
    for i in 1..=l {
        let g = nabla_i(alg, &y, i)?;
        lhs = lhs.add(&alg.mul(&alg.star(&g)?, &g)?);
    }
    let y2 = alg.mul(&y, &y)?;
    let rhs = y.sub(&y2.scale(&ScalarQ::q_pow(2))).scale(&ScalarQ::q_pow(-1));
    Ok(lhs.sub(&rhs))
}

fn form_witness(w: &FormElement, out: &FormElement) -> serde_json::Value {
    json!({ "input": w.to_json(), "output": out.to_json() })
}

/// Checks on the form corpus for one twist `M`: `∂̄² = (∂̄†)² = 0`, the
/// degree shifts, preservation of `Ω_M`, the invariance commutators, and
/// the commutator closed forms for `x ∈ {1, z_i z_j^*}`.
pub fn verify_forms(alg: &Algebra, m: i64) -> Result<Report> {
    let n = alg.rank();
    if n < 2 {
        return Err(Error::UnsupportedRank(n));
    }
    let mut rep = Report::new();
    let corpus = form_corpus(alg, m)?;
    let tag = |kind: &str, k: usize| format!("{}[N={},M={},#{}]", kind, n, m, k);

    for (k, w) in corpus.iter().enumerate() {
        let d = dbar(alg, w)?;
        let dd = dbar(alg, &d)?;
        rep.record(tag("dbar_squared", k), "∂̄∂̄ = 0", dd.is_zero(), || form_witness(w, &dd));
        let t = dbar_dagger(alg, w)?;
        let tt = dbar_dagger(alg, &t)?;
        rep.record(tag("dbar_dagger_squared", k), "∂̄†∂̄† = 0", tt.is_zero(), || form_witness(w, &tt));

        // γ anticommutes with ∂̄ + ∂̄†
        let sum = d.add(&t);
        let lhs = dbar(alg, &w.gamma())?.add(&dbar_dagger(alg, &w.gamma())?);
        let anti = lhs.add(&sum.gamma());
        rep.record(tag("gamma_anticommutes", k), "γ(∂̄ + ∂̄†) = -(∂̄ + ∂̄†)γ", anti.is_zero(), || form_witness(w, &anti));

        for eta in invariance_generators(n)? {
            let a = twisted_action(alg, &eta, &d)?;
            let b = dbar(alg, &twisted_action(alg, &eta, w)?)?;
            let c = a.sub(&b);
            rep.record(
                format!("{}[{}]", tag("invariance_commutes_dbar", k), eta),
                "d_{η(1)} ⊗ σ(η(2)) commutes with ∂̄ for η in U_q(su(ℓ))",
                c.is_zero(),
                || form_witness(w, &c),
            );
        }
    }

    for (k, w) in omega_corpus(alg, m)?.iter().enumerate() {
        for (name, img) in [("dbar_preserves_omega", dbar(alg, w)?), ("dbar_dagger_preserves_omega", dbar_dagger(alg, w)?)]
        {
            let ok = omega_member(alg, &img)?;
            rep.record(tag(name, k), "∂̄ and ∂̄† map Ω_M into Ω_M", ok, || form_witness(w, &img));
        }
    }

    let mut xs = vec![("1".to_string(), alg.one())];
    for i in 1..=n {
        for j in 1..=n {
            xs.push((format!("z{}z{}*", i, j), alg.mul(&alg.z(i)?, &alg.z_star(j)?)?));
        }
    }
    for (k, w) in corpus.iter().enumerate() {
        for (name, x) in &xs {
            if alg.system().check_degree(x.degree() + w.poly_degree()).is_err() {
                continue;
            }
            let lhs = commutator_dbar(alg, x, w)?;
            let rhs = commutator_dbar_closed(alg, x, w)?;
            let d = lhs.sub(&rhs);
            rep.record(
                format!("{}[x={}]", tag("commutator_dbar", k), name),
                "[∂̄, x ⊗ 1] = q^{-1} Σ_i (-q)^{i-ℓ} d_{F_i...F_ℓ}(x) ⊗ ε_i^q",
                d.is_zero(),
                || form_witness(w, &d),
            );
            let lhs = commutator_dbar_dagger(alg, x, w)?;
            let rhs = commutator_dbar_dagger_closed(alg, x, w)?;
            let d = lhs.sub(&rhs);
            rep.record(
                format!("{}[x={}]", tag("commutator_dbar_dagger", k), name),
                "[∂̄†, x ⊗ 1] = Σ_i d_{E_i...E_ℓ}(x) ⊗ (ε_i^q)^*",
                d.is_zero(),
                || form_witness(w, &d),
            );
        }
    }
    Ok(rep)
}

/// `⟨∂̄ω, ξ⟩ = ⟨ω, ∂̄†ξ⟩` on corpus pairs at N = 2, with the inner product
/// `h(x^* y)` linear in the second variable.
pub fn verify_adjoint_n2(alg: &Algebra, m: i64) -> Result<Report> {
    if alg.rank() != 2 {
        return Err(Error::UnsupportedRank(alg.rank()));
    }
    let mut rep = Report::new();
    let corpus = form_corpus(alg, m)?;
    let (zero, one): (Vec<_>, Vec<_>) = corpus.iter().partition(|w| w.degrees() == vec![0]);
    for (a, w) in zero.iter().enumerate() {
        let dw = dbar(alg, w)?;
        for (b, xi) in one.iter().enumerate() {
            if w.poly_degree() + xi.poly_degree() > alg.degree_bound() {
                continue;
            }
            let lhs = inner_product_n2(alg, &dw, xi)?;
            let rhs = inner_product_n2(alg, w, &dbar_dagger(alg, xi)?)?;
            rep.record(
                format!("dbar_adjoint[M={},{},{}]", m, a, b),
                "⟨∂̄ω, ξ⟩ = ⟨ω, ∂̄†ξ⟩ with ⟨x, y⟩ = h(x^* y), linear in the second variable",
                lhs == rhs,
                || json!({ "lhs": lhs.to_string(), "rhs": rhs.to_string() }),
            );
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg2() -> Algebra {
        Algebra::with_bound(2, 6).unwrap()
    }

    #[test]
    fn sphere_generators_lie_in_omega() {
        let a = alg2();
        for j in 1..=2 {
            let zs = FormElement::single(1, a.z_star(j).unwrap(), &[]).unwrap();
            assert!(omega_member(&a, &zs).unwrap());
            let z = FormElement::single(-1, a.z(j).unwrap(), &[]).unwrap();
            assert!(omega_member(&a, &z).unwrap());
        }
        let u11 = FormElement::single(0, a.generator(1, 1).unwrap(), &[]).unwrap();
        assert!(!gamma_member(&a, &u11).unwrap());
    }

    #[test]
    fn dbar_of_one_vanishes() {
        let a = alg2();
        let one = FormElement::single(0, a.one(), &[]).unwrap();
        assert!(dbar(&a, &one).unwrap().is_zero());
        assert!(dbar_dagger(&a, &one).unwrap().is_zero());
    }

    #[test]
    fn dbar_of_zstar_is_an_omega_one_form() {
        let a = alg2();
        for j in 1..=2 {
            let w = FormElement::single(1, a.z_star(j).unwrap(), &[]).unwrap();
            let d = dbar(&a, &w).unwrap();
            assert_eq!(d.degrees(), vec![1]);
            assert!(omega_member(&a, &d).unwrap());
        }
    }

    #[test]
    fn nabla_on_sphere_generators() {
        let a = alg2();
        assert!(nabla_i(&a, &a.z(1).unwrap(), 1).unwrap().is_zero());
        let lhs = nabla_i(&a, &a.z_star(2).unwrap(), 1).unwrap();
        let rhs = a.star_generator(1, 2).unwrap().scale(&ScalarQ::neg_q_pow(-1));
        assert_eq!(lhs, rhs);
        assert!(matches!(nabla_i(&a, &a.one(), 2), Err(Error::IndexOutOfRange(_))));
    }

    #[test]
    fn gradient_identity_rank2() {
        let a = alg2();
        assert!(gradient_identity_residual(&a).unwrap().is_zero());
    }

    #[test]
    fn commutator_with_one_is_zero() {
        let a = alg2();
        let w = FormElement::single(1, a.z_star(2).unwrap(), &[]).unwrap();
        assert!(commutator_dbar(&a, &a.one(), &w).unwrap().is_zero());
    }
}
