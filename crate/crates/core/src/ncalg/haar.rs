//! Haar state, modular automorphism and transpose for quantum SU(2), and
//! the modular automorphism on generators for every rank.

use num_rational::BigRational;

use super::algebra::Algebra;
use super::poly::NcPoly;
use super::word::{GeneratorIndex, Word};
use crate::error::{Error, Result};
use crate::scalar::{ScalarQ, UPoly};

const U11: u8 = 0;
const U12: u8 = 1;
const U21: u8 = 2;
const U22: u8 = 3;

/// `h(b^j (b^*)^j) = (1 - q^2)/(1 - q^{2(j+1)})`.
pub fn haar_bb_moment(j: usize) -> ScalarQ {
    // (1 - q^2)/(1 - q^{2(j+1)}) = 1/(1 + q^2 + ... + q^{2j})
    let mut coeffs = vec![BigRational::from_integer(0.into()); 4 * j + 1];
    for i in 0..=j {
        coeffs[4 * i] = BigRational::from_integer(1.into());
    }
    let den = UPoly::from_coeffs(coeffs);
    ScalarQ::from_parts(UPoly::one(), den, 0).expect("nonzero denominator")
}

fn require_rank2(alg: &Algebra) -> Result<()> {
    if alg.rank() != 2 {
        return Err(Error::UnsupportedRank(alg.rank()));
    }
    Ok(())
}

/// Haar state of a normal word at N = 2.
///
/// In the letters `u11 = a^*`, `u12 = -q b`, `u21 = b^*`, `u22 = a` a sorted
/// word is `(a^*)^α (-q)^β b^β (b^*)^γ a^δ`. Torus invariance kills every
/// word with `α ≠ δ` or `β ≠ γ`, and words with `α = δ ≥ 1` are not normal
/// once the completion covers their degree.
pub fn haar_word_n2(alg: &Algebra, w: &Word) -> Result<ScalarQ> {
    require_rank2(alg)?;
    let mut counts = [0usize; 4];
    for &l in w.letters() {
        counts[l as usize] += 1;
    }
    let (alpha, beta, gamma, delta) =
        (counts[U11 as usize], counts[U12 as usize], counts[U21 as usize], counts[U22 as usize]);
    if alpha != delta || beta != gamma {
        return Ok(ScalarQ::zero());
    }
    if !alg.system().is_normal_word(w.letters()) {
        return haar_n2(alg, &alg.normal_form_word(w));
    }
    if alpha > 0 {
        return Err(Error::CompletionFailed(format!(
            "word {} is normal but has a diagonal factor pair; raise the degree bound",
            w.display(2)
        )));
    }
    Ok(&ScalarQ::neg_q_pow(beta as i64) * &haar_bb_moment(beta))
}

/// Haar state at N = 2, evaluated on the normal form.
pub fn haar_n2(alg: &Algebra, p: &NcPoly) -> Result<ScalarQ> {
    require_rank2(alg)?;
    let red = if alg.is_normal(p) { p.clone() } else { alg.reduce(p)? };
    let mut acc = ScalarQ::zero();
    for (w, c) in red.terms() {
        let v = haar_word_n2(alg, w)?;
        if !v.is_zero() {
            acc += &(c * &v);
        }
    }
    Ok(acc)
}

/// `θ(u_ij) = q^{2(i+j-N-1)} u_ij`, extended multiplicatively. Since θ is
/// diagonal on letters it maps normal words to multiples of themselves.
pub fn modular_theta(alg: &Algebra, p: &NcPoly) -> NcPoly {
    let n = alg.rank();
    p.map_coeffs(|w, c| {
        let e: i64 = w
            .indices(n)
            .iter()
            .map(|g| 2 * (g.row as i64 + g.col as i64 - n as i64 - 1))
            .sum();
        c * &ScalarQ::q_pow(e)
    })
}

/// Inverse of [`modular_theta`].
pub fn modular_theta_inv(alg: &Algebra, p: &NcPoly) -> NcPoly {
    let n = alg.rank();
    p.map_coeffs(|w, c| {
        let e: i64 = w
            .indices(n)
            .iter()
            .map(|g| 2 * (g.row as i64 + g.col as i64 - n as i64 - 1))
            .sum();
        c * &ScalarQ::q_pow(-e)
    })
}

/// Transpose `T(u_ij) = q^{j-i} u_ji` at N = 2, a multiplicative map.
pub fn transpose_n2(alg: &Algebra, p: &NcPoly) -> Result<NcPoly> {
    require_rank2(alg)?;
    let n = 2;
    let mut raw = NcPoly::zero(n);
    for (w, c) in p.terms() {
        let mut e = 0i64;
        let letters: Vec<u8> = w
            .indices(n)
            .iter()
            .map(|g| {
                e += g.col as i64 - g.row as i64;
                GeneratorIndex { row: g.col, col: g.row }.letter(n)
            })
            .collect();
        raw.add_term(Word(letters), c * &ScalarQ::q_pow(e));
    }
    alg.reduce(&raw)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg() -> Algebra {
        Algebra::with_bound(2, 6).unwrap()
    }

    #[test]
    fn haar_of_one_and_u22() {
        let a = alg();
        assert!(haar_n2(&a, &a.one()).unwrap().is_one());
        assert!(haar_n2(&a, &a.generator(2, 2).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn haar_of_u12_u21() {
        let a = alg();
        let p = a.mul(&a.generator(1, 2).unwrap(), &a.generator(2, 1).unwrap()).unwrap();
        // -q/(1+q^2)
        let expect = (-ScalarQ::q_pow(1)).checked_div(&(ScalarQ::one() + ScalarQ::q_pow(2))).unwrap();
        assert_eq!(haar_n2(&a, &p).unwrap(), expect);
    }

    #[test]
    fn haar_rejects_rank3() {
        let a = Algebra::with_bound(3, 3).unwrap();
        assert!(matches!(haar_n2(&a, &a.one()), Err(Error::UnsupportedRank(3))));
    }

    #[test]
    fn theta_examples() {
        let a = alg();
        assert_eq!(modular_theta(&a, &a.generator(1, 1).unwrap()), a.generator(1, 1).unwrap().scale(&ScalarQ::q_pow(-2)));
        let b = Algebra::with_bound(3, 3).unwrap();
        assert_eq!(modular_theta(&b, &b.generator(3, 3).unwrap()), b.generator(3, 3).unwrap().scale(&ScalarQ::q_pow(4)));
        assert_eq!(modular_theta(&a, &a.one()), a.one());
    }

    #[test]
    fn transpose_examples() {
        let a = alg();
        assert_eq!(transpose_n2(&a, &a.generator(1, 2).unwrap()).unwrap(), a.generator(2, 1).unwrap().scale(&ScalarQ::q_pow(1)));
        assert_eq!(transpose_n2(&a, &a.generator(1, 1).unwrap()).unwrap(), a.generator(1, 1).unwrap());
        let u21 = a.generator(2, 1).unwrap();
        assert_eq!(transpose_n2(&a, &transpose_n2(&a, &u21).unwrap()).unwrap(), u21);
    }
}
