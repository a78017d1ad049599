//! Exact sums `Σ r_i √n_i + t·τ` with rational `r_i`, positive integer
//! radicands `n_i`, and one formal symbol `τ` standing for a fixed positive
//! real known through rational brackets.
//!
//! Radicands are merged whenever their product is a perfect square, so the
//! stored square roots are linearly independent over ℚ and a value is zero
//! exactly when every stored coefficient is.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Surd {
    terms: Vec<(BigInt, BigRational)>,
    tau: BigRational,
}

fn is_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Strips square factors `p^2` for small primes `p`; returns `(k, n')` with `n = k^2 n'`.
fn strip_small_squares(mut n: BigInt) -> (BigInt, BigInt) {
    let mut k = BigInt::one();
    let mut p = 2u32;
    while p < 200 {
        let pp = BigInt::from(p * p);
        while (&n % &pp).is_zero() {
            n /= &pp;
            k *= p;
        }
        p += 1;
    }
    (k, n)
}

impl Surd {
    pub fn zero() -> Self {
        Surd::default()
    }

    pub fn rational(r: BigRational) -> Self {
        let mut s = Surd::zero();
        s.add_sqrt_int(BigInt::one(), r);
        s
    }

    /// `c·√r` for a positive rational `r`.
    pub fn sqrt_of(r: &BigRational, c: BigRational) -> Result<Self> {
        if !r.is_positive() {
            return Err(Error::InvalidArgument(format!("square root of non-positive {}", r)));
        }
        // √(a/b) = √(ab)/b
        let n = r.numer() * r.denom();
        let c = c / BigRational::from_integer(r.denom().clone());
        let mut s = Surd::zero();
        s.add_sqrt_int(n, c);
        Ok(s)
    }

    /// The formal symbol `τ` with coefficient `t`.
    pub fn tau(t: BigRational) -> Self {
        Surd { terms: Vec::new(), tau: t }
    }

    fn add_sqrt_int(&mut self, n: BigInt, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let (k, n) = strip_small_squares(n);
        let c = c * BigRational::from_integer(k);
        let hit = self.terms.iter().position(|(key, _)| is_square(&(&n * key)).is_some());
        match hit {
            Some(i) => {
                // √n = √(n·key)/key
                let key = self.terms[i].0.clone();
                let root = is_square(&(&n * &key)).expect("checked above");
                self.terms[i].1 += c * BigRational::new(root, key);
                if self.terms[i].1.is_zero() {
                    self.terms.remove(i);
                }
            }
            None => self.terms.push((n, c)),
        }
    }

    pub fn add(&self, other: &Surd) -> Surd {
        let mut out = self.clone();
        for (n, c) in &other.terms {
            out.add_sqrt_int(n.clone(), c.clone());
        }
        out.tau += &other.tau;
        out
    }

    pub fn sub(&self, other: &Surd) -> Surd {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, r: &BigRational) -> Surd {
        if r.is_zero() {
            return Surd::zero();
        }
        Surd {
            terms: self.terms.iter().map(|(n, c)| (n.clone(), c * r)).collect(),
            tau: &self.tau * r,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.tau.is_zero()
    }

    pub fn tau_coeff(&self) -> &BigRational {
        &self.tau
    }

    pub fn sqrt_terms(&self) -> &[(BigInt, BigRational)] {
        &self.terms
    }

    /// Interval enclosure of the surd part with `bits` bits per square root.
    fn surd_interval(&self, bits: u32) -> (BigRational, BigRational) {
        let scale = BigInt::one() << bits;
        let mut lo = BigRational::zero();
        let mut hi = BigRational::zero();
        for (n, c) in &self.terms {
            let r = (n * &scale * &scale).sqrt();
            let a = BigRational::new(r.clone(), scale.clone());
            let b = if &r * &r == n * &scale * &scale { a.clone() } else { BigRational::new(r + 1, scale.clone()) };
            if c.is_positive() {
                lo += c * &a;
                hi += c * &b;
            } else {
                lo += c * &b;
                hi += c * &a;
            }
        }
        (lo, hi)
    }

    /// Sign of the value, given brackets for `τ` at increasing precision.
    pub fn sign(&self, tau_bracket: &dyn Fn(u32) -> (BigRational, BigRational)) -> Result<Ordering> {
        if self.is_zero() {
            return Ok(Ordering::Equal);
        }
        let mut bits = 32;
        while bits <= 4096 {
            let (mut lo, mut hi) = self.surd_interval(bits);
            if !self.tau.is_zero() {
                let (tl, th) = tau_bracket(bits);
                if self.tau.is_positive() {
                    lo += &self.tau * tl;
                    hi += &self.tau * th;
                } else {
                    lo += &self.tau * th;
                    hi += &self.tau * tl;
                }
            }
            if lo.is_positive() {
                return Ok(Ordering::Greater);
            }
            if hi.is_negative() {
                return Ok(Ordering::Less);
            }
            if self.tau.is_zero() && lo.is_zero() && hi.is_zero() {
                return Ok(Ordering::Equal);
            }
            bits *= 2;
        }
        Err(Error::Lp(format!("could not decide the sign of {}", self)))
    }

    /// Floating-point value with `τ` replaced by `tau`.
    pub fn to_f64(&self, tau: f64) -> f64 {
        let mut acc = self.tau.to_f64().unwrap_or(f64::NAN) * tau;
        for (n, c) in &self.terms {
            let nf = n.to_f64().unwrap_or(f64::INFINITY);
            acc += c.to_f64().unwrap_or(f64::NAN) * nf.sqrt();
        }
        acc
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self
            .terms
            .iter()
            .map(|(n, c)| if n.is_one() { format!("{}", c) } else { format!("{}*sqrt({})", c, n) })
            .collect();
        if !self.tau.is_zero() {
            parts.push(format!("{}*tau", self.tau));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Rational enclosure `[lo, hi]` of `√r` with `bits` bits.
pub fn sqrt_bracket(r: &BigRational, bits: u32) -> (BigRational, BigRational) {
    let scale = BigInt::one() << bits;
    // √(a/b) = √(ab)/b
    let n = r.numer() * r.denom();
    if n.sign() != Sign::Plus {
        return (BigRational::zero(), BigRational::zero());
    }
    let root = (&n * &scale * &scale).sqrt();
    let den = scale * r.denom();
    let lo = BigRational::new(root.clone(), den.clone());
    let hi = if &root * &root == &n * (BigInt::one() << (2 * bits)) { lo.clone() } else { BigRational::new(root + 1, den) };
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn merges_equal_square_classes() {
        // √8 - 2√2 = 0
        let a = Surd::sqrt_of(&rat(8, 1), rat(1, 1)).unwrap();
        let b = Surd::sqrt_of(&rat(2, 1), rat(2, 1)).unwrap();
        assert!(a.sub(&b).is_zero());
        // √(1/2) = √2/2
        let c = Surd::sqrt_of(&rat(1, 2), rat(2, 1)).unwrap();
        assert!(c.sub(&Surd::sqrt_of(&rat(2, 1), rat(1, 1)).unwrap()).is_zero());
    }

    #[test]
    fn sign_by_refinement() {
        // √2 + √3 - √10 < 0 (3.146 vs 3.162)
        let s = Surd::sqrt_of(&rat(2, 1), rat(1, 1))
            .unwrap()
            .add(&Surd::sqrt_of(&rat(3, 1), rat(1, 1)).unwrap())
            .sub(&Surd::sqrt_of(&rat(10, 1), rat(1, 1)).unwrap());
        let none = |_: u32| (BigRational::zero(), BigRational::zero());
        assert_eq!(s.sign(&none).unwrap(), Ordering::Less);
        assert!((s.to_f64(0.0) - (2f64.sqrt() + 3f64.sqrt() - 10f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn bracket_contains_root() {
        let (lo, hi) = sqrt_bracket(&rat(3, 7), 40);
        let v = (3.0f64 / 7.0).sqrt();
        assert!(lo.to_f64().unwrap() <= v + 1e-15 && v <= hi.to_f64().unwrap() + 1e-15);
        let (lo, hi) = sqrt_bracket(&rat(9, 4), 10);
        assert_eq!(lo, rat(3, 2));
        assert_eq!(hi, rat(3, 2));
    }
}
