//! Exact rational functions in one variable `s`, with the deformation
//! parameter fixed as `q = s^2`.
//!
//! Values are stored as `s^shift * num / den` with `num(0) != 0`,
//! `den(0) != 0`, `den` monic and `gcd(num, den) = 1`. Laurent
//! polynomials (the overwhelmingly common case in the algebra core) keep
//! `den = 1` and never touch the gcd path.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense univariate polynomial over the rationals, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    coeffs: Vec<BigRational>,
}

impl UPoly {
    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = UPoly { coeffs: vec![c] };
        p.trim();
        p
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = UPoly { coeffs };
        p.trim();
        p
    }

    pub fn monomial(c: BigRational, k: usize) -> Self {
        if c.is_zero() {
            return UPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        UPoly { coeffs }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree; the zero polynomial has no degree.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    /// Index of the lowest nonzero coefficient.
    pub fn low_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        UPoly { coeffs }
    }

    /// Divides by `s^k`; the low `k` coefficients must vanish.
    pub fn shift_down(&self, k: usize) -> Self {
        debug_assert!(self.coeffs.iter().take(k).all(|c| c.is_zero()));
        UPoly { coeffs: self.coeffs.iter().skip(k).cloned().collect() }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return UPoly::zero();
        }
        UPoly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            let v = match (self.coeffs.get(k), other.coeffs.get(k)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            };
            coeffs.push(v);
        }
        UPoly::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> Self {
        UPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        UPoly::from_coeffs(coeffs)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let c = &rem[k] / &lead;
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[k - dd + j] -= &c * b;
            }
            quot[k - dd] = c;
        }
        (UPoly::from_coeffs(quot), UPoly::from_coeffs(rem))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) if !l.is_one() => self.scale(&(BigRational::one() / l)),
            _ => self.clone(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + ratio_to_f64(c))
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a scaled division for huge numerators and denominators.
        let n = r.numer().bits() as i64;
        let d = r.denom().bits() as i64;
        let shift = (n.max(d) - 1000).max(0) as usize;
        let num = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let den = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        num / den
    })
}

/// An exact element of Q(s), the coefficient field of every algebra in
/// this crate. Equality is structural on the canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScalarQ {
    shift: i64,
    num: UPoly,
    den: UPoly,
}

impl Default for ScalarQ {
    fn default() -> Self {
        ScalarQ::zero()
    }
}

impl ScalarQ {
    pub fn zero() -> Self {
        ScalarQ { shift: 0, num: UPoly::zero(), den: UPoly::one() }
    }

    pub fn one() -> Self {
        ScalarQ::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        ScalarQ::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(c: BigRational) -> Self {
        ScalarQ { shift: 0, num: UPoly::constant(c), den: UPoly::one() }
    }

    /// `c * s^k` for any integer `k`.
    pub fn monomial(c: BigRational, k: i64) -> Self {
        if c.is_zero() {
            return ScalarQ::zero();
        }
        ScalarQ { shift: k, num: UPoly::constant(c), den: UPoly::one() }
    }

    pub fn s_pow(k: i64) -> Self {
        ScalarQ::monomial(BigRational::one(), k)
    }

    /// `q^k = s^(2k)`.
    pub fn q_pow(k: i64) -> Self {
        ScalarQ::s_pow(2 * k)
    }

    /// `q^(k/2) = s^k`, the half-integer powers appearing in the K-actions.
    pub fn q_half_pow(k: i64) -> Self {
        ScalarQ::s_pow(k)
    }

    /// `q - q^{-1}`.
    pub fn q_minus_qinv() -> Self {
        &ScalarQ::q_pow(1) - &ScalarQ::q_pow(-1)
    }

    /// `(-q)^k`.
    pub fn neg_q_pow(k: i64) -> Self {
        let p = ScalarQ::q_pow(k);
        if k.rem_euclid(2) == 1 {
            -p
        } else {
            p
        }
    }

    /// Builds `s^shift * num / den` and brings it to canonical form.
    pub fn from_parts(num: UPoly, den: UPoly, shift: i64) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(ScalarQ::normalize(num, den, shift))
    }

    /// Laurent polynomial `sum_k coeffs[k] * s^(k + low)`.
    pub fn laurent(coeffs: Vec<BigRational>, low: i64) -> Self {
        ScalarQ::normalize(UPoly::from_coeffs(coeffs), UPoly::one(), low)
    }

    fn normalize(num: UPoly, den: UPoly, shift: i64) -> Self {
        if num.is_zero() {
            return ScalarQ::zero();
        }
        let mut shift = shift;
        let nl = num.low_degree().unwrap();
        let dl = den.low_degree().unwrap();
        let mut num = num.shift_down(nl);
        let mut den = den.shift_down(dl);
        shift += nl as i64 - dl as i64;
        if den.degree() != Some(0) {
            let g = num.gcd(&den);
            if g.degree() != Some(0) {
                num = num.div_rem(&g).0;
                den = den.div_rem(&g).0;
            }
        }
        let lead = den.leading().unwrap().clone();
        if !lead.is_one() {
            let inv = BigRational::one() / lead;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        ScalarQ { shift, num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && self.num.is_one() && self.den.is_one()
    }

    /// True when the value is `c * s^k` for a single rational `c`.
    pub fn as_monomial(&self) -> Option<(BigRational, i64)> {
        if self.den.is_one() && self.num.degree() == Some(0) {
            Some((self.num.coeff(0), self.shift))
        } else {
            None
        }
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.as_monomial() {
            Some((c, 0)) => Some(c),
            _ if self.is_zero() => Some(BigRational::zero()),
            _ => None,
        }
    }

    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// Laurent coefficients as `(exponent of s, coefficient)`, or `None`
    /// for a genuine rational function.
    pub fn laurent_terms(&self) -> Option<Vec<(i64, BigRational)>> {
        if !self.is_laurent() {
            return None;
        }
        Some(
            self.num
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k as i64 + self.shift, c.clone()))
                .collect(),
        )
    }

    /// Numerator and denominator as polynomials in `s` (shift folded in).
    pub fn num_den(&self) -> (UPoly, UPoly) {
        if self.shift >= 0 {
            (self.num.shift_up(self.shift as usize), self.den.clone())
        } else {
            (self.num.clone(), self.den.shift_up((-self.shift) as usize))
        }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(ScalarQ::normalize(self.den.clone(), self.num.clone(), -self.shift))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.recip()?)
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return self.recip()?.pow(-k);
        }
        let mut acc = ScalarQ::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        Ok(acc)
    }

    /// Evaluates at `s = s0`; `None` where the denominator vanishes.
    pub fn eval_s(&self, s0: f64) -> Option<f64> {
        let d = self.den.eval_f64(s0);
        if d == 0.0 {
            return None;
        }
        Some(self.num.eval_f64(s0) / d * s0.powi(self.shift as i32))
    }

    /// Evaluates at the deformation parameter `q0`, i.e. `s = sqrt(q0)`.
    pub fn eval_q(&self, q0: f64) -> Option<f64> {
        self.eval_s(q0.sqrt())
    }

    pub fn eval_s_rational(&self, s0: &BigRational) -> Option<BigRational> {
        let d = self.den.eval_rational(s0);
        if d.is_zero() {
            return None;
        }
        let p = if self.shift >= 0 {
            num_traits::pow(s0.clone(), self.shift as usize)
        } else {
            BigRational::one() / num_traits::pow(s0.clone(), (-self.shift) as usize)
        };
        Some(self.num.eval_rational(s0) / d * p)
    }

    fn add_ref(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.shift.min(other.shift);
        let a = self.num.shift_up((self.shift - lo) as usize);
        let b = other.num.shift_up((other.shift - lo) as usize);
        if self.den.is_one() && other.den.is_one() {
            return ScalarQ::normalize(a.add(&b), UPoly::one(), lo);
        }
        if self.den == other.den {
            return ScalarQ::normalize(a.add(&b), self.den.clone(), lo);
        }
        let num = a.mul(&other.den).add(&b.mul(&self.den));
        ScalarQ::normalize(num, self.den.mul(&other.den), lo)
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return ScalarQ::zero();
        }
        let shift = self.shift + other.shift;
        if self.den.is_one() && other.den.is_one() {
            // product of polynomials with nonzero constant terms keeps one
            return ScalarQ { shift, num: self.num.mul(&other.num), den: UPoly::one() };
        }
        ScalarQ::normalize(self.num.mul(&other.num), self.den.mul(&other.den), shift)
    }

    /// Sparse `c*s^k` rendering of a polynomial in `s`, used by the JSON
    /// serialization.
    pub fn sparse_poly_string(p: &UPoly) -> String {
        let terms: Vec<String> = p
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("{}*s^{}", c, k))
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }

    pub fn parse_sparse_poly(text: &str) -> Result<UPoly> {
        let text = text.trim();
        if text == "0" {
            return Ok(UPoly::zero());
        }
        let mut coeffs: Vec<BigRational> = Vec::new();
        for term in text.split(" + ") {
            let (c, k) = term
                .trim()
                .split_once("*s^")
                .ok_or_else(|| Error::Parse(format!("bad sparse term '{}'", term)))?;
            let c: BigRational =
                c.parse().map_err(|_| Error::Parse(format!("bad coefficient '{}'", c)))?;
            let k: usize =
                k.parse().map_err(|_| Error::Parse(format!("bad exponent '{}'", k)))?;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, BigRational::zero());
            }
            coeffs[k] += c;
        }
        Ok(UPoly::from_coeffs(coeffs))
    }

    /// Numerator and denominator in sparse `c*s^k` form.
    pub fn to_sparse_pair(&self) -> (String, String) {
        let (n, d) = self.num_den();
        (ScalarQ::sparse_poly_string(&n), ScalarQ::sparse_poly_string(&d))
    }

    pub fn from_sparse_pair(num: &str, den: &str) -> Result<Self> {
        ScalarQ::from_parts(ScalarQ::parse_sparse_poly(num)?, ScalarQ::parse_sparse_poly(den)?, 0)
    }

    /// Renders the value for expression output; `needs_parens` reports
    /// whether the text is a sum that must be wrapped before multiplying.
    pub fn render(&self) -> (String, bool) {
        if self.is_zero() {
            return ("0".into(), false);
        }
        if let Some(terms) = self.laurent_terms() {
            let text = render_laurent(&terms);
            return (text, terms.len() > 1);
        }
        let (n, d) = self.num_den();
        let nt = laurent_of(&n);
        let dt = laurent_of(&d);
        (format!("({})/({})", render_laurent(&nt), render_laurent(&dt)), false)
    }
}

fn laurent_of(p: &UPoly) -> Vec<(i64, BigRational)> {
    p.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k as i64, c.clone()))
        .collect()
}

/// Prints `sum c_k s^k` in `q` when every exponent is even, else in `s`.
fn render_laurent(terms: &[(i64, BigRational)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let in_q = terms.iter().all(|(k, _)| k % 2 == 0);
    let mut out = String::new();
    for (idx, (k, c)) in terms.iter().enumerate() {
        let (var, e) = if in_q { ("q", k / 2) } else { ("s", *k) };
        let neg = c.is_negative();
        let mag = c.abs();
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let coef = if mag.is_integer() { mag.numer().to_string() } else { format!("{}", mag) };
        let needs_div_parens = !mag.is_integer();
        match e {
            0 => out.push_str(&coef),
            _ => {
                let power = if e == 1 { var.to_string() } else { format!("{}^{}", var, e) };
                if mag.is_one() {
                    out.push_str(&power);
                } else if needs_div_parens {
                    out.push_str(&format!("({})*{}", coef, power));
                } else {
                    out.push_str(&format!("{}*{}", coef, power));
                }
            }
        }
    }
    out
}

impl fmt::Display for ScalarQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render().0)
    }
}

impl Add for &ScalarQ {
    type Output = ScalarQ;
    fn add(self, rhs: &ScalarQ) -> ScalarQ {
        self.add_ref(rhs)
    }
}

impl Add for ScalarQ {
    type Output = ScalarQ;
    fn add(self, rhs: ScalarQ) -> ScalarQ {
        self.add_ref(&rhs)
    }
}

impl AddAssign<&ScalarQ> for ScalarQ {
    fn add_assign(&mut self, rhs: &ScalarQ) {
        *self = self.add_ref(rhs);
    }
}

impl Sub for &ScalarQ {
    type Output = ScalarQ;
    fn sub(self, rhs: &ScalarQ) -> ScalarQ {
        self.add_ref(&-rhs)
    }
}

impl Sub for ScalarQ {
    type Output = ScalarQ;
    fn sub(self, rhs: ScalarQ) -> ScalarQ {
        &self - &rhs
    }
}

impl Mul for &ScalarQ {
    type Output = ScalarQ;
    fn mul(self, rhs: &ScalarQ) -> ScalarQ {
        self.mul_ref(rhs)
    }
}

impl Mul for ScalarQ {
    type Output = ScalarQ;
    fn mul(self, rhs: ScalarQ) -> ScalarQ {
        self.mul_ref(&rhs)
    }
}

/// Panics on division by zero; use [`ScalarQ::checked_div`] for a `Result`.
impl Div for &ScalarQ {
    type Output = ScalarQ;
    fn div(self, rhs: &ScalarQ) -> ScalarQ {
        self.checked_div(rhs).expect("division by zero scalar")
    }
}

impl Neg for &ScalarQ {
    type Output = ScalarQ;
    fn neg(self) -> ScalarQ {
        ScalarQ { shift: self.shift, num: self.num.neg(), den: self.den.clone() }
    }
}

impl Neg for ScalarQ {
    type Output = ScalarQ;
    fn neg(self) -> ScalarQ {
        -&self
    }
}

impl PartialOrd for UPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| {
            for (a, b) in self.coeffs.iter().zip(other.coeffs.iter()).rev() {
                match a.cmp(b) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        }))
    }
}

/// Arithmetic on scalars in the four basic operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn scalar_arith(a: &ScalarQ, b: &ScalarQ, op: ScalarOp) -> Result<ScalarQ> {
    Ok(match op {
        ScalarOp::Add => a + b,
        ScalarOp::Sub => a - b,
        ScalarOp::Mul => a * b,
        ScalarOp::Div => a.checked_div(b)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(k: i64) -> ScalarQ {
        ScalarQ::q_pow(k)
    }

    #[test]
    fn cancellation() {
        let a = &ScalarQ::one() - &q(2);
        assert!((&a + &q(2)).is_one());
    }

    #[test]
    fn q_minus_qinv_times_q() {
        let lhs = &ScalarQ::q_minus_qinv() * &q(1);
        assert_eq!(lhs, &q(2) - &ScalarQ::one());
    }

    #[test]
    fn factor_division() {
        let num = &ScalarQ::one() - &q(4);
        let den = &ScalarQ::one() - &q(2);
        let r = scalar_arith(&num, &den, ScalarOp::Div).unwrap();
        assert_eq!(r, &ScalarQ::one() + &q(2));
        assert!(r.is_laurent());
    }

    #[test]
    fn division_by_zero_rejected() {
        let r = scalar_arith(&ScalarQ::one(), &ScalarQ::zero(), ScalarOp::Div);
        assert!(matches!(r, Err(Error::DivisionByZero)));
    }

    #[test]
    fn canonical_rational_function() {
        // (1 - q^2) / (1 - q^4) = 1 / (1 + q^2)
        let a = (&ScalarQ::one() - &q(2)).checked_div(&(&ScalarQ::one() - &q(4))).unwrap();
        let b = ScalarQ::one().checked_div(&(&ScalarQ::one() + &q(2))).unwrap();
        assert_eq!(a, b);
        assert!(!a.is_laurent());
        assert!((a.eval_q(0.5).unwrap() - 0.8).abs() < 1e-15);
    }

    #[test]
    fn sparse_round_trip() {
        let a = (&q(3) - &ScalarQ::from_int(2)).checked_div(&(&q(1) + &ScalarQ::s_pow(1))).unwrap();
        let (n, d) = a.to_sparse_pair();
        assert_eq!(ScalarQ::from_sparse_pair(&n, &d).unwrap(), a);
    }

    #[test]
    fn rendering() {
        assert_eq!(q(-1).to_string(), "q^-1");
        assert_eq!(ScalarQ::q_minus_qinv().to_string(), "-q^-1 + q");
        assert_eq!(ScalarQ::s_pow(3).to_string(), "s^3");
        assert_eq!((-&ScalarQ::neg_q_pow(1)).to_string(), "q");
    }
}
