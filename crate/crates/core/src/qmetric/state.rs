use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

use super::{check_q, IqPoint, QFunction, Real};
use crate::error::{Error, Result};

/// A state on `C(I_q)`: weights `w_0..w_T` at `q^{2m}` and an atom at `0`.
#[derive(Clone, Debug, PartialEq)]
pub struct QState<F> {
    weights: Vec<F>,
    tail: F,
}

impl<F: Real> QState<F> {
    pub fn new(weights: Vec<F>, tail: F) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidArgument("a state needs at least one weight".into()));
        }
        if weights.iter().chain(std::iter::once(&tail)).any(|w| w.is_negative() && !w.near(&F::zero())) {
            return Err(Error::InvalidArgument("negative weight".into()));
        }
        let total = weights.iter().fold(tail.clone(), |acc, w| acc + w.clone());
        if !total.near(&F::one()) {
            return Err(Error::InvalidArgument(format!("weights sum to {:?}, not 1", total)));
        }
        Ok(QState { weights, tail })
    }

    pub fn point_mass(x: IqPoint, t: usize) -> Result<Self> {
        let mut weights = vec![F::zero(); t + 1];
        let mut tail = F::zero();
        match x {
            IqPoint::Level(m) if m <= t => weights[m] = F::one(),
            IqPoint::Level(m) => return Err(Error::IndexOutOfRange(format!("point q^{} below truncation {}", 2 * m, t))),
            IqPoint::Zero => tail = F::one(),
        }
        Ok(QState { weights, tail })
    }

    pub fn level(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn weights(&self) -> &[F] {
        &self.weights
    }

    pub fn tail(&self) -> &F {
        &self.tail
    }

    pub fn retruncate(&self, t: usize) -> Self {
        let mut out = self.clone();
        if out.weights.len() <= t {
            out.weights.resize(t + 1, F::zero());
        }
        out
    }

    /// `μ(f) = Σ w_m f(q^{2m}) + w_∞ f(0)`.
    pub fn pair(&self, f: &QFunction<F>) -> F {
        let mut acc = self.tail.clone() * f.tail().clone();
        for (m, w) in self.weights.iter().enumerate() {
            acc = acc + w.clone() * f.at_level(m).clone();
        }
        acc
    }

    /// `μ(y^k)`.
    pub fn moment(&self, k: usize, q: &F) -> F {
        let mut acc = if k == 0 { self.tail.clone() } else { F::zero() };
        for (m, w) in self.weights.iter().enumerate() {
            acc = acc + w.clone() * q.powi(2 * m * k);
        }
        acc
    }
}

impl QState<f64> {
    pub fn random<R: Rng + ?Sized>(rng: &mut R, t: usize) -> Self {
        let mut raw: Vec<f64> = (0..t + 2).map(|_| if rng.gen_bool(0.3) { 0.0 } else { rng.gen::<f64>() }).collect();
        if raw.iter().all(|w| *w == 0.0) {
            raw[0] = 1.0;
        }
        let total: f64 = raw.iter().sum();
        let tail = raw.pop().expect("t + 2 entries") / total;
        QState { weights: raw.into_iter().map(|w| w / total).collect(), tail }
    }
}

impl QState<BigRational> {
    pub fn random<R: Rng + ?Sized>(rng: &mut R, t: usize) -> Self {
        let mut raw: Vec<i64> = (0..t + 2).map(|_| if rng.gen_bool(0.3) { 0 } else { rng.gen_range(1..=20) }).collect();
        if raw.iter().all(|w| *w == 0) {
            raw[0] = 1;
        }
        let total: i64 = raw.iter().sum();
        let frac = |w: i64| BigRational::new(w.into(), total.into());
        let tail = frac(raw.pop().expect("t + 2 entries"));
        QState { weights: raw.into_iter().map(frac).collect(), tail }
    }
}

/// The counit: the point mass at `0`.
pub fn counit_state<F: Real>(t: usize) -> QState<F> {
    QState::point_mass(IqPoint::Zero, t).expect("0 is always a point")
}

/// Restriction of the Haar state to `C(I_q)` for `ℓ = 1`:
/// `w_j = (1 − q²)q^{2j}`, with the remaining mass `q^{2(T+1)}` at `0`.
pub fn haar_state_iq<F: Real>(q: &F, t: usize) -> Result<QState<F>> {
    check_q(q)?;
    let q2 = q.clone() * q.clone();
    let weights = (0..=t).map(|j| (F::one() - q2.clone()) * q2.powi(j)).collect();
    Ok(QState { weights, tail: q2.powi(t + 1) })
}

/// Moments `μ(y^0), μ(y^1), …` of a measure on `I_q`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSequence<F> {
    moments: Vec<F>,
}

impl<F: Real> MomentSequence<F> {
    pub fn new(moments: Vec<F>) -> Result<Self> {
        match moments.first() {
            Some(m0) if m0.near(&F::one()) => Ok(MomentSequence { moments }),
            _ => Err(Error::InvalidArgument("a moment sequence starts with 1".into())),
        }
    }

    pub fn moments(&self) -> &[F] {
        &self.moments
    }
}

/// The base measure on `I_q` for rank `ℓ`. Only `ℓ = 1` has a built-in
/// formula; other ranks need a moment sequence.
pub fn base_state<F: Real>(q: &F, t: usize, ell: usize, moments: Option<&MomentSequence<F>>) -> Result<QState<F>> {
    match (ell, moments) {
        (_, Some(seq)) => state_from_moments(q, t, seq),
        (1, None) => haar_state_iq(q, t),
        (ell, None) => Err(Error::UnsupportedRank(ell)),
    }
}

/// The state on the nodes `q^0, …, q^{2T}, 0` whose first `T + 2` moments
/// are the given ones.
pub fn state_from_moments<F: Real>(q: &F, t: usize, seq: &MomentSequence<F>) -> Result<QState<F>> {
    check_q(q)?;
    let n = t + 2;
    if seq.moments.len() < n {
        return Err(Error::InvalidArgument(format!("{} moments needed, {} given", n, seq.moments.len())));
    }
    let nodes: Vec<F> = (0..=t).map(|j| IqPoint::Level(j).value(q)).chain(std::iter::once(F::zero())).collect();
    // Row k: Σ_i w_i x_i^k = m_k.
    let mut a: Vec<Vec<F>> = (0..n)
        .map(|k| {
            let mut row: Vec<F> = nodes.iter().map(|x| if k == 0 { F::one() } else { x.powi(k) }).collect();
            row.push(seq.moments[k].clone());
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).expect("comparable"))
            .expect("non-empty range");
        if a[pivot][col].is_zero() {
            return Err(Error::InvalidArgument("singular moment system".into()));
        }
        a.swap(col, pivot);
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let factor = a[i][col].clone() / a[col][col].clone();
                for j in col..=n {
                    let v = a[col][j].clone() * factor.clone();
                    a[i][j] = a[i][j].clone() - v;
                }
            }
        }
    }
    let mut weights: Vec<F> = (0..n).map(|i| a[i][n].clone() / a[i][i].clone()).collect();
    let tail = weights.pop().expect("n ≥ 2");
    QState::new(weights, tail)
}

/// `h_k(f) = h(a_k·f(q^{2k}·))/h(a_k)` with `a_k(x) = Π_{i=1}^k (1 − q^{2i}x)`.
/// The result lives on `q^{2(k+j)}` and `0`, at truncation `T + k`.
pub fn hk_state<F: Real>(k: usize, base: &QState<F>, q: &F) -> Result<QState<F>> {
    check_q(q)?;
    if k == 0 {
        return Ok(base.clone());
    }
    let q2 = q.clone() * q.clone();
    let mut weights = vec![F::zero(); k];
    for (j, w) in base.weights.iter().enumerate() {
        let mut a = w.clone();
        for i in 1..=k {
            a = a * (F::one() - q2.powi(i + j));
        }
        weights.push(a);
    }
    let total = weights.iter().fold(base.tail.clone(), |acc, w| acc + w.clone());
    if total.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let weights = weights.into_iter().map(|w| w / total.clone()).collect();
    Ok(QState { weights, tail: base.tail.clone() / total })
}

/// Exact rational `q` from a decimal or fraction string such as `0.5` or `3/7`.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {}", text));
    if let Some((n, d)) = text.split_once('/') {
        let n = n.trim().parse::<num_bigint::BigInt>().map_err(|_| bad())?;
        let d = d.trim().parse::<num_bigint::BigInt>().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        return Ok(BigRational::new(n, d));
    }
    let (int, frac) = text.split_once('.').unwrap_or((text, ""));
    if !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{}{}", int, frac);
    let n = digits.parse::<num_bigint::BigInt>().map_err(|_| bad())?;
    let d = num_traits::pow(num_bigint::BigInt::from(10), frac.len());
    Ok(BigRational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn haar_weights_and_moments() {
        let q = rat(1, 2);
        let h = haar_state_iq(&q, 30).unwrap();
        assert_eq!(h.weights()[0], rat(3, 4));
        assert_eq!(h.moment(0, &q), rat(1, 1));
        // first moment 1/(1+q²) up to a tail of order q^{4T}
        let diff = h.moment(1, &q) - rat(4, 5);
        assert!(diff.abs() < q.powi(4 * 30));
        assert!(matches!(base_state(&q, 5, 2, None), Err(Error::UnsupportedRank(2))));
    }

    #[test]
    fn counit_values() {
        let q = rat(1, 2);
        let eps = counit_state::<BigRational>(6);
        assert_eq!(eps.pair(&QFunction::identity(&q, 6)), rat(0, 1));
        assert_eq!(eps.pair(&QFunction::constant(rat(1, 1), 6)), rat(1, 1));
        assert_eq!(eps.pair(&QFunction::indicator(0, 6).unwrap()), rat(0, 1));
    }

    #[test]
    fn hk_support_and_moments() {
        let q = rat(1, 2);
        let base = haar_state_iq(&q, 8).unwrap();
        assert_eq!(hk_state(0, &base, &q).unwrap(), base);
        for k in 1..=4 {
            let h = hk_state(k, &base, &q).unwrap();
            assert_eq!(h.level(), 8 + k);
            assert!(h.weights()[..k].iter().all(|w| w.is_zero()));
            for m in 0..=4 {
                assert!(h.moment(m, &q) <= q.powi(2 * k * m));
            }
        }
    }

    #[test]
    fn moments_recover_a_state() {
        let q = rat(1, 3);
        let s = QState::new(vec![rat(1, 2), rat(0, 1), rat(1, 4)], rat(1, 4)).unwrap();
        let seq = MomentSequence::new((0..4).map(|k| s.moment(k, &q)).collect()).unwrap();
        assert_eq!(state_from_moments(&q, 2, &seq).unwrap(), s);
        assert_eq!(base_state(&q, 2, 3, Some(&seq)).unwrap(), s);
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("0.5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("3/7").unwrap(), rat(3, 7));
        assert!(parse_rational("x").is_err());
    }
}
