use rand::Rng;

use super::{check_q, Real};
use crate::error::{Error, Result};

/// A point of the quantized interval: `q^{2m}` or `0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum IqPoint {
    Level(usize),
    Zero,
}

impl IqPoint {
    pub fn value<F: Real>(&self, q: &F) -> F {
        match self {
            IqPoint::Level(m) => q.powi(2 * m),
            IqPoint::Zero => F::zero(),
        }
    }

    /// `√x`, which is `q^m` at `q^{2m}`.
    pub fn sqrt_value<F: Real>(&self, q: &F) -> F {
        match self {
            IqPoint::Level(m) => q.powi(*m),
            IqPoint::Zero => F::zero(),
        }
    }

    /// Locates `x` among `q^0, q^2, …, q^{2·max_level}` and `0`.
    pub fn from_value<F: Real>(x: &F, q: &F, max_level: usize) -> Result<IqPoint> {
        if x.is_zero() {
            return Ok(IqPoint::Zero);
        }
        let q2 = q.clone() * q.clone();
        let mut p = F::one();
        for m in 0..=max_level {
            if p.near(x) {
                return Ok(IqPoint::Level(m));
            }
            p = p * q2.clone();
        }
        Err(Error::InvalidArgument(format!("{:?} is not a point of I_q", x)))
    }
}

/// A function on `I_q` that is constant below `q^{2T}`: values `v_0..v_T`
/// at `q^{2m}` and one tail value at every smaller point, `0` included.
#[derive(Clone, Debug, PartialEq)]
pub struct QFunction<F> {
    values: Vec<F>,
    tail: F,
}

impl<F: Real> QFunction<F> {
    pub fn new(values: Vec<F>, tail: F) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("a function needs at least the value at 1".into()));
        }
        Ok(QFunction { values, tail })
    }

    pub fn constant(c: F, t: usize) -> Self {
        QFunction { values: vec![c.clone(); t + 1], tail: c }
    }

    /// Indicator `p_m` of the point `q^{2m}`.
    pub fn indicator(m: usize, t: usize) -> Result<Self> {
        if m > t {
            return Err(Error::IndexOutOfRange(format!("p_{} needs truncation at least {}", m, m)));
        }
        let mut values = vec![F::zero(); t + 1];
        values[m] = F::one();
        Ok(QFunction { values, tail: F::zero() })
    }

    /// `x ↦ x`, cut off to `0` below `q^{2T}`.
    pub fn identity(q: &F, t: usize) -> Self {
        let values = (0..=t).map(|m| IqPoint::Level(m).value(q)).collect();
        QFunction { values, tail: F::zero() }
    }

    pub fn level(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[F] {
        &self.values
    }

    pub fn tail(&self) -> &F {
        &self.tail
    }

    pub fn at_level(&self, m: usize) -> &F {
        self.values.get(m).unwrap_or(&self.tail)
    }

    pub fn eval(&self, x: IqPoint) -> &F {
        match x {
            IqPoint::Level(m) => self.at_level(m),
            IqPoint::Zero => &self.tail,
        }
    }

    /// The same function written at a higher truncation level.
    pub fn retruncate(&self, t: usize) -> Self {
        let mut out = self.clone();
        while out.values.len() <= t {
            out.values.push(self.tail.clone());
        }
        out
    }

    pub fn map<G>(&self, f: impl Fn(&F) -> G) -> QFunction<G> {
        QFunction { values: self.values.iter().map(&f).collect(), tail: f(&self.tail) }
    }

    pub fn combine(&self, other: &Self, f: impl Fn(&F, &F) -> F) -> Self {
        let t = self.level().max(other.level());
        let (a, b) = (self.retruncate(t), other.retruncate(t));
        QFunction {
            values: a.values.iter().zip(&b.values).map(|(x, y)| f(x, y)).collect(),
            tail: f(&a.tail, &b.tail),
        }
    }

    /// The star of a real-valued function is itself; kept for the slip-norm axioms.
    pub fn conj(&self) -> Self {
        self.clone()
    }
}

impl QFunction<f64> {
    /// Random values in `[-1, 1]`; about a third of the draws are eventually
    /// constant well above the truncation.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, t: usize) -> Self {
        let stop = if rng.gen_bool(1.0 / 3.0) { rng.gen_range(0..=t) } else { t };
        let mut values: Vec<f64> = (0..=stop).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let tail = if stop < t { values[stop] } else { rng.gen_range(-1.0..=1.0) };
        values.resize(t + 1, tail);
        QFunction { values, tail }
    }

    /// A random function with `L_grad(f) ≤ 1`: each consecutive step, and
    /// the step from `q^{2T}` to the tail, is a uniform fraction of the
    /// largest one the seminorm allows.
    pub fn random_lipschitz<R: Rng + ?Sized>(rng: &mut R, t: usize, q: f64) -> Self {
        let tail: f64 = rng.gen_range(-1.0..=1.0);
        let mut values = vec![0.0; t + 1];
        let mut next = tail;
        for m in (0..=t).rev() {
            next += rng.gen_range(-1.0..=1.0) * super::chain_edge(q, m);
            values[m] = next;
        }
        QFunction { values, tail }
    }
}

/// `D(f)(q^{2m}) = (f(q^{2m}) − f(q^{2m+2}))/(q^{2m}(1 − q²))` for `m = 0..=T+1`.
pub fn diff_d<F: Real>(f: &QFunction<F>, q: &F) -> Vec<F> {
    let q2 = q.clone() * q.clone();
    let one_minus = F::one() - q2.clone();
    let mut scale = one_minus;
    let mut out = Vec::with_capacity(f.level() + 2);
    for m in 0..=f.level() + 1 {
        out.push((f.at_level(m).clone() - f.at_level(m + 1).clone()) / scale.clone());
        scale = scale * q2.clone();
    }
    out
}

/// `E(f)(q^{2m}) = D(f)(q^{2m−2})` with `f(q^{-2}) = 0`, for `m = 0..=T+1`.
pub fn diff_e<F: Real>(f: &QFunction<F>, q: &F) -> Vec<F> {
    let q2 = q.clone() * q.clone();
    let d = diff_d(f, q);
    let mut out = Vec::with_capacity(d.len());
    out.push(-(q2.clone() * f.at_level(0).clone()) / (F::one() - q2));
    out.extend(d.into_iter().take(f.level() + 1));
    out
}

/// `G(x) = q⁻¹x(1 − q²x)`.
pub fn g_function<F: Real>(x: IqPoint, q: &F) -> F {
    let v = x.value(q);
    v.clone() * (F::one() - q.clone() * q.clone() * v) / q.clone()
}

/// `max_m G(q^{2m})·D(f)(q^{2m})²`, the square of the gradient seminorm.
pub fn seminorm_grad_sq<F: Real>(f: &QFunction<F>, q: &F) -> F {
    diff_d(f, q)
        .into_iter()
        .enumerate()
        .map(|(m, d)| g_function(IqPoint::Level(m), q) * d.clone() * d)
        .fold(F::zero(), |acc, v| if v > acc { v } else { acc })
}

/// `L_grad(f) = sup_m √G(q^{2m})·|D(f)(q^{2m})|`.
pub fn seminorm_grad(f: &QFunction<f64>, q: f64) -> f64 {
    seminorm_grad_sq(f, &q).sqrt()
}

/// `|f(x) − f(y)| ≤ (√(1+q)/√(1−q))·|√x − √y|·L_grad(f)`, compared in squares.
pub fn lip_bound_check<F: Real>(f: &QFunction<F>, x: IqPoint, y: IqPoint, q: &F) -> Result<bool> {
    check_q(q)?;
    let diff = f.eval(x).clone() - f.eval(y).clone();
    let root = x.sqrt_value(q) - y.sqrt_value(q);
    let cq2 = (F::one() + q.clone()) / (F::one() - q.clone());
    let rhs = cq2 * root.clone() * root * seminorm_grad_sq(f, q);
    Ok((diff.clone() * diff).le_slack(&rhs))
}

/// `Ψ(f)`: keeps `f` on `q^0..q^{2·level}` and continues it by `f(q^{2·level})`.
pub fn psi_approx<F: Real>(f: &QFunction<F>, level: usize) -> Result<QFunction<F>> {
    if level > f.level() {
        return Err(Error::InvalidArgument(format!("level {} exceeds the truncation {}", level, f.level())));
    }
    let values = f.values[..=level].to_vec();
    let tail = values[level].clone();
    Ok(QFunction { values, tail })
}

/// `sup_x |f(x) − g(x)|`.
pub fn sup_distance<F: Real>(f: &QFunction<F>, g: &QFunction<F>) -> F {
    let d = f.combine(g, |a, b| (a.clone() - b.clone()).abs());
    d.values.iter().chain(std::iter::once(&d.tail)).fold(F::zero(), |acc, v| if *v > acc { v.clone() } else { acc })
}

/// `‖f − Ψ(f)‖ ≤ C_q·q^{level}·L_grad(f)` with `C_q = √(1+q)/√(1−q)`, compared in squares.
pub fn psi_bound_check<F: Real>(f: &QFunction<F>, level: usize, q: &F) -> Result<bool> {
    check_q(q)?;
    let err = sup_distance(f, &psi_approx(f, level)?);
    let cq2 = (F::one() + q.clone()) / (F::one() - q.clone());
    let rhs = cq2 * q.powi(2 * level) * seminorm_grad_sq(f, q);
    Ok((err.clone() * err).le_slack(&rhs))
}

/// Checks the derivative rules for the indicators:
/// `D(p_m) = (p_m − q²p_{m−1})/(q^{2m}(1−q²))`,
/// `E(p_m) = (p_{m+1} − q²p_m)/(q^{2m}(1−q²))` with `p_{−1} = 0`,
/// and `D(p_m)(q^{2m'}) = E(p_m)(q^{2m'+2})` at every level.
pub fn projection_derivative_check<F: Real>(m: usize, t: usize, q: &F) -> Result<bool> {
    check_q(q)?;
    if m > t {
        return Err(Error::InvalidArgument(format!("m = {} exceeds the truncation {}", m, t)));
    }
    let t = t.max(m + 1);
    let q2 = q.clone() * q.clone();
    let scale = q.powi(2 * m) * (F::one() - q2.clone());
    let p = |k: Option<usize>| match k {
        Some(k) => QFunction::<F>::indicator(k, t).expect("k ≤ t"),
        None => QFunction::constant(F::zero(), t),
    };
    let pm = p(Some(m));
    let d_formula = pm.combine(&p(m.checked_sub(1)), |a, b| (a.clone() - q2.clone() * b.clone()) / scale.clone());
    let e_formula = p(Some(m + 1)).combine(&pm, |a, b| (a.clone() - q2.clone() * b.clone()) / scale.clone());
    let d = diff_d(&pm, q);
    let e = diff_e(&pm, q);
    let mut ok = true;
    for k in 0..=t + 1 {
        ok &= d[k].near(d_formula.at_level(k));
        ok &= e[k].near(e_formula.at_level(k));
        if k < t + 1 {
            ok &= d[k].near(&e[k + 1]);
        }
    }
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn half() -> BigRational {
        BigRational::new(1.into(), 2.into())
    }

    #[test]
    fn indicator_quotients() {
        let q = half();
        let p0 = QFunction::<BigRational>::indicator(0, 5).unwrap();
        let inv = BigRational::from_integer(1.into()) / (BigRational::from_integer(1.into()) - &q * &q);
        let d = diff_d(&p0, &q);
        assert_eq!(d[0], inv);
        assert!(d[1..].iter().all(|v| v == &BigRational::from_integer(0.into())));
        let e = diff_e(&p0, &q);
        assert_eq!(e[1], inv);
        assert_eq!(e[0], -(&q * &q) * &inv);
    }

    #[test]
    fn g_values() {
        let q = 0.5;
        assert_eq!(g_function(IqPoint::Zero, &q), 0.0);
        assert!((g_function(IqPoint::Level(0), &q) - 1.5).abs() < 1e-15);
        assert!((g_function(IqPoint::Level(1), &q) - q * (1.0 - q.powi(4))).abs() < 1e-15);
    }

    #[test]
    fn seminorm_examples() {
        let q = 0.5;
        assert_eq!(seminorm_grad(&QFunction::constant(3.0, 10), q), 0.0);
        let id = QFunction::identity(&q, 40);
        assert!((seminorm_grad(&id, q) - 1.5f64.sqrt()).abs() < 1e-12);
        let p0 = QFunction::<f64>::indicator(0, 10).unwrap();
        assert!((seminorm_grad(&p0, q) - 1.5f64.sqrt() / 0.75).abs() < 1e-12);
    }

    #[test]
    fn psi_examples() {
        let q = half();
        let id = QFunction::identity(&q, 20);
        let psi = psi_approx(&id, 2).unwrap();
        assert_eq!(psi.eval(IqPoint::Level(3)), &q.powi(4));
        let err = sup_distance(&id, &psi_approx(&id, 3).unwrap());
        assert_eq!(err, BigRational::new(1.into(), 64.into()));
        assert!(psi_bound_check(&id, 3, &q).unwrap());
        assert!(psi_approx(&id, 21).is_err());
        let c = psi_approx(&QFunction::identity(&0.3, 8), 0).unwrap();
        assert_eq!(c.values(), &[1.0]);
        assert_eq!(c.tail(), &1.0);
    }

    #[test]
    fn projection_rules() {
        for m in [0, 1, 3, 5] {
            assert!(projection_derivative_check(m, 6, &half()).unwrap());
            assert!(projection_derivative_check(m, 6, &0.7).unwrap());
        }
    }

    #[test]
    fn locates_points() {
        let q = half();
        let x = BigRational::new(1.into(), 16.into());
        assert_eq!(IqPoint::from_value(&x, &q, 5).unwrap(), IqPoint::Level(2));
        assert!(IqPoint::from_value(&half(), &q, 5).is_err());
    }
}
