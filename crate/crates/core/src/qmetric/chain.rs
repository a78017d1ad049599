//! Monge–Kantorovich distances for the gradient seminorm.
//!
//! The unit ball of `L_grad` only constrains consecutive differences,
//! `|f(q^{2m}) − f(q^{2m+2})| ≤ e_m`, so the distance is the Wasserstein-1
//! distance on a weighted path `1, q², …, q^{2T}` with the atom at `0`
//! hanging off the last node by the tail edge `τ_T = Σ_{j≥T} e_j`.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::lp::maximize;
use super::surd::sqrt_bracket;
use super::{check_q, IqPoint, QState, Real, Surd};
use crate::error::Result;

/// `e_m = q^{2m}(1 − q²)/√G(q^{2m}) = q^m(1 − q²)√q/√(1 − q^{2m+2})`.
pub fn chain_edge(q: f64, m: usize) -> f64 {
    q.powi(m as i32) * (1.0 - q * q) * q.sqrt() / (1.0 - q.powi(2 * m as i32 + 2)).sqrt()
}

/// `(c_m, s_m)` with `e_m = c_m·√s_m`.
fn edge_parts(q: &BigRational, m: usize) -> (BigRational, BigRational) {
    let one = BigRational::one();
    let s = q * (&one - q.powi(2 * m + 2));
    let c = (&one - q * q) * q.powi(m + 1) / &s;
    (c, s)
}

pub fn chain_edge_exact(q: &BigRational, m: usize) -> Result<Surd> {
    check_q(q)?;
    let (c, s) = edge_parts(q, m);
    Surd::sqrt_of(&s, c)
}

/// `τ_T = Σ_{j≥T} e_j`, summed until the terms stop mattering.
pub fn tail_edge(q: f64, t: usize) -> f64 {
    let mut sum = 0.0;
    let mut j = t;
    loop {
        let e = chain_edge(q, j);
        sum += e;
        if e <= 1e-18 * sum || e == 0.0 || j > t + 100_000 {
            return sum;
        }
        j += 1;
    }
}

/// An upper bound for `τ_T`: the partial sum through `J` plus
/// `U·q^{J+1}/(1 − q)`, `U = (1 − q²)√q/√(1 − q^{2J+4})`.
pub fn tail_bound_upper(q: f64, t: usize) -> f64 {
    let j_max = t + 60;
    let partial: f64 = (t..=j_max).map(|j| chain_edge(q, j)).sum();
    let u = (1.0 - q * q) * q.sqrt() / (1.0 - q.powi(2 * j_max as i32 + 4)).sqrt();
    partial + u * q.powi(j_max as i32 + 1) / (1.0 - q)
}

/// Rational bracket `[lo, hi]` of `τ_T`, good to roughly `2^{-bits}`.
pub fn tail_bracket_exact(q: &BigRational, t: usize, bits: u32) -> (BigRational, BigRational) {
    let one = BigRational::one();
    let log = -q.to_f64().unwrap_or(0.5).log2();
    let j_max = t + ((bits as f64 + 8.0) / log.max(1e-3)).ceil() as usize;
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    for j in t..=j_max {
        let (c, s) = edge_parts(q, j);
        let (a, b) = sqrt_bracket(&s, bits + 8);
        lo += &c * a;
        hi += &c * b;
    }
    let (_, u) = sqrt_bracket(&(q / (&one - q.powi(2 * j_max + 4))), bits + 8);
    hi += (&one - q * q) * u * q.powi(j_max + 1) / (&one - q);
    (lo, hi)
}

/// `C_m = Σ_{j≤m}(μ_j − ν_j)` for `m = 0..=T` after re-truncating both states.
fn cumulative<F: Real>(mu: &QState<F>, nu: &QState<F>) -> Vec<F> {
    let t = mu.level().max(nu.level());
    let (mu, nu) = (mu.retruncate(t), nu.retruncate(t));
    let mut acc = F::zero();
    mu.weights()
        .iter()
        .zip(nu.weights())
        .map(|(a, b)| {
            acc = acc.clone() + a.clone() - b.clone();
            acc.clone()
        })
        .collect()
}

/// Closed-form chain distance `Σ_{m<T} e_m|C_m| + τ_T|C_T|`.
pub fn mk_closed_form(mu: &QState<f64>, nu: &QState<f64>, q: f64) -> Result<f64> {
    check_q(&q)?;
    let c = cumulative(mu, nu);
    let t = c.len() - 1;
    let path: f64 = (0..t).map(|m| chain_edge(q, m) * c[m].abs()).sum();
    Ok(path + tail_edge(q, t) * c[t].abs())
}

/// Exact closed form, with `τ_T` kept as a formal symbol.
pub fn mk_closed_form_exact(mu: &QState<BigRational>, nu: &QState<BigRational>, q: &BigRational) -> Result<Surd> {
    check_q(q)?;
    let c = cumulative(mu, nu);
    let t = c.len() - 1;
    let mut acc = Surd::tau(c[t].abs());
    for (m, cm) in c.iter().enumerate().take(t) {
        acc = acc.add(&chain_edge_exact(q, m)?.scale(&cm.abs()));
    }
    Ok(acc)
}

/// The LP for `sup{(μ − ν)(f) : L_grad(f) ≤ 1}`, with `f(0) = 0` and
/// `f_m = a_m − b_m` split into nonnegative parts.
fn chain_lp<R: Real, V: super::lp::LpValue<R>>(d: &[R], edges: &[V], tau: V) -> (Vec<Vec<R>>, Vec<V>, Vec<R>) {
    let t = d.len() - 1;
    let n = 2 * (t + 1);
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut row = |entries: &[(usize, R)], rhs: V| {
        let mut r = vec![R::zero(); n];
        for (m, v) in entries {
            r[2 * m] = v.clone();
            r[2 * m + 1] = -v.clone();
        }
        a.push(r);
        b.push(rhs);
    };
    for m in 0..t {
        row(&[(m, R::one()), (m + 1, -R::one())], edges[m].clone());
        row(&[(m, -R::one()), (m + 1, R::one())], edges[m].clone());
    }
    row(&[(t, R::one())], tau.clone());
    row(&[(t, -R::one())], tau);
    let c = d.iter().flat_map(|v| [v.clone(), -v.clone()]).collect();
    (a, b, c)
}

fn state_difference<F: Real>(mu: &QState<F>, nu: &QState<F>) -> Vec<F> {
    let t = mu.level().max(nu.level());
    let (mu, nu) = (mu.retruncate(t), nu.retruncate(t));
    mu.weights().iter().zip(nu.weights()).map(|(a, b)| a.clone() - b.clone()).collect()
}

/// The same distance, computed by the simplex method on the chain LP.
pub fn mk_lp_oracle(mu: &QState<f64>, nu: &QState<f64>, q: f64) -> Result<f64> {
    check_q(&q)?;
    let d = state_difference(mu, nu);
    let t = d.len() - 1;
    let edges: Vec<f64> = (0..t).map(|m| chain_edge(q, m)).collect();
    let (a, b, c) = chain_lp(&d, &edges, tail_edge(q, t));
    let sign = |v: &f64| Ok(if v.abs() <= 1e-13 { Ordering::Equal } else if *v > 0.0 { Ordering::Greater } else { Ordering::Less });
    Ok(maximize(&a, &b, &c, &sign)?.value)
}

/// Exact simplex over `ℚ` with right-hand sides in `ℚ(√·, τ)`.
pub fn mk_lp_oracle_exact(mu: &QState<BigRational>, nu: &QState<BigRational>, q: &BigRational) -> Result<Surd> {
    check_q(q)?;
    let d = state_difference(mu, nu);
    let t = d.len() - 1;
    let edges = (0..t).map(|m| chain_edge_exact(q, m)).collect::<Result<Vec<_>>>()?;
    let (a, b, c) = chain_lp(&d, &edges, Surd::tau(BigRational::one()));
    let cache: RefCell<HashMap<u32, (BigRational, BigRational)>> = RefCell::new(HashMap::new());
    let bracket = |bits: u32| cache.borrow_mut().entry(bits).or_insert_with(|| tail_bracket_exact(q, t, bits)).clone();
    let sign = |v: &Surd| v.sign(&bracket);
    Ok(maximize(&a, &b, &c, &sign)?.value)
}

/// `Σ_{m≥k} e_m`, written as the path from `k` to `T` plus the tail edge.
pub fn envelope(q: f64, k: usize, t: usize) -> f64 {
    if k >= t {
        return tail_edge(q, k);
    }
    (k..t).map(|m| chain_edge(q, m)).sum::<f64>() + tail_edge(q, t)
}

/// Largest pairwise distance among the given states.
pub fn diameter(states: &[QState<f64>], q: f64) -> Result<f64> {
    let mut best = 0.0f64;
    for (i, mu) in states.iter().enumerate() {
        for nu in &states[i + 1..] {
            best = best.max(mk_closed_form(mu, nu, q)?);
        }
    }
    Ok(best)
}

/// Diameter of the truncated state space, attained among point masses.
pub fn point_mass_diameter(q: f64, t: usize) -> Result<f64> {
    let points: Vec<IqPoint> = (0..=t).map(IqPoint::Level).chain(std::iter::once(IqPoint::Zero)).collect();
    let states = points.into_iter().map(|p| QState::point_mass(p, t)).collect::<Result<Vec<_>>>()?;
    diameter(&states, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmetric::{counit_state, haar_state_iq, hk_state};

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn single_edge() {
        let d1 = QState::point_mass(IqPoint::Level(0), 4).unwrap();
        let d2 = QState::point_mass(IqPoint::Level(1), 4).unwrap();
        let v = mk_closed_form(&d1, &d2, 0.5).unwrap();
        assert!((v - 0.375f64.sqrt()).abs() < 1e-14);
        assert!((mk_lp_oracle(&d1, &d2, 0.5).unwrap() - v).abs() < 1e-12);
        assert_eq!(mk_closed_form(&d1, &d1, 0.5).unwrap(), 0.0);

        let q = rat(1, 2);
        let e1 = QState::point_mass(IqPoint::Level(0), 4).unwrap();
        let e2 = QState::point_mass(IqPoint::Level(1), 4).unwrap();
        let exact = mk_closed_form_exact(&e1, &e2, &q).unwrap();
        assert!(exact.sub(&Surd::sqrt_of(&rat(3, 8), rat(1, 1)).unwrap()).is_zero());
        assert!(mk_lp_oracle_exact(&e1, &e2, &q).unwrap().sub(&exact).is_zero());
    }

    #[test]
    fn tail_bracket_encloses_float_sum() {
        for t in [0, 3, 10] {
            let (lo, hi) = tail_bracket_exact(&rat(1, 2), t, 40);
            let v = tail_edge(0.5, t);
            assert!(lo.to_f64().unwrap() <= v + 1e-15 && v <= hi.to_f64().unwrap() + 1e-15);
            assert!(v <= tail_bound_upper(0.5, t));
        }
    }

    #[test]
    fn exact_lp_with_tail() {
        let q = rat(1, 3);
        let base = haar_state_iq(&q, 4).unwrap();
        let h2 = hk_state(2, &base, &q).unwrap();
        let eps = counit_state(4);
        let closed = mk_closed_form_exact(&h2, &eps, &q).unwrap();
        let lp = mk_lp_oracle_exact(&h2, &eps, &q).unwrap();
        assert!(closed.sub(&lp).is_zero(), "{} vs {}", closed, lp);
    }

    #[test]
    fn envelope_and_diameter() {
        let q = 0.5;
        let total = envelope(q, 0, 20);
        assert!((point_mass_diameter(q, 20).unwrap() - total).abs() < 1e-12);
        assert!(envelope(q, 3, 20) < envelope(q, 2, 20));
    }
}
