//! Dense tableau simplex for `max c·x` subject to `Ax ≤ b`, `x ≥ 0`, `b ≥ 0`,
//! with Bland's rule. The matrix and costs live in a [`Real`] type, while the
//! right-hand side may live in a richer value type (such as [`Surd`]) that
//! only needs to be a vector space over it with a decidable sign.

use std::cmp::Ordering;

use num_rational::BigRational;

use super::{Real, Surd};
use crate::error::{Error, Result};

/// Right-hand side values: a vector space over `R`.
pub trait LpValue<R>: Clone {
    fn zero() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn scale(&self, r: &R) -> Self;
}

impl LpValue<f64> for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn scale(&self, r: &f64) -> Self {
        self * r
    }
}

impl LpValue<BigRational> for BigRational {
    fn zero() -> Self {
        num_traits::Zero::zero()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn scale(&self, r: &BigRational) -> Self {
        self * r
    }
}

impl LpValue<BigRational> for Surd {
    fn zero() -> Self {
        Surd::zero()
    }
    fn add(&self, other: &Self) -> Self {
        Surd::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        Surd::sub(self, other)
    }
    fn scale(&self, r: &BigRational) -> Self {
        Surd::scale(self, r)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution<V> {
    pub value: V,
    pub x: Vec<V>,
    pub pivots: usize,
}

const MAX_PIVOTS: usize = 100_000;

/// Maximizes `c·x` over `Ax ≤ b`, `x ≥ 0`. The origin must be feasible.
/// `sign` decides the sign of right-hand side values.
pub fn maximize<R, V>(a: &[Vec<R>], b: &[V], c: &[R], sign: &dyn Fn(&V) -> Result<Ordering>) -> Result<LpSolution<V>>
where
    R: Real,
    V: LpValue<R>,
{
    let m = a.len();
    let n = c.len();
    if b.len() != m || a.iter().any(|row| row.len() != n) {
        return Err(Error::Shape(format!("LP with {} rows, {} right-hand sides, {} costs", m, b.len(), n)));
    }
    for v in b {
        if sign(v)? == Ordering::Less {
            return Err(Error::Lp("negative right-hand side: the origin is infeasible".into()));
        }
    }
    let width = n + m;
    let mut t: Vec<Vec<R>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..m).map(|k| if k == i { R::one() } else { R::zero() }));
            r
        })
        .collect();
    let mut rhs = b.to_vec();
    let mut basis: Vec<usize> = (n..width).collect();
    let mut reduced: Vec<R> = c.iter().cloned().chain((0..m).map(|_| R::zero())).collect();
    let mut value = V::zero();
    let mut pivots = 0;

    while let Some(j) = (0..width).find(|&j| reduced[j].is_pos()) {
        if pivots == MAX_PIVOTS {
            return Err(Error::Lp("pivot limit reached".into()));
        }
        let mut leave: Option<usize> = None;
        for i in (0..m).filter(|&i| t[i][j].is_pos()) {
            leave = Some(match leave {
                None => i,
                Some(k) => {
                    let d = rhs[i].scale(&(R::one() / t[i][j].clone())).sub(&rhs[k].scale(&(R::one() / t[k][j].clone())));
                    match sign(&d)? {
                        Ordering::Less => i,
                        Ordering::Equal if basis[i] < basis[k] => i,
                        _ => k,
                    }
                }
            });
        }
        let p = leave.ok_or_else(|| Error::Lp("unbounded objective".into()))?;
        let inv = R::one() / t[p][j].clone();
        for v in t[p].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        rhs[p] = rhs[p].scale(&inv);
        let prow = t[p].clone();
        for i in (0..m).filter(|&i| i != p) {
            let f = t[i][j].clone();
            if f.is_zero() {
                continue;
            }
            for (v, pv) in t[i].iter_mut().zip(&prow) {
                *v = v.clone() - f.clone() * pv.clone();
            }
            rhs[i] = rhs[i].sub(&rhs[p].scale(&f));
        }
        let f = reduced[j].clone();
        for (v, pv) in reduced.iter_mut().zip(&prow) {
            *v = v.clone() - f.clone() * pv.clone();
        }
        value = value.add(&rhs[p].scale(&f));
        basis[p] = j;
        pivots += 1;
    }

    let mut x = vec![V::zero(); n];
    for (i, &var) in basis.iter().enumerate() {
        if var < n {
            x[var] = rhs[i].clone();
        }
    }
    Ok(LpSolution { value, x, pivots })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → 36 at (2, 6)
        let a = vec![vec![rat(1, 1), rat(0, 1)], vec![rat(0, 1), rat(2, 1)], vec![rat(3, 1), rat(2, 1)]];
        let b = vec![rat(4, 1), rat(12, 1), rat(18, 1)];
        let c = vec![rat(3, 1), rat(5, 1)];
        let sign = |v: &BigRational| Ok(v.cmp(&rat(0, 1)));
        let sol = maximize(&a, &b, &c, &sign).unwrap();
        assert_eq!(sol.value, rat(36, 1));
        assert_eq!(sol.x, vec![rat(2, 1), rat(6, 1)]);
    }

    #[test]
    fn detects_unbounded() {
        let a = vec![vec![-1.0, 1.0]];
        let sign = |v: &f64| Ok(v.partial_cmp(&0.0).unwrap());
        assert!(maximize(&a, &[1.0], &[1.0, 0.0], &sign).is_err());
    }
}
