use std::sync::OnceLock;

use proptest::prelude::*;
use qflag_core::ncalg::{Algebra, NcPoly, Strategy as Reduction, Word};
use qflag_core::ScalarQ;

fn alg2() -> &'static Algebra {
    static A: OnceLock<Algebra> = OnceLock::new();
    A.get_or_init(|| Algebra::new(2).unwrap())
}

fn alg3() -> &'static Algebra {
    static A: OnceLock<Algebra> = OnceLock::new();
    A.get_or_init(|| Algebra::new(3).unwrap())
}

/// Random polynomial with coefficients `c·q^k`.
fn poly(n: usize, max_len: usize) -> impl proptest::strategy::Strategy<Value = NcPoly> {
    let letters = (n * n) as u8;
    prop::collection::vec((prop::collection::vec(0..letters, 0..=max_len), -3i64..=3, -2i64..=2), 1..=3).prop_map(
        move |terms| {
            NcPoly::from_terms(
                n,
                terms.into_iter().map(|(w, c, k)| (Word(w), &ScalarQ::from_int(c) * &ScalarQ::q_pow(k))),
            )
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn strategies_agree_rank2(p in poly(2, 6)) {
        let a = alg2().reduce_with(&p, Reduction::LeftOutermost).unwrap();
        let b = alg2().reduce_with(&p, Reduction::RightInnermost).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn strategies_agree_rank3(p in poly(3, 5)) {
        let a = alg3().reduce_with(&p, Reduction::LeftOutermost).unwrap();
        let b = alg3().reduce_with(&p, Reduction::RightInnermost).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn reduction_is_idempotent(p in poly(2, 6)) {
        let r = alg2().reduce(&p).unwrap();
        prop_assert!(alg2().is_normal(&r));
        prop_assert_eq!(alg2().reduce(&r).unwrap(), r);
    }

    #[test]
    fn star_is_an_anti_multiplicative_involution(a in poly(2, 2), b in poly(2, 2)) {
        let alg = alg2();
        let ab = alg.mul(&a, &b).unwrap();
        let lhs = alg.star(&ab).unwrap();
        let rhs = alg.mul(&alg.star(&b).unwrap(), &alg.star(&a).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let a_red = alg.reduce(&a).unwrap();
        prop_assert_eq!(alg.star(&alg.star(&a).unwrap()).unwrap(), a_red);
    }

    #[test]
    fn counit_is_multiplicative(a in poly(2, 3), b in poly(2, 3)) {
        let alg = alg2();
        let ab = alg.mul(&a, &b).unwrap();
        prop_assert_eq!(alg.counit(&ab), &alg.counit(&a) * &alg.counit(&b));
    }

    #[test]
    fn multiplication_is_associative(a in poly(2, 2), b in poly(2, 2), c in poly(2, 2)) {
        let alg = alg2();
        let left = alg.mul(&alg.mul(&a, &b).unwrap(), &c).unwrap();
        let right = alg.mul(&a, &alg.mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }
}

#[test]
fn reduce_examples() {
    let alg = alg2();
    let u = |i, j| alg.generator(i, j).unwrap();
    let p = alg.mul(&u(2, 2), &u(1, 1)).unwrap();
    assert_eq!(p.to_string(), "1 + q^-1*u[1,2]*u[2,1]");
    assert_eq!(alg.y(2).unwrap(), alg.one());
}

#[test]
fn bound_is_enforced() {
    let alg = Algebra::with_bound(2, 4).unwrap();
    let x = alg.generator(1, 1).unwrap();
    assert!(matches!(alg.pow(&x, 6), Err(qflag_core::Error::BoundExceeded { .. })));
}
