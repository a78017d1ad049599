use num_rational::BigRational;
use proptest::prelude::*;
use qflag_core::qmetric::{
    counit_state, envelope, haar_state_iq, hk_state, lip_bound_check, mk_closed_form, mk_lp_oracle,
    projection_derivative_check, psi_approx, psi_bound_check, seminorm_grad, seminorm_grad_sq, IqPoint, QFunction,
    QState,
};

fn q_value() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.3), Just(0.5), Just(0.7), 0.05f64..0.9]
}

fn state(t: usize) -> impl Strategy<Value = QState<f64>> {
    prop::collection::vec(0.0f64..1.0, t + 2).prop_filter_map("all zero", move |raw| {
        let total: f64 = raw.iter().sum();
        if total < 1e-6 {
            return None;
        }
        let w: Vec<f64> = raw.iter().map(|x| x / total).collect();
        QState::new(w[..=t].to_vec(), w[t + 1]).ok()
    })
}

fn function(t: usize) -> impl Strategy<Value = QFunction<f64>> {
    (prop::collection::vec(-1.0f64..1.0, t + 1), -1.0f64..1.0).prop_map(|(v, tail)| QFunction::new(v, tail).unwrap())
}

fn point(t: usize) -> impl Strategy<Value = IqPoint> {
    prop_oneof![(0..=t + 2).prop_map(IqPoint::Level), Just(IqPoint::Zero)]
}

proptest! {
    #[test]
    fn mk_is_symmetric_and_oracle_agrees(q in q_value(), a in state(12), b in state(12)) {
        let ab = mk_closed_form(&a, &b, q).unwrap();
        let ba = mk_closed_form(&b, &a, q).unwrap();
        prop_assert!((ab - ba).abs() < 1e-12);
        prop_assert!((ab - mk_lp_oracle(&a, &b, q).unwrap()).abs() < 1e-9);
        prop_assert_eq!(mk_closed_form(&a, &a, q).unwrap(), 0.0);
    }

    #[test]
    fn mk_triangle_inequality(q in q_value(), a in state(10), b in state(10), c in state(10)) {
        let ac = mk_closed_form(&a, &c, q).unwrap();
        let ab = mk_closed_form(&a, &b, q).unwrap();
        let bc = mk_closed_form(&b, &c, q).unwrap();
        prop_assert!(ac <= ab + bc + 1e-12);
    }

    #[test]
    fn mk_separates_distinct_point_masses(q in q_value(), i in 0usize..8, j in 0usize..8) {
        let pt = |k: usize| if k == 7 { IqPoint::Zero } else { IqPoint::Level(k) };
        let a = QState::point_mass(pt(i), 6).unwrap();
        let b = QState::point_mass(pt(j), 6).unwrap();
        let d = mk_closed_form(&a, &b, q).unwrap();
        prop_assert_eq!(d > 0.0, i != j);
    }

    #[test]
    fn seminorm_is_a_slip_norm(q in q_value(), f in function(15), c in -3.0f64..3.0) {
        let l = seminorm_grad(&f, q);
        prop_assert!((seminorm_grad(&f.conj(), q) - l).abs() <= 1e-12 * (1.0 + l));
        let scaled = f.map(|v| c * v);
        prop_assert!((seminorm_grad(&scaled, q) - c.abs() * l).abs() <= 1e-9 * (1.0 + l));
        let shifted = f.map(|v| v + c);
        prop_assert!((seminorm_grad(&shifted, q) - l).abs() <= 1e-9 * (1.0 + l));
    }

    #[test]
    fn lipschitz_estimate(q in q_value(), f in function(15), x in point(15), y in point(15)) {
        prop_assert!(lip_bound_check(&f, x, y, &q).unwrap());
    }

    #[test]
    fn psi_is_unital_and_within_bound(q in q_value(), f in function(15), level in 0usize..=15) {
        prop_assert!(psi_bound_check(&f, level, &q).unwrap());
        let one = QFunction::constant(1.0, 15);
        prop_assert_eq!(psi_approx(&one, level).unwrap().retruncate(15), one);
        let psi = psi_approx(&f, level).unwrap();
        prop_assert_eq!(psi.values().len(), level + 1);
    }

    #[test]
    fn psi_is_positive(q in q_value(), f in function(10), level in 0usize..=10) {
        let pos = f.map(|v| v.abs());
        let psi = psi_approx(&pos, level).unwrap();
        prop_assert!(psi.values().iter().all(|v| *v >= 0.0) && *psi.tail() >= 0.0);
        let _ = seminorm_grad_sq(&psi, &q);
    }
}

#[test]
fn hk_moments_are_exactly_bounded() {
    let q = BigRational::new(1.into(), 2.into());
    let base = haar_state_iq(&q, 20).unwrap();
    for k in 0..=6 {
        let h = hk_state(k, &base, &q).unwrap();
        for m in 0..=6 {
            assert!(h.moment(m, &q) <= num_traits::pow(q.clone(), 2 * k * m));
        }
    }
}

#[test]
fn convergence_envelope() {
    for q in [0.3, 0.5, 0.7] {
        let base = haar_state_iq(&q, 60).unwrap();
        for k in 0..=6 {
            let h = hk_state(k, &base, &q).unwrap();
            let d = mk_closed_form(&h, &counit_state(60 + k), q).unwrap();
            assert!(d <= envelope(q, k, 60 + k) + 1e-12);
        }
    }
}

#[test]
fn projection_rules_hold_exactly() {
    let q = BigRational::new(3.into(), 7.into());
    for m in 0..=6 {
        assert!(projection_derivative_check(m, 6, &q).unwrap());
    }
}
