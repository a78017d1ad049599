use qflag_core::dirac::{dbar, form_corpus, gradient_identity_residual, FormElement};
use qflag_core::ncalg::Algebra;
use qflag_core::uqact::{act_d, act_d_oracle, UqElement};
use qflag_core::ScalarQ;

#[test]
fn generator_actions_at_rank_two() {
    let alg = Algebra::new(2).unwrap();
    let u = |i, j| alg.generator(i, j).unwrap();
    let k1 = UqElement::k(2, 1).unwrap();
    let e1 = UqElement::e(2, 1).unwrap();
    let f1 = UqElement::f(2, 1).unwrap();
    assert_eq!(act_d(&alg, &k1, &u(1, 1)).unwrap(), u(1, 1).scale(&ScalarQ::q_half_pow(1)));
    assert_eq!(act_d(&alg, &e1, &u(2, 1)).unwrap(), u(1, 1).scale(&-ScalarQ::q_pow(-1)));
    assert_eq!(act_d(&alg, &f1, &u(1, 2)).unwrap(), u(2, 2).scale(&-ScalarQ::q_pow(1)));
}

#[test]
fn action_matches_the_pairing_oracle() {
    let alg = Algebra::new(2).unwrap();
    let eta = UqElement::e(2, 1).unwrap().mul(&UqElement::f(2, 1).unwrap());
    for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        let x = alg.mul(&alg.generator(i, j).unwrap(), &alg.generator(2, 2).unwrap()).unwrap();
        assert_eq!(act_d(&alg, &eta, &x).unwrap(), act_d_oracle(&alg, &eta, &x).unwrap());
    }
}

#[test]
fn star_and_antipode() {
    let alg = Algebra::new(2).unwrap();
    let u = |i, j| alg.generator(i, j).unwrap();
    assert_eq!(alg.star(&u(1, 2)).unwrap(), u(2, 1).scale(&-ScalarQ::q_pow(1)));
    assert_eq!(alg.antipode(&u(2, 2)).unwrap(), u(1, 1));
}

#[test]
fn dbar_squares_to_zero_on_forms() {
    let alg = Algebra::new(2).unwrap();
    for x in form_corpus(&alg, 0).unwrap() {
        let once = dbar(&alg, &x).unwrap();
        assert!(dbar(&alg, &once).unwrap().is_zero());
    }
    let one = FormElement::single(0, alg.one(), &[]);
    assert!(dbar(&alg, &one.unwrap()).unwrap().is_zero());
}

#[test]
fn gradient_identity_rank_two() {
    let alg = Algebra::new(2).unwrap();
    assert!(gradient_identity_residual(&alg).unwrap().is_zero());
}
