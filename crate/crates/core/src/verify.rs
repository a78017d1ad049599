//! Verification suites over the symbolic engine. Each suite returns a
//! [`Report`] with one entry per checked identity; failures are recorded,
//! not thrown. Errors are reserved for misuse (wrong rank, a completion
//! bound too small for the suite).

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::json;

use crate::dirac::{gradient_suite_bound, verify_adjoint_n2, verify_forms, verify_gradient_suite};
use crate::error::{Error, Result};
use crate::ncalg::projective::as_polynomial_in;
use crate::ncalg::{
    haar_n2, modular_theta, modular_theta_inv, transpose_n2, Algebra, NcPoly, PhiImage, Projection, Word,
};
use crate::report::Report;
use crate::scalar::ScalarQ;
use crate::uqact::{
    act_d, act_d_oracle, act_del, eps_q, pi_rep, sigma_rep, uq_relations, verify_rmatrix, ExtVector, LetterKind,
    UqElement,
};

/// Named suites accepted by [`run_suite`].
pub const SUITES: [&str; 10] =
    ["hopf", "unitarity", "sphere", "action", "rmatrix", "forms", "gradient", "transpose", "haar", "all"];

/// Smallest completion bound each suite needs at rank `n`.
pub fn required_bound(suite: &str, n: usize) -> usize {
    match suite {
        "gradient" => gradient_suite_bound(n),
        // the a_3 identity has degree 3N
        "sphere" => 3 * n,
        "all" => gradient_suite_bound(n).max(3 * n),
        _ => 2,
    }
}

/// Runs a suite by name on `alg`.
pub fn run_suite(alg: &Algebra, suite: &str, seed: u64) -> Result<Report> {
    let n = alg.rank();
    match suite {
        "hopf" => hopf_suite(alg, seed),
        "unitarity" => unitarity_suite(alg),
        "sphere" => sphere_suite(alg),
        "action" => action_suite(alg, seed),
        "rmatrix" => rmatrix_suite(n),
        "forms" => forms_suite(alg),
        "gradient" => verify_gradient_suite(alg),
        "transpose" => transpose_suite(alg, seed),
        "haar" => haar_suite(alg, seed),
        "all" => {
            let mut rep = Report::new();
            for s in SUITES.iter().filter(|s| **s != "all") {
                rep.extend(run_suite(alg, s, seed)?);
            }
            Ok(rep)
        }
        other => Err(Error::InvalidArgument(format!("unknown suite '{}'", other))),
    }
}

fn residual(p: &NcPoly) -> serde_json::Value {
    json!({ "residual": p.to_string() })
}

fn pair(lhs: &NcPoly, rhs: &NcPoly) -> serde_json::Value {
    json!({ "lhs": lhs.to_string(), "rhs": rhs.to_string() })
}

/// Random polynomials with up to `terms` words of degree at most `max_degree`
/// and small integer coefficients, reduced to normal form.
pub fn random_corpus(alg: &Algebra, seed: u64, count: usize, max_degree: usize, terms: usize) -> Result<Vec<NcPoly>> {
    let n = alg.rank();
    let letters = (n * n) as u8;
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut raw = NcPoly::zero(n);
        for _ in 0..rng.gen_range(1..=terms) {
            let len = rng.gen_range(0..=max_degree);
            let w: Vec<u8> = (0..len).map(|_| rng.gen_range(0..letters)).collect();
            let c = rng.gen_range(1..=3i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
            raw.add_term(Word(w), ScalarQ::from_int(c));
        }
        out.push(alg.reduce(&raw)?);
    }
    Ok(out)
}

fn generators(alg: &Algebra) -> Result<Vec<(String, NcPoly)>> {
    let n = alg.rank();
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            out.push((format!("u{}{}", i, j), alg.generator(i, j)?));
        }
    }
    Ok(out)
}

/// Coassociativity, counit and antipode axioms on generators and their
/// pairwise products; the counit is multiplicative; star is an involutive
/// anti-multiplicative map on a random corpus.
pub fn hopf_suite(alg: &Algebra, seed: u64) -> Result<Report> {
    let n = alg.rank();
    let mut rep = Report::new();
    let gens = generators(alg)?;
    let mut elems = gens.clone();
    for (na, a) in &gens {
        for (nb, b) in &gens {
            elems.push((format!("{}{}", na, nb), alg.mul(a, b)?));
        }
    }
    for (name, p) in &elems {
        let l = alg.coproduct_left_twice(p)?;
        let r = alg.coproduct_right_twice(p)?;
        rep.record(format!("coassociativity[N={},{}]", n, name), "(Δ ⊗ 1)Δ = (1 ⊗ Δ)Δ", l == r, || {
            json!({ "element": p.to_string() })
        });
        let eps = alg.scalar(alg.counit(p));
        for (id, stmt, v) in [
            ("antipode_left", "m(S ⊗ 1)Δ(x) = ε(x)1", alg.antipode_left_convolution(p)?),
            ("antipode_right", "m(1 ⊗ S)Δ(x) = ε(x)1", alg.antipode_right_convolution(p)?),
        ] {
            let d = v.sub(&eps);
            rep.record(format!("{}[N={},{}]", id, n, name), stmt, d.is_zero(), || residual(&d));
        }
        for (id, stmt, v) in [
            ("counit_left", "(ε ⊗ 1)Δ(x) = x", alg.counit_left_slice(p)?),
            ("counit_right", "(1 ⊗ ε)Δ(x) = x", alg.counit_right_slice(p)?),
        ] {
            let d = v.sub(p);
            rep.record(format!("{}[N={},{}]", id, n, name), stmt, d.is_zero(), || residual(&d));
        }
    }
    for (na, a) in &gens {
        for (nb, b) in &gens {
            let ab = alg.counit(&alg.mul(a, b)?);
            let prod = &alg.counit(a) * &alg.counit(b);
            rep.record(format!("counit_multiplicative[N={},{}{}]", n, na, nb), "ε(xy) = ε(x)ε(y)", ab == prod, || {
                json!({ "lhs": ab.to_string(), "rhs": prod.to_string() })
            });
        }
    }

    // star(star(p)) has degree (N-1)^2 deg p
    let sq = (n - 1) * (n - 1);
    let max_deg = (alg.degree_bound() / sq).min(4);
    let corpus = random_corpus(alg, seed, 12, max_deg, 3)?;
    for (k, p) in corpus.iter().enumerate() {
        let ss = alg.star(&alg.star(p)?)?;
        let d = ss.sub(p);
        rep.record(format!("star_involutive[N={},#{}]", n, k), "(x^*)^* = x", d.is_zero(), || residual(&d));
    }
    let half = (alg.degree_bound() / (n - 1) / 2).min(2);
    let small = random_corpus(alg, seed.wrapping_add(1), 8, half, 2)?;
    for (k, pair_) in small.chunks(2).enumerate() {
        if let [a, b] = pair_ {
            let lhs = alg.star(&alg.mul(a, b)?)?;
            let rhs = alg.mul(&alg.star(b)?, &alg.star(a)?)?;
            let d = lhs.sub(&rhs);
            rep.record(format!("star_antimultiplicative[N={},#{}]", n, k), "(xy)^* = y^* x^*", d.is_zero(), || {
                residual(&d)
            });
        }
    }
    Ok(rep)
}

/// The four unitarity families for every index pair.
pub fn unitarity_suite(alg: &Algebra) -> Result<Report> {
    let n = alg.rank();
    let mut rep = Report::new();
    let u = |i: usize, j: usize| alg.generator(i, j);
    let us = |i: usize, j: usize| alg.star_generator(i, j);
    for i in 1..=n {
        for j in 1..=n {
            let delta = if i == j { alg.one() } else { alg.zero() };
            let mut f = [alg.zero(), alg.zero(), alg.zero(), alg.zero()];
            for k in 1..=n {
                f[0] = f[0].add(&alg.mul(&us(k, i)?, &u(k, j)?)?);
                f[1] = f[1].add(&alg.mul(&u(i, k)?, &us(j, k)?)?);
                let c = ScalarQ::q_pow(2 * (k as i64 - j as i64));
                f[2] = f[2].add(&alg.mul(&u(k, i)?, &us(k, j)?)?.scale(&c));
                let c = ScalarQ::q_pow(2 * (i as i64 - k as i64));
                f[3] = f[3].add(&alg.mul(&us(i, k)?, &u(j, k)?)?.scale(&c));
            }
            let stmts = [
                "Σ_k u_ki^* u_kj = δ_ij",
                "Σ_k u_ik u_jk^* = δ_ij",
                "Σ_k q^{2(k-j)} u_ki u_kj^* = δ_ij",
                "Σ_k q^{2(i-k)} u_ik^* u_jk = δ_ij",
            ];
            for (fam, (v, stmt)) in f.iter().zip(stmts).enumerate() {
                let d = v.sub(&delta);
                rep.record(format!("unitarity{}[N={},i={},j={}]", fam + 1, n, i, j), stmt, d.is_zero(), || {
                    residual(&d)
                });
            }
        }
    }
    Ok(rep)
}

/// `(z_N^*)^k z_N^k - Π_{j=1}^k (1 - q^{2j} y_ℓ)`, reduced.
pub fn a_k_residual(alg: &Algebra, k: usize) -> Result<NcPoly> {
    let n = alg.rank();
    let zn = alg.z(n)?;
    let zns = alg.z_star(n)?;
    let lhs = alg.mul(&alg.pow(&zns, k)?, &alg.pow(&zn, k)?)?;
    let y = alg.y(n - 1)?;
    let mut rhs = alg.one();
    for j in 1..=k {
        rhs = alg.mul(&rhs, &alg.one().sub(&y.scale(&ScalarQ::q_pow(2 * j as i64))))?;
    }
    Ok(lhs.sub(&rhs))
}

/// Sphere relations, the `a_k` identity for `k ≤ 3`, the projection Φ on
/// `z_i z_j^*` and the conditional expectation (N ∈ {2, 3}).
pub fn sphere_suite(alg: &Algebra) -> Result<Report> {
    let n = alg.rank();
    let mut rep = Report::new();
    let q = ScalarQ::q_pow(1);
    let z: Vec<NcPoly> = (1..=n).map(|i| alg.z(i)).collect::<Result<_>>()?;
    let zs: Vec<NcPoly> = (1..=n).map(|i| alg.z_star(i)).collect::<Result<_>>()?;
    for i in 1..=n {
        for j in 1..=n {
            if i < j {
                let d = alg.mul(&z[i - 1], &z[j - 1])?.sub(&alg.mul(&z[j - 1], &z[i - 1])?.scale(&q));
                rep.record(format!("sphere_zz[N={},i={},j={}]", n, i, j), "z_i z_j = q z_j z_i for i < j", d.is_zero(), || {
                    residual(&d)
                });
            }
            if i != j {
                let d = alg.mul(&zs[i - 1], &z[j - 1])?.sub(&alg.mul(&z[j - 1], &zs[i - 1])?.scale(&q));
                rep.record(
                    format!("sphere_zstar_z[N={},i={},j={}]", n, i, j),
                    "z_i^* z_j = q z_j z_i^* for i ≠ j",
                    d.is_zero(),
                    || residual(&d),
                );
            }
        }
        let comm = alg.commutator(&zs[i - 1], &z[i - 1])?;
        let rhs = if i == 1 {
            alg.zero()
        } else {
            alg.y(i - 1)?.scale(&(ScalarQ::one() - ScalarQ::q_pow(2)))
        };
        let d = comm.sub(&rhs);
        rep.record(
            format!("sphere_commutator[N={},i={}]", n, i),
            "[z_i^*, z_i] = (1 - q^2) Σ_{j<i} z_j z_j^*",
            d.is_zero(),
            || residual(&d),
        );
    }
    let d = alg.y(n)?.sub(&alg.one());
    rep.record(format!("sphere_sum[N={}]", n), "Σ_i z_i z_i^* = 1", d.is_zero(), || residual(&d));

    for k in 1..=3 {
        let stmt = "(z_N^*)^k z_N^k = Π_{j=1}^k (1 - q^{2j} y_ℓ)";
        match a_k_residual(alg, k) {
            Ok(d) => rep.record(format!("a_k[N={},k={}]", n, k), stmt, d.is_zero(), || residual(&d)),
            Err(e @ Error::BoundExceeded { .. }) => {
                rep.push(format!("a_k[N={},k={}]", n, k), stmt, crate::report::Status::Fail, Some(json!({ "error": e.to_string() })))
            }
            Err(e) => return Err(e),
        }
    }

    if n == 2 || n == 3 {
        let proj = Projection::new(alg.clone())?;
        let y = alg.y(n - 1)?;
        let mut corpus = Vec::new();
        for i in 1..=n {
            for j in 1..=n {
                let p = alg.mul(&z[i - 1], &zs[j - 1])?;
                let expect = if i == n && j == n { alg.one() } else { alg.zero() };
                let ok = match (proj.phi(&p)?, n) {
                    (PhiImage::Circle(c), 2) => {
                        if i == n && j == n {
                            c.len() == 1 && c.get(&0).is_some_and(|v| v.is_one())
                        } else {
                            c.is_empty()
                        }
                    }
                    (PhiImage::Rank(r), _) => {
                        let t = proj.target().expect("rank target");
                        r == if expect.is_zero() { t.zero() } else { t.one() }
                    }
                    _ => false,
                };
                rep.record(format!("phi_projective[N={},i={},j={}]", n, i, j), "Φ(z_i z_j^*) = δ_iN δ_jN", ok, || {
                    json!({ "element": p.to_string() })
                });
                corpus.push((format!("z{}z{}*", i, j), p));
            }
        }
        for s in 1..=n {
            for r in s..=n {
                let p = alg.mul(&alg.x(s)?, &alg.x(r)?)?;
                if alg.system().check_degree(p.degree()).is_ok() {
                    corpus.push((format!("x{}x{}", s, r), p));
                }
            }
        }
        corpus.push(("1".into(), alg.one()));
        for (name, p) in &corpus {
            let e = proj.cond_expectation(p)?;
            let ee = proj.cond_expectation(&e)?;
            let d = ee.sub(&e);
            rep.record(format!("expectation_idempotent[N={},{}]", n, name), "E(E(x)) = E(x)", d.is_zero(), || residual(&d));
            let (a, b) = (alg.counit(&e), alg.counit(p));
            rep.record(format!("expectation_counit[N={},{}]", n, name), "ε(E(x)) = ε(x)", a == b, || {
                json!({ "lhs": a.to_string(), "rhs": b.to_string() })
            });
            let poly = as_polynomial_in(alg, &e, &y)?;
            rep.record(
                format!("expectation_in_interval[N={},{}]", n, name),
                "E(x) is a polynomial in y_ℓ",
                poly.is_some(),
                || residual(&e),
            );
        }
        let e1 = proj.cond_expectation(&alg.one())?;
        rep.record(format!("expectation_unital[N={}]", n), "E(1) = 1", e1 == alg.one(), || residual(&e1));
    }
    Ok(rep)
}

fn uq_generators(n: usize) -> Result<Vec<UqElement>> {
    let mut out = Vec::new();
    for r in 1..n {
        for kind in [LetterKind::E, LetterKind::F, LetterKind::K, LetterKind::Kinv] {
            out.push(UqElement::letter(n, kind, r)?);
        }
    }
    Ok(out)
}

/// U_q relations as operators, composition of actions, the pairing oracle,
/// star rules, eigen-relations on the sphere and projective space, the
/// Haar compatibility at N = 2, and the identities of the exterior
/// representation σ.
pub fn action_suite(alg: &Algebra, seed: u64) -> Result<Report> {
    let n = alg.rank();
    let l = n - 1;
    let mut rep = Report::new();
    let mut corpus: Vec<NcPoly> = generators(alg)?.into_iter().map(|(_, p)| p).collect();
    corpus.extend(random_corpus(alg, seed, 6, 3, 3)?);

    for (name, lhs, rhs) in uq_relations(n)? {
        for (k, p) in corpus.iter().enumerate() {
            let a = act_d(alg, &lhs, p)?;
            let b = act_d(alg, &rhs, p)?;
            rep.record(format!("uq_relation[N={},{},#{}]", n, name, k), "U_q relation holds as an operator", a == b, || {
                pair(&a, &b)
            });
        }
    }

    let gens = uq_generators(n)?;
    let mut rng = StdRng::seed_from_u64(seed);
    for k in 0..10 {
        let a = &gens[rng.gen_range(0..gens.len())];
        let b = &gens[rng.gen_range(0..gens.len())];
        let p = &corpus[rng.gen_range(0..corpus.len())];
        let lhs = act_d(alg, &a.mul(b), p)?;
        let rhs = act_d(alg, a, &act_d(alg, b, p)?)?;
        rep.record(format!("action_composition[N={},#{}]", n, k), "d_{ηξ} = d_η d_ξ", lhs == rhs, || pair(&lhs, &rhs));
    }

    for eta in &gens {
        for (k, p) in corpus.iter().enumerate() {
            let a = act_d(alg, eta, p)?;
            let b = act_d_oracle(alg, eta, p)?;
            rep.record(
                format!("pairing_oracle[N={},{},#{}]", n, eta, k),
                "d_η(x) = ⟨S^{-1}(η), x_(1)⟩ x_(2)",
                a == b,
                || pair(&a, &b),
            );
        }
    }

    for r in 1..n {
        let (e, f, kk, ki) = (UqElement::e(n, r)?, UqElement::f(n, r)?, UqElement::k(n, r)?, UqElement::kinv(n, r)?);
        for (k, p) in corpus.iter().enumerate() {
            let ps = alg.star(p)?;
            let checks = [
                ("star_rule_E", "d_E(x^*) = -q^{-1} d_F(x)^*", act_d(alg, &e, &ps)?, alg.star(&act_d(alg, &f, p)?)?.scale(&-ScalarQ::q_pow(-1))),
                ("star_rule_F", "d_F(x^*) = -q d_E(x)^*", act_d(alg, &f, &ps)?, alg.star(&act_d(alg, &e, p)?)?.scale(&-ScalarQ::q_pow(1))),
                ("star_rule_K", "d_K(x^*) = d_{K^{-1}}(x)^*", act_d(alg, &kk, &ps)?, alg.star(&act_d(alg, &ki, p)?)?),
            ];
            for (id, stmt, a, b) in checks {
                rep.record(format!("{}[N={},r={},#{}]", id, n, r, k), stmt, a == b, || pair(&a, &b));
            }
        }
    }

    let mut sphere = Vec::new();
    for i in 1..=n {
        sphere.push((format!("z{}", i), alg.z(i)?));
        sphere.push((format!("z{}*", i), alg.z_star(i)?));
    }
    for eta in gens.iter().filter(|g| g.indices_below(l)) {
        for (name, x) in &sphere {
            let a = act_d(alg, eta, x)?;
            let b = x.scale(&eta.counit());
            rep.record(format!("sphere_invariance[N={},{},{}]", n, eta, name), "d_η(x) = ε(η)x on the sphere for η in U_q(su(ℓ))", a == b, || {
                pair(&a, &b)
            });
        }
    }
    let kl = UqElement::k(n, l)?;
    for i in 1..=n {
        for j in 1..=n {
            let x = alg.mul(&alg.z(i)?, &alg.z_star(j)?)?;
            let a = act_d(alg, &kl, &x)?;
            rep.record(format!("projective_k_invariance[N={},z{}z{}*]", n, i, j), "d_{K_ℓ}(x) = x on projective space", a == x, || {
                pair(&a, &x)
            });
        }
    }

    if n == 2 {
        for eta in &gens {
            for (k, p) in corpus.iter().enumerate() {
                let a = haar_n2(alg, &act_d(alg, eta, p)?)?;
                let b = &eta.counit() * &haar_n2(alg, p)?;
                rep.record(format!("haar_action[{},#{}]", eta, k), "h(d_η(x)) = ε(η)h(x)", a == b, || {
                    json!({ "lhs": a.to_string(), "rhs": b.to_string() })
                });
            }
        }
    }

    rep.extend(exterior_checks(l)?);
    Ok(rep)
}

/// `ε_i ε_j = -q ε_j ε_i` for `i < j`, and
/// `σ(η) ε_v = ε_{σ(η(1))v} σ(η(2))` for generators of U_q(su(ℓ)).
fn exterior_checks(l: usize) -> Result<Report> {
    let mut rep = Report::new();
    let n = l + 1;
    let basis: Vec<ExtVector> = (0u32..(1 << l))
        .map(|mask| {
            let mut v = ExtVector::zero(l);
            v.add_term(mask, ScalarQ::one());
            v
        })
        .collect();
    for i in 1..=l {
        for j in (i + 1)..=l {
            for (k, v) in basis.iter().enumerate() {
                let a = eps_q(i, &eps_q(j, v)?)?;
                let b = eps_q(j, &eps_q(i, v)?)?.scale(&-ScalarQ::q_pow(1));
                rep.record(format!("eps_commutation[ℓ={},i={},j={},#{}]", l, i, j, k), "ε_i ε_j = -q ε_j ε_i for i < j", a == b, || {
                    json!({ "lhs": format!("{:?}", a), "rhs": format!("{:?}", b) })
                });
            }
        }
    }
    for r in 1..l {
        for kind in [LetterKind::E, LetterKind::F, LetterKind::K, LetterKind::Kinv] {
            let eta = UqElement::letter(n, kind, r)?;
            for j in 1..=l {
                for (k, v) in basis.iter().enumerate() {
                    let lhs = sigma_rep(&eta, &eps_q(j, v)?)?;
                    let mut rhs = ExtVector::zero(l);
                    for ((w1, w2), c) in eta.coproduct() {
                        let sv = sigma_rep(&UqElement::from_word(n, w1, c), &ExtVector::basis(l, &[j]))?;
                        let tail = sigma_rep(&UqElement::from_word(n, w2, ScalarQ::one()), v)?;
                        for (&mask, coeff) in sv.terms() {
                            let jj = mask.trailing_zeros() as usize + 1;
                            rhs = rhs.add(&eps_q(jj, &tail)?.scale(coeff));
                        }
                    }
                    rep.record(
                        format!("sigma_eps[ℓ={},{},j={},#{}]", l, eta, j, k),
                        "σ(η) ε_v = ε_{σ(η(1))v} σ(η(2))",
                        lhs == rhs,
                        || json!({ "lhs": format!("{:?}", lhs), "rhs": format!("{:?}", rhs) }),
                    );
                }
            }
        }
    }
    Ok(rep)
}

/// The R̂ intertwiner for every `r`, and π respects the relations and
/// `π(F_r) = π(E_r)^T`.
pub fn rmatrix_suite(n: usize) -> Result<Report> {
    let mut rep = Report::new();
    for r in 1..n {
        let ok = verify_rmatrix(r, n)?;
        rep.record(format!("rmatrix[N={},r={}]", n, r), "R̂ commutes with (π ⊗ π)Δ(η) for η ∈ {E_r, F_r, K_r}", ok, || {
            json!(format!("r = {}", r))
        });
        let (e, f) = (UqElement::e(n, r)?, UqElement::f(n, r)?);
        rep.record(format!("pi_star[N={},r={}]", n, r), "π(F_r) = π(E_r)^T", pi_rep(&f) == pi_rep(&e).transpose(), || {
            json!(format!("r = {}", r))
        });
    }
    for (name, lhs, rhs) in uq_relations(n)? {
        rep.record(format!("pi_relation[N={},{}]", n, name), "U_q relation holds in π", pi_rep(&lhs) == pi_rep(&rhs), || {
            json!(name.clone())
        });
    }
    Ok(rep)
}

/// Forms suite for every twist `M ∈ {-1, 0, 1}`; at N = 2 also the
/// adjointness of `∂̄` and `∂̄†`.
pub fn forms_suite(alg: &Algebra) -> Result<Report> {
    let mut rep = Report::new();
    for m in [-1, 0, 1] {
        rep.extend(verify_forms(alg, m)?);
        if alg.rank() == 2 {
            rep.extend(verify_adjoint_n2(alg, m)?);
        }
    }
    Ok(rep)
}

fn require_n2(alg: &Algebra, suite: &str, rep: &mut Report) -> bool {
    if alg.rank() != 2 {
        rep.skip(format!("{}[N={}]", suite, alg.rank()), format!("{} suite", suite), "only available at N = 2");
        return false;
    }
    true
}

/// Transpose at N = 2: an involutive star-automorphism preserving `h`,
/// intertwining `d_η` with `∂_{ν(η)}` on generators.
pub fn transpose_suite(alg: &Algebra, seed: u64) -> Result<Report> {
    let mut rep = Report::new();
    if !require_n2(alg, "transpose", &mut rep) {
        return Ok(rep);
    }
    let corpus = random_corpus(alg, seed, 10, 4, 3)?;
    for (k, p) in corpus.iter().enumerate() {
        let t = transpose_n2(alg, p)?;
        let tt = transpose_n2(alg, &t)?;
        rep.record(format!("transpose_involution[#{}]", k), "T^2 = id", &tt == p, || pair(&tt, p));
        let a = transpose_n2(alg, &alg.star(p)?)?;
        let b = alg.star(&t)?;
        rep.record(format!("transpose_star[#{}]", k), "T(x^*) = T(x)^*", a == b, || pair(&a, &b));
        let (a, b) = (haar_n2(alg, &t)?, haar_n2(alg, p)?);
        rep.record(format!("transpose_haar[#{}]", k), "hT = h", a == b, || {
            json!({ "lhs": a.to_string(), "rhs": b.to_string() })
        });
    }
    for (k, pr) in corpus.chunks(2).enumerate() {
        if let [a, b] = pr {
            if a.degree() + b.degree() > alg.degree_bound() {
                continue;
            }
            let lhs = transpose_n2(alg, &alg.mul(a, b)?)?;
            let rhs = alg.mul(&transpose_n2(alg, a)?, &transpose_n2(alg, b)?)?;
            rep.record(format!("transpose_multiplicative[#{}]", k), "T(xy) = T(x)T(y)", lhs == rhs, || pair(&lhs, &rhs));
        }
    }
    for eta in uq_generators(2)? {
        for (name, u) in generators(alg)? {
            let lhs = act_d(alg, &eta, &transpose_n2(alg, &u)?)?;
            let rhs = transpose_n2(alg, &act_del(alg, &eta.nu(), &u)?)?;
            rep.record(format!("transpose_intertwining[{},{}]", eta, name), "d_η T(x) = T ∂_{ν(η)}(x)", lhs == rhs, || {
                pair(&lhs, &rhs)
            });
        }
    }
    Ok(rep)
}

/// Haar state at N = 2: normalization, bi-invariance, the modular
/// property, and positivity of `h(x^* x)` at sample values of q.
pub fn haar_suite(alg: &Algebra, seed: u64) -> Result<Report> {
    let mut rep = Report::new();
    if !require_n2(alg, "haar", &mut rep) {
        return Ok(rep);
    }
    let h1 = haar_n2(alg, &alg.one())?;
    rep.record("haar_normalized", "h(1) = 1", h1.is_one(), || json!(h1.to_string()));
    let corpus = random_corpus(alg, seed, 12, 4, 3)?;
    for (k, p) in corpus.iter().enumerate() {
        let hp = haar_n2(alg, p)?;
        let t = alg.coproduct(p)?;
        let right = t.slice_right(|w| haar_n2(alg, &NcPoly::word(2, w.clone())))?;
        let left = t.slice_left(|w| haar_n2(alg, &NcPoly::word(2, w.clone())))?;
        let expect = alg.scalar(hp.clone());
        rep.record(format!("haar_right_invariance[#{}]", k), "(1 ⊗ h)Δ(x) = h(x)1", right == expect, || pair(&right, &expect));
        rep.record(format!("haar_left_invariance[#{}]", k), "(h ⊗ 1)Δ(x) = h(x)1", left == expect, || pair(&left, &expect));
        let back = modular_theta_inv(alg, &modular_theta(alg, p));
        rep.record(format!("theta_inverse[#{}]", k), "θ^{-1}θ = id", &back == p, || pair(&back, p));
    }
    let small = random_corpus(alg, seed.wrapping_add(7), 12, 2, 3)?;
    for (k, pr) in small.chunks(2).enumerate() {
        if let [x, y] = pr {
            let a = haar_n2(alg, &alg.mul(x, y)?)?;
            let b = haar_n2(alg, &alg.mul(y, &modular_theta(alg, x))?)?;
            rep.record(format!("haar_modular[#{}]", k), "h(xy) = h(y θ(x))", a == b, || {
                json!({ "lhs": a.to_string(), "rhs": b.to_string() })
            });
        }
        for (j, x) in pr.iter().enumerate() {
            let v = haar_n2(alg, &alg.mul(&alg.star(x)?, x)?)?;
            let ok = [0.3, 0.5, 0.7].iter().all(|&q| v.eval_q(q).is_some_and(|f| f >= -1e-12));
            rep.record(format!("haar_positive[#{}.{}]", k, j), "h(x^* x) ≥ 0 at q ∈ {0.3, 0.5, 0.7}", ok, || json!(v.to_string()));
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_rejected() {
        let a = Algebra::with_bound(2, 4).unwrap();
        assert!(matches!(run_suite(&a, "nope", 42), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn rmatrix_suite_passes_at_rank_two() {
        assert!(rmatrix_suite(2).unwrap().all_passed());
    }

    #[test]
    fn haar_suite_skips_at_rank_three() {
        let a = Algebra::with_bound(3, 3).unwrap();
        let rep = haar_suite(&a, 42).unwrap();
        assert_eq!(rep.count(crate::report::Status::Skipped), 1);
    }
}
