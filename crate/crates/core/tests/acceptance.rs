//! Acceptance suite. Each criterion runs under its own time limit and
//! prints one line; the process fails if any criterion does.
//!
//! Run with `cargo test -p qflag-core --test acceptance`.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use qflag_core::dirac::{gradient_identity_residual, gradient_suite_bound, verify_gradient_suite};
use qflag_core::ncalg::{Algebra, Strategy};
use qflag_core::qmetric::{
    counit_state, envelope, haar_state_iq, hk_state, lip_bound_check, mk_closed_form, mk_closed_form_exact,
    mk_lp_oracle, mk_lp_oracle_exact, point_mass_diameter, psi_bound_check, IqPoint, QFunction, QState, Real,
};
use qflag_core::report::Report;
use qflag_core::verify::{a_k_residual, forms_suite, haar_suite, random_corpus, rmatrix_suite, sphere_suite, unitarity_suite};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const SEED: u64 = 42;
const QS: [f64; 3] = [0.3, 0.5, 0.7];

fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn exact_qs() -> [BigRational; 3] {
    [rat(3, 10), rat(1, 2), rat(7, 10)]
}

/// Rank-2 algebra with the default bound and rank-3 with the bound the
/// degree-9 identities need. Built once and shared.
fn algebra(n: usize) -> &'static Algebra {
    static A2: OnceLock<Algebra> = OnceLock::new();
    static A3: OnceLock<Algebra> = OnceLock::new();
    match n {
        2 => A2.get_or_init(|| Algebra::with_bound(2, 8).expect("rank 2 completes")),
        3 => A3.get_or_init(|| Algebra::with_bound(3, gradient_suite_bound(3)).expect("rank 3 completes")),
        _ => unreachable!(),
    }
}

type Outcome = Result<String, String>;

fn report_outcome(reports: Vec<Report>) -> Outcome {
    let (mut pass, mut fail) = (0, Vec::new());
    for rep in reports {
        pass += rep.count(qflag_core::report::Status::Pass);
        fail.extend(rep.failures().map(|c| c.check_id.clone()));
    }
    if fail.is_empty() {
        Ok(format!("{} checks", pass))
    } else {
        Err(format!("{} failed: {}", fail.len(), fail.join(", ")))
    }
}

fn both_ranks(f: impl Fn(&Algebra) -> qflag_core::Result<Report>) -> Outcome {
    let mut reports = Vec::new();
    for n in [2, 3] {
        reports.push(f(algebra(n)).map_err(|e| format!("N = {}: {}", n, e))?);
    }
    report_outcome(reports)
}

fn unitarity() -> Outcome {
    both_ranks(unitarity_suite)
}

fn sphere() -> Outcome {
    both_ranks(sphere_suite)
}

fn rmatrix() -> Outcome {
    report_outcome(vec![rmatrix_suite(2).map_err(|e| e.to_string())?, rmatrix_suite(3).map_err(|e| e.to_string())?])
}

fn gradient_identity() -> Outcome {
    for n in [2, 3] {
        let r = gradient_identity_residual(algebra(n)).map_err(|e| format!("N = {}: {}", n, e))?;
        if !r.is_zero() {
            return Err(format!("N = {} (ell = {}): residual {}", n, n - 1, r));
        }
    }
    Ok("residual 0 for ell = 1, 2".into())
}

fn commutation_and_a_k() -> Outcome {
    let mut checked = 0;
    for n in [2, 3] {
        let alg = algebra(n);
        let rep = verify_gradient_suite(alg).map_err(|e| e.to_string())?;
        for c in rep.checks.iter().filter(|c| {
            ["z_commutes_nabla_zstar", "zstar_commutes_nabla_zstar", "x_q_commutes_nabla_x"].iter().any(|p| c.check_id.starts_with(p))
        }) {
            match c.status {
                qflag_core::report::Status::Fail => return Err(format!("N = {}: {}", n, c.check_id)),
                qflag_core::report::Status::Pass => checked += 1,
                qflag_core::report::Status::Skipped => {}
            }
        }
        for k in 1..=3 {
            let r = a_k_residual(alg, k).map_err(|e| format!("N = {}, a_{}: {}", n, k, e))?;
            if !r.is_zero() {
                return Err(format!("N = {}: a_{} residual {}", n, k, r));
            }
            checked += 1;
        }
    }
    Ok(format!("{} identities", checked))
}

fn forms() -> Outcome {
    both_ranks(forms_suite)
}

fn haar() -> Outcome {
    report_outcome(vec![haar_suite(algebra(2), SEED).map_err(|e| e.to_string())?])
}

fn random_point<R: Rng>(rng: &mut R, t: usize) -> IqPoint {
    let m = rng.gen_range(0..=t + 3);
    if m == t + 3 {
        IqPoint::Zero
    } else {
        IqPoint::Level(m)
    }
}

fn lipschitz() -> Outcome {
    let mut rng = StdRng::seed_from_u64(SEED);
    let t = 20;
    for q in QS {
        for trial in 0..1000 {
            let f = QFunction::random(&mut rng, t);
            let (x, y) = (random_point(&mut rng, t), random_point(&mut rng, t));
            if !lip_bound_check(&f, x, y, &q).map_err(|e| e.to_string())? {
                return Err(format!("q = {}, trial {}: {:?} vs {:?}", q, trial, x, y));
            }
        }
    }
    Ok("3000 trials, 0 violations".into())
}

fn psi() -> Outcome {
    let mut rng = StdRng::seed_from_u64(SEED + 1);
    let t = 30;
    let mut n = 0;
    for q in QS {
        for i in 0..1000 {
            let f = if i % 2 == 0 { QFunction::random_lipschitz(&mut rng, t, q) } else { QFunction::random(&mut rng, t) };
            for level in 0..=10 {
                if !psi_bound_check(&f, level, &q).map_err(|e| e.to_string())? {
                    return Err(format!("q = {}, function {}, level {}", q, i, level));
                }
                n += 1;
            }
        }
    }
    Ok(format!("{} checks, 0 violations", n))
}

fn mk_oracle() -> Outcome {
    let mut rng = StdRng::seed_from_u64(SEED + 2);
    let mut worst = 0.0f64;
    for i in 0..500 {
        let q = QS[i % 3];
        let (ta, tb) = (rng.gen_range(1..=60), rng.gen_range(1..=60));
        let (a, b) = (QState::<f64>::random(&mut rng, ta), QState::<f64>::random(&mut rng, tb));
        let closed = mk_closed_form(&a, &b, q).map_err(|e| e.to_string())?;
        let lp = mk_lp_oracle(&a, &b, q).map_err(|e| e.to_string())?;
        worst = worst.max((closed - lp).abs());
    }
    if worst > 1e-9 {
        return Err(format!("float gap {:e}", worst));
    }
    for i in 0..50 {
        let q = &exact_qs()[i % 3];
        let t = rng.gen_range(1..=6);
        let (a, b) = (QState::<BigRational>::random(&mut rng, t), QState::<BigRational>::random(&mut rng, t));
        let closed = mk_closed_form_exact(&a, &b, q).map_err(|e| e.to_string())?;
        let lp = mk_lp_oracle_exact(&a, &b, q).map_err(|e| e.to_string())?;
        if !closed.sub(&lp).is_zero() {
            return Err(format!("exact pair {}: {} vs {}", i, closed, lp));
        }
    }
    Ok(format!("500 float pairs (max gap {:.1e}), 50 exact pairs equal", worst))
}

fn convergence() -> Outcome {
    let t = 60;
    for q in QS {
        let base = haar_state_iq(&q, t).map_err(|e| e.to_string())?;
        let mut prev = f64::INFINITY;
        for k in 0..=6 {
            let h = hk_state(k, &base, &q).map_err(|e| e.to_string())?;
            let d = mk_closed_form(&h, &counit_state(t + k), q).map_err(|e| e.to_string())?;
            if !(d < prev) {
                return Err(format!("q = {}: mk(h{}, eps) = {} not below {}", q, k, d, prev));
            }
            if !d.le_slack(&envelope(q, k, t + k)) {
                return Err(format!("q = {}: mk(h{}, eps) above the envelope", q, k));
            }
            prev = d;
        }
    }
    for q in exact_qs() {
        let base = haar_state_iq(&q, t).map_err(|e| e.to_string())?;
        for k in 0..=6 {
            let h = hk_state(k, &base, &q).map_err(|e| e.to_string())?;
            for m in 0..=6 {
                if h.moment(m, &q) > q.powi(2 * k * m) {
                    return Err(format!("q = {}: h_{}(y^{}) too large", q, k, m));
                }
            }
        }
    }
    Ok("monotone, under the envelope, 147 exact moment bounds".into())
}

fn diameter() -> Outcome {
    let t = 60;
    for q in QS {
        let diam = point_mass_diameter(q, t).map_err(|e| e.to_string())?;
        let bound = envelope(q, 0, t);
        if !diam.le_slack(&bound) {
            return Err(format!("q = {}: diameter {} above {}", q, diam, bound));
        }
        let base = haar_state_iq(&q, t).map_err(|e| e.to_string())?;
        let d = mk_closed_form(&base, &counit_state(t), q).map_err(|e| e.to_string())?;
        if !d.is_finite() || d > diam {
            return Err(format!("q = {}: mk(h0, eps) = {}", q, d));
        }
    }
    Ok("diameter within the path length at q = 0.3, 0.5, 0.7".into())
}

fn confluence() -> Outcome {
    let mut total = 0;
    for (n, seed) in [(2, SEED), (3, SEED + 1)] {
        let alg = algebra(n);
        let corpus = random_corpus(alg, seed, 50, 6, 4).map_err(|e| e.to_string())?;
        for p in corpus {
            let a = alg.reduce_with(&p, Strategy::LeftOutermost).map_err(|e| e.to_string())?;
            let b = alg.reduce_with(&p, Strategy::RightInnermost).map_err(|e| e.to_string())?;
            if a != b {
                return Err(format!("N = {}: {} has two normal forms", n, p));
            }
            total += 1;
        }
    }
    Ok(format!("{} polynomials", total))
}

fn main() {
    let criteria: Vec<(usize, &str, u64, fn() -> Outcome)> = vec![
        (1, "unitarity relations", 60, unitarity),
        (2, "sphere relations", 60, sphere),
        (3, "R-matrix intertwiner", 5, rmatrix),
        (4, "gradient identity", 120, gradient_identity),
        (5, "commutation lemmas and a_k", 120, commutation_and_a_k),
        (6, "forms and commutators", 300, forms),
        (7, "Haar suite at N = 2", 60, haar),
        (8, "Lipschitz estimate", 10, lipschitz),
        (9, "Psi approximation", 10, psi),
        (10, "MK closed form vs LP", 120, mk_oracle),
        (11, "convergence to the counit", 60, convergence),
        (12, "finite diameter", 10, diameter),
        (13, "confluence smoke test", 120, confluence),
    ];
    // Completion time is charged to the first criterion that needs each algebra.
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let (status, detail) = match (&outcome, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{} but over the time limit", d)),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {:>2} {}: {} in {:.2?} (limit {}s): {}", id, name, status, elapsed, limit, detail);
    }
    if failed > 0 {
        println!("{} criteria failed", failed);
        std::process::exit(1);
    }
}
