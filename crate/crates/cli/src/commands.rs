use std::cmp::Ordering;
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};
use qflag_core::ncalg::rewrite::DEFAULT_DEGREE_BOUND;
use qflag_core::ncalg::Algebra;
use qflag_core::qmetric::{
    base_state, chain_edge_exact, counit_state, envelope, hk_state, mk_closed_form, mk_closed_form_exact,
    parse_rational, psi_approx, psi_bound_check, seminorm_grad_sq, sup_distance, tail_bound_upper,
    tail_bracket_exact, MomentSequence, QFunction, QState, Real, Surd,
};
use qflag_core::report::{Report, Status};
use qflag_core::verify::{required_bound, run_suite, SUITES};
use rand::rngs::StdRng;
use rand::SeedableRng;

use crate::expr::{eval_expr, parse_expr};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

impl std::str::FromStr for Mode {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(CliError::Usage(format!("mode must be 'exact' or 'float', got '{}'", other))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub n: usize,
    /// `q` as written on the command line, e.g. `0.5` or `1/3`.
    pub q: String,
    pub t: usize,
    /// Completion degree bound; `None` means the default of 8.
    pub bound: Option<usize>,
    pub mode: Mode,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { n: 2, q: "0.5".into(), t: 60, bound: None, mode: Mode::Float, seed: 42 }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.n < 2 {
            return Err(CliError::Usage(format!("N must be at least 2, got {}", self.n)));
        }
        let q = self.q_exact()?;
        if !(q > BigRational::zero() && q < BigRational::one()) {
            return Err(CliError::Usage(format!("q must lie in (0, 1), got {}", self.q)));
        }
        Ok(())
    }

    fn q_exact(&self) -> Result<BigRational, CliError> {
        parse_rational(&self.q).map_err(|_| CliError::Usage(format!("q must be a decimal or a fraction, got '{}'", self.q)))
    }

    fn q_float(&self) -> Result<f64, CliError> {
        Ok(self.q_exact()?.to_f64().unwrap_or(f64::NAN))
    }
}

fn fmt_float(x: f64) -> String {
    format!("{:.11e}", x)
}

/// Normal form of an expression.
pub fn cmd_reduce(cfg: &RunConfig, text: &str) -> Result<String, CliError> {
    let e = parse_expr(text, cfg.n)?;
    let alg = Algebra::with_bound(cfg.n, cfg.bound.unwrap_or(DEFAULT_DEGREE_BOUND))?;
    Ok(eval_expr(&e, &alg)?.to_string())
}

/// Runs a verification suite. The completion bound is raised to what the
/// suite needs when the configured one is smaller.
pub fn cmd_verify(cfg: &RunConfig, suite: &str) -> Result<(serde_json::Value, Report), CliError> {
    if !SUITES.contains(&suite) {
        return Err(CliError::Usage(format!("unknown suite '{}'; expected one of {}", suite, SUITES.join(", "))));
    }
    let bound = cfg.bound.unwrap_or(DEFAULT_DEGREE_BOUND).max(required_bound(suite, cfg.n));
    let alg = Algebra::with_bound(cfg.n, bound)?;
    let report = run_suite(&alg, suite, cfg.seed)?;
    let json = serde_json::json!({
        "suite": suite,
        "N": cfg.n,
        "bound": bound,
        "seed": cfg.seed,
        "summary": {
            "pass": report.count(Status::Pass),
            "fail": report.count(Status::Fail),
            "skipped": report.count(Status::Skipped),
        },
        "checks": report.to_json(),
    });
    Ok((json, report))
}

#[derive(Clone, Debug, Default)]
pub struct MkOptions {
    pub assert_monotone: bool,
    pub assert_envelope: bool,
    /// Rank of the base measure; only 1 works without moments.
    pub ell: usize,
    pub moments: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MkOutput {
    pub csv: String,
    /// Failed assertions, empty when everything requested holds.
    pub failures: Vec<String>,
}

/// `None` is the counit, `Some(k)` is `h_k`.
fn parse_states(list: &str) -> Result<Vec<Option<usize>>, CliError> {
    list.split(',')
        .map(|s| match s.trim() {
            "eps" => Ok(None),
            h if h.starts_with('h') => {
                h[1..].parse().map(Some).map_err(|_| CliError::Usage(format!("bad state name '{}'", h)))
            }
            other => Err(CliError::Usage(format!("bad state name '{}'; use h<k> or eps", other))),
        })
        .collect()
}

fn label(k: Option<usize>) -> String {
    k.map_or("eps".into(), |k| k.to_string())
}

fn build_states<F: Real>(
    cfg: &RunConfig,
    q: &F,
    opts: &MkOptions,
    parse: impl Fn(&str) -> Result<F, CliError>,
    names: &[Option<usize>],
) -> Result<(Vec<QState<F>>, usize), CliError> {
    let moments = match &opts.moments {
        Some(m) => Some(MomentSequence::new(m.iter().map(|s| parse(s)).collect::<Result<Vec<_>, _>>()?)?),
        None => None,
    };
    let base = base_state(q, cfg.t, opts.ell.max(1), moments.as_ref())?;
    let top = cfg.t + names.iter().flatten().max().copied().unwrap_or(0);
    let states = names
        .iter()
        .map(|k| match k {
            None => Ok(counit_state(top)),
            Some(k) => Ok(hk_state(*k, &base, q)?.retruncate(top)),
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok((states, top))
}

/// Distances `mk(μ, ε)` for each listed state, as CSV rows
/// `q,k,mk_upper,tail_bound,T`. All states share the truncation
/// `T + max k`, and `tail_bound` is an upper bound for the tail edge.
pub fn cmd_mk(cfg: &RunConfig, states: &str, opts: &MkOptions) -> Result<MkOutput, CliError> {
    cfg.validate()?;
    let names = parse_states(states)?;
    let mut csv = String::from("q,k,mk_upper,tail_bound,T\n");
    let mut failures = Vec::new();
    let qf = cfg.q_float()?;
    match cfg.mode {
        Mode::Float => {
            let parse = |s: &str| -> Result<f64, CliError> {
                Ok(parse_rational(s)?.to_f64().unwrap_or(f64::NAN))
            };
            let (states, top) = build_states(cfg, &qf, opts, parse, &names)?;
            let eps = counit_state(top);
            let tail = tail_bound_upper(qf, top);
            let mut values = Vec::new();
            for (k, st) in names.iter().zip(&states) {
                let d = mk_closed_form(st, &eps, qf)?;
                writeln!(csv, "{},{},{},{},{}", fmt_float(qf), label(*k), fmt_float(d), fmt_float(tail), top).unwrap();
                if let Some(k) = k {
                    values.push((*k, d));
                    if opts.assert_envelope && !d.le_slack(&envelope(qf, *k, top)) {
                        failures.push(format!("mk(h{}, eps) = {} exceeds the envelope", k, d));
                    }
                }
            }
            if opts.assert_monotone {
                check_monotone(&mut values, &mut failures, |a, b| Ok(a.partial_cmp(b).unwrap_or(Ordering::Equal)))?;
            }
        }
        Mode::Exact => {
            let q = cfg.q_exact()?;
            let (states, top) = build_states(cfg, &q, opts, |s| Ok(parse_rational(s)?), &names)?;
            let eps = counit_state(top);
            let bracket = |bits: u32| tail_bracket_exact(&q, top, bits);
            let tau_hi = bracket(64).1.to_f64().unwrap_or(f64::NAN);
            let mut values = Vec::new();
            for (k, st) in names.iter().zip(&states) {
                let d = mk_closed_form_exact(st, &eps, &q)?;
                writeln!(csv, "{},{},{},{},{}", fmt_float(qf), label(*k), fmt_float(d.to_f64(tau_hi)), fmt_float(tau_hi), top)
                    .unwrap();
                if let Some(k) = k {
                    if opts.assert_envelope {
                        let mut env = Surd::tau(BigRational::one());
                        for m in *k..top {
                            env = env.add(&chain_edge_exact(&q, m)?);
                        }
                        if env.sub(&d).sign(&bracket)? == Ordering::Less {
                            failures.push(format!("mk(h{}, eps) = {} exceeds the envelope", k, d));
                        }
                    }
                    values.push((*k, d));
                }
            }
            if opts.assert_monotone {
                check_monotone(&mut values, &mut failures, |a, b| Ok(a.sub(b).sign(&bracket)?))?;
            }
        }
    }
    Ok(MkOutput { csv, failures })
}

fn check_monotone<V>(
    values: &mut [(usize, V)],
    failures: &mut Vec<String>,
    cmp: impl Fn(&V, &V) -> Result<Ordering, CliError>,
) -> Result<(), CliError> {
    values.sort_by_key(|(k, _)| *k);
    for w in values.windows(2) {
        if w[0].0 != w[1].0 && cmp(&w[1].1, &w[0].1)? != Ordering::Less {
            failures.push(format!("mk(h{}, eps) is not below mk(h{}, eps)", w[1].0, w[0].0));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ApproxOutput {
    pub csv: String,
    pub violations: usize,
}

/// Checks `‖f − Ψ(f)‖ ≤ C_q·q^level·L_grad(f)` on the constant `1`, the
/// identity and `count` random functions with `L_grad ≤ 1`. Rows: `f,level,sup_error,bound,margin,pass`.
pub fn cmd_approx(cfg: &RunConfig, level: usize, count: usize) -> Result<ApproxOutput, CliError> {
    cfg.validate()?;
    if level > cfg.t {
        return Err(CliError::Usage(format!("level {} exceeds the truncation T = {}", level, cfg.t)));
    }
    let qf = cfg.q_float()?;
    let mut rng = StdRng::seed_from_u64(cfg.seed);
    let mut funcs = vec![("const".to_string(), QFunction::constant(1.0, cfg.t)), ("id".to_string(), QFunction::identity(&qf, cfg.t))];
    for i in 0..count {
        funcs.push((format!("rand{}", i), QFunction::random_lipschitz(&mut rng, cfg.t, qf)));
    }
    let mut csv = String::from("f,level,sup_error,bound,margin,pass\n");
    let mut violations = 0;
    for (name, f) in funcs {
        let (err, bound_sq, ok) = match cfg.mode {
            Mode::Float => approx_row(&f, level, &qf)?,
            Mode::Exact => {
                let q = cfg.q_exact()?;
                let f = if name == "id" { QFunction::identity(&q, cfg.t) } else { f.map(|v| BigRational::from_f64(*v).unwrap_or_default()) };
                approx_row(&f, level, &q)?
            }
        };
        let bound = bound_sq.sqrt();
        violations += usize::from(!ok);
        writeln!(csv, "{},{},{},{},{},{}", name, level, fmt_float(err), fmt_float(bound), fmt_float(bound - err), ok).unwrap();
    }
    Ok(ApproxOutput { csv, violations })
}

fn approx_row<F: Real>(f: &QFunction<F>, level: usize, q: &F) -> Result<(f64, f64, bool), CliError> {
    let err = sup_distance(f, &psi_approx(f, level)?);
    let cq2 = (F::one() + q.clone()) / (F::one() - q.clone());
    let bound_sq = cq2 * q.powi(2 * level) * seminorm_grad_sq(f, q);
    let ok = psi_bound_check(f, level, q)?;
    Ok((err.to_f64().unwrap_or(f64::NAN), bound_sq.to_f64().unwrap_or(f64::NAN), ok))
}
