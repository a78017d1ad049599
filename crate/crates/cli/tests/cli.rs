use std::process::{Command, Output};

use qflag::{eval_expr, parse_expr};
use qflag_core::ncalg::Algebra;

fn qflag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qflag")).args(args).env_remove("QFLAG_MODE").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn corpus() -> Vec<&'static str> {
    include_str!("../corpus/expressions.txt").lines().filter(|l| !l.trim().is_empty()).collect()
}

#[test]
fn reduce_examples() {
    let o = qflag(&["reduce", "-N", "2", "u[2,2]*u[1,1]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1 + q^-1*u[1,2]*u[2,1]\n");
    assert_eq!(stdout(&qflag(&["reduce", "-N", "2", "y[2]"])), "1\n");
    assert_eq!(stdout(&qflag(&["reduce", "-N", "2", "1"])), "1\n");
    assert_eq!(stdout(&qflag(&["reduce", "-N", "2", "act(E[1]; u[2,1])"])), "-q^-1*u[1,1]\n");
}

#[test]
fn exit_codes() {
    let o = qflag(&["reduce", "-N", "2", "u[1,3]"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1, column 5"));
    assert_eq!(qflag(&["reduce", "-N", "2", "u[1,1] +"]).status.code(), Some(2));
    assert_eq!(qflag(&["reduce", "-N", "2", "--bound", "4", "u[1,1]^6"]).status.code(), Some(3));
    assert_eq!(qflag(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(qflag(&["approx", "--level", "70", "-T", "60"]).status.code(), Some(2));
}

#[test]
fn canonical_prints_round_trip() {
    let alg = Algebra::new(2).unwrap();
    for text in corpus() {
        let printed = parse_expr(text, 2).unwrap().to_string();
        assert_eq!(parse_expr(&printed, 2).unwrap().to_string(), printed, "{}", text);
        let normal = eval_expr(&parse_expr(text, 2).unwrap(), &alg).unwrap();
        let canonical = normal.to_string();
        let reparsed = parse_expr(&canonical, 2).unwrap();
        assert_eq!(reparsed.to_string(), canonical);
        assert_eq!(eval_expr(&reparsed, &alg).unwrap(), normal, "{}", text);
    }
}

#[test]
fn verify_reports() {
    let o = qflag(&["verify", "--suite", "unitarity", "-N", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(json["summary"]["fail"], 0);

    let o = qflag(&["verify", "--suite", "haar", "-N", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(json["summary"]["skipped"], 1);
    assert_eq!(json["checks"][0]["status"], "skipped");

    let o = qflag(&["verify", "--suite", "gradient", "-N", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(json["bound"], 9);
    let checks = json["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["check_id"] == "gradient_identity" && c["status"] == "pass"));
}

fn mk_rows(csv: &str) -> Vec<(String, f64)> {
    csv.lines().skip(1).map(|l| {
        let cols: Vec<&str> = l.split(',').collect();
        (cols[1].to_string(), cols[2].parse().unwrap())
    }).collect()
}

#[test]
fn mk_table() {
    let args = ["mk", "--q", "0.5", "-T", "60", "--states", "h0,h3,eps", "--assert-monotone", "--assert-envelope"];
    let o = qflag(&args);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert!(csv.starts_with("q,k,mk_upper,tail_bound,T\n"));
    let rows = mk_rows(&csv);
    assert_eq!(rows.len(), 3);
    assert!(rows[0].1 > rows[1].1 && rows[1].1 > 0.0);
    assert_eq!(rows[2], ("eps".to_string(), 0.0));
    // deterministic output
    assert_eq!(stdout(&qflag(&args)), csv);
}

#[test]
fn mk_exact_mode_agrees() {
    let float = stdout(&qflag(&["mk", "--q", "1/2", "-T", "20", "--states", "h0,h2,eps"]));
    let exact = Command::new(env!("CARGO_BIN_EXE_qflag"))
        .args(["mk", "--q", "1/2", "-T", "20", "--states", "h0,h2,eps", "--mode", "float", "--assert-monotone"])
        .env("QFLAG_MODE", "exact")
        .output()
        .unwrap();
    assert_eq!(exact.status.code(), Some(0));
    for (a, b) in mk_rows(&float).iter().zip(mk_rows(&stdout(&exact))) {
        assert!((a.1 - b.1).abs() < 1e-12);
    }
}

#[test]
fn mk_unsupported_rank_without_moments() {
    let o = qflag(&["mk", "--q", "0.5", "--ell", "2", "--states", "h0,eps"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn approx_table() {
    let dir = std::env::temp_dir().join(format!("qflag-approx-{}", std::process::id()));
    let path = dir.with_extension("csv");
    let o = qflag(&["approx", "--q", "0.5", "--level", "3", "--count", "20", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    let id = csv.lines().find(|l| l.starts_with("id,")).unwrap();
    assert_eq!(id, "id,3,1.56250000000e-2,2.65165042945e-1,2.49540042945e-1,true");
    assert_eq!(csv.lines().count(), 1 + 2 + 20);

    let o = qflag(&["approx", "--level", "0", "--count", "0"]);
    let c = stdout(&o);
    assert!(c.lines().any(|l| l.starts_with("const,0,0.00000000000e0,")));
}
