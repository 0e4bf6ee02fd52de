use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sphereheat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sphereheat"))
        .args(args)
        .env("SPHEREHEAT_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn path_arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn dirichlet_mehler_campaign_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("r.json");
    let out = sphereheat(&[
        "verify",
        "--identity",
        "dirichlet_mehler",
        "--ell",
        "0..20",
        "--theta",
        "0.1:1.5:0.1",
        "--nodes",
        "256",
        "--tol-rel",
        "1e-9",
        "--out",
        path_arg(&out_path),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&std::fs::read(&out_path).unwrap()).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 21 * 15);
    assert!(arr.iter().all(|r| r["pass"] == Value::Bool(true)));
    let keys: Vec<&String> = arr[0].as_object().unwrap().keys().collect();
    assert_eq!(keys, ["identity", "params", "lhs", "rhs", "abs_err", "rel_err", "nodes", "pass"]);
}

#[test]
fn perturbed_constant_fails() {
    let out = sphereheat(&["verify", "--identity", "lemma24", "--self-test", "perturb"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("failed"));
}

#[test]
fn chebyshev_rule_mass() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("rule.csv");
    let out = sphereheat(&["quad", "--weight", "-0.5", "--nodes", "8", "--out", path_arg(&out_path)]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&out_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,node,weight"));
    let weights: Vec<f64> = lines.map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(weights.len(), 8);
    assert!((weights.iter().sum::<f64>() - PI).abs() <= 1e-12);
}

#[test]
fn help_exits_zero_for_every_subcommand() {
    assert_eq!(code(&sphereheat(&["--help"])), 0);
    for sub in ["verify", "eval", "heat", "quad", "bench"] {
        let out = sphereheat(&[sub, "--help"]);
        assert_eq!(code(&out), 0, "{sub}");
        assert!(!out.stdout.is_empty());
    }
}

#[test]
fn usage_errors_exit_two_with_one_line() {
    let cases: &[&[&str]] = &[
        &[],
        &["frobnicate"],
        &["verify", "--identity", "nope"],
        &["verify", "--identity", "prop22", "--ell", "5..2"],
        &["verify", "--identity", "prop22", "--theta", "0.1:x:0.1"],
        &["quad", "--weight", "-0.5", "--bogus"],
        &["heat", "--t", "1e-4", "--distance", "0.5"],
    ];
    for args in cases {
        let out = sphereheat(args);
        assert_eq!(code(&out), 2, "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
    }
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = |p: &Path| {
        vec![
            "verify".to_owned(),
            "--identity".into(),
            "eq_ii".into(),
            "--n".into(),
            "0..3".into(),
            "--m".into(),
            "0..2".into(),
            "--ell".into(),
            "0..4".into(),
            "--out".into(),
            path_arg(p).to_owned(),
        ]
    };
    let run = |p: &Path| {
        let owned = args(p);
        let refs: Vec<&str> = owned.iter().map(String::as_str).collect();
        code(&sphereheat(&refs))
    };
    assert_eq!(run(&a), 0);
    assert_eq!(run(&b), 0);
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    assert!(!ta.contains(&b'\r'));
}

#[test]
fn json_rows_follow_grid_order() {
    let out = sphereheat(&[
        "verify",
        "--identity",
        "lemma24",
        "--self-test",
        "perturb",
        "--n",
        "0..1",
        "--ell",
        "0..2",
        "--t",
        "0.2,0.7",
        "--format",
        "json",
    ]);
    // mixed pass and fail: degree zero rows stay at 1 vs 2, others flip
    assert_eq!(code(&out), 1);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let keys: Vec<(u64, u64, f64)> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            let p = &r["params"];
            (p["n"].as_u64().unwrap(), p["ell"].as_u64().unwrap(), p["t"].as_f64().unwrap())
        })
        .collect();
    let mut sorted = keys.clone();
    sorted.sort_by(|x, y| x.partial_cmp(y).unwrap());
    assert_eq!(keys, sorted);
    assert_eq!(keys.len(), 2 * 3 * 2);
}

#[test]
fn scientific_notation_is_accepted() {
    let out = sphereheat(&["quad", "--weight", "5e-1", "--nodes", "1.6e1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 17);

    let out = sphereheat(&[
        "verify", "--identity", "dirichlet_mehler", "--ell", "3", "--theta", "2.5e-1", "--tol-abs", "1E-10",
        "--format", "csv",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().nth(1).unwrap().starts_with("dirichlet_mehler,ell=3;theta=0.25,"));
}

#[test]
fn heat_table_agrees_between_representations() {
    let out = sphereheat(&["heat", "--nu", "0..2", "--t", "0.1,0.5", "--distance", "0.3,1.1"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,d,nu,L,series_re,series_im,integral_re,integral_im,abs_diff"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3 * 2 * 2);
    for row in rows {
        let diff: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
        assert!(diff <= 1e-10, "{row}");
    }
}

#[test]
fn growing_sign_flag_scales_by_exp_2nu_t() {
    let base = sphereheat(&["heat", "--nu", "2", "--t", "0.5", "--distance", "0.4"]);
    let flipped = sphereheat(&["heat", "--nu", "2", "--t", "0.5", "--distance", "0.4", "--paper-sign"]);
    let series = |o: &Output| -> f64 {
        let text = String::from_utf8_lossy(&o.stdout).into_owned();
        text.lines().nth(1).unwrap().split(',').nth(4).unwrap().parse().unwrap()
    };
    let ratio = series(&flipped) / series(&base);
    assert!((ratio - 2.0f64.exp()).abs() <= 1e-12 * ratio);
}

#[test]
fn eval_polynomials_match_hypergeometric_form() {
    for function in ["jacobi", "gegenbauer", "legendre"] {
        let out = sphereheat(&[
            "eval", "--function", function, "--degree", "0..8", "--alpha", "1.5", "--beta", "-0.25", "--lambda", "2.5",
            "--x", "-1:1:0.25",
        ]);
        assert_eq!(code(&out), 0, "{function}: {}", String::from_utf8_lossy(&out.stderr));
        let text = String::from_utf8(out.stdout).unwrap();
        for row in text.lines().skip(1) {
            let diff: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
            assert!(diff <= 1e-10, "{function}: {row}");
        }
    }
}

#[test]
fn bench_emits_one_row_per_method_and_case() {
    let out = sphereheat(&["bench", "--reps", "2"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("method,params,mean_ns,stddev_ns"));
    assert_eq!(lines.count(), 2 * 3 * 2 * 2);
}
