use std::fs;
use std::path::Path;

use diophantine_cli::run;

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn dioph(args: &[&str]) -> Output {
    let mut out = vec![];
    let mut err = vec![];
    let argv = std::iter::once("dioph").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn config(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn sqrt2_config(degrees: &str) -> String {
    format!(
        r#"{{
            "schema": 1,
            "alpha": {{"minpoly": ["-2", "0", "1"], "root": 1}},
            "theta1": "21/10", "theta2": "21/10", "epsilon": "1/10",
            "degrees": {degrees},
            "points": {{"p1": "3/2", "p2": "17/12"}},
            "hunt": {{"kappa": 2.5, "q_max": 1000}}
        }}"#
    )
}

#[test]
fn help_and_bad_usage() {
    assert_eq!(dioph(&["--help"]).code, 0);
    assert_eq!(dioph(&["frobnicate"]).code, 1);
    assert_eq!(dioph(&["hunt", "--kappa", "2.5", "--q-max", "10"]).code, 1);
}

#[test]
fn index_of_diagonal_square() {
    let dir = tempfile::tempdir().unwrap();
    let poly = config(dir.path(), "f.json", r#"{"d1": 2, "d2": 2, "coeffs": ["0","0","1", "0","-2","0", "1","0","0"]}"#);
    let o = dioph(&["index", "--poly", &poly, "--p1", "1", "--p2", "1", "--weights", "1,1,2,2"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(o.stdout.trim(), "1");
}

#[test]
fn construct_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "c.json", &sqrt2_config(r#"{"d1": 8, "d2": 8, "delta": "41/20"}"#));
    let out = dir.path().join("out");
    let o = dioph(&["--config", &cfg, "--out", out.to_str().unwrap(), "construct"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.contains("conditions="));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("construction_report.json")).unwrap()).unwrap();
    assert_eq!(report["construction"]["conditions_verified"], true);
    assert!(out.join("aux_poly.json").exists());
}

#[test]
fn degenerate_delta_warns() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "c.json", &sqrt2_config(r#"{"d1": 4, "d2": 4, "delta": "0"}"#));
    let o = dioph(&["--config", &cfg, "construct"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stderr.contains("degenerate"));
}

#[test]
fn infeasible_system_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let body = sqrt2_config(r#"{"d1": 4, "d2": 4, "delta": "41/20"}"#).replace("21/10", "1");
    let cfg = config(dir.path(), "c.json", &body);
    let o = dioph(&["--config", &cfg, "construct"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("empty kernel: conditions=50 unknowns=25"), "{}", o.stderr);
}

#[test]
fn bad_schema_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let body = sqrt2_config("\"auto\"").replace("\"schema\": 1", "\"schema\": 9");
    let cfg = config(dir.path(), "c.json", &body);
    assert_eq!(dioph(&["--config", &cfg, "construct"]).code, 1);
}

#[test]
fn hunt_csv() {
    let o = dioph(&["hunt", "--minpoly", "-2,0,1", "--root", "1", "--kappa", "2.5", "--q-max", "10000", "--places", "inf,7"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let lines: Vec<&str> = o.stdout.lines().collect();
    assert_eq!(lines[0], "p,q,h_fs,kappa,lambda_inf,lambda_7,passes,width");
    let pq: Vec<String> = lines[1..].iter().map(|l| l.split(',').take(2).collect::<Vec<_>>().join("/")).collect();
    assert_eq!(pq, ["1/1", "2/1", "3/2", "7/5"]);
}

#[test]
fn certify_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "c.json", &sqrt2_config("\"auto\""));
    let out = dir.path().join("out");
    let o = dioph(&["--config", &cfg, "--out", out.to_str().unwrap(), "certify"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.contains("hypothesis_violation"));
    assert!(o.stdout.contains("\"exact_ratio\":\"2\""));
    let cert = out.join("certificate.json");
    let r = dioph(&["certify", "--replay", cert.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout, o.stdout);

    // A tampered outcome no longer replays.
    let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    v["outcome"] = serde_json::json!({"kind": "chain_satisfied"});
    fs::write(&cert, serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(dioph(&["certify", "--replay", cert.to_str().unwrap()]).code, 3);
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "c.json", &sqrt2_config(r#"{"d1": 8, "d2": 8, "delta": "41/20"}"#));
    let read_all = |out: &Path| {
        let mut names: Vec<_> = fs::read_dir(out).unwrap().map(|e| e.unwrap().path()).collect();
        names.sort();
        names.iter().map(|p| fs::read(p).unwrap()).collect::<Vec<_>>()
    };
    let mut runs = vec![];
    for k in 0..2 {
        let out = dir.path().join(format!("out{k}"));
        let o = out.to_str().unwrap();
        assert_eq!(dioph(&["--config", &cfg, "--out", o, "construct"]).code, 0);
        assert_eq!(dioph(&["--config", &cfg, "--out", o, "hunt"]).code, 0);
        assert_eq!(dioph(&["--config", &cfg, "--out", o, "certify"]).code, 0);
        runs.push(read_all(&out));
    }
    assert_eq!(runs[0].len(), 4);
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn selftest_passes() {
    let o = dioph(&["selftest"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    assert!(o.stdout.contains("0 failed"));
}
