use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn cwlab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cwlab"))
        .args(args)
        .current_dir(dir)
        .env_remove("CWLAB_BUDGET")
        .output()
        .expect("binary runs")
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json body")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    std::fs::write(dir.join(name), text).unwrap();
    name.to_string()
}

#[test]
fn count_matches_golden_body() {
    let dir = tempfile::tempdir().unwrap();
    let sys = golden("hyperbolic_q2.sys");
    let o = cwlab(&["count", "--system", sys.to_str().unwrap(), "--workers", "2"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), std::fs::read_to_string(golden("count_hyperbolic_q2.json")).unwrap());
    let header = String::from_utf8(o.stderr).unwrap();
    assert!(header.starts_with("# cwlab ") && header.contains("started_unix="));
}

#[test]
fn count_worked_examples() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let quad = write(d, "quadric_q3.sys", "field p=3 k=1\nvars x1 x2 x3 x4\npoly x1*x2 + x3^2 + x3*x4 + 2*x4^2\n");
    assert_eq!(json(&cwlab(&["count", "--system", &quad], d))["count"], 21);

    let x1 = write(d, "x1_q3.sys", "field p=3\r\nvars x1 x2\r\npoly x1\r\n");
    let on = write(d, "on.sub", "ambient 2\noffset 0 0\nbasis 0 1\n");
    let off = write(d, "off.sub", "ambient 2\noffset 1 0\nbasis 0 1\n");
    assert_eq!(json(&cwlab(&["count", "--system", &x1, "--subspace", &on], d))["count"], 3);
    assert_eq!(json(&cwlab(&["count", "--system", &x1, "--subspace", &off], d))["count"], 0);
    let ext = json(&cwlab(&["count", "--system", &x1, "--ext", "2"], d));
    assert_eq!((ext["count"].as_u64(), ext["scanned"].as_u64()), (Some(9), Some(81)));

    let csv = stdout(&cwlab(&["count", "--system", &quad, "--format", "csv", "--workers", "3"], d));
    assert_eq!(csv, "q,n,region,count,scanned,workers\n3,4,full,21,81,3\n");
}

#[test]
fn check_laws_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let sys = golden("hyperbolic_q2.sys");
    let sys = sys.to_str().unwrap();
    let o = cwlab(&["check", "--system", sys, "--law", "ax"], d);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!((r["pass"].as_bool(), r["evidence"]["residue"].as_u64()), (Some(true), Some(0)));

    let o = cwlab(&["check", "--system", sys, "--law", "theorem1", "--all-pairs", "--dim", "2"], d);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["evidence"]["classes_checked"], 35);

    let cubic = write(d, "cubic.sys", "field p=2\nvars x1 x2 x3\npoly x1*x2*x3\n");
    let r = json(&cwlab(&["check", "--system", &cubic, "--law", "ax"], d));
    assert_eq!((r["applicable"].as_bool(), r["evidence"]["reason"].as_str()), (Some(false), Some("n>d required")));
    assert_eq!(cwlab(&["check", "--system", &cubic, "--law", "nonsense"], d).status.code(), Some(1));
    assert_eq!(cwlab(&["check", "--system", &cubic, "--law", "homogenization"], d).status.code(), Some(0));
}

#[test]
fn gated_requests_are_not_violations() {
    // below dimension d the congruence need not hold, so it is not checked there
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let sys = write(d, "xy.sys", "field p=3\nvars x1 x2\npoly x1*x2\n");
    let o = cwlab(&["check", "--system", &sys, "--law", "theorem1", "--dim", "1"], d);
    assert_eq!(o.status.code(), Some(0), "dim 1 < d is reported vacuous");
    let lemma = cwlab(&["lemma", "2", "--q", "3", "--t", "2", "--part", "iii"], d);
    assert_eq!(lemma.status.code(), Some(1), "part iii needs q >= 4");
}

#[test]
fn input_errors_exit_1_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let bad = write(d, "bad.sys", "field p=3\nvars x1 x2\npoly x1 + * x2\n");
    let o = cwlab(&["count", "--system", &bad], d);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stderr).unwrap().contains("3:11"));
    assert_eq!(o.stdout, b"");
    assert_eq!(cwlab(&["count", "--system", "missing.sys"], d).status.code(), Some(1));
    assert_eq!(cwlab(&["frobnicate"], d).status.code(), Some(1));
}

#[test]
fn budget_from_environment_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let sys = golden("hyperbolic_q2.sys");
    let o = Command::new(env!("CARGO_BIN_EXE_cwlab"))
        .args(["count", "--system", sys.to_str().unwrap()])
        .env("CWLAB_BUDGET", "15")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let o = cwlab(&["count", "--system", sys.to_str().unwrap(), "--budget", "16"], dir.path());
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn construct_writes_system_and_recipe_that_replay() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for (args, name) in [
        (vec!["example2", "--q", "3"], "example2_q3"),
        (vec!["norm-form", "--q", "4", "--k", "2"], "norm_q4_k2"),
        (vec!["example1", "--q", "2", "--n", "6"], "example1_q2_n6"),
        (vec!["random", "--q", "5", "--n", "3", "--degrees", "2,1", "--seed", "11"], "random_q5"),
    ] {
        let out = format!("{name}.sys");
        let mut full = vec!["construct"];
        full.extend(args);
        full.extend(["--out", &out]);
        assert_eq!(cwlab(&full, d).status.code(), Some(0), "{name}");
        let sys = std::fs::read_to_string(d.join(&out)).unwrap();
        let recipe = std::fs::read_to_string(d.join(format!("{name}.recipe.json"))).unwrap();
        assert_eq!(sys, std::fs::read_to_string(golden(&out)).unwrap(), "{name}.sys");
        assert_eq!(recipe, std::fs::read_to_string(golden(&format!("{name}.recipe.json"))).unwrap());

        let replay = format!("{name}.replay.sys");
        let recipe_path = format!("{name}.recipe.json");
        let o = cwlab(&["construct", "--recipe", &recipe_path, "--out", &replay], d);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(std::fs::read_to_string(d.join(&replay)).unwrap(), sys);
    }
    let e1 = json(&cwlab(&["construct", "example1", "--q", "2", "--n", "6", "--out", "e.sys"], d));
    assert_eq!(e1["expected"]["derived_total"], 34);
    assert_eq!(e1["expected"]["discrepancy"], true);
    let o = cwlab(&["construct", "example2", "--q", "2", "--out", "x.sys"], d);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stderr).unwrap().contains("q = 2"));
}

#[test]
fn lemma_commands() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let r = json(&cwlab(&["lemma", "2", "--q", "2", "--t", "3", "--part", "i"], d));
    assert_eq!((r["pass"].as_bool(), r["evidence"]["subsets"].as_u64()), (Some(true), Some(256)));
    let r = json(&cwlab(&["lemma", "2", "--q", "5", "--t", "2", "--part", "iv", "--m", "2", "--samples", "2000", "--seed", "4"], d));
    assert_eq!((r["evidence"]["mode"].as_str(), r["evidence"]["seed"].as_u64()), (Some("sampled"), Some(4)));
    let r = json(&cwlab(&["lemma", "1", "--random", "40", "--seed", "2"], d));
    assert_eq!(r["pass"], true);

    let sys = write(d, "line.sys", "field p=3\nvars x1 x2\npoly x2\n");
    let pt = write(d, "pt.sub", "ambient 2\noffset 0 0\n");
    let r = json(&cwlab(&["lemma", "1", "--system", &sys, "--subspace", &pt], d));
    assert_eq!((r["evidence"]["k"].as_u64(), r["evidence"]["bound"].as_u64()), (Some(1), Some(3)));
}

#[test]
fn estimate_dim_and_scan() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let sys = write(d, "x1.sys", "field p=2\nvars x1 x2\npoly x1\n");
    let r = json(&cwlab(&["estimate-dim", "--system", &sys, "--smax", "4"], d));
    assert_eq!((r["D_hat"].as_u64(), r["k_hat"].as_u64()), (Some(1), Some(1)));
    assert_eq!(r["counts"], serde_json::json!([[1, 2], [2, 4], [3, 8], [4, 16]]));
    let o = cwlab(&["estimate-dim", "--system", &sys, "--smax", "1"], d);
    assert_eq!(o.status.code(), Some(1));

    let a = cwlab(&["scan-conjecture", "--preset", "tiny", "--seed", "5"], d);
    let b = cwlab(&["scan-conjecture", "--preset", "tiny", "--seed", "5", "--workers", "3"], d);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout, "body is independent of workers");
    assert!(stdout(&a).starts_with("q,n,degrees,d,seed,s_max,counts,D_hat,k_hat,n_minus_d,flag\n"));
}

#[test]
fn reports_are_byte_identical_across_runs_and_workers() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let sys = golden("random_q5.sys");
    let sys = sys.to_str().unwrap();
    for args in [
        vec!["check", "--system", sys, "--law", "theorem1", "--sample", "20", "--seed", "9"],
        vec!["audit", "--system", sys],
        vec!["check", "--system", sys, "--law", "warning-hyperplanes", "--format", "csv"],
    ] {
        let mut a1 = args.clone();
        a1.extend(["--workers", "1"]);
        let mut a4 = args.clone();
        a4.extend(["--workers", "4"]);
        let (x, y, z) = (cwlab(&a1, d), cwlab(&a4, d), cwlab(&a4, d));
        assert_eq!(x.stdout, y.stdout);
        assert_eq!(y.stdout, z.stdout);
        assert!(!x.stdout.is_empty());
    }
}

#[test]
fn suite_examples_preset() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = cwlab(&["suite", "--preset", "examples", "--out", "summary.json"], d);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["pass"], true);
    assert_eq!(r["criteria"].as_array().unwrap().len(), 2);
    assert_eq!(std::fs::read(d.join("summary.json")).unwrap(), o.stdout);
    assert_eq!(cwlab(&["suite", "--preset", "nope"], d).status.code(), Some(1));
}
