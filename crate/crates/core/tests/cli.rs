//! End-to-end runs of the command-line binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use sha2::{Digest, Sha256};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_refined-dt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn expand_examples() {
    let text = stdout(&["expand", "--delta", "0", "--nmax", "3"]);
    let t3: Vec<&str> = text.lines().filter(|l| l.starts_with("3,")).collect();
    assert_eq!(t3, ["3,-2,1", "3,-1,1", "3,0,2", "3,1,1", "3,2,1"]);
    let half = stdout(&["expand", "--delta", "3", "--nmax", "1", "--half-power"]);
    assert_eq!(half, "n,half_exponent,coefficient\n0,0,1\n1,3,1\n");
    assert_eq!(
        stdout(&["expand", "--nmax", "0"]),
        "n,exponent,coefficient\n0,0,1\n"
    );
    let counts = stdout(&["expand", "--ring", "count", "--nmax", "6"]);
    assert!(counts.ends_with("4,13\n5,24\n6,48\n"));
    let jets = stdout(&["expand", "--ring", "jet", "--order", "2", "--nmax", "3"]);
    assert!(jets.ends_with("3,0,6\n3,1,0\n3,2,10\n"));
}

#[test]
fn oracle_check_passes_and_catches_a_fault() {
    let ok = run(&["oracle-check", "--ncap", "10", "--deltas", "0,1,3"]);
    assert_eq!(ok.status.code(), Some(0));
    let text = String::from_utf8(ok.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.contains(",PASS,")).count(), 33);
    assert_eq!(run(&["oracle-check", "--ncap", "0"]).status.code(), Some(0));

    let bad = run(&["oracle-check", "--ncap", "5", "--inject-fault"]);
    assert_eq!(bad.status.code(), Some(1));
    let err = String::from_utf8(bad.stderr).unwrap();
    assert!(err.contains("first differing exponent"), "{err}");
    assert!(String::from_utf8(bad.stdout).unwrap().contains("5,0,FAIL,"));
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&["expand", "--nmax", "3", "--no-such-flag"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["expand"]).status.code(), Some(2));
    assert_eq!(run(&["expand", "--nmax", "401"]).status.code(), Some(3));
    assert_eq!(
        run(&["oracle-check", "--ncap", "21"]).status.code(),
        Some(3)
    );
    assert_eq!(
        run(&["moments", "--n-list", "30", "--mode", "oracle"])
            .status
            .code(),
        Some(3)
    );
    let collapse = run(&[
        "sample",
        "--n",
        "50",
        "--radius",
        "0.05",
        "--attempt-budget",
        "1000",
    ]);
    assert_eq!(collapse.status.code(), Some(4));
    assert!(String::from_utf8(collapse.stderr)
        .unwrap()
        .contains("1000 attempts"));
    assert_eq!(
        run(&["sample", "--n", "50", "--radius", "-1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn manifests_record_digests_and_reruns_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let args = [
            "--seed",
            "7",
            "--threads",
            "2",
            "--out",
            path_str(out),
            "sample",
            "--n",
            "60",
            "--target",
            "300",
        ];
        assert_eq!(run(&args).status.code(), Some(0));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(
        fs::read(dir.path().join("a.csv.summary.csv")).unwrap(),
        fs::read(dir.path().join("b.csv.summary.csv")).unwrap()
    );

    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("a.csv.manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["subcommand"], "sample");
    assert_eq!(manifest["params"]["seed"], 7);
    assert_eq!(manifest["params"]["command"]["sample"]["n"], 60);
    assert_eq!(manifest["version"], env!("CARGO_PKG_VERSION"));
    assert!(manifest["wall_time_seconds"].as_f64().unwrap() >= 0.0);
    let outputs = manifest["outputs"].as_array().unwrap();
    assert_eq!(outputs.len(), 2);
    for o in outputs {
        let bytes = fs::read(o["path"].as_str().unwrap()).unwrap();
        assert_eq!(o["sha256"], hex::encode(Sha256::digest(&bytes)));
    }
}

#[test]
fn config_file_and_explicit_manifest_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"n": 8, "radius_n": 1.5, "m_max": 40, "window": 0, "seed": 1, "target_accepted": 50}"#,
    )
    .unwrap();
    let manifest = dir.path().join("m.json");
    let out = run(&[
        "--json-manifest",
        path_str(&manifest),
        "sample",
        "--config",
        path_str(&cfg),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("0,")).count(), 50);
    assert!(text
        .lines()
        .skip(2)
        .all(|l| l.split(',').nth(2) == Some("8")));
    let m: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(m["outputs"][0]["path"], "-");
}

#[test]
fn moments_asymptotics_and_constants() {
    let text = stdout(&[
        "moments", "--kmax", "3", "--n-list", "2,3", "--mode", "laurent",
    ]);
    assert!(text.contains("\n2,2,2,3,") && text.contains("\n3,2,10,6,"));
    assert!(text
        .lines()
        .filter(|l| l.split(',').nth(1) == Some("3"))
        .all(|l| l.split(',').nth(2) == Some("0")));
    let jet = stdout(&["moments", "--kmax", "3", "--n-list", "2,3"]);
    assert_eq!(jet, text);

    let asym = stdout(&["asymptotics", "--n-list", "25,100,400,1000000"]);
    let rows: Vec<Vec<&str>> = asym
        .lines()
        .skip(2)
        .map(|l| l.split(',').collect())
        .collect();
    let dev: Vec<f64> = rows[..3]
        .iter()
        .map(|r| (r[3].parse::<f64>().unwrap() - 1.0).abs())
        .collect();
    assert!(dev[2] < dev[1] && dev[1] < dev[0]);
    assert!(rows[3][1].is_empty() && rows[3][2].parse::<f64>().unwrap().is_finite());
    assert!(asym.starts_with("# constants: {"));

    let c: serde_json::Value = serde_json::from_str(&stdout(&["constants"])).unwrap();
    assert!((c["mu"].as_f64().unwrap() - 2.749791307).abs() < 1e-9);
    assert!((c["zeta_prime_minus1"].as_f64().unwrap() + 0.1654211437).abs() < 1e-10);
}
