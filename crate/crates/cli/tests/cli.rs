//! End-to-end exercises of the binary: exit codes, formats, cache behavior.

use std::path::Path;
use std::process::{Command, Output};

fn eisver(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_eisver"));
    cmd.args(args);
    cmd.env_remove("EISVER_CACHE_DIR");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn verify_trivial_triple_exits_zero() {
    let out = eisver(&["verify", "--p", "3", "--q", "5", "--ell", "7"], &[]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = stdout_of(&out);
    assert!(text.contains("main_ell_torsion: Verified"), "{text}");
}

#[test]
fn verify_rejects_composite_p() {
    let out = eisver(&["verify", "--p", "4", "--q", "5", "--ell", "7"], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_rejects_equal_primes() {
    let out = eisver(&["verify", "--p", "5", "--q", "5", "--ell", "7"], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_level_57_at_3_is_verified() {
    let out = eisver(
        &["verify", "--p", "3", "--q", "19", "--ell", "3", "--format", "json"],
        &[],
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let json: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let verdicts = json["verdicts"].as_array().unwrap();
    let main = verdicts
        .iter()
        .find(|v| v["claim"] == "main_p_torsion")
        .expect("p-primary claim present");
    assert_eq!(main["status"], "Verified");
    assert_eq!(main["witnesses"]["case"], "2");
}

#[test]
fn inspect_level_15() {
    let out = eisver(&["inspect", "--N", "15"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("genus g = 1"));
    assert!(text.contains("cusps (4)"));
    assert!(text.contains("sturm bound B = 4"));
}

#[test]
fn inspect_level_11_reports_order_five() {
    let out = eisver(&["inspect", "--N", "11"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(
        text.contains("cuspidal class group = Z/5 (order 5)"),
        "{text}"
    );
}

#[test]
fn inspect_rejects_non_squarefree() {
    let out = eisver(&["inspect", "--N", "12"], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scan_empty_range_is_empty_report() {
    let out = eisver(
        &["scan", "--pq-max", "5", "--ell-max", "3", "--format", "json"],
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(json["verdicts"].as_array().unwrap().len(), 0);
}

#[test]
fn scan_reports_are_deterministic_and_cache_warmable() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let out1 = dir.path().join("r1.json");
    let out2 = dir.path().join("r2.json");
    let args = |out: &Path| {
        vec![
            "scan".to_string(),
            "--pq-max".into(),
            "22".into(),
            "--ell-max".into(),
            "7".into(),
            "--format".into(),
            "json".into(),
            "--cache-dir".into(),
            cache.to_str().unwrap().into(),
            "--out".into(),
            out.to_str().unwrap().into(),
        ]
    };
    let run = |out: &Path| {
        let a = args(out);
        let refs: Vec<&str> = a.iter().map(|s| s.as_str()).collect();
        let o = eisver(&refs, &[]);
        assert_eq!(o.status.code(), Some(0), "{o:?}");
    };
    run(&out1);
    assert!(cache.read_dir().unwrap().next().is_some(), "cache populated");
    run(&out2);
    let b1 = std::fs::read(&out1).unwrap();
    let b2 = std::fs::read(&out2).unwrap();
    assert_eq!(b1, b2, "scan reports must be byte-identical");
}

#[test]
fn corrupted_cache_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let cache_dir = dir.path().join("cache");
    let run = || {
        let o = eisver(
            &[
                "verify",
                "--p",
                "3",
                "--q",
                "5",
                "--ell",
                "7",
                "--format",
                "json",
                "--cache-dir",
                cache_dir.to_str().unwrap(),
            ],
            &[],
        );
        assert_eq!(o.status.code(), Some(0));
        stdout_of(&o)
    };
    let first = run();
    // Truncate every cached file; results must be unchanged.
    for entry in cache_dir.read_dir().unwrap() {
        let path = entry.unwrap().path();
        std::fs::write(&path, "garbage\n1\n2\n").unwrap();
    }
    let second = run();
    assert_eq!(first, second);
}

#[test]
fn env_var_overrides_cache_flag() {
    let dir = tempfile::tempdir().unwrap();
    let flag_dir = dir.path().join("flag");
    let env_dir = dir.path().join("env");
    let o = eisver(
        &[
            "verify",
            "--p",
            "3",
            "--q",
            "5",
            "--ell",
            "7",
            "--cache-dir",
            flag_dir.to_str().unwrap(),
        ],
        &[("EISVER_CACHE_DIR", env_dir.to_str().unwrap())],
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(env_dir.exists(), "env cache dir used");
    assert!(!flag_dir.exists(), "flag dir overridden");
}

#[test]
fn csv_projection_has_header_and_rows() {
    let out = eisver(
        &["verify", "--p", "3", "--q", "5", "--ell", "7", "--format", "csv"],
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "p,q,ell,claim,status,cusp_structure,upper_bound"
    );
    assert!(lines.next().unwrap().starts_with("3,5,"));
}
