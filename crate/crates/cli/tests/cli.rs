use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use roommates_cli::generate::generate;
use roommates_cli::{parse_instance, render_instance};
use roommates_core::model::{pareto_dominates, Matching};
use tempfile::TempDir;

const INSTANCE_B: &str = "4\n3 2 1 4\n4 1 2 3\n1 4 3 2\n2 3 4 1\n2 1 4 3\n";
const INSTANCE_C: &str = "4\n2 1 3 4\n1 2 3 4\n4 3 1 2\n3 4 1 2\n2 1 4 3\n";
const INSTANCE_D: &str = "4\n1 2 3 4\n2 1 3 4\n4 3 1 2\n3 4 1 2\n2 1 4 3\n";
const INSTANCE_E: &str = "3\n1 2 3\n1 2 3\n3 1 2\n2 1 3\n";

fn roommates(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_roommates"))
        .args(args)
        .output()
        .unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_efficient_instance() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "c.txt", INSTANCE_C);
    let out = roommates(&["check", arg(&path)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "efficient\n");
}

#[test]
fn check_prints_witness() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "b.txt", INSTANCE_B);
    let out = roommates(&["check", arg(&path), "--witness"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert_eq!(text.lines().last(), Some("3 4 1 2"), "{text}");
}

#[test]
fn check_json_report() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "d.txt", INSTANCE_D);
    let out = roommates(&["check", arg(&path), "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["efficient"], false);
    assert_eq!(v["cause"], "irrational-pair");
    assert_eq!(v["witness"], serde_json::json!([1, 2, 4, 3]));
    assert_eq!(v["iterations"], 0);

    let path = write(&dir, "c.txt", INSTANCE_C);
    let out = roommates(&["check", arg(&path), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["efficient"], true);
    assert!(v["witness"].is_null() && v["cause"].is_null());
    assert!(v["iterations"].as_u64().unwrap() >= 1);
}

#[test]
fn check_writes_dot() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "b.txt", INSTANCE_B);
    let dot = dir.path().join("g.dot");
    let out = roommates(&["check", arg(&path), "--dot", arg(&dot)]);
    assert_eq!(out.status.code(), Some(1));
    let text = std::fs::read_to_string(dot).unwrap();
    assert!(text.matches("graph").count() >= 2, "{text}");
}

#[test]
fn errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.txt", "3\n2 1 3\n1 2 x\n3 1 2\n1 2 3\n");
    let out = roommates(&["check", arg(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let not_involution = write(&dir, "ni.txt", "3\n2 1 3\n1 2 3\n3 1 2\n2 3 1\n");
    assert_eq!(
        roommates(&["check", arg(&not_involution)]).status.code(),
        Some(2)
    );
    assert_eq!(
        roommates(&["check", "/nonexistent/file"]).status.code(),
        Some(2)
    );
    assert_eq!(roommates(&["check"]).status.code(), Some(2));
    assert_eq!(
        roommates(&["gen", "--n", "2", "--seed", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        roommates(&["gen", "--n", "5", "--seed", "1", "--solo-prob", "2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn oracle_exit_codes() {
    let dir = TempDir::new().unwrap();
    let e = write(&dir, "e.txt", INSTANCE_E);
    assert_eq!(roommates(&["oracle", arg(&e)]).status.code(), Some(0));
    let d = write(&dir, "d.txt", INSTANCE_D);
    assert_eq!(roommates(&["oracle", arg(&d)]).status.code(), Some(1));
    let big = write(
        &dir,
        "big.txt",
        &render_instance(&generate(13, 0, 0.2).unwrap()),
    );
    let out = roommates(&["oracle", arg(&big)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(
        roommates(&["check", arg(&big)])
            .status
            .code()
            .map(|c| c < 2),
        Some(true)
    );
}

#[test]
fn gen_is_deterministic() {
    let a = roommates(&["gen", "--n", "6", "--seed", "42"]);
    let b = roommates(&["gen", "--n", "6", "--seed", "42"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let inst = parse_instance(&stdout(&a)).unwrap();
    assert_eq!(inst, generate(6, 42, 0.2).unwrap());
}

#[test]
fn gen_solo_extremes() {
    let out = roommates(&["gen", "--n", "5", "--seed", "7", "--solo-prob", "1.0"]);
    let inst = parse_instance(&stdout(&out)).unwrap();
    assert_eq!(inst.matching, Matching::empty(5));

    let out = roommates(&["gen", "--n", "4", "--seed", "1", "--solo-prob", "0.0"]);
    let inst = parse_instance(&stdout(&out)).unwrap();
    assert_eq!(inst.matching.pairs().count(), 2);
}

#[test]
fn differential_and_witness_contracts() {
    let dir = TempDir::new().unwrap();
    for n in 3..=10 {
        for seed in 0..6u64 {
            let p = [0.0, 0.2, 0.5, 1.0][(seed % 4) as usize];
            let inst = generate(n, seed, p).unwrap();
            let path = write(&dir, "x.txt", &render_instance(&inst));
            let fast = roommates(&["check", arg(&path), "--witness"]);
            let slow = roommates(&["oracle", arg(&path)]);
            assert_eq!(fast.status.code(), slow.status.code(), "n={n} seed={seed}");
            if fast.status.code() == Some(1) {
                let text = stdout(&fast);
                let line = text.lines().last().unwrap();
                let partners: Vec<usize> = line.split(' ').map(|t| t.parse().unwrap()).collect();
                let w = Matching::new(n, &partners).unwrap();
                assert!(pareto_dominates(&inst.profile, &w, &inst.matching));
                assert!(!pareto_dominates(&inst.profile, &inst.matching, &w));
            }
        }
    }
}

#[test]
fn render_parse_round_trip() {
    for n in 3..40 {
        let inst = generate(n, n as u64, 0.3).unwrap();
        assert_eq!(parse_instance(&render_instance(&inst)).unwrap(), inst);
    }
}

#[test]
fn bench_writes_csv() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("bench.csv");
    let out = roommates(&[
        "bench",
        "--sizes",
        "16,32",
        "--reps",
        "2",
        "--seed",
        "3",
        "--out",
        arg(&csv),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("slope: "));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(
        text.lines().next(),
        Some("n,rep,elapsed_ms,iterations,verdict")
    );
    assert_eq!(text.lines().count(), 5);

    let out = roommates(&["bench", "--sizes", "16", "--reps", "2", "--out", arg(&csv)]);
    assert!(stdout(&out).contains("not available"));
    let out = roommates(&["bench", "--sizes", "2", "--reps", "2", "--out", arg(&csv)]);
    assert_eq!(out.status.code(), Some(2));
}
