use std::path::PathBuf;
use std::process::{Command, Output};

use valforge::{BaseValuation, Rational};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn valforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_valforge"))
        .args(args)
        .env_remove("VALFORGE_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn report(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn path(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn eval_examples() {
    for (file, poly, expect) in [
        ("chain3.json", "x^4+9", "2"),
        ("chain3.json", "0", "inf"),
        ("limit.json", "x^2-7", "1|0"),
        ("limit.json", "x - 4", "2"),
    ] {
        let out = valforge(&["eval", &path(file), poly]);
        assert_eq!(out.status.code(), Some(0), "{poly}");
        assert_eq!(stdout(&out).trim(), expect, "{poly}");
    }
}

#[test]
fn eval_exit_codes() {
    let out = valforge(&["eval", &path("chain3.json"), "x*x"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("products of variables"));

    assert_eq!(
        valforge(&["eval", &path("missing.json"), "x"])
            .status
            .code(),
        Some(2)
    );

    let out = valforge(&["eval", &path("corrupted.json"), "x"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(report(&out)["findings"][0]["code"], "degree-growth");
}

#[test]
fn eval_budget_exhaustion() {
    // x - s with s ≡ √7 to high 3-adic precision needs many family members
    let (s, e) = BaseValuation::new(3)
        .unwrap()
        .hensel_sqrt_seq(&Rational::from_integer(7.into()), 30)
        .unwrap();
    assert!(e >= 30);
    let poly = format!("x - {s}");
    let out = valforge(&["eval", &path("limit.json"), &poly, "--budget", "8"]);
    assert_eq!(
        out.status.code(),
        Some(4),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let out = Command::new(env!("CARGO_BIN_EXE_valforge"))
        .args(["eval", &path("limit.json"), &poly])
        .env("VALFORGE_BUDGET", "8")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));

    let out = valforge(&["eval", &path("limit.json"), &poly]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), e.to_string());
}

#[test]
fn convert_examples() {
    let out = valforge(&["convert", "to-chain", &path("set3.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        std::fs::read_to_string(fixture("chain3.json")).unwrap()
    );

    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("set.json");
    let out = valforge(&[
        "convert",
        "to-abkp",
        &path("chain3.json"),
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["status"], "pass");
    assert_eq!(
        std::fs::read_to_string(&target).unwrap(),
        std::fs::read_to_string(fixture("set3.json")).unwrap()
    );

    let out = valforge(&["convert", "to-chain", &path("bad_gamma_set.json")]);
    assert_eq!(out.status.code(), Some(3));
    let r = report(&out);
    assert_eq!(r["status"], "fail");
    assert_eq!(r["findings"][0]["code"], "gamma-order");
}

#[test]
fn limit_conversion_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let set = dir.path().join("set.json");
    let chain = dir.path().join("chain.json");
    assert!(valforge(&[
        "convert",
        "to-abkp",
        &path("limit.json"),
        set.to_str().unwrap()
    ])
    .status
    .success());
    assert!(valforge(&[
        "convert",
        "to-chain",
        set.to_str().unwrap(),
        chain.to_str().unwrap()
    ])
    .status
    .success());
    assert_eq!(
        std::fs::read_to_string(chain).unwrap(),
        std::fs::read_to_string(fixture("limit.json")).unwrap()
    );
}

#[test]
fn verify_examples() {
    let out = valforge(&[
        "verify",
        &path("chain3.json"),
        "--max-degree",
        "4",
        "--coeffs",
        "-2..2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["status"], "pass");
    assert_eq!(r["info"]["inductive"], "true");

    let out = valforge(&[
        "verify",
        &path("limit.json"),
        "--random",
        "200",
        "--height",
        "50",
        "--seed",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["status"], "pass");
    assert_eq!(r["info"]["classification"], "value-transcendental");
    assert_eq!(r["fingerprint"]["seed"], "7");

    let out = valforge(&["verify", &path("set3.json"), "--max-degree", "3"]);
    assert_eq!(out.status.code(), Some(0));

    let out = valforge(&["verify", &path("corrupted.json")]);
    assert_eq!(out.status.code(), Some(3));
    let r = report(&out);
    assert_eq!(r["status"], "fail");
    assert_eq!(
        r["findings"][0]["message"],
        "ordinary step requires degree growth"
    );
}

#[test]
fn verify_is_deterministic() {
    let args = [
        "verify",
        &path("limit.json"),
        "--random",
        "50",
        "--seed",
        "3",
        "--max-degree",
        "3",
    ];
    let a = valforge(&args);
    let b = valforge(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn verify_flag_errors() {
    let out = valforge(&["verify", &path("chain3.json"), "--coeffs", "2..-2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = valforge(&["verify", &path("chain3.json"), "--coeffs", "1,2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = valforge(&["verify", &path("chain3.json"), "--budget", "1"]);
    assert_eq!(out.status.code(), Some(2));
}
