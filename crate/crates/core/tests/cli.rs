use std::collections::BTreeSet;
use std::path::Path;
use std::process::{Command, Output};

use hopfkit::catalog::{build_named, catalog_families, Family};
use hopfkit::format::{from_json, load, to_json, AlgebraFile};
use serde_json::Value;

fn hopfkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hopfkit"))
        .args(args)
        .env_remove("HOPFKIT_SEED")
        .output()
        .unwrap()
}

fn json_report(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = hopfkit(&full);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|_| panic!("{}", String::from_utf8_lossy(&out.stderr)));
    (out.status.code().unwrap(), v)
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn catalog_json_round_trip_is_exact() {
    for fam in catalog_families() {
        let h = build_named(fam).unwrap();
        let text = to_json(&h).unwrap();
        let back = from_json(&text, false).unwrap();
        assert_eq!(back.mul_tensor(), h.mul_tensor(), "{fam}");
        assert_eq!(back.comul_tensor(), h.comul_tensor(), "{fam}");
        assert_eq!(back.antipode(), h.antipode(), "{fam}");
        assert_eq!((back.unit(), back.counit()), (h.unit(), h.counit()));
        assert_eq!(back.meta, h.meta);
        assert_eq!(to_json(&back).unwrap(), text);
    }
}

#[test]
fn tampered_files_are_rejected_unless_trusted() {
    let h = build_named(Family::Sweedler).unwrap();
    let mut file = AlgebraFile::from_algebra(&h);
    file.mul[0].c = vec![(0, "2".into())];
    let text = serde_json::to_string(&file).unwrap();
    let err = from_json(&text, false).unwrap_err();
    assert!(matches!(err, hopfkit::HopfError::Format(_)), "{err}");
    assert!(from_json(&text, true).is_ok());

    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, &text).unwrap();
    assert_eq!(hopfkit(&["verify", path_str(&p)]).status.code(), Some(2));
    assert_eq!(hopfkit(&["--trust", "verify", path_str(&p)]).status.code(), Some(1));

    file.format_version = 99;
    assert!(from_json(&serde_json::to_string(&file).unwrap(), true).is_err());
}

#[test]
fn build_writes_loadable_files() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("h4.json");
    assert_eq!(hopfkit(&["build", "Sweedler", "--out", path_str(&p)]).status.code(), Some(0));
    let first = std::fs::read_to_string(&p).unwrap();
    assert_eq!(load(&p, false).unwrap().dim(), 4);
    assert_eq!(hopfkit(&["build", "Sweedler", "--out", path_str(&p)]).status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&p).unwrap(), first);
    assert_eq!(hopfkit(&["verify", path_str(&p)]).status.code(), Some(0));
}

#[test]
fn presentations_in_json_and_toml() {
    let dir = tempfile::tempdir().unwrap();
    let pres = Family::Taft(3).presentation().unwrap();
    let expected = to_json(&build_named(Family::Taft(3)).unwrap()).unwrap();
    let pj = dir.path().join("taft.json");
    let pt = dir.path().join("taft.toml");
    std::fs::write(&pj, serde_json::to_string(&pres).unwrap()).unwrap();
    std::fs::write(&pt, toml::to_string(&pres).unwrap()).unwrap();
    for (src, name) in [(&pj, "a.json"), (&pt, "b.json")] {
        let out = dir.path().join(name);
        let o = hopfkit(&["build", "--presentation", path_str(src), "--out", path_str(&out)]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(std::fs::read_to_string(&out).unwrap().trim_end(), expected);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(hopfkit(&["verify", "Sweedler"]).status.code(), Some(0));
    assert_eq!(hopfkit(&["decide-ai", "Taft(3)"]).status.code(), Some(0));
    assert_eq!(hopfkit(&["decide-ai", "A1"]).status.code(), Some(1));
    assert_eq!(hopfkit(&["decide-ai", "NoSuchAlgebra"]).status.code(), Some(2));
    assert_eq!(hopfkit(&["verify", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(hopfkit(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(hopfkit(&["build"]).status.code(), Some(2));
    assert_eq!(hopfkit(&["--help"]).status.code(), Some(0));
    assert_eq!(hopfkit::cli::run(["hopfkit", "integrals", "Taft(4)"]), 0);
}

#[test]
fn decide_ai_report_carries_certificate() {
    let (code, v) = json_report(&["decide-ai", "A2_C4"]);
    assert_eq!(code, 1);
    let result = &v["result"];
    assert_eq!(result["verdict"], "NotAI");
    let cert = result["certificate"].as_array().unwrap();
    assert!(cert.iter().all(|b| b["outcome"].as_str().unwrap().contains("x^2 = g^2 - 1 not preserved")));

    let (code, v) = json_report(&["decide-ai", "Sweedler"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["verdict"], "Witness");
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn seed_flag_and_environment() {
    let (_, v) = json_report(&["--seed", "3", "s2", "Sweedler", "--samples", "5"]);
    assert_eq!(v["seed"], 3);
    let out = Command::new(env!("CARGO_BIN_EXE_hopfkit"))
        .args(["--json", "--seed", "3", "s2", "Sweedler", "--samples", "5"])
        .env("HOPFKIT_SEED", "7")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 7);
    let bad = Command::new(env!("CARGO_BIN_EXE_hopfkit"))
        .args(["s2", "Sweedler"])
        .env("HOPFKIT_SEED", "seven")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timing_ms");
        v
    };
    let args = ["--seed", "11", "s2", "A_C2", "--samples", "8"];
    let (c1, a) = json_report(&args);
    let (c2, b) = json_report(&args);
    assert_eq!(c1, c2);
    assert_eq!(strip(a), strip(b));
}

#[test]
fn constructions_write_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("d.json");
    let t = dir.path().join("t.json");
    let dd = dir.path().join("dd.json");
    assert_eq!(hopfkit(&["dual", "Taft(3)", "--out", path_str(&d)]).status.code(), Some(0));
    assert_eq!(hopfkit(&["tensor", "Sweedler", path_str(&d), "--out", path_str(&t)]).status.code(), Some(0));
    assert_eq!(hopfkit(&["double", "Sweedler", "--out", path_str(&dd)]).status.code(), Some(0));
    assert_eq!(load(&d, false).unwrap().dim(), 9);
    assert_eq!(load(&t, false).unwrap().dim(), 36);
    assert_eq!(load(&dd, false).unwrap().dim(), 16);
    assert_eq!(hopfkit(&["decide-ai", path_str(&dd)]).status.code(), Some(0));
}

fn not_ai(max_dim: &str) -> BTreeSet<String> {
    let (code, v) = json_report(&["census", "--max-dim", max_dim]);
    assert_eq!(code, 0);
    let rows = v["verdicts"].as_array().unwrap();
    let names: Vec<&str> = rows.iter().map(|r| r["algebra"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert!(rows.iter().all(|r| r["verdict"] != "Inconclusive"));
    rows.iter()
        .filter(|r| r["verdict"] == "NotAI")
        .map(|r| {
            let dim = r["dim"].as_u64().unwrap();
            assert!(dim == 8 || dim == 12);
            r["algebra"].as_str().unwrap().to_string()
        })
        .collect()
}

#[test]
fn census_verdict_sets() {
    assert!(not_ai("4").is_empty());
    let eight: BTreeSet<String> = ["A2_C4", "dual(A2_C4)"].map(String::from).into();
    assert_eq!(not_ai("8"), eight);
    let twelve: BTreeSet<String> = ["A2_C4", "dual(A2_C4)", "A1", "dual(A1)"].map(String::from).into();
    assert_eq!(not_ai("15"), twelve);
}
