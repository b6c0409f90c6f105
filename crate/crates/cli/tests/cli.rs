use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
}

fn cateig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cateig"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn certify_s1_is_an_eigenvalue() {
    let out = cateig(&["certify", path(&fixture("s1.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let cert: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(cert["verdict"], "Eigenvalue");
    assert_eq!(
        cert["lambda_ranks"],
        serde_json::json!([{"degree": 0, "rank": 1}, {"degree": 1, "rank": 1}])
    );
}

#[test]
fn certify_writes_to_out_and_summarizes() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("cert.json");
    let out = cateig(&["certify", path(&fixture("s1.json")), "--out", path(&target)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("Eigenvalue"));
    let text = std::fs::read_to_string(&target).unwrap();
    let cert = cateig::io::read_certificate(&text).unwrap();
    assert!(cert.reverify());
}

#[test]
fn certify_with_oversized_lambda_fails_with_rank_mismatch() {
    let out = cateig(&[
        "certify",
        path(&fixture("s1.json")),
        "--lambda",
        path(&fixture("bad_lambda.json")),
        "--alpha",
        path(&fixture("a.json")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let cert: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(cert["verdict"], "NotEigenvalue");
    assert_eq!(cert["failure_reason"]["kind"], "RankMismatch");
    assert_eq!(cert["failure_reason"]["degree"], 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("RankMismatch(0)"));
}

#[test]
fn verify_homotopy_accepts_the_bundled_witness() {
    let out = cateig(&[
        "verify-homotopy",
        path(&fixture("s1_cone.json")),
        path(&fixture("s1_psi.json")),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "ok\n");
}

#[test]
fn verify_homotopy_rejects_a_flipped_sign() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixture("s1_psi.json")).unwrap();
    let mut psi: serde_json::Value = serde_json::from_str(&text).unwrap();
    psi["blocks"][1]["entries"][0][3] = "1".into();
    let bad = dir.path().join("psi.json");
    std::fs::write(&bad, psi.to_string()).unwrap();
    let out = cateig(&["verify-homotopy", path(&fixture("s1_cone.json")), path(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("FAIL"));
}

#[test]
fn explicit_f_and_g() {
    let dir = tempfile::tempdir().unwrap();
    // with g = 0 the witness would have to satisfy dΨ + Ψd = 0
    let zero = dir.path().join("zero.json");
    std::fs::write(&zero, r#"{"ring":"Z","convention":"chain","shift":0,"blocks":[]}"#).unwrap();
    let out = cateig(&[
        "verify-homotopy",
        path(&fixture("s1_cone.json")),
        path(&fixture("s1_psi.json")),
        "--g",
        path(&zero),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn cone_matches_the_bundled_file() {
    let out = cateig(&[
        "cone",
        path(&fixture("s1.json")),
        path(&fixture("s1_lambda.json")),
        path(&fixture("s1_alpha.json")),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), std::fs::read_to_string(fixture("s1_cone.json")).unwrap());
}

#[test]
fn homology_and_decompose_print() {
    let out = cateig(&["homology", path(&fixture("s1.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("H_0: rank 1") && text.contains("H_1: rank 1"), "{text}");

    let out = cateig(&["decompose", path(&fixture("s1.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["degrees"][0]["g"], 1);
    assert_eq!(v["degrees"][0]["im"], 2);
}

#[test]
fn structural_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.json");
    assert_eq!(cateig(&["homology", path(&missing)]).status.code(), Some(2));

    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"ring":"Q","convention":"cochain",
            "degrees":[{"degree":0,"rank":1},{"degree":1,"rank":1},{"degree":2,"rank":1}],
            "diffs":[{"from_degree":0,"entries":[["1"]]},{"from_degree":1,"entries":[["1"]]}]}"#,
    )
    .unwrap();
    let out = cateig(&["homology", path(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degree 0"));

    let torsion = dir.path().join("torsion.json");
    std::fs::write(
        &torsion,
        r#"{"ring":"Z","convention":"chain","degrees":[{"degree":0,"rank":1},{"degree":1,"rank":1}],
            "diffs":[{"from_degree":1,"entries":[["2"]]}]}"#,
    )
    .unwrap();
    let out = cateig(&["certify", path(&torsion)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&cateig(&["homology", path(&torsion)])).contains("torsion [2]"));
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(cateig(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(cateig(&[]).status.code(), Some(64));
    let s1 = fixture("s1.json");
    let lambda = fixture("s1_lambda.json");
    assert_eq!(
        cateig(&["certify", path(&s1), "--lambda", path(&lambda)]).status.code(),
        Some(64)
    );
    assert_eq!(cateig(&["proptest", "--ring", "f4"]).status.code(), Some(64));
    assert_eq!(cateig(&["--help"]).status.code(), Some(0));
}

#[test]
fn proptest_is_reproducible() {
    let args = ["proptest", "--ring", "f2", "--max-dim", "8", "--trials", "40", "--seed", "17"];
    let a = cateig(&args);
    let b = cateig(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("all checks passed"));
    let q = cateig(&["proptest", "--ring", "q", "--trials", "20", "--seed", "3"]);
    assert_eq!(q.status.code(), Some(0), "{}", stdout(&q));
    let z = cateig(&["proptest", "--ring", "z", "--trials", "20", "--seed", "3"]);
    assert_eq!(z.status.code(), Some(0), "{}", stdout(&z));
}
