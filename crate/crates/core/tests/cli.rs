use causal_ident::cli::{run, Outcome, EXIT_ERROR, EXIT_NOT_IDENTIFIABLE, EXIT_OK, EXIT_REJECTED};
use std::path::PathBuf;

fn graph(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "examples", "graphs", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("causal-ident").chain(args.iter().copied()))
}

#[test]
fn identify_exit_codes() {
    let fd = cli(&["identify", "--graph", &graph("front_door.cg"), "--do", "X", "--on", "Y"]);
    assert_eq!(fd.code, EXIT_OK);
    assert!(fd.stdout.contains("Σ_{x'}"));
    let bow = cli(&["identify", "--graph", &graph("bow.cg"), "--do", "X", "--on", "Y", "--json"]);
    assert_eq!(bow.code, EXIT_NOT_IDENTIFIABLE);
    let v: serde_json::Value = serde_json::from_str(&bow.stdout).unwrap();
    assert_eq!(v["status"], "not_identifiable");
}

#[test]
fn input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cg");
    std::fs::write(&bad, "edge X Y\nnode X obs\n").unwrap();
    let out = cli(&["identify", "--graph", bad.to_str().unwrap(), "--do", "X", "--on", "Y"]);
    assert_eq!(out.code, EXIT_ERROR);
    assert!(out.stderr.contains("line 1"), "{}", out.stderr);

    std::fs::write(&bad, "node X obs\nedge X X\n").unwrap();
    let out = cli(&["ccomp", "--graph", bad.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_ERROR);
    assert!(out.stderr.contains("self-loop"), "{}", out.stderr);

    assert_eq!(cli(&["identify", "--graph", &graph("bow.cg"), "--do", "Q", "--on", "Y"]).code, EXIT_ERROR);
    assert_eq!(cli(&["frobnicate"]).code, EXIT_ERROR);
}

#[test]
fn derive_then_check_and_tamper() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.json");
    let d = cli(&["derive", "--graph", &graph("front_door.cg"), "--do", "X", "--on", "Y", "--out", out.to_str().unwrap()]);
    assert_eq!(d.code, EXIT_OK);
    assert_eq!(cli(&["check", "--derivation", out.to_str().unwrap()]).code, EXIT_OK);

    let mut j: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    j["steps"][1]["after"] = j["steps"][0]["before"].clone();
    let tampered = dir.path().join("tampered.json");
    std::fs::write(&tampered, j.to_string()).unwrap();
    let c = cli(&["check", "--derivation", tampered.to_str().unwrap(), "--json"]);
    assert_eq!(c.code, EXIT_REJECTED);
    let v: serde_json::Value = serde_json::from_str(&c.stdout).unwrap();
    assert_eq!(v["step"], 1);

    let bow = cli(&["derive", "--graph", &graph("bow.cg"), "--do", "X", "--on", "Y"]);
    assert_eq!(bow.code, EXIT_NOT_IDENTIFIABLE);
}

#[test]
fn dsep_ccomp_and_dot() {
    let fd = graph("front_door.cg");
    let sep = cli(&["dsep", "--graph", &fd, "--x", "X", "--y", "Y", "--z", "Z", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&sep.stdout).unwrap();
    assert_eq!(v["separated"], false);
    let sep = cli(&["dsep", "--graph", &graph("back_door.cg"), "--x", "X", "--y", "Z", "--z", "Z", "--json"]);
    assert_eq!(sep.code, EXIT_ERROR);
    assert_eq!(cli(&["ccomp", "--graph", &fd]).stdout.trim(), r#"[["X","Y"],["Z"]]"#);
    let dot = cli(&["export-dot", "--graph", &fd]).stdout;
    assert!(dot.contains(r#""U" [style=dashed]"#));
}

#[test]
fn oracle_subcommands_are_deterministic() {
    let fd = graph("front_door.cg");
    let args = ["oracle", "verify", "--graph", &fd, "--do", "X", "--on", "Y", "--trials", "20", "--seed", "3", "--json"];
    let a = cli(&args);
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(a, cli(&args));
    let threaded: Vec<&str> = args.iter().copied().chain(["--threads", "2"]).collect();
    assert_eq!(a, cli(&threaded));

    let w = cli(&["oracle", "witness", "--graph", &graph("bow.cg"), "--do", "X", "--on", "Y", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&w.stdout).unwrap();
    assert_eq!(v["found"], true);
    assert!(v["observational_gap"].as_f64().unwrap() <= 1e-6);
    assert!(v["causal_gap"].as_f64().unwrap() >= 1e-2);
}
