//! The command line through `cli::run`: documented outputs, exit codes,
//! file inputs and structured output.

use posetnet::cli::{run, Outcome, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE};
use posetnet::io::matrix_from_literal;
use posetnet::unitary::Tolerance;
use serde_json::Value;

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("posetnet").chain(args.iter().copied()))
}

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = cli(&all);
    (out.code, serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", out.stdout)))
}

#[test]
fn documented_examples() {
    let out = cli(&["pi1", "pseudocircle", "--base", "a"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("generators: 1, relations: 0"), "{}", out.stdout);

    let out = cli(&["check-cocycle", "constant"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("violations: 0"));

    let out = cli(&["intertwiners", "s3", "-r", "2", "-s", "2"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("dim = 14"));
    let (_, doc) = json(&["intertwiners", "s3", "-r", "2", "-s", "2"]);
    assert_eq!(doc["basis"].as_array().unwrap().len(), 14);
}

#[test]
fn structured_matrices_round_trip() {
    let tol = Tolerance::default();
    let (_, doc) = json(&["intertwiners", "s3", "-r", "1", "-s", "2"]);
    for m in doc["basis"].as_array().unwrap() {
        let literal = serde_json::from_value(m.clone()).unwrap();
        let t = matrix_from_literal(&literal).unwrap();
        assert_eq!((t.rows(), t.cols()), (9, 3));
    }
    let (code, doc) = json(&["equivalent", "z-diag", "z-diag-swapped"]);
    assert_eq!(code, EXIT_OK);
    let w = matrix_from_literal(&serde_json::from_value(doc["witness"].clone()).unwrap()).unwrap();
    assert!(posetnet::unitary::is_unitary(&w, tol).unwrap());
}

#[test]
fn negative_verdicts_exit_1() {
    assert_eq!(cli(&["check-cocycle", "corrupted"]).code, EXIT_NEGATIVE);
    assert_eq!(cli(&["equivalent", "z-identity2", "z-diag"]).code, EXIT_NEGATIVE);
    assert_eq!(cli(&["lift", "klein-pauli"]).code, EXIT_NEGATIVE);
    assert_eq!(cli(&["gerbe-flatten", "torus-pauli"]).code, EXIT_NEGATIVE);
    assert_eq!(cli(&["dual-membership", "pm2", "--matrix", "x"]).code, EXIT_NEGATIVE);

    // H·Z·H = X, so H does not normalize {I, Z}
    let path = std::env::temp_dir().join(format!("posetnet-hadamard-{}.json", std::process::id()));
    let h = r#"{"kind": "holonomy", "dim": 2, "presentation": {"generators": 1, "relators": []},
        "images": [{"generator": 0, "matrix": [[[0.7071067811865476, 0], [0.7071067811865476, 0]],
                                                [[0.7071067811865476, 0], [-0.7071067811865476, 0]]]}]}"#;
    std::fs::write(&path, h).unwrap();
    let out = cli(&["gauge-check", path.to_str().unwrap(), "--group", "diag-z2"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.code, EXIT_NEGATIVE, "{}", out.stdout);
    assert!(out.stdout.contains("reduces: no"));
}

#[test]
fn library_errors_exit_1_with_their_code() {
    let out = cli(&["quotient", "z-diag", "--fiber", "s3"]);
    assert_eq!(out.code, EXIT_NEGATIVE);
    assert!(out.stdout.starts_with("error["), "{}", out.stdout);
    let out = cli(&["lift", "klein-pauli", "--budget", "10"]);
    assert_eq!(out.code, EXIT_NEGATIVE);
    assert!(out.stdout.starts_with("error["), "{}", out.stdout);
    let (code, doc) = json(&["lift", "klein-pauli", "--budget", "10"]);
    assert_eq!(code, EXIT_NEGATIVE);
    assert!(doc["error"]["code"].is_string());
}

#[test]
fn usage_and_parse_errors_exit_2() {
    assert_eq!(cli(&[]).code, EXIT_USAGE);
    assert_eq!(cli(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(cli(&["pi1", "nowhere.json"]).code, EXIT_USAGE);
    assert_eq!(cli(&["pi1", "s3"]).code, EXIT_USAGE);
    assert_eq!(cli(&["intertwiners", "s3", "-r", "two"]).code, EXIT_USAGE);
    assert_eq!(cli(&["pi1", "pseudocircle", "--base", "zz"]).code, EXIT_NEGATIVE);
    assert_eq!(cli(&["--help"]).code, EXIT_OK);
}

#[test]
fn file_inputs() {
    let out = cli(&["pi1", &data("pseudocircle.json"), "--base", "a"]);
    assert!(out.stdout.contains("generators: 1, relations: 0"));
    assert_eq!(cli(&["check-cocycle", &data("corrupted.json")]).code, EXIT_NEGATIVE);
    assert!(cli(&["intertwiners", &data("s3.json"), "-r", "0", "-s", "2"]).stdout.contains("dim = 2"));
    assert!(cli(&["chern", &data("z-diag.json")]).stdout.contains("c1(g0) = 1"));
    assert!(cli(&["lift", &data("klein-pauli.json")]).stdout.contains("no-lift-in-search-space"));
    assert_eq!(cli(&["gerbe-validate", &data("pseudocircle-signs.json")]).code, EXIT_OK);
    assert_eq!(cli(&["gerbe-flatten", &data("pseudocircle-signs.json")]).code, EXIT_OK);

    let out = cli(&["reconstruct", &data("circle-diag.json")]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("valid: yes"));
}

#[test]
fn reconstruct_then_holonomy_through_files() {
    let (code, cocycle) = json(&["reconstruct", "circle-diag"]);
    assert_eq!(code, EXIT_OK);
    let path = std::env::temp_dir().join(format!("posetnet-cli-{}.json", std::process::id()));
    std::fs::write(&path, cocycle.to_string()).unwrap();
    let (code, doc) = json(&["holonomy", path.to_str().unwrap(), "--base", "a"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code, EXIT_OK);
    let image = &doc["holonomy"]["images"][0]["matrix"];
    let m = matrix_from_literal(&serde_json::from_value(image.clone()).unwrap()).unwrap();
    let expected = posetnet::unitary::CMatrix::diag(&[posetnet::unitary::c(0.0, 1.0), posetnet::unitary::c(0.0, -1.0)]);
    assert!(m.distance(&expected) <= 1e-9);
}

#[test]
fn every_command_runs_on_builtins() {
    let cases: &[&[&str]] = &[
        &["list"],
        &["show", "klein-pauli"],
        &["simplices", "chain", "--list"],
        &["holonomy", "pseudocircle-diag"],
        &["sections", "z-identity2"],
        &["morphisms", "z-diag", "z-diag-swapped"],
        &["quotient", "z-diag", "--fiber", "su"],
        &["gauge-check", "z-diag", "--group", "diag-z2"],
        &["lift", "circle-det"],
        &["symmetry-check", "--dim", "2", "--group", "pauli", "--rmax", "2"],
        &["conjugates", "--dim", "3", "--group", "s3"],
        &["normalizer", "pm2", "--matrix", "h", "--rmax", "2"],
        &["dual-recover", "pm2", "--ambient", "pauli", "--rmax", "2"],
        &["gerbe-validate", "torus-pauli"],
    ];
    for args in cases {
        let out = cli(args);
        assert_eq!(out.code, EXIT_OK, "{args:?}: {}", out.stdout);
        let (code, _) = json(args);
        assert_eq!(code, EXIT_OK, "{args:?}");
    }
}
