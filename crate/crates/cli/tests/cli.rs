use std::path::PathBuf;

use learncheck::{parse_model_file, run_cli, SpecError, EXIT_EXPECTATION, EXIT_OK, EXIT_USAGE};

fn example(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples").join(name).display().to_string()
}

fn examples() -> Vec<String> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples");
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().to_string())
        .filter(|n| n.ends_with(".json"))
        .collect();
    names.sort();
    names
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_cli(std::iter::once("learncheck").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn temp_file(tag: &str, text: &str) -> String {
    let path = std::env::temp_dir().join(format!("learncheck-cli-{}-{tag}.json", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn corpus_round_trips() {
    for name in examples() {
        let text = std::fs::read_to_string(example(&name)).unwrap();
        let doc = parse_model_file(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let again = parse_model_file(&doc.to_json()).unwrap();
        assert_eq!(doc, again, "{name}");
        assert_eq!(doc.to_json(), again.to_json(), "{name}");
    }
}

#[test]
fn reference_examples() {
    let (code, out, _) = run(&["classify", &example("affine_2x.json")]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().any(|l| l == "overall: complete-learning"), "{out}");

    let (code, out, _) = run(&["check", &example("table_null.json"), "--reading", "literal", "--policy", "allow-empty"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().any(|l| l == "verdict: fail"));
    assert!(out.lines().any(|l| l == "X_S = {}"));

    let (code, out, err) = run(&["classify", &example("classifier.json"), "--expect", "learning"]);
    assert_eq!(code, EXIT_EXPECTATION);
    assert!(out.lines().any(|l| l == "overall: non-learning"));
    assert!(err.contains("expected complete-learning, got non-learning"), "{err}");

    let (code, _, _) = run(&["classify", &example("classifier.json"), "--expect", "non-learning"]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn golden_star_lines() {
    let (_, out, _) = run(&["classify", &example("base3_encoder.json")]);
    let lines: Vec<&str> = out.lines().filter(|l| l.starts_with("dim ")).collect();
    assert_eq!(
        lines,
        ["dim 0: FAIL (collision-witness (3,0) ~ (0,1) -> 3)", "dim 1: PASS (symbolic-injective)"]
    );
    let (_, out, _) = run(&["classify", &example("classifier.json")]);
    assert!(out.lines().any(|l| l == "dim 1: FAIL (pigeonhole: range<=202 < extension 320)"), "{out}");
    let (_, out, _) = run(&["classify", &example("affine_2x.json")]);
    assert!(out.lines().any(|l| l == "dim 0: PASS (symbolic-injective)"));
}

#[test]
fn noncontainment_witness() {
    let (code, out, _) = run(&["check", &example("literal_check.json"), "--reading", "noncontainment", "--policy", "nonempty-proper"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().any(|l| l == "X_S = D \\ {(1)}"), "{out}");
    assert!(out.lines().any(|l| l == "collision: (1) ~ (2) -> 0"), "{out}");

    let (_, out, _) = run(&["check", &example("literal_check.json"), "--reading", "noncontainment", "--method", "brute-force"]);
    assert!(out.lines().any(|l| l == "X_S = {(0), (2), (3), (4)}"), "{out}");

    // the file's own check block selects the literal reading
    let (_, out, _) = run(&["check", &example("literal_check.json")]);
    assert!(out.lines().any(|l| l == "reading: literal"));
}

#[test]
fn expect_on_check() {
    assert_eq!(run(&["check", &example("affine_2x.json"), "--expect", "pass"]).0, EXIT_OK);
    assert_eq!(run(&["check", &example("affine_2x.json"), "--expect", "fail"]).0, EXIT_EXPECTATION);
}

#[test]
fn usage_errors_exit_two() {
    let (code, _, err) = run(&["frobnicate"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("Usage"), "{err}");
    let (code, _, err) = run(&["check", &example("affine_2x.json"), "--bogus"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("Usage"));
    assert_eq!(run(&[]).0, EXIT_USAGE);
    assert_eq!(run(&["check", &example("affine_2x.json"), "--reading", "sideways"]).0, EXIT_USAGE);
    assert_eq!(run(&["check", "/nonexistent/model.json"]).0, EXIT_USAGE);
    assert_eq!(run(&["check", &example("literal_check.json"), "--method", "fast"]).0, EXIT_USAGE);
    assert_eq!(run(&["classify", &example("affine_2x.json"), "--schedule", "8,4"]).0, EXIT_USAGE);
}

#[test]
fn help_and_version_exit_zero() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, EXIT_OK);
    for sub in ["check", "classify", "generators", "jaccard", "compile", "split", "demo"] {
        assert!(out.contains(sub), "{sub} missing from help");
    }
    let (code, out, _) = run(&["--version"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn parse_errors_name_the_path() {
    let bad = temp_file("bias", r#"{"domain":{"scales":[3]},"model":{"kind":"affine","weights":["1"],"bias":"2/4"}}"#);
    let (code, _, err) = run(&["check", &bad]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("model.bias") && err.contains("write 1/2"), "{err}");

    let e = parse_model_file(r#"{"domain":{"scales":[3,3]},"model":{"kind":"affine","weights":["1"],"bias":"0"}}"#)
        .unwrap_err();
    assert_eq!(e.path(), Some("model.weights"));
    assert!(matches!(parse_model_file("not json"), Err(SpecError::Syntax { .. })));
    let _ = std::fs::remove_file(bad);
}

#[test]
fn machine_report_shape() {
    let (code, out, _) = run(&["--json", "classify", &example("base3_encoder.json"), "--seed", "4"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["tool"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert_eq!(v["settings"]["seed"], 4);
    let e0 = &v["result"]["classify"]["entries"][0]["certificate"];
    assert_eq!(e0["kind"], "collision-witness");
    assert_eq!(e0["a"], serde_json::json!([3, 0]));
    assert_eq!(e0["value"], serde_json::json!({"int": "3"}));

    let (_, out, _) = run(&["--json", "classify", &example("classifier.json")]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let w = &v["result"]["classify"]["entries"][0]["certificate"]["witness"]["value"];
    assert_eq!(*w, serde_json::json!({"pair": ["9/10", "human"]}));
}

#[test]
fn generators_and_split() {
    let (_, out, _) = run(&["generators", &example("merge_table.json")]);
    assert!(out.lines().any(|l| l == "a <- {(0), (2)} [invariant]"), "{out}");
    assert!(out.lines().any(|l| l == "generators: 3 (1 invariant)"));

    let (_, out, _) = run(&["generators", &example("base3_encoder.json"), "--subset", "0,0;1,0;2,2"]);
    assert!(out.lines().any(|l| l == "generators: 3 (0 invariant)"), "{out}");

    let (code, out, _) = run(&["split", &example("merge_table.json"), "--part1", "0;1", "--part2", "2;3"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().any(|l| l == "merged: 1"));
    let (code, _, _) = run(&["split", &example("merge_table.json"), "--part1", "0;1", "--part2", "1;3"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn jaccard_command() {
    let (_, out, _) = run(&["jaccard", &example("validity_truth.json"), &example("validity_guess.json")]);
    assert!(out.lines().any(|l| l == "mean: 7/10"), "{out}");
    let (_, out, _) = run(&[
        "jaccard",
        &example("validity_truth.json"),
        &example("validity_guess.json"),
        "--block",
        "0;2",
        "--block",
        "4;6;8",
    ]);
    assert!(out.lines().any(|l| l == "mean: 2/3"), "{out}");
    let (code, _, _) = run(&["jaccard", &example("validity_truth.json"), &example("affine_2x.json")]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn compile_writes_equivalent_table() {
    let target = std::env::temp_dir().join(format!("learncheck-cli-{}-compiled.json", std::process::id()));
    let (code, out, _) = run(&["compile", &example("classifier.json"), "--output", &target.display().to_string()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().any(|l| l.starts_with("equivalence: 100/100 points agree")), "{out}");
    assert!(out.lines().any(|l| l == "overall: non-learning"));

    let text = std::fs::read_to_string(&target).unwrap();
    let (d, table) = parse_model_file(&text).unwrap().build().unwrap();
    let (_, source) = parse_model_file(&std::fs::read_to_string(example("classifier.json")).unwrap())
        .unwrap()
        .build()
        .unwrap();
    for p in d.enumerate(1000).unwrap() {
        assert_eq!(table.eval(&p).unwrap(), source.eval(&p).unwrap());
    }
    let _ = std::fs::remove_file(target);
}

#[test]
fn demos_run() {
    let (code, out, _) = run(&["demo"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().filter(|l| l.starts_with("== ")).count(), 15);
    let (code, out, _) = run(&["demo", "piecewise-cover"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().any(|l| l == "verdict: pass"));
    assert!(out.lines().any(|l| l.starts_with("dim 0: FAIL (pigeonhole")));
}
