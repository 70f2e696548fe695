use std::path::Path;
use std::process::{Command, Output};

use nnrep::cli::{construct, Method};
use nnrep::experiment::{run_experiment, ExperimentConfig, ExperimentKind};
use nnrep::ldt::bisector_tree;
use nnrep::ptf::compile_ptf;
use nnrep::{FunctionSpec, NNRepresentation};

fn nnrep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nnrep"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

fn read(p: &str) -> String {
    std::fs::read_to_string(p).unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn construct_writes_library_json() {
    let dir = tempfile::tempdir().unwrap();
    for (spec, method, name) in [
        ("maj:5", Method::Threshold, "threshold"),
        ("th:3:2:1,2,-1", Method::Threshold, "threshold"),
        ("sym:5:1,4", Method::Symmetric, "symmetric"),
        ("maj:6", Method::MajorityBnn, "majority-bnn"),
        ("parity:3", Method::ParityBnn, "parity-bnn"),
        ("table:4:1ee8", Method::Covering, "covering"),
    ] {
        let out = path(dir.path(), "rep.json");
        let o = nnrep(&["construct", spec, name, "-o", &out]);
        assert_eq!(o.status.code(), Some(0), "{spec} {name}");
        let lib = construct(&spec.parse::<FunctionSpec>().unwrap(), method).unwrap();
        assert_eq!(read(&out), lib.to_json(), "{spec} {name}");
    }
}

#[test]
fn construct_rejects_inapplicable_method() {
    let o = nnrep(&["construct", "parity:3", "threshold"]);
    assert_eq!(o.status.code(), Some(2));
    let o = nnrep(&["construct", "maj:3", "parity-bnn"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let rep = path(dir.path(), "rep.json");
    assert!(nnrep(&["construct", "maj:3", "threshold", "-o", &rep])
        .status
        .success());

    let o = nnrep(&["verify", "maj:3", &rep]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "ok\n");
    assert_eq!(
        nnrep(&["verify", "maj:3", &rep, "-k", "1"]).status.code(),
        Some(0)
    );

    let o = nnrep(&["verify", "parity:3", &rep]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAILED"));

    let o = nnrep(&["--json", "verify", "parity:3", &rep]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["ok"], false);

    // Arity mismatch, malformed spec, missing file.
    assert_eq!(nnrep(&["verify", "maj:4", &rep]).status.code(), Some(2));
    assert_eq!(nnrep(&["verify", "maj:", &rep]).status.code(), Some(2));
    assert_eq!(
        nnrep(&["verify", "maj:3", "/nonexistent/rep.json"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(nnrep(&["verify"]).status.code(), Some(2));
    assert_eq!(nnrep(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn classify_points() {
    let dir = tempfile::tempdir().unwrap();
    let rep = path(dir.path(), "rep.json");
    std::fs::write(
        &rep,
        r#"{"n":2,"positives":[["1","1"]],"negatives":[["0","0"]]}"#,
    )
    .unwrap();
    assert_eq!(stdout(&nnrep(&["classify", &rep, "11"])), "positive\n");
    assert_eq!(stdout(&nnrep(&["classify", &rep, "00"])), "negative\n");
    let tie = nnrep(&["classify", &rep, "01"]);
    assert_eq!(tie.status.code(), Some(1));
    assert!(stdout(&tie).starts_with("tie"));
    assert_eq!(nnrep(&["classify", &rep, "0x"]).status.code(), Some(2));
    assert_eq!(nnrep(&["classify", &rep, "011"]).status.code(), Some(2));
    assert_eq!(
        nnrep(&["classify", &rep, "11", "-k", "3"]).status.code(),
        Some(2)
    );
}

#[test]
fn minimize_reports_and_cutoffs() {
    let dir = tempfile::tempdir().unwrap();
    let w = path(dir.path(), "w.json");
    let o = nnrep(&["--json", "minimize", "table:2:8", "bnn", "-o", &w]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["optimum"], 3);
    assert_eq!(v["exhausted_up_to"], 2);
    let rep = NNRepresentation::from_json(&read(&w)).unwrap();
    assert_eq!(rep.size(), 3);

    let o = nnrep(&["minimize", "parity:3", "knn", "-k", "3", "--max-size", "5"]);
    assert!(matches!(o.status.code(), Some(0 | 3)));

    // Size cap below the optimum.
    let o = nnrep(&["--max-size", "3", "minimize", "parity:3", "bnn"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("exhausted up to 3"));

    // Arity 5 without a cutoff is refused as a resource limit.
    assert_eq!(
        nnrep(&["minimize", "parity:5", "bnn"]).status.code(),
        Some(3)
    );
    let o = nnrep(&[
        "--time-limit",
        "0",
        "--max-size",
        "30",
        "minimize",
        "table:5:6996b00f",
        "bnn",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn compile_ptf_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let rep = path(dir.path(), "rep.json");
    let poly = path(dir.path(), "poly.json");
    let params = path(dir.path(), "params.json");
    std::fs::write(
        &rep,
        r#"{"n":1,"positives":[["3/2"]],"negatives":[["-1/2"]]}"#,
    )
    .unwrap();
    let o = nnrep(&[
        "compile-ptf",
        "table:1:2",
        &rep,
        "-o",
        &poly,
        "--params",
        &params,
        "--verify",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        read(&poly),
        r#"{"n":1,"terms":[{"sign":1,"c":3,"e":[20]},{"sign":-1,"c":11,"e":[4]}]}"#
    );
    assert_eq!(read(&params), r#"{"B":3,"M":4,"A":4}"#);

    assert!(nnrep(&["construct", "parity:4", "symmetric", "-o", &rep])
        .status
        .success());
    let o = nnrep(&[
        "--json",
        "compile-ptf",
        "parity:4",
        &rep,
        "-o",
        &poly,
        "--verify",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["terms"]["terms"], 5);
    assert_eq!(v["terms"]["lower_bound"], 5);
    assert_eq!(v["verified"], true);
    let f = nnrep::parse_function("parity:4").unwrap();
    let lib = compile_ptf(&f, &NNRepresentation::from_json(&read(&rep)).unwrap()).unwrap();
    assert_eq!(read(&poly), lib.0.to_json());

    // A representation of a different function does not compile.
    assert_eq!(
        nnrep(&["compile-ptf", "maj:4", &rep]).status.code(),
        Some(1)
    );
}

#[test]
fn ldt_check_bisector_tree() {
    let dir = tempfile::tempdir().unwrap();
    let tree = path(dir.path(), "tree.json");
    let spec: FunctionSpec = "th:3:1:2,-1,1".parse().unwrap();
    let rep = construct(&spec, Method::Threshold).unwrap();
    std::fs::write(&tree, bisector_tree(&rep).unwrap().to_json()).unwrap();
    assert_eq!(
        nnrep(&["ldt-check", "th:3:1:2,-1,1", &tree]).status.code(),
        Some(0)
    );
    let o = nnrep(&["ldt-check", "parity:3", &tree]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAILED at"));
}

#[test]
fn rect_areas() {
    for n in 1..=3 {
        let o = nnrep(&["--json", "rect", &n.to_string()]);
        assert_eq!(o.status.code(), Some(0));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["area"], 1u64 << n);
    }
    assert_eq!(nnrep(&["rect", "4"]).status.code(), Some(2));
}

#[test]
fn experiment_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let csv = path(dir.path(), "out.csv");
    let o = nnrep(&[
        "--seed",
        "7",
        "experiment",
        "random-bnn",
        "--arity",
        "3",
        "--samples",
        "40",
        "-o",
        &csv,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let lib = run_experiment(&ExperimentConfig {
        kind: ExperimentKind::RandomBnn,
        arity: 3,
        samples: 40,
        seed: 7,
        max_size: None,
        time_limit: None,
    })
    .unwrap();
    assert_eq!(read(&csv), lib.to_csv());

    let o = nnrep(&[
        "--json",
        "experiment",
        "random-bnn",
        "--arity",
        "2",
        "--samples",
        "16",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 16);
    // Constants need one prototype, everything else at least two.
    for (i, row) in rows.iter().enumerate() {
        let opt: usize = row[2].as_str().unwrap().parse().unwrap();
        if i == 0 || i == 15 {
            assert_eq!(opt, 1);
        } else {
            assert!(opt >= 2);
        }
    }

    assert_eq!(
        nnrep(&["experiment", "random-bnn", "--arity", "9", "--samples", "1"])
            .status
            .code(),
        Some(2)
    );
}
