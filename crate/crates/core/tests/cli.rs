use std::path::PathBuf;
use std::process::{Command, Output};

use imc::report::AnalysisReport;
use serde_json::Value;

fn model(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("models").join(name).display().to_string()
}

fn imc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_imc")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn schema_errors(report: &Value) -> Vec<String> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("docs/report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    validator.iter_errors(report).map(|e| e.to_string()).collect()
}

#[test]
fn exit_codes_follow_the_verdict() {
    let cases = [
        (model("running-example.json"), 0, "yes"),
        ("builtin:counterexample-5.1".to_string(), 3, "inconclusive"),
        ("builtin:counterexample".to_string(), 3, "inconclusive"),
        (model("two-cycle.json"), 2, "no"),
        ("builtin:two-cycle".to_string(), 2, "no"),
    ];
    for (m, code, verdict) in cases {
        let o = imc(&["analyze", &m, "--json"]);
        assert_eq!(o.status.code(), Some(code), "{m}: {}", stderr(&o));
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["verdict"]["convergent"], verdict);
    }
}

#[test]
fn malformed_models_exit_one_with_diagnostics() {
    let o = imc(&["analyze", &model("malformed.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("pmf #0 of state `a` sums to 5/6"), "{}", stderr(&o));

    let dir = tempfile::tempdir().unwrap();
    let bare = dir.path().join("bare.json");
    std::fs::write(&bare, "{\n  \"states\": [\"a\"],\n  \"credal_sets\": {\"a\": [{\"a\": 1}]}\n}\n").unwrap();
    let o = imc(&["analyze", bare.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let unknown = dir.path().join("unknown.json");
    std::fs::write(&unknown, r#"{"states": ["a"], "credal_sets": {"a": [{"z": "1"}]}}"#).unwrap();
    let o = imc(&["analyze", unknown.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("`z`"), "{}", stderr(&o));

    assert_eq!(imc(&["analyze", "/nonexistent/model.json"]).status.code(), Some(1));
    assert_eq!(imc(&["analyze", "builtin:nope"]).status.code(), Some(1));
}

#[test]
fn reports_validate_against_the_shipped_schema_and_round_trip() {
    for m in [model("running-example.json"), model("two-cycle.json"), "builtin:counterexample".into()] {
        let o = imc(&["analyze", &m, "--json", "--suite", "3", "--seed", "9"]);
        let text = stdout(&o);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(schema_errors(&v), Vec::<String>::new(), "{m}");
        let parsed: AnalysisReport = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed.exit_code(), o.status.code().unwrap());
        assert_eq!(serde_json::to_value(&parsed).unwrap(), v);
        assert!(parsed.orbit_evidence.is_some());
    }
}

#[test]
fn schema_rejects_a_wrong_verdict_string() {
    let o = imc(&["analyze", &model("running-example.json"), "--json"]);
    let mut v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    v["verdict"]["convergent"] = Value::String("maybe".into());
    assert!(!schema_errors(&v).is_empty());
}

#[test]
fn running_example_graph_is_stable_dot() {
    let m = model("running-example.json");
    let a = imc(&["graph", &m, "--dot"]);
    let b = imc(&["graph", &m, "--dot"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let dot = stdout(&a);
    let edges: Vec<&str> = dot.lines().map(str::trim).filter(|l| l.contains("->")).collect();
    assert_eq!(
        edges,
        [
            "\"a\" -> \"a\";",
            "\"b\" -> \"b\";",
            "\"c\" -> \"a\";",
            "\"c\" -> \"b\";",
            "\"c\" -> \"d\";",
            "\"c\" -> \"e\";",
            "\"d\" -> \"c\";",
            "\"d\" -> \"d\";",
            "\"d\" -> \"e\";",
            "\"e\" -> \"c\";",
            "\"e\" -> \"d\";",
            "\"e\" -> \"e\";",
        ]
    );
    assert!(dot.contains("label=\"transient, period 1\""));
}

#[test]
fn counterexample_graph_edges() {
    let o = imc(&["graph", "builtin:counterexample-5.1"]);
    let text = stdout(&o);
    let edges: Vec<&str> = text.lines().filter(|l| l.contains("->")).collect();
    assert_eq!(edges, ["a -> a", "b -> a", "b -> b", "b -> c", "c -> a", "c -> b"]);
}

#[test]
fn orbit_command() {
    let o = imc(&["orbit", &model("running-example.json"), "1_b", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["detected_period"], 1);

    let o = imc(&["orbit", &model("running-example.json"), "[0.5,0.5,0.5,0.5,0.5]"]);
    assert!(stdout(&o).contains("period: 1 (from iteration 0)"), "{}", stdout(&o));

    let o = imc(&["orbit", &model("two-cycle.json"), "indicator:b", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["detected_period"], 2);

    let o = imc(&["orbit", "builtin:running-example", "random:4", "--max-iters", "50", "--burn-in", "5", "--max-period", "4", "--tolerance", "1e-6"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let o = imc(&["orbit", &model("two-cycle.json"), "1_q"]);
    assert_eq!(o.status.code(), Some(1));
    let o = imc(&["orbit", &model("two-cycle.json"), "[1,2]"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn orbit_trace_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("trace.csv");
    let o = imc(&["orbit", &model("two-cycle.json"), "1_b", "--csv", csv.to_str().unwrap(), "--max-iters", "300"]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("iteration,a,b,c"));
    assert_eq!(lines.next(), Some("0,0,1,0"));
    assert_eq!(lines.next(), Some("1,0,0,1"));
}

#[test]
fn decompose_command() {
    let o = imc(&["decompose", &model("running-example.json"), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["depth"], 2);
    assert_eq!(v["levels"][1]["domain"], serde_json::json!(["d", "e"]));
    let o = imc(&["decompose", "builtin:counterexample"]);
    assert!(stdout(&o).contains("level 2: domain {b,c}"), "{}", stdout(&o));
}

#[test]
fn text_report_names_the_witness() {
    let o = imc(&["analyze", &model("two-cycle.json")]);
    let text = stdout(&o);
    assert!(text.contains("convergent: no"), "{text}");
    assert!(text.contains("witness: level 1 class {b,c} period 2"), "{text}");
}
