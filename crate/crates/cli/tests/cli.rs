use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn pgq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pgq")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pgq-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn validate_a5() {
    let o = pgq(&["validate", &fixture("a5")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("orthogonality: pass"));
    assert!(o.stderr.is_empty());
}

#[test]
fn validate_accepts_explicit_extension() {
    let o = pgq(&["validate", &fixture("s5.json")]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn corrupted_table_fails_validation() {
    let text = std::fs::read_to_string(fixture("a5.json")).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    doc["classes"][1]["size"] = serde_json::json!(16);
    let path = scratch_file("a5-bad-size.json", &doc.to_string());
    let o = pgq(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL"));
    let o = pgq(&["pq", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn malformed_inputs_exit_with_two() {
    let broken = scratch_file("broken.json", "{\"groupName\": ");
    assert_eq!(pgq(&["validate", broken.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(pgq(&["spectrum", &fixture("missing")]).status.code(), Some(2));
    assert_eq!(pgq(&["check-order", &fixture("a5"), "--n", "0"]).status.code(), Some(2));

    let blocks = scratch_file(
        "m2.blocks.json",
        r#"{"prime": 5, "principal": true, "exceptionalMultiplicity": 2, "lineOrder": [0, 1, 2, 3, 4]}"#,
    );
    let o = pgq(&["pq", &fixture("a5"), "--blocks", blocks.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceptional multiplicity"));
}

#[test]
fn spectrum_and_prime_graph() {
    let o = pgq(&["spectrum", &fixture("a5")]);
    assert_eq!(stdout(&o), "1 2 3 5\n");
    let o = pgq(&["prime-graph", &fixture("a5")]);
    assert_eq!(stdout(&o), "vertices: 2 3 5\nedges: none\n");
    let o = pgq(&["--format", "json", "prime-graph", &fixture("s5")]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["edges"], serde_json::json!([[2, 3]]));
}

#[test]
fn check_order_a5_ten() {
    let o = pgq(&["check-order", &fixture("a5"), "--n", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("verdict: infeasible"), "{out}");
    assert!(out.contains("certificate: exhaustive"), "{out}");

    let o = pgq(&["check-order", &fixture("a5"), "--n", "10", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "infeasible");
    assert_eq!(v["certificate"], "exhaustive");
}

#[test]
fn check_order_reports_survivors() {
    let o = pgq(&["check-order", &fixture("a5"), "--n", "5"]);
    let out = stdout(&o);
    assert!(out.contains("verdict: feasible"));
    assert!(out.contains("surviving: 2"), "{out}");
}

#[test]
fn pq_s7_with_blocks() {
    let o = pgq(&["pq", &fixture("s7"), "--blocks", &fixture("s7.blocks"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["overall"], "PQ_affirmed");
    for pair in [[2, 7], [3, 7], [5, 7], [3, 5]] {
        let edge = v["edges"]
            .as_array()
            .unwrap()
            .iter()
            .find(|e| e["pair"] == serde_json::json!(pair))
            .unwrap();
        assert_eq!(edge["unitStatus"], "excluded_by_criterion", "{pair:?}");
        assert_eq!(edge["witness"]["outcome"]["hypotheses"]["applicable"], true);
    }
}

#[test]
fn pq_a5_without_blocks_lists_provenance() {
    let o = pgq(&["pq", &fixture("a5"), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["overall"], "PQ_affirmed");
    for e in v["edges"].as_array().unwrap() {
        assert_eq!(e["unitStatus"], "excluded_by_help");
        assert_eq!(e["witness"]["check"]["exhaustive"], true);
        let scenarios = e["witness"]["check"]["scenarios"].as_array().unwrap();
        let provenance: Vec<&str> = scenarios
            .iter()
            .flat_map(|s| s["system"]["constraints"].as_array().unwrap())
            .map(|c| c["provenance"].as_str().unwrap())
            .collect();
        assert!(provenance.contains(&"augmentation"));
        assert!(provenance.contains(&"multiplicity-nonnegativity"));
    }
}

#[test]
fn output_does_not_depend_on_worker_count() {
    for args in [
        vec!["pq", &fixture("s5"), "--blocks", &fixture("s5.blocks")],
        vec!["pq", &fixture("a5")],
        vec!["check-order", &fixture("a7"), "--n", "15"],
    ] {
        let runs: Vec<Vec<u8>> = ["1", "3"]
            .iter()
            .map(|j| {
                let mut a: Vec<&str> = args.iter().map(|s| s.as_ref()).collect();
                a.extend(["--format", "json", "--jobs", j]);
                pgq(&a).stdout
            })
            .collect();
        assert!(!runs[0].is_empty());
        assert_eq!(runs[0], runs[1], "{args:?}");
    }
}
