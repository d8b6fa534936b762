use std::process::{Command, Output};

use jetbound_cli::ReportDocument;

fn jetbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jetbound")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn run_prints_intermediates_and_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("lgr.json");
    let o = jetbound(&["run", "prop-lgr", "--json", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("i_l = 288"));
    assert!(text.contains("final     2^11·3^4·7 (1161216)"));
    let doc = ReportDocument::from_json(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc.schema_version, 1);
    let r = &doc.cases[0];
    assert_eq!(r.cokernel_values(), Some(vec![36, 288, 7, 4, 8]));
    assert_eq!(r.final_bound.as_ref().unwrap().to_string(), "2^11·3^4·7");
    assert!(r.matches);
}

#[test]
fn json_document_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("g2.json");
    assert!(jetbound(&["run", "prop-g2", "--json", json.to_str().unwrap()]).status.success());
    let text = std::fs::read_to_string(&json).unwrap();
    let doc = ReportDocument::from_json(&text).unwrap();
    assert_eq!(doc.to_json(), text);
}

#[test]
fn unknown_case_is_a_usage_error() {
    let o = jetbound(&["run", "no-such-case"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no-such-case"));
}

#[test]
fn bad_arguments_are_usage_errors() {
    assert_eq!(jetbound(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(jetbound(&["verify", "--parallel", "0"]).status.code(), Some(2));
    assert_eq!(jetbound(&["list", "--cases", "/nonexistent/cases.toml"]).status.code(), Some(2));
}

#[test]
fn verify_reports_the_quintic_mismatch() {
    let o = jetbound(&["verify", "--parallel", "4"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("FAIL") && l.contains("prop-quintic") && l.contains("Chern number 84, expected 64")));
    assert!(text.lines().any(|l| l.starts_with("FAIL") && l.contains("thmB-g6")));
    assert!(text.lines().any(|l| l.starts_with("PASS") && l.contains("prop-ogr")));
    assert!(text.trim_end().ends_with("22/24 cases pass"));
    // The waiver covers cited cases only, so the verdict does not change.
    assert_eq!(jetbound(&["verify", "--allow-cited-mismatch"]).status.code(), Some(1));
}

#[test]
fn parallel_output_is_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cases = dir.path().join("cases.toml");
    std::fs::write(
        &cases,
        r#"
[[case]]
id = "b-g2"
pipeline = "homogeneous"
space = { kind = "g2" }
fiber = { kind = "cayley", rank = 2 }
twist = 1
generators = [{ name = "t1" }, { name = "t2" }, { name = "s1", kappa = "1/2" }, { name = "s2" }]
affinity = "chern_nonzero"
expected = "2^6·3^5·5"

[[case]]
id = "a-cubic"
pipeline = "formula"
formula = { kind = "hypersurface", n = 4, d = 3 }
affinity = "chern_nonzero"
expected = "2^10·3^5·5·11"

[[case]]
id = "c-lgr"
pipeline = "homogeneous"
space = { kind = "lagrangian", n = 3 }
fiber = { kind = "cayley", rank = 3 }
twist = 1
generators = [
  { name = "t1" }, { name = "t2" }, { name = "t3" },
  { name = "s1" }, { name = "s2" }, { name = "s3" },
]
transforms = ["center:2"]
affinity = "chern_nonzero"
expected = "2^11·3^4·7"
"#,
    )
    .unwrap();
    let mut outputs = Vec::new();
    for workers in ["1", "3"] {
        let json = dir.path().join(format!("out{workers}.json"));
        let o = jetbound(&[
            "verify",
            "--cases",
            cases.to_str().unwrap(),
            "--parallel",
            workers,
            "--json",
            json.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        outputs.push((stdout(&o), std::fs::read(&json).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    let doc = ReportDocument::from_json(std::str::from_utf8(&outputs[0].1).unwrap()).unwrap();
    let ids: Vec<&str> = doc.cases.iter().map(|c| c.case_id.as_str()).collect();
    assert_eq!(ids, ["a-cubic", "b-g2", "c-lgr"]);
    assert!(outputs[0].0.contains("3/3 cases pass"));
}

#[test]
fn list_and_table_and_schema() {
    let list = stdout(&jetbound(&["list"]));
    assert_eq!(list.lines().count(), 24);
    assert!(list.contains("[cited]"));
    let table = jetbound(&["table"]);
    assert!(table.status.success());
    let table = stdout(&table);
    assert!(table.lines().any(|l| l.starts_with("thmB-g9") && l.contains("2^11·3^4·7")));
    assert!(table.lines().any(|l| l.starts_with("thmB-g6") && l.contains("[expected 2^11·3^2·5]")));
    let schema = jetbound(&["schema"]);
    assert!(schema.status.success());
    assert_eq!(stdout(&schema), jetbound_cli::CASE_SCHEMA);
}
