use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fuzzsheaf"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn unit_set(elements: &[(&str, &str)]) -> String {
    let list: Vec<String> =
        elements.iter().map(|(id, g)| format!(r#"{{ "id": "{id}", "grade": "{g}" }}"#)).collect();
    format!(r#"{{ "locale": {{ "lo": "0", "hi": "1" }}, "elements": [{}] }}"#, list.join(", "))
}

const TRIANGLE: &str = "0,0\n3,0\n0,4\n";

#[test]
fn vr_sections_on_the_right_triangle() {
    let dir = TempDir::new().unwrap();
    let pts = write(&dir, "c.csv", TRIANGLE);
    let out = run(&["vr", "sections", "--points", s(&pts), "--at", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let total: usize = v["levels"].as_array().unwrap().iter().map(|l| l["simplices"].as_array().unwrap().len()).sum();
    assert_eq!(total, 5);
    assert_eq!(v["counts"], serde_json::json!([3, 2, 0]));
}

#[test]
fn vr_build_json_points_and_explicit_r() {
    let dir = TempDir::new().unwrap();
    let pts = write(&dir, "c.json", "[[0,0],[3,0],[0,4]]");
    let out = run(&["vr", "build", "--points", s(&pts), "--R", "6", "--metric", "euclidean"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["R"], "6");
    assert_eq!(v["metric"], "euclidean");
    assert_eq!(v["levels"][2]["simplices"][0]["grade"], "5");

    let bad = run(&["vr", "build", "--points", s(&pts), "--R", "5", "--metric", "euclidean"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn vr_stalk_and_pi0() {
    let dir = TempDir::new().unwrap();
    let pts = write(&dir, "c.csv", TRIANGLE);
    let v = json_of(&run(&["vr", "stalk", "--points", s(&pts), "--at", "4"]));
    assert_eq!(v["counts"], serde_json::json!([3, 1, 0]));
    let v = json_of(&run(&["vr", "stalk", "--points", s(&pts), "--at", "bottom"]));
    assert_eq!(v["counts"], serde_json::json!([3, 3, 1]));
    let v = json_of(&run(&["vr", "pi0", "--points", s(&pts), "--at", "1/2", "--stalk"]));
    assert_eq!(v["count"], 3);
    let v = json_of(&run(&["vr", "pi0", "--points", s(&pts), "--at", "4"]));
    assert_eq!(v["count"], 1);
}

#[test]
fn vr_dot_export() {
    let dir = TempDir::new().unwrap();
    let pts = write(&dir, "c.csv", TRIANGLE);
    let out = run(&["vr", "sections", "--points", s(&pts), "--at", "3", "--format", "dot"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("graph vr {"));
    assert!(text.contains("0 -- 1"));
    assert!(!text.contains("0 -- 2"));
}

#[test]
fn vr_compare_exit_codes() {
    let dir = TempDir::new().unwrap();
    let y = write(&dir, "y.csv", TRIANGLE);
    let y2 = write(&dir, "y2.csv", "0,4\n0,0\n3,0\n");
    let x = write(&dir, "x.csv", "0,0\n3,0\n");
    assert_eq!(run(&["vr", "compare", "--points", s(&y), "--other", s(&y)]).status.code(), Some(0));
    assert_eq!(run(&["vr", "compare", "--points", s(&y2), "--other", s(&y)]).status.code(), Some(0));
    let out = run(&["vr", "compare", "--points", s(&x), "--other", s(&y)]);
    assert_eq!(out.status.code(), Some(2));
    let v = json_of(&out);
    assert_eq!(v["equivalent"], false);
    assert_eq!(v["witness"]["level"], 0);
    assert_eq!(v["witness"]["element"], "2");
}

#[test]
fn malformed_points_report_line_and_field() {
    let dir = TempDir::new().unwrap();
    let pts = write(&dir, "bad.csv", "0,0\n1,x\n");
    let out = run(&["vr", "build", "--points", s(&pts)]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2, field 2"), "{err}");
}

#[test]
fn fuzzy_pushout_takes_the_max() {
    let dir = TempDir::new().unwrap();
    let d = write(
        &dir,
        "pushout.json",
        r#"{ "locale": { "lo": "0", "hi": "1" },
             "nodes": {
               "C": { "elements": [ { "id": "c", "grade": "0.1" } ] },
               "A": { "elements": [ { "id": "y", "grade": "0.6" } ] },
               "B": { "elements": [ { "id": "y", "grade": "0.25" } ] } },
             "arrows": [ { "from": "C", "to": "A", "map": { "c": "y" } },
                         { "from": "C", "to": "B", "map": { "c": "y" } } ] }"#,
    );
    let v = json_of(&run(&["fuzzy", "colimit", s(&d)]));
    let elements = v["elements"].as_array().unwrap();
    assert_eq!(elements.len(), 1);
    assert_eq!(elements[0]["grade"], "0.6");
    assert_eq!(v["legs"]["B"]["y"], elements[0]["id"]);
}

#[test]
fn fuzzy_coequalizer_grade() {
    let dir = TempDir::new().unwrap();
    let d = write(
        &dir,
        "coeq.json",
        r#"{ "locale": { "lo": "0", "hi": "1" },
             "nodes": {
               "A": { "elements": [ { "id": "x", "grade": "0.4" }, { "id": "y", "grade": "0.2" } ] },
               "S": { "elements": [ { "id": "s", "grade": "0.1" } ] } },
             "arrows": [ { "from": "S", "to": "A", "map": { "s": "x" } },
                         { "from": "S", "to": "A", "map": { "s": "y" } } ] }"#,
    );
    let v = json_of(&run(&["fuzzy", "colimit", s(&d)]));
    assert_eq!(v["elements"], serde_json::json!([{ "id": "A:x", "grade": "0.4" }]));
}

#[test]
fn fuzzy_empty_limit_is_terminal() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "empty.json", r#"{ "nodes": {}, "arrows": [] }"#);
    let v = json_of(&run(&["fuzzy", "limit", s(&d), "--locale", "[0,1]"]));
    assert_eq!(v["elements"], serde_json::json!([{ "id": "*", "grade": "1" }]));
    assert_eq!(run(&["fuzzy", "limit", s(&d)]).status.code(), Some(1));
}

#[test]
fn fuzzy_validate_and_mixed_locales() {
    let dir = TempDir::new().unwrap();
    let bad = write(
        &dir,
        "bad.json",
        r#"{ "locale": { "lo": "0", "hi": "1" },
             "nodes": { "A": { "elements": [ { "id": "a", "grade": "0.9" } ] },
                        "B": { "elements": [ { "id": "b", "grade": "0.1" } ] } },
             "arrows": [ { "from": "A", "to": "B", "map": { "a": "b" } } ] }"#,
    );
    assert_eq!(run(&["fuzzy", "validate", s(&bad)]).status.code(), Some(2));
    let mixed = write(
        &dir,
        "mixed.json",
        r#"{ "nodes": { "A": { "locale": { "lo": "0", "hi": "1" }, "elements": [] },
                        "B": { "locale": { "lo": "0", "hi": "2" }, "elements": [] } } }"#,
    );
    assert_eq!(run(&["fuzzy", "validate", s(&mixed)]).status.code(), Some(1));
}

#[test]
fn fuzzy_union_joins_grades() {
    let dir = TempDir::new().unwrap();
    let amb = write(&dir, "amb.json", &unit_set(&[("a", "1"), ("b", "1")]));
    let p = write(&dir, "p.json", &unit_set(&[("a", "0.2")]));
    let q = write(&dir, "q.json", &unit_set(&[("a", "0.7"), ("b", "0.1")]));
    let v = json_of(&run(&["fuzzy", "union", s(&amb), s(&p), s(&q)]));
    assert_eq!(v["elements"][0]["grade"], "0.7");
    assert_eq!(v["elements"][1]["grade"], "0.1");
}

#[test]
fn sheaf_roundtrip_and_levelcut() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", &unit_set(&[("a", "0.3"), ("b", "0.5"), ("c", "1")]));
    assert_eq!(run(&["sheaf", "roundtrip", s(&f)]).status.code(), Some(0));
    let v = json_of(&run(&["sheaf", "levelcut", s(&f), "--at", "0.4"]));
    assert_eq!(v["sections"], serde_json::json!(["b", "c"]));
    let v = json_of(&run(&["sheaf", "levelcut", s(&f), "--at", "bottom"]));
    assert_eq!(v["sections"], serde_json::json!(["*"]));

    let out = dir.path().join("sheaf.json");
    assert_eq!(run(&["sheaf", "levelcut", s(&f), "--out", s(&out)]).status.code(), Some(0));
    let v = json_of(&run(&["sheaf", "psi", s(&out)]));
    assert_eq!(v["elements"][0], serde_json::json!({ "id": "a", "grade": "0.3" }));
}

#[test]
fn sheaf_stalk_at_bottom_is_the_carrier() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", &unit_set(&[("a", "0.3"), ("b", "0.5")]));
    let v = json_of(&run(&["sheaf", "stalk", s(&f), "--at", "bottom"]));
    assert_eq!(v["stalk"], serde_json::json!(["a", "b"]));
    let v = json_of(&run(&["sheaf", "stalk", s(&f), "--at", "0.3"]));
    assert_eq!(v["stalk"], serde_json::json!(["b"]));
    assert_eq!(run(&["sheaf", "stalk", s(&f), "--at", "1"]).status.code(), Some(1));
}

const STEP_FA: &str = r#"{ "locale": { "lo": "0", "hi": "1" },
    "cuts": ["1"],
    "levels": [["a", "b", "c"], ["*"]],
    "restrictions": [{ "*": "a" }] }"#;

#[test]
fn sheaf_image_psi_and_sheafify() {
    let dir = TempDir::new().unwrap();
    let step = write(&dir, "step.json", STEP_FA);
    let img = dir.path().join("img.json");
    assert_eq!(run(&["sheaf", "image", s(&step), "--out", s(&img)]).status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&img).unwrap()).unwrap();
    let attained: Vec<&Value> = v["elements"].as_array().unwrap().iter().filter(|e| e["attained"] == true).collect();
    assert_eq!(attained.len(), 1);

    let out = run(&["sheaf", "psi", s(&img)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("sheafify"));

    let v = json_of(&run(&["sheaf", "sheafify", s(&img)]));
    assert!(v["elements"].as_array().unwrap().iter().all(|e| e["attained"] == true && e["grade"] == "1"));
}

#[test]
fn sheaf_stalkwise_counterexample() {
    let dir = TempDir::new().unwrap();
    let e = write(&dir, "e.json", &unit_set(&[("a", "0.3")]));
    let f = write(&dir, "f.json", &unit_set(&[("a", "0.5")]));
    let out = run(&["sheaf", "stalkwise", s(&e), s(&f), "--mode", "epi"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json_of(&out);
    assert_eq!(
        v,
        serde_json::json!({
            "mode": "epi",
            "ok": false,
            "witness": { "point": "0.4", "element": "a", "reason": "not-surjective" }
        })
    );
    let out = run(&["sheaf", "stalkwise", s(&e), s(&f), "--mode", "mono"]);
    assert_eq!(out.status.code(), Some(0));
    let map = write(&dir, "map.json", r#"{ "a": "a" }"#);
    let out = run(&["sheaf", "stalkwise", s(&e), s(&e), "--map", s(&map)]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn inline_and_file_locales() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", r#"{ "elements": [ { "id": "a", "grade": "2" } ] }"#);
    let loc = write(&dir, "loc.json", r#"{ "lo": "0", "hi": "5", "orientation": "opposite" }"#);
    assert_eq!(run(&["sheaf", "roundtrip", s(&f), "--locale", "[0,5]^op"]).status.code(), Some(0));
    assert_eq!(run(&["sheaf", "roundtrip", s(&f), "--locale", s(&loc)]).status.code(), Some(0));
    let v = json_of(&run(&["sheaf", "levelcut", s(&f), "--locale", "[0,5]^op", "--at", "1"]));
    assert_eq!(v["sections"], serde_json::json!([]));
    let v = json_of(&run(&["sheaf", "levelcut", s(&f), "--locale", "[0,5]^op", "--at", "3"]));
    assert_eq!(v["sections"], serde_json::json!(["a"]));
    assert_eq!(run(&["sheaf", "roundtrip", s(&f)]).status.code(), Some(1));
}
