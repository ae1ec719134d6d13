use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use sylgal::pipeline::CorpusEntry;

fn sylgal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sylgal")).args(args).output().expect("binary runs")
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sylgal-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn classify_examples() {
    let out = sylgal(&["classify", "--family", "psl", "--n", "4", "--q", "7", "--eps", "+"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["rank"], 2);
    assert_eq!(v["theorem_a_prediction"], true);

    let v = json(&sylgal(&["classify", "--family", "sym", "--n", "12"]));
    assert_eq!(v["rank"], 3);

    let v = json(&sylgal(&["classify", "--family", "pomega-plus", "--n", "8", "--q", "5"]));
    assert_eq!(v["two_generated"], false);
}

#[test]
fn classify_exit_codes() {
    let out = sylgal(&["classify", "--family", "sporadic", "--label", "J1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not covered"));
    assert_eq!(sylgal(&["classify", "--family", "psl", "--n", "4"]).status.code(), Some(1));
    assert_eq!(sylgal(&["classify", "--family", "nonsense", "--n", "4"]).status.code(), Some(1));
    assert_eq!(sylgal(&["classify", "--family", "psl", "--n", "3", "--q", "6"]).status.code(), Some(1));
    assert_eq!(sylgal(&["classify", "--family", "psl", "--n", "3", "--q", "4", "--eps", "x"]).status.code(), Some(1));
}

#[test]
fn classify_csv_columns() {
    let out = sylgal(&["classify", "--family", "sym", "--n", "12", "--out", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "group,family,n,q,eps,rank,two_generated,k0_formula,k0_sigma_formula,theorem_a_prediction"
    );
    assert!(lines.next().unwrap().starts_with("S12,sym,12,"));
}

#[test]
fn bruteforce_examples() {
    let out = sylgal(&["bruteforce", "--family", "sym", "--n", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["rank_bruteforce"], 2);
    assert_eq!(v["theorem_a_consistent"], true);
    assert_eq!(v["seed"], 0);
    assert!(v["timings"].is_null());

    let v = json(&sylgal(&["bruteforce", "--family", "psl", "--n", "2", "--q", "7"]));
    assert_eq!(v["rank_bruteforce"], 1);
    assert_eq!(v["k0_sigma"], 3);

    let v = json(&sylgal(&["bruteforce", "--external", &data("m11.gens")]));
    assert_eq!(v["order"], 7920);
    assert_eq!(v["group"], "M11");
    assert!(v["rank_formula"].is_null());
}

#[test]
fn bruteforce_bounds_and_coverage() {
    let out = sylgal(&["bruteforce", "--family", "psl", "--n", "3", "--q", "4", "--max-order", "1000"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("max-order"));
    let out = sylgal(&["bruteforce", "--family", "sym", "--n", "9", "--max-classes", "10", "--stage", "full"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("max-classes"));
    assert_eq!(sylgal(&["bruteforce", "--family", "sp", "--n", "4", "--q", "2"]).status.code(), Some(2));
    assert_eq!(sylgal(&["bruteforce", "--external", "/nonexistent/gens"]).status.code(), Some(1));
    let bad = temp_file("bad.gens", "name bad\ndegree 3\n0 0 1\n");
    assert_eq!(sylgal(&["bruteforce", "--external", bad.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn output_is_deterministic_and_round_trips() {
    let args = ["bruteforce", "--family", "psl", "--n", "3", "--q", "4", "--seed", "7"];
    let a = sylgal(&args);
    let b = sylgal(&args);
    assert_eq!(a.stdout, b.stdout);
    let entry: CorpusEntry = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(entry.seed, 7);
    let again = serde_json::to_value(&entry).unwrap();
    assert_eq!(again, json(&a));
}

#[test]
fn crosscheck_bundled_corpus() {
    let out = sylgal(&["crosscheck", "--corpus", &data("corpus.json")]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("0 mismatches"));
}

#[test]
fn crosscheck_detects_a_hand_edited_rank() {
    let text = std::fs::read_to_string(data("corpus.json")).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    let entries = v.as_array_mut().unwrap();
    let s9 = entries.iter_mut().find(|e| e["group"] == "S9").unwrap();
    s9["rank_bruteforce"] = Value::from(3);
    let p = temp_file("edited.json", &serde_json::to_string(&v).unwrap());
    let out = sylgal(&["crosscheck", "--corpus", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("1 mismatches"), "{stdout}");
    assert!(stdout.contains("S9"));
}

#[test]
fn crosscheck_empty_and_unreadable() {
    let p = temp_file("empty.json", "[]");
    let out = sylgal(&["crosscheck", "--corpus", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    assert_eq!(sylgal(&["crosscheck", "--corpus", "/nonexistent.json"]).status.code(), Some(1));
    let p = temp_file("garbage.json", "{not json");
    assert_eq!(sylgal(&["crosscheck", "--corpus", p.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn corpus_items_preserve_input_order() {
    let items = r#"[
        {"spec": {"family": "psl", "n": 2, "q": 8}, "stage": "full"},
        {"spec": {"family": "sym", "n": 4}, "stage": "rank"},
        {"spec": {"family": "psl", "n": 4, "q": 19}, "stage": "formula"},
        {"spec": {"family": "wreath_tower", "tower": [1, 1]}, "stage": "rank"}
    ]"#;
    let p = temp_file("items.json", items);
    let out = sylgal(&["corpus", "--items", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let groups: Vec<&str> = v.as_array().unwrap().iter().map(|e| e["group"].as_str().unwrap()).collect();
    assert_eq!(groups, ["PSL(2,8)", "S4", "PSL(4,19)", "C3wrC3"]);
    assert!(v[2]["order"].is_null());
    assert_eq!(v[2]["k0_formula"], 27);

    let csv = sylgal(&["corpus", "--items", p.to_str().unwrap(), "--out", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.starts_with("group,family,n,q,eps,tower,ext,stage,order,"));
}

#[test]
fn bundled_corpus_regenerates_identically() {
    let out = sylgal(&["corpus"]);
    assert_eq!(out.status.code(), Some(0));
    let bundled = std::fs::read(data("corpus.json")).unwrap();
    assert_eq!(out.stdout, bundled);
}
