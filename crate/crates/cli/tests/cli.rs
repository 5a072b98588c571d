use pitree::export::{from_jsonl, to_jsonl};
use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn cfg(name: &str) -> String {
    configs().join(name).to_string_lossy().into_owned()
}

fn pitree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pitree")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("report is json")
}

fn status_of<'a>(r: &'a Value, check: &str) -> Option<&'a str> {
    r["entries"].as_array()?.iter().find(|e| e["check"] == check)?["status"].as_str()
}

#[test]
fn build_jsonl_lists_every_node_below_depth() {
    let o = pitree(&["build", "--config", &cfg("standard.json"), "--depth", "3", "--sons", "2"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    // 1 + 2 + 4 nodes
    assert_eq!(text.lines().count(), 7);
    let first: Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(first["height"], 0);
    assert_eq!(first["path"], serde_json::json!([]));
}

#[test]
fn jsonl_round_trips_byte_for_byte() {
    for c in ["sorgenfrey.json", "product2_sorg.json", "cocountable_sorg.json"] {
        let o = pitree(&["build", "--config", &cfg(c), "--depth", "3", "--sons", "3"]);
        assert_eq!(code(&o), 0, "{c}");
        let text = String::from_utf8(o.stdout).unwrap();
        let back = to_jsonl(&from_jsonl(&text).unwrap());
        assert_eq!(back, text, "{c}");
    }
}

#[test]
fn build_dot_is_a_digraph_with_ellipses() {
    let o = pitree(&["build", "--config", &cfg("standard.json"), "--depth", "2", "--sons", "2", "--format", "dot"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("digraph"));
    assert!(text.contains("n_ -> n_0"));
    assert!(text.contains('…'));
    assert!(text.trim_end().ends_with('}'));
}

#[test]
fn baire_check_passes_on_sound_trees() {
    for c in ["standard.json", "sorgenfrey.json", "product2_sorg.json"] {
        let o = pitree(&["check", "--config", &cfg(c), "--suite", "baire", "--depth", "4", "--sons", "8"]);
        assert_eq!(code(&o), 0, "{c}");
        assert_eq!(report(&o)["status"], "pass");
    }
}

#[test]
fn corrupted_tree_exits_one_with_witness() {
    let o = pitree(&["check", "--config", &cfg("corrupted.json"), "--suite", "baire", "--depth", "4", "--sons", "8"]);
    assert_eq!(code(&o), 1);
    let r = report(&o);
    let bad = r["entries"].as_array().unwrap().iter().find(|e| e["status"] == "fail").expect("a failing entry");
    assert_eq!(bad["clause"], "local-strictness");
    assert!(bad["witness"]["node"].is_array());
}

#[test]
fn bad_config_exits_two() {
    let dir = std::env::temp_dir().join(format!("pitree-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"nope": 1}"#).unwrap();
    let o = pitree(&["check", "--config", bad.to_str().unwrap(), "--suite", "baire"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown term"));
    let o = pitree(&["check", "--config", &cfg("missing.json"), "--suite", "baire"]);
    assert_eq!(code(&o), 2);
    let o = pitree(&["rise", "--config", &cfg("standard.json"), "--point", "{", "--nbhd", "\"empty\""]);
    assert_eq!(code(&o), 2);
}

#[test]
fn theorem2_on_plain_tree_exits_two() {
    let o = pitree(&["check", "--config", &cfg("sorgenfrey.json"), "--suite", "theorem2"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn shallow_fip_is_inconclusive() {
    let o = pitree(&["check", "--config", &cfg("standard.json"), "--suite", "fip", "--depth", "1"]);
    assert_eq!(code(&o), 3);
    let r = report(&o);
    assert_eq!(r["status"], "undecided");
    assert!(r["entries"][0]["detail"].as_str().unwrap().contains("depth-limited"));
}

#[test]
fn rise_prints_truncated_heights() {
    let o = pitree(&[
        "rise",
        "--config",
        &cfg("standard.json"),
        "--point",
        r#"{"baire":{"prefix":[],"tail":[0]}}"#,
        "--nbhd",
        r#"{"cyl":[0,0]}"#,
        "--depth",
        "6",
    ]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("{2,3,4,5}"), "{text}");
}

#[test]
fn cocountable_grows_into_cites_odd_rise() {
    let o = pitree(&[
        "check",
        "--config",
        &cfg("cocountable_sorg.json"),
        "--suite",
        "grows-into",
        "--samples",
        &cfg("samples.json"),
    ]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert_eq!(status_of(&r, "odd-rise"), Some("pass"));
    assert_eq!(status_of(&r, "odd-tail"), Some("pass"));
    assert_eq!(status_of(&r, "rise-nonempty"), Some("pass"));
}

#[test]
fn hybrid_oracle_needs_no_config() {
    let o = pitree(&["check", "--suite", "hybrid-oracle", "--seed", "7"]);
    assert_eq!(code(&o), 0);
    assert_eq!(report(&o)["status"], "pass");
}

#[test]
fn pipeline_theorem2_passes() {
    let o = pitree(&["check", "--config", &cfg("pipeline_sorg_sorg.json"), "--suite", "theorem2", "--depth", "4", "--sons", "8"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
}
