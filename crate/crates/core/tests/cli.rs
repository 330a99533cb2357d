use gensem::io::{load_modal_model, LoadedModel};
use serde_json::{json, Value};
use std::process::{Command, Output};

fn model(name: &str) -> String {
    format!("{}/../../models/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn gensem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gensem"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_of(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--output", "json"]);
    let o = gensem(&all);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).expect("a single JSON document")
}

#[test]
fn figure1_general_value() {
    let fig1 = model("fig1.json");
    let args = [
        "eval",
        "--lang",
        "modal",
        "--model",
        &fig1,
        "--formula",
        "mu X. (p | <>X)",
        "--semantics",
        "general",
    ];
    let o = gensem(&args);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "N ∪ {∞}");
    assert_eq!(json_of(&args), json!({"kind": "cofinite", "excluded": []}));
}

#[test]
fn figure1_lfp_reports_both() {
    let fig1 = model("fig1.json");
    let out = stdout(&gensem(&["lfp", "--model", &fig1, "--formula", "mu X. (p | <>X)"]));
    assert!(out.contains("standard: N (limit"), "{out}");
    assert!(out.contains("not admissible"));
    assert!(out.contains("general: N ∪ {∞}"));
    let doc = json_of(&["lfp", "--model", &fig1, "--formula", "mu X. (p | <>X)"]);
    assert_eq!(
        doc["standard"]["limit"],
        json!({"kind": "cofinite", "excluded": [], "infinity": false})
    );
    assert_eq!(doc["standard"]["limit_admissible"], json!(false));
    assert_eq!(doc["general"], json!({"kind": "cofinite", "excluded": []}));
}

#[test]
fn translate_set_quantifier() {
    let o = gensem(&["translate", "--lang", "mso", "--formula", "exists2 X. X(y)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "existsP P. E(y,P)");
    let doc = json_of(&["translate", "--lang", "mso", "--formula", "exists2 X. X(y)"]);
    assert_eq!(doc["sets"], json!({"X": "P"}));
}

#[test]
fn non_confluent_frame() {
    let o = gensem(&["check", "--confluence", &model("frame.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "confluent: false, witness (s,t,u)");
}

#[test]
fn polyadic_against_iterated() {
    let m = model("polyadic.json");
    let poly = stdout(&gensem(&[
        "eval",
        "--lang",
        "fol",
        "--model",
        &m,
        "--formula",
        "exists (x,y). (P(x) & Q(y))",
    ]));
    let iter = stdout(&gensem(&[
        "eval",
        "--lang",
        "fol",
        "--model",
        &m,
        "--formula",
        "exists x. exists y. (P(x) & Q(y))",
    ]));
    assert!(poly.contains("(a,a): true"));
    assert!(iter.contains("(a,a): false"));
}

#[test]
fn henkin_against_standard() {
    let m = model("henkin.json");
    let f = "exists2 X. (X(x) & ~X(y))";
    let general = gensem(&[
        "eval",
        "--lang",
        "mso",
        "--model",
        &m,
        "--formula",
        f,
        "--bind",
        "x=b",
        "--bind",
        "y=c",
    ]);
    let standard = gensem(&[
        "eval",
        "--lang",
        "mso",
        "--model",
        &m,
        "--formula",
        f,
        "--bind",
        "x=b",
        "--bind",
        "y=c",
        "--semantics",
        "standard",
    ]);
    assert_eq!(stdout(&general).trim(), "false");
    assert_eq!(stdout(&standard).trim(), "true");
}

#[test]
fn represented_frame_reloads() {
    let doc = json_of(&["represent", "--algebra", &model("algebra.json")]);
    assert_eq!(doc["isomorphism"]["isomorphic"], json!(true));
    let frame = doc["frame"].to_string();
    let LoadedModel::Explicit(m) = load_modal_model(&frame, None).unwrap() else {
        panic!("explicit frame expected")
    };
    assert_eq!(m.frame().size(), 2);
}

#[test]
fn exit_codes() {
    let chain = model("chain.json");
    let missing = gensem(&[
        "eval",
        "--lang",
        "modal",
        "--model",
        "no-such-file.json",
        "--formula",
        "p",
    ]);
    assert_eq!(missing.status.code(), Some(2));
    let syntax = gensem(&["eval", "--lang", "modal", "--model", &chain, "--formula", "mu X. (p |"]);
    assert_eq!(syntax.status.code(), Some(2));
    let unknown = gensem(&["eval", "--lang", "modal", "--model", &chain, "--formula", "q"]);
    assert_eq!(unknown.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("unknown proposition letter"));
    assert_eq!(gensem(&["demo", "nope"]).status.code(), Some(2));
    assert_eq!(gensem(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(gensem(&["--help"]).status.code(), Some(0));
}

#[test]
fn json_documents_parse() {
    let cases: Vec<Vec<String>> = vec![
        vec!["lfp".into(), "--relation".into(), model("relation.json")],
        vec!["check".into(), "--frame".into(), model("coarse.json")],
        vec![
            "check".into(),
            "--henkin".into(),
            model("henkin.json"),
            "--comprehension".into(),
            "~(y = b)".into(),
        ],
        vec!["check".into(), "--algebra".into(), model("algebra.json")],
        vec!["represent".into(), "--model".into(), model("coarse.json")],
        vec![
            "eval".into(),
            "--lang".into(),
            "two_sorted".into(),
            "--model".into(),
            model("two_sorted.json"),
            "--formula".into(),
            "existsP P. E(x,P)".into(),
            "--bind".into(),
            "x=a".into(),
        ],
        vec!["demo".into(), "figure1".into()],
    ];
    for args in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let doc = json_of(&args);
        assert!(doc.is_object(), "{args:?}");
    }
}

#[test]
fn deterministic_output() {
    let args = ["check", "--frame", &model("coarse.json")];
    let a = gensem(&args);
    let b = gensem(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), b.status.code());
}

#[test]
fn demo_reports_pass() {
    let o = gensem(&["demo", "figure1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("PASS general least fixed point is N ∪ {∞}"));
    assert!(out.contains("PASS standard iteration reported as the non-admissible N"));
}

#[test]
fn config_overrides() {
    let dir = std::env::temp_dir().join(format!("gensem-config-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("config.json");
    std::fs::write(&cfg, r#"{"random": 5, "max_nodes": 4, "seed": 1}"#).unwrap();
    let cfg = cfg.to_string_lossy().to_string();
    let doc = json_of(&["--config", &cfg, "--seed", "9", "experiment", "transitive_closure"]);
    let detail = doc["suites"][0]["claims"][1]["detail"].as_str().unwrap();
    assert_eq!(detail, "seed 9");
    assert_eq!(doc["suites"][0]["claims"][1]["checked"], json!(5));
}
