use std::path::PathBuf;

use kitaev::cli::{run, ModelDocument, EXIT_CLEAN, EXIT_INPUT, EXIT_VIOLATION};
use serde_json::Value;

fn model(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "examples", "models", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn kitaev(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("kitaev").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap() + &String::from_utf8(err).unwrap())
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn validate_accepts_the_toric_code() {
    let (code, out) = kitaev(&["validate", &model("toric_code_sphere.json")]);
    assert_eq!(code, EXIT_CLEAN, "{out}");
    let v = json(&out);
    assert_eq!(v["violations"], 0);
    assert_eq!(v["surface"]["euler_characteristic"], 2);
}

#[test]
fn validate_lists_a_hopf_side_mismatch() {
    let (code, out) = kitaev(&["validate", &model("hopf_mismatch.json")]);
    assert_eq!(code, EXIT_VIOLATION);
    let v = json(&out);
    let failed = &v["labeling"]["checks"][0];
    assert_eq!(failed["name"], "edge Hopf sides");
    assert!(failed["detail"].as_str().unwrap().contains("edge 1"));
}

#[test]
fn malformed_documents_are_input_errors() {
    let (code, out) = kitaev(&["validate", &model("malformed.json")]);
    assert_eq!(code, EXIT_INPUT);
    assert!(json(&out)["error"].as_str().unwrap().starts_with("schema"));
    assert_eq!(kitaev(&["validate", "/nonexistent/model.json"]).0, EXIT_INPUT);
    assert_eq!(kitaev(&["transmogrify"]).0, EXIT_INPUT);
}

#[test]
fn unresolved_names_are_input_errors() {
    let text = r#"{ "surface": "digon_sphere",
        "labels": { "plaquettes": "H", "edges": "K", "vertices": "unit" } }"#;
    let err = ModelDocument::parse(text).unwrap().resolve().unwrap_err();
    assert!(err.contains("unknown Hopf algebra \"H\""), "{err}");
    let cyclic = r#"{ "hopf": { "A": { "dual": "B" }, "B": { "dual": "A" } }, "surface": "digon_sphere",
        "labels": { "plaquettes": "A", "edges": [], "vertices": "unit" } }"#;
    assert!(ModelDocument::parse(cyclic).unwrap().resolve().unwrap_err().contains("refers to itself"));
}

#[test]
fn rationals_are_read_from_strings() {
    let text = r#"{
        "hopf": { "H": { "explicit": {
            "labels": ["e", "g"],
            "mult": [[0, 0, 0, "1"], [0, 1, 1, "1"], [1, 0, 1, "1"], [1, 1, 0, "1"]],
            "unit": ["1", "0/3"],
            "comult": [[0, 0, 0, "2/2"], [1, 1, 1, "1"]],
            "counit": ["1", "1"],
            "antipode": [[0, 0, "-1/-1"], [1, 1, 1]] } } },
        "bicomodules": { "K": { "regular": "H" } },
        "surface": "valence_one_sphere",
        "labels": { "plaquettes": "H", "edges": "K", "vertices": "unit" } }"#;
    let m = ModelDocument::parse(text).unwrap().resolve().unwrap();
    assert_eq!(*m.hopf["H"], kitaev::hopf::group_algebra(&kitaev::hopf::GroupTable::cyclic(2)));
    let bad = text.replace("\"2/2\"", "\"1/0\"");
    assert!(ModelDocument::parse(&bad).unwrap().resolve().unwrap_err().contains("malformed rational"));
}

#[test]
fn check_is_deterministic() {
    let path = model("toric_code_torus.json");
    let (code, first) = kitaev(&["check", &path]);
    assert_eq!(code, EXIT_CLEAN, "{first}");
    let (_, second) = kitaev(&["check", &path]);
    assert_eq!(first, second);
    let v = json(&first);
    assert_eq!(v["violations"], 0);
    assert_eq!(v["total_dimension"], 1024);
    assert_eq!(v["seed"], 7);
    let (_, reseeded) = kitaev(&["check", &path, "--seed", "11"]);
    assert_eq!(json(&reseeded)["seed"], 11);
}

#[test]
fn check_warns_on_the_one_by_one_torus() {
    let (code, out) = kitaev(&["check", &model("non_regular_torus.json")]);
    assert_eq!(code, EXIT_CLEAN);
    let warnings = &json(&out)["operators"]["warnings"];
    assert!(warnings[0].as_str().unwrap().starts_with("commutation not checked"));
}

#[test]
fn check_respects_the_guard() {
    let (code, out) = kitaev(&["check", &model("toric_code_torus.json"), "--max-dim", "1000"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(out.contains("exceeds the guard limit 1000"));
}

#[test]
fn ground_dimensions() {
    let (code, out) = kitaev(&["ground-dim", &model("toric_code_torus.json")]);
    assert_eq!(code, EXIT_CLEAN, "{out}");
    let v = json(&out);
    assert_eq!((v["dimension"].as_u64(), v["method"].as_str()), (Some(4), Some("both")));
    let (code, out) = kitaev(&["ground-dim", &model("toric_code_sphere.json"), "--force", "--method", "trace"]);
    assert_eq!(code, EXIT_CLEAN, "{out}");
    assert_eq!(json(&out)["dimension"], 1);
    let (_, out) = kitaev(&["ground-dim", &model("explicit_z2.json")]);
    assert_eq!(json(&out)["dimension"], 1);
}

#[test]
fn ground_dim_requires_a_clean_check() {
    let (code, out) = kitaev(&["ground-dim", &model("hopf_mismatch.json")]);
    assert_eq!(code, EXIT_VIOLATION);
    assert!(json(&out)["error"].as_str().unwrap().contains("does not match"));
}

#[test]
fn report_writes_every_section() {
    let dir = std::env::temp_dir().join(format!("kitaev-report-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("report.json");
    let (code, msg) = kitaev(&["report", &model("toric_code_torus.json"), "--out", out.to_str().unwrap()]);
    assert_eq!(code, EXIT_CLEAN, "{msg}");
    let v = json(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(v["validate"]["violations"], 0);
    assert_eq!(v["check"]["violations"], 0);
    assert_eq!(v["ground_dim"]["dimension"], 4);
    std::fs::remove_dir_all(&dir).unwrap();
}
