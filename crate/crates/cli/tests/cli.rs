use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn icosa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_icosa"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn verify_raga_matches_all_72() {
    let out = icosa(&["verify", "raga"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("72/72 scales matched"));
}

#[test]
fn enumerate_intra_json_records() {
    let out = icosa(&["enumerate", "intra", "--base", "type1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let records = json(&out);
    let records = records.as_array().unwrap();
    assert_eq!(records.len(), 720);
    let intermediate = records
        .iter()
        .filter(|r| r["intermediate"] == Value::Bool(true))
        .count();
    assert_eq!(intermediate, 718);
    assert!(records
        .iter()
        .all(|r| r["n_chromatic"].as_u64().unwrap() + r["n_pythagorean"].as_u64().unwrap() == 12));
}

fn write_corrupted_type1(dir: &Path) {
    // type 1 with D and F# traded on the hexagon
    let file = r#"{"label": "type1", "tones": {
        "h0": "C", "h1": "F#", "h2": "E", "h3": "D", "h4": "G#", "h5": "Bb",
        "s0": "C#", "s1": "Eb", "s2": "F", "s3": "G", "s4": "A", "s5": "B"}}"#;
    std::fs::write(dir.join("type1.json"), file).unwrap();
}

#[test]
fn corrupted_bundled_type_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    write_corrupted_type1(dir.path());
    let types_dir = dir.path().to_str().unwrap();
    let out = icosa(&["--types-dir", types_dir, "verify", "inter"]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    assert!(stdout(&out).contains("[FAIL]"));

    let file = dir.path().join("type1.json");
    let out = icosa(&["verify", "type1", "--base", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(icosa(&["verify", "everything"]).status.code(), Some(2));
    assert_eq!(
        icosa(&["enumerate", "inter", "--base", "type9"])
            .status
            .code(),
        Some(2)
    );
    let out = icosa(&["diagram", "projection", "--mask", "7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--mask"));
    assert_eq!(
        icosa(&["diagram", "circles", "--type", "E"]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_all_reports_only_the_orbit_check() {
    let out = icosa(&["verify", "all", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["passed"], Value::Bool(false));
    let failed: Vec<String> = report["reports"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|r| r["checks"].as_array().unwrap().clone())
        .filter(|c| c["passed"] == Value::Bool(false))
        .map(|c| c["name"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(
        failed,
        ["ungauged solutions equal the automorphism orbit of the base"]
    );
}

#[test]
fn inter_classes_csv() {
    let out = icosa(&["--csv", "enumerate", "inter", "--classes"]);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 14);
    assert!(text.contains("3,\"{0,2,4}\",2,9,6,6"));
}

#[test]
fn extend_json_covers_the_catalog() {
    let out = icosa(&[
        "extend",
        "--scale",
        "c_major",
        "--types",
        "RA,RB,RC,RD",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["size"], 72);
    let scales = v["scales"].as_array().unwrap();
    assert!(scales.iter().all(|s| s["raga_index"].is_u64()));

    let single = json(&icosa(&["extend", "--types", "RA", "--json"]));
    assert_eq!(single["size"], 32);
}

#[test]
fn solve_with_gauge_finds_type1() {
    let dir = tempfile::tempdir().unwrap();
    let constraints = dir.path().join("c.json");
    let gauge = dir.path().join("g.json");
    std::fs::write(
        &constraints,
        r#"[{"scale": "chromatic", "required": 12}, {"scale": "W1", "required": 6}, {"scale": "W2", "required": 0}]"#,
    )
    .unwrap();
    std::fs::write(&gauge, r#"{"C": "h0", "D": "h1", "C#": "s0"}"#).unwrap();
    let out = icosa(&[
        "solve",
        "--constraints",
        constraints.to_str().unwrap(),
        "--gauge",
        gauge.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let type1 = serde_json::json!({
        "h0": "C", "h1": "D", "h2": "E", "h3": "F#", "h4": "G#", "h5": "Bb",
        "s0": "C#", "s1": "Eb", "s2": "F", "s3": "G", "s4": "A", "s5": "B"
    });
    assert!(v["solutions"]
        .as_array()
        .unwrap()
        .iter()
        .any(|s| s["tones"] == type1));

    let canonical = json(&icosa(&[
        "solve",
        "--constraints",
        constraints.to_str().unwrap(),
        "--canonical",
        "--json",
    ]));
    assert_eq!(canonical["count"], 2);
}

#[test]
fn diagrams_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("circles.svg");
    let out = icosa(&[
        "diagram",
        "circles",
        "--type",
        "C",
        "--mask",
        "1,3",
        "--out",
        svg.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["count"], "15");
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<?xml"));

    let gallery = dir.path().join("gallery");
    let out = icosa(&[
        "diagram",
        "raga-gallery",
        "--out",
        gallery.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(&gallery).unwrap().count(), 72);
    assert!(gallery.join("raga_65_Mechakalyani.svg").exists());

    let projection = icosa(&["diagram", "projection", "--pairs", "--mask", "0"]);
    assert_eq!(stdout(&projection).matches("<ellipse").count(), 6);
}
