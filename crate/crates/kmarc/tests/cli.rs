use std::io::Write;
use std::process::{Command, Output, Stdio};

use kmarc_core::constructions::level_set;
use kmarc_core::{FieldElement, FieldTower};
use serde_json::Value;

fn kmarc(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_kmarc"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn hr_pipes_into_verify() {
    let arc = kmarc(&["construct", "recurrence", "--m", "2", "--h", "1"], None);
    assert!(arc.status.success());
    let out = kmarc(&["verify", "--method", "all"], Some(&stdout(&arc)));
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    for key in ["bracket", "d", "e"] {
        assert_eq!(doc[key]["holds"], true);
    }
    assert_eq!(doc["direct"]["verdict"], "km_arc");
    assert_eq!(doc["agree"], true);
}

#[test]
fn corrupted_arc_exits_one_with_witness() {
    let arc = kmarc(&["construct", "recurrence", "--m", "3", "--h", "1"], None);
    let mut doc: Value = serde_json::from_slice(&arc.stdout).unwrap();
    let points = doc["points"].as_array_mut().unwrap();
    let taken: Vec<String> = points
        .iter()
        .map(|p| p.as_str().unwrap().to_string())
        .collect();
    let replacement = (1..64u32)
        .map(|x| format!("{x:02x}"))
        .find(|x| !taken.contains(x))
        .unwrap();
    points[0] = Value::String(replacement);
    let out = kmarc(&["verify", "--method", "direct"], Some(&doc.to_string()));
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["direct"]["verdict"], "not_km_arc");
    assert!(report["direct"]["witness"]["line"].is_object());
}

#[test]
fn exponents_e_for_m2() {
    let out = kmarc(&["exponents", "--kind", "e", "--m", "2"], None);
    let values: Vec<u64> = serde_json::from_value(json(&out)["values"].clone()).unwrap();
    assert_eq!(values, vec![1, 2, 3, 4, 6, 8, 9, 12]);
}

#[test]
fn input_errors_exit_two() {
    let out = kmarc(&["construct", "lift", "--m", "4", "--h", "2"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("even"));
    assert_eq!(kmarc(&["verify"], Some("not json")).status.code(), Some(2));
    assert_eq!(kmarc(&["tower", "--m", "9"], None).status.code(), Some(2));
    assert_eq!(kmarc(&["frobnicate"], None).status.code(), Some(2));
}

#[test]
fn files_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let arc = dir.path().join("arc.json");
    let svg = dir.path().join("hist.svg");
    let report = dir.path().join("report.json");
    let a = arc.to_str().unwrap();
    assert!(kmarc(
        &["construct", "lift", "--m", "3", "--h", "1", "--out", a],
        None
    )
    .status
    .success());
    let out = kmarc(
        &[
            "verify",
            "--arc",
            a,
            "--jobs",
            "3",
            "--svg",
            svg.to_str().unwrap(),
            "--out",
            report.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(doc["is_km_arc"], true);
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));

    let serial = kmarc(&["verify", "--arc", a, "--method", "direct"], None);
    let threaded = kmarc(
        &["verify", "--arc", a, "--method", "direct", "--jobs", "4"],
        None,
    );
    assert_eq!(serial.stdout, threaded.stdout);

    let sec = json(&kmarc(&["secants", "--arc", a], None));
    assert_eq!(sec["secants"].as_array().unwrap().len(), 3);
    assert_eq!(sec["all_vandermonde"], true);
}

#[test]
fn random_is_reproducible() {
    let args = [
        "construct",
        "random",
        "--m",
        "3",
        "--t",
        "2",
        "--seed",
        "11",
    ];
    let a = kmarc(&args, None);
    let b = kmarc(&args, None);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["provenance"]["seed"], 11);
}

#[test]
fn autos_commands() {
    let arc = stdout(&kmarc(
        &["construct", "example", "--m", "4", "--name", "quarter"],
        None,
    ));
    for map in [
        "rotation",
        "shear",
        "dilation",
        "elation",
        "twisted-squaring",
        "shifted-conjugation",
        "theta",
        "tau",
    ] {
        let out = kmarc(&["autos", "check", "--map", map], Some(&arc));
        assert_eq!(out.status.code(), Some(0), "{map}");
        assert_eq!(json(&out)["stabilizes"], true);
    }
    let out = kmarc(&["autos", "translation"], Some(&arc));
    assert_eq!(json(&out)["class"], "translation");
    let t = FieldTower::new(4, 2, None).unwrap();
    let a = format!("{:x}", level_set(&t, FieldElement::ONE)[0].bits());
    let out = kmarc(
        &["autos", "check", "--map", "elation", "--a", &a],
        Some(&arc),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out)["witness"].is_string());
    let out = kmarc(&["autos", "closure", "--m", "2", "--example", "half"], None);
    assert_eq!(json(&out)["quotient_order"], 6);
}

#[test]
fn vandermonde_command() {
    // {1, ω, ω²} in GF(4) ⊂ GF(16): π_1 = 0.
    let out = kmarc(&["vandermonde", "--m", "2", "--points", "1,6,7"], None);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let out = kmarc(&["vandermonde", "--m", "2", "--points", "1,2,4"], None);
    assert_eq!(json(&out)["vandermonde"], false);
}
