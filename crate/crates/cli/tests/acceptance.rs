//! Acceptance criteria exercised through the `sabar` binary: the torus and
//! disk sub-level fixtures.

use std::process::Command;
use std::time::Instant;

use sabar_core::filtration::parse_thom_json;
use sabar_core::rational::{parse_rational, q_ratio, Q};
use sabar_core::thom::ThomEncoding;
use sabar_core::unipoly::UniPoly;

fn run_sublevel(args: &[&str], json_path: &std::path::Path) -> serde_json::Value {
    let out = Command::new(env!("CARGO_BIN_EXE_sabar"))
        .args(args)
        .arg("--json")
        .arg(json_path)
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "sabar failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(json_path).expect("json written");
    serde_json::from_str(&text).expect("valid json")
}

/// The bar's birth must be a Thom encoding whose isolating interval has
/// width at most 1/1000 and contains the integer `target`.
fn assert_birth_at(bar: &serde_json::Value, target: i64) {
    let birth = &bar["birth"];
    assert!(birth.is_object(), "birth should be a Thom encoding: {bar}");
    let (encoding, (lo, hi)) = parse_thom_json(&birth.to_string()).expect("thom json");
    assert!(
        &hi - &lo <= q_ratio(1, 1000),
        "isolating interval wider than 1e-3"
    );
    let linear = UniPoly::new(
        encoding.poly().var(),
        vec![Q::from_integer((-target).into()), Q::from_integer(1.into())],
    );
    assert_eq!(
        encoding.sign_of(&linear),
        0,
        "birth is not exactly {target}"
    );
    let t = ThomEncoding::from_rational(encoding.poly().var(), &parse_rational(&target.to_string()).unwrap());
    assert!(encoding.is_same_root(&t));
    assert_eq!(bar["death"], serde_json::json!("inf"));
    assert_eq!(bar["mult"], serde_json::json!(1));
}

#[test]
fn criterion_2_torus_reproduction() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("torus.json");
    let g = "(x^2 + y^2 + z^2 + 3)^2 - 16*(x^2 + y^2)";
    let doc = run_sublevel(
        &[
            "barcode",
            "sublevel",
            "--formula",
            &format!("({g} <= 0) & ({g} >= 0)"),
            "--poly",
            "x",
            "--radius",
            "24/7",
            "--max-dim",
            "2",
            "--grid",
            "48",
        ],
        &json_path,
    );
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < 120,
        "torus run exceeded 120 s: {elapsed:?}"
    );
    let codes = doc.as_array().unwrap();
    assert_eq!(codes.len(), 3);
    let bars = |p: usize| codes[p]["bars"].as_array().unwrap();
    assert_eq!(bars(0).len(), 1, "B_0 must have one bar");
    assert_eq!(bars(1).len(), 2, "B_1 must have two bars");
    assert_eq!(bars(2).len(), 1, "B_2 must have one bar");
    assert_birth_at(&bars(0)[0], -3);
    assert_birth_at(&bars(1)[0], -1);
    assert_birth_at(&bars(1)[1], 1);
    assert_birth_at(&bars(2)[0], 3);
    println!(
        "[PASS] criterion 2: torus barcodes |B_0|=1, |B_1|=2, |B_2|=1, deaths infinite, \
         births exactly at -3, -1, 1, 3 with isolating widths <= 1e-3 ({elapsed:?})"
    );
}

#[test]
fn criterion_5_disk_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("disk.json");
    let doc = run_sublevel(
        &[
            "barcode",
            "sublevel",
            "--formula",
            "(x^2 + y^2 - 1 <= 0)",
            "--poly",
            "x",
            "--radius",
            "4",
            "--max-dim",
            "1",
            "--grid",
            "32",
        ],
        &json_path,
    );
    let codes = doc.as_array().unwrap();
    assert_eq!(codes.len(), 2);
    let b0 = codes[0]["bars"].as_array().unwrap();
    assert_eq!(b0.len(), 1, "B_0 must be exactly one bar");
    assert_birth_at(&b0[0], -1);
    let b1 = codes[1]["bars"].as_array().unwrap();
    assert!(b1.is_empty(), "B_1 must be empty");
    println!(
        "[PASS] criterion 5: disk gives B_0 = {{(-1, inf, 1)}} with the birth reported as \
         the Thom encoding of -1, and B_1 empty"
    );
}
