use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hosphere::format::{FieldDocument, StateSpec};
use serde_json::Value;

fn hosphere(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hosphere"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = hosphere(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    hosphere(args).status.code().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const QUADRUPOLE: &[&str] = &[
    "--sphere",
    "P",
    "--theta-lambda",
    "pi/2",
    "--l",
    "-1",
    "--m",
    "1",
];

fn with(cmd: &'static str, extra: &[&'static str]) -> Vec<&'static str> {
    let mut v = vec![cmd];
    v.extend_from_slice(QUADRUPOLE);
    v.extend_from_slice(extra);
    v
}

fn spec_file(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("spec.json");
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn field_csv_and_json_agree() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("f.csv");
    let mut args = with("field", &[]);
    args.extend(["--out", s(&csv_path)]);
    ok(&args);
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert!(csv.starts_with("phi,s1,s2,s3\n"));
    assert_eq!(csv.lines().count(), 65);

    let json = ok(&with("field", &["--format", "json"]));
    let doc = FieldDocument::from_json(&json).unwrap();
    assert_eq!(doc.rows, FieldDocument::from_csv(&csv).unwrap().rows);
    for r in &doc.rows {
        let (s2, c2) = (2.0 * r[0]).sin_cos();
        assert!(r[1].abs() < 1e-12 && (r[2] + s2).abs() < 1e-12 && (r[3] - c2).abs() < 1e-12);
    }
}

#[test]
fn field_is_reproducible() {
    let a = ok(&with("field", &["--format", "csv", "--samples", "40"]));
    let b = ok(&with("field", &["--format", "csv", "--samples", "40"]));
    assert_eq!(a, b);
}

#[test]
fn spec_file_and_flags_match() {
    let dir = tempfile::tempdir().unwrap();
    let spec = spec_file(
        dir.path(),
        r#"{"sphere":"P","theta_lambda":"pi/2","phi_lambda":0,"l":-1,"m":1,"theta":0,"phi":0}"#,
    );
    let from_file = ok(&["field", "--spec", s(&spec)]);
    assert_eq!(from_file, ok(&with("field", &[])));
}

#[test]
fn ring_report() {
    let v: Value = serde_json::from_str(&ok(&with("ring", &["--samples", "128"]))).unwrap();
    assert_eq!(v["samples"], 128);
    assert_eq!(v["analytic"]["winding"].as_i64().unwrap().abs(), 2);
    assert_eq!(v["winding_agrees"], true);
    assert!(v["max_discrepancy"].as_f64().unwrap() < 1e-9);
    assert!((v["fitted"]["radius"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn precess_exact_and_numeric() {
    let exact: Value = serde_json::from_str(&ok(&with(
        "precess",
        &["--axis", "0,1,0", "--t1", "3pi/2", "--samples", "16"],
    )))
    .unwrap();
    let snaps = exact["snapshots"].as_array().unwrap();
    assert_eq!(snaps.len(), 4);
    for snap in snaps {
        let t = snap["t"].as_f64().unwrap();
        for row in snap["rows"].as_array().unwrap() {
            let r: Vec<f64> = serde_json::from_value(row.clone()).unwrap();
            let (s2, c2) = (2.0 * r[0]).sin_cos();
            assert!((r[1] - c2 * t.sin()).abs() < 1e-10);
            assert!((r[2] + s2).abs() < 1e-10);
            assert!((r[3] - c2 * t.cos()).abs() < 1e-10);
        }
    }
    assert!(exact.get("max_numeric_deviation").is_none());

    let numeric: Value = serde_json::from_str(&ok(&with(
        "precess",
        &[
            "--axis",
            "0,0.6,0.8",
            "--t1",
            "pi",
            "--frames",
            "2",
            "--method",
            "numeric",
            "--steps",
            "2000",
            "--samples",
            "16",
        ],
    )))
    .unwrap();
    assert_eq!(numeric["method"], "numeric");
    assert!(numeric["max_numeric_deviation"].as_f64().unwrap() < 1e-8);
}

#[test]
fn transfer_relabels_sphere() {
    let dir = tempfile::tempdir().unwrap();
    let spec = spec_file(
        dir.path(),
        r#"{"sphere":"P","theta_lambda":1.0,"phi_lambda":2.0,"l":3,"m":-2,"theta":0.5,"phi":"pi"}"#,
    );
    let out = StateSpec::from_json(&ok(&["transfer", "--input", s(&spec)])).unwrap();
    let input = StateSpec::from_json(&std::fs::read_to_string(&spec).unwrap()).unwrap();
    assert_eq!(out.sphere.to_string(), "B");
    assert_eq!(
        StateSpec {
            sphere: input.sphere,
            ..out
        },
        input
    );

    let spin = spec_file(dir.path(), &out.to_json());
    assert_eq!(code(&["transfer", "--input", s(&spin)]), 2);
}

#[test]
fn render_from_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    for (name, format) in [("f.csv", "csv"), ("f.json", "json")] {
        let field = dir.path().join(name);
        let mut args = with("field", &["--format"]);
        args.extend([format, "--out", s(&field)]);
        ok(&args);
        for style in ["arrows", "ellipses"] {
            let svg = dir.path().join(format!("{name}.{style}.svg"));
            ok(&[
                "render",
                "--input",
                s(&field),
                "--style",
                style,
                "--out",
                s(&svg),
            ]);
            let text = std::fs::read_to_string(&svg).unwrap();
            assert_eq!(text.matches("class=\"glyph\"").count(), 64);
        }
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&["state", "--theta", "4", "--phi", "0"]), 2);
    assert_eq!(code(&["state", "--theta", "abc", "--phi", "0"]), 2);
    assert_eq!(code(&["bogus"]), 2);
    let bad = spec_file(dir.path(), "{\"sphere\":\"Q\"}");
    assert_eq!(code(&["field", "--spec", s(&bad)]), 2);
    assert_eq!(code(&with("field", &["--samples", "4"])), 2);
    assert_eq!(
        code(&with(
            "precess",
            &["--axis", "1,0,0", "--t1", "100", "--method", "numeric", "--steps", "10"]
        )),
        3
    );
    let missing = dir.path().join("nope").join("out.csv");
    let mut args = with("field", &["--out"]);
    args.push(s(&missing));
    assert_eq!(code(&args), 4);
    assert_eq!(
        code(&[
            "render",
            "--input",
            s(&dir.path().join("absent.csv")),
            "--out",
            "x.svg"
        ]),
        4
    );
}
