//! End-to-end tests of the binary: exit codes, determinism, the catalog
//! round trip, and JSON validation against the shipped schema.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fano3"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 output")
}

#[test]
fn catalog_verify_succeeds() {
    let out = run(&["catalog", "--verify"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("varieties + 2 auxiliary rings OK"), "{text}");
}

#[test]
fn catalog_listing_shows_entries() {
    let out = run(&["catalog"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for id in ["P3", "Q3", "V5", "F62", "F63", "F7", "Prime12"] {
        assert!(text.contains(id), "missing {id} in listing");
    }
}

#[test]
fn catalog_export_round_trips_and_corruption_fails() {
    let dir = std::env::temp_dir().join("fano3-cli-test");
    std::fs::create_dir_all(&dir).unwrap();

    let export = run(&["catalog", "--export"]);
    assert!(export.status.success());
    let doc = stdout(&export);
    let path = dir.join("catalog.json");
    std::fs::write(&path, &doc).unwrap();

    let import = run(&["catalog", "--import", path.to_str().unwrap()]);
    assert!(import.status.success(), "round trip must validate");
    assert!(stdout(&import).contains("catalog import OK"));

    // corrupt one multiplication-table coefficient and re-import
    let mut parsed: Value = serde_json::from_str(&doc).unwrap();
    let coeff = &mut parsed["varieties"][0]["ring"]["products"][0][2][0][0];
    assert_eq!(coeff, &Value::String("1".into()));
    *coeff = Value::String("2".into());
    let bad_path = dir.join("catalog-corrupt.json");
    std::fs::write(&bad_path, serde_json::to_string(&parsed).unwrap()).unwrap();
    let bad = run(&["catalog", "--import", bad_path.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1), "corrupted build must exit 1");
}

#[test]
fn report_p3_includes_moduli_dimension() {
    let out = run(&["report", "P3", "--eps", "1", "--k", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("moduli_dim: \"27\""), "{text}");
}

#[test]
fn report_inadmissible_exits_2_naming_the_bound() {
    let out = run(&["report", "F62", "--eps", "1", "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bound 4"), "{err}");

    let unknown = run(&["report", "X9", "--eps", "0", "--k", "2"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn json_reports_validate_against_shipped_schema() {
    let schema_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json");
    let schema: Value =
        serde_json::from_str(&std::fs::read_to_string(schema_path).unwrap()).unwrap();

    let cases: Vec<Vec<&str>> = vec![
        vec!["catalog", "--json"],
        vec!["report", "Q3", "--eps", "0", "--k", "2", "--json"],
        vec!["monad", "sample", "--k", "2", "--seed", "7", "--json"],
        vec!["monad", "scan", "--k", "2", "--seed", "7", "--lines", "20", "--json"],
        vec!["monad", "pencil", "--k", "4", "--seed", "9", "--json"],
    ];
    for case in cases {
        let out = run(&case);
        assert!(out.status.success(), "{case:?}");
        let value: Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
        validate(&schema, &value).unwrap_or_else(|e| panic!("{case:?}: {e}"));
    }
}

#[test]
fn monad_sample_is_verified_and_deterministic() {
    let a = run(&["monad", "sample", "--k", "2", "--seed", "7", "--json"]);
    let b = run(&["monad", "sample", "--k", "2", "--seed", "7", "--json"]);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b), "byte-identical for equal seeds");
    let v: Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["results"]["verify_passed"], Value::Bool(true));
    assert_eq!(v["results"]["monad"]["k"], 2);

    let c = run(&["monad", "sample", "--k", "2", "--seed", "8", "--json"]);
    assert_ne!(stdout(&a), stdout(&c), "different seeds differ");
}

#[test]
fn monad_scan_reports_counts() {
    let out = run(&[
        "monad", "scan", "--k", "2", "--seed", "7", "--lines", "30", "--workers", "2", "--json",
    ]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let hist: i64 = v["results"]["histogram"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_i64().unwrap())
        .sum();
    assert_eq!(hist, 30);
}

#[test]
fn monad_pencil_reports_distinct_roots() {
    let out = run(&["monad", "pencil", "--k", "4", "--seed", "9", "--json"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["results"]["degree"], 4);
    assert!(v["results"]["distinct_roots"].as_u64().unwrap() <= 4);
}

#[test]
fn monad_rejects_unsupported_quantum() {
    let out = run(&["monad", "sample", "--k", "6", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn text_and_json_agree_on_numbers() {
    let text = stdout(&run(&["report", "F7", "--eps", "1", "--k", "4"]));
    let json_out = stdout(&run(&["report", "F7", "--eps", "1", "--k", "4", "--json"]));
    let v: Value = serde_json::from_str(&json_out).unwrap();
    let moduli = v["results"]["moduli_dim"].as_str().unwrap();
    assert_eq!(moduli, "6");
    assert!(text.contains("moduli_dim: \"6\""));
    let balance = v["results"]["ext_balance"].as_str().unwrap();
    assert!(text.contains(&format!("ext_balance: \"{balance}\"")));
}

// --- a minimal JSON-schema checker covering the subset the schema uses ---

fn validate(schema: &Value, value: &Value) -> Result<(), String> {
    validate_node(schema, schema, value, "$")
}

fn validate_node(root: &Value, schema: &Value, value: &Value, path: &str) -> Result<(), String> {
    if let Some(reference) = schema.get("$ref").and_then(Value::as_str) {
        let target = resolve_ref(root, reference)
            .ok_or_else(|| format!("{path}: unresolvable $ref {reference}"))?;
        return validate_node(root, target, value, path);
    }
    if let Some(one_of) = schema.get("oneOf").and_then(Value::as_array) {
        let matches = one_of
            .iter()
            .filter(|s| validate_node(root, s, value, path).is_ok())
            .count();
        if matches != 1 {
            return Err(format!("{path}: oneOf matched {matches} branches"));
        }
        return Ok(());
    }
    if let Some(ty) = schema.get("type").and_then(Value::as_str) {
        let ok = match ty {
            "object" => value.is_object(),
            "array" => value.is_array(),
            "string" => value.is_string(),
            "integer" => value.is_i64() || value.is_u64(),
            "number" => value.is_number(),
            "boolean" => value.is_boolean(),
            "null" => value.is_null(),
            other => return Err(format!("{path}: unsupported type {other}")),
        };
        if !ok {
            return Err(format!("{path}: expected {ty}, got {value}"));
        }
    }
    if let Some(enum_vals) = schema.get("enum").and_then(Value::as_array) {
        if !enum_vals.contains(value) {
            return Err(format!("{path}: {value} not in enum"));
        }
    }
    if let Some(pattern) = schema.get("pattern").and_then(Value::as_str) {
        let s = value
            .as_str()
            .ok_or_else(|| format!("{path}: pattern on non-string"))?;
        if !matches_simple_pattern(pattern, s) {
            return Err(format!("{path}: `{s}` fails pattern {pattern}"));
        }
    }
    if let Some(required) = schema.get("required").and_then(Value::as_array) {
        let obj = value
            .as_object()
            .ok_or_else(|| format!("{path}: required on non-object"))?;
        for key in required {
            let key = key.as_str().unwrap();
            if !obj.contains_key(key) {
                return Err(format!("{path}: missing required key {key}"));
            }
        }
    }
    if let Some(props) = schema.get("properties").and_then(Value::as_object) {
        if let Some(obj) = value.as_object() {
            for (key, sub) in props {
                if let Some(v) = obj.get(key) {
                    validate_node(root, sub, v, &format!("{path}.{key}"))?;
                }
            }
            if schema.get("additionalProperties") == Some(&Value::Bool(false)) {
                for key in obj.keys() {
                    if !props.contains_key(key) {
                        return Err(format!("{path}: unexpected key {key}"));
                    }
                }
            }
        }
    }
    if let Some(items) = schema.get("items") {
        if let Some(arr) = value.as_array() {
            for (i, v) in arr.iter().enumerate() {
                validate_node(root, items, v, &format!("{path}[{i}]"))?;
            }
        }
    }
    Ok(())
}

fn resolve_ref<'a>(root: &'a Value, reference: &str) -> Option<&'a Value> {
    let path = reference.strip_prefix("#/")?;
    let mut node = root;
    for part in path.split('/') {
        node = node.get(part)?;
    }
    Some(node)
}

/// Supports the two patterns the schema uses: a hex fingerprint and a
/// rendered rational.
fn matches_simple_pattern(pattern: &str, s: &str) -> bool {
    match pattern {
        "^[0-9a-f]{16}$" => s.len() == 16 && s.chars().all(|c| c.is_ascii_hexdigit() && !c.is_ascii_uppercase()),
        "^-?[0-9]+(/[0-9]+)?$" => {
            let body = s.strip_prefix('-').unwrap_or(s);
            match body.split_once('/') {
                None => !body.is_empty() && body.chars().all(|c| c.is_ascii_digit()),
                Some((n, d)) => {
                    !n.is_empty()
                        && !d.is_empty()
                        && n.chars().all(|c| c.is_ascii_digit())
                        && d.chars().all(|c| c.is_ascii_digit())
                }
            }
        }
        _ => true, // unknown patterns are not asserted
    }
}
