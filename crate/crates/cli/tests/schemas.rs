//! Checks that every `--json` output conforms to the schema files shipped
//! under `schemas/`. The checker interprets the subset of JSON Schema
//! those files use: type, required, properties, additionalProperties,
//! items, enum, pattern.

use regex::Regex;
use serde_json::Value;
use std::fs;
use std::path::Path;
use std::process::Command;

fn mvote(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_mvote"))
        .args(args)
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "mvote {args:?} failed");
    String::from_utf8(out.stdout).unwrap()
}

fn schema(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("schemas")
        .join(name);
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn type_matches(ty: &str, value: &Value) -> bool {
    match ty {
        "object" => value.is_object(),
        "array" => value.is_array(),
        "string" => value.is_string(),
        "integer" => value.is_i64() || value.is_u64(),
        "number" => value.is_number(),
        "boolean" => value.is_boolean(),
        "null" => value.is_null(),
        _ => panic!("unknown type {ty}"),
    }
}

fn validate(schema: &Value, value: &Value, path: &str) -> Result<(), String> {
    if let Some(types) = schema.get("type") {
        let allowed: Vec<&str> = match types {
            Value::String(s) => vec![s.as_str()],
            Value::Array(ts) => ts.iter().map(|t| t.as_str().unwrap()).collect(),
            _ => panic!("bad type clause"),
        };
        if !allowed.iter().any(|t| type_matches(t, value)) {
            return Err(format!("{path}: type mismatch (want {allowed:?})"));
        }
    }
    if let Some(options) = schema.get("enum") {
        if !options.as_array().unwrap().contains(value) {
            return Err(format!("{path}: not one of {options}"));
        }
    }
    if let (Some(pattern), Some(s)) = (schema.get("pattern"), value.as_str()) {
        let re = Regex::new(pattern.as_str().unwrap()).unwrap();
        if !re.is_match(s) {
            return Err(format!("{path}: `{s}` fails pattern {pattern}"));
        }
    }
    if let Some(obj) = value.as_object() {
        if let Some(required) = schema.get("required") {
            for key in required.as_array().unwrap() {
                if !obj.contains_key(key.as_str().unwrap()) {
                    return Err(format!("{path}: missing required key {key}"));
                }
            }
        }
        let props = schema.get("properties").and_then(Value::as_object);
        let additional = schema.get("additionalProperties");
        for (key, item) in obj {
            let sub = props.and_then(|p| p.get(key));
            match (sub, additional) {
                (Some(sub), _) => validate(sub, item, &format!("{path}.{key}"))?,
                (None, Some(Value::Bool(false))) => {
                    return Err(format!("{path}: unexpected key {key}"));
                }
                (None, Some(extra)) if extra.is_object() => {
                    validate(extra, item, &format!("{path}.{key}"))?;
                }
                _ => {}
            }
        }
    }
    if let (Some(items), Some(arr)) = (schema.get("items"), value.as_array()) {
        for (i, item) in arr.iter().enumerate() {
            validate(items, item, &format!("{path}[{i}]"))?;
        }
    }
    Ok(())
}

fn assert_valid(schema_name: &str, value: &Value) {
    if let Err(e) = validate(&schema(schema_name), value, "$") {
        panic!("{schema_name}: {e}\nvalue: {value:#}");
    }
}

#[test]
fn outputs_conform_to_shipped_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let elec = dir.path().join("example.elec");
    fs::write(&elec, "election\n4 3\n0 1 2\n2 0 1\n0 2 1\n1 0 2\n").unwrap();
    let elec = elec.to_str().unwrap();

    let analyze: Value = serde_json::from_str(&mvote(&[
        "analyze",
        "--election",
        elec,
        "--rule",
        "plurality-matching",
        "--json",
    ]))
    .unwrap();
    assert_valid("analyze.schema.json", &analyze);

    let analyze_rd: Value = serde_json::from_str(&mvote(&[
        "analyze",
        "--election",
        elec,
        "--rule",
        "random-dictatorship",
        "--json",
    ]))
    .unwrap();
    assert_valid("analyze.schema.json", &analyze_rd);

    let distortion: Value = serde_json::from_str(&mvote(&[
        "distortion",
        "--election",
        elec,
        "--candidate",
        "1",
        "--alpha",
        "1/2",
        "--json",
    ]))
    .unwrap();
    assert_valid("distortion.schema.json", &distortion);

    let catalog: Value = serde_json::from_str(&mvote(&["construct", "list"])).unwrap();
    assert_valid("catalog.schema.json", &catalog);

    let out_dir = dir.path().join("inst");
    mvote(&[
        "construct",
        "appC-ties",
        "--k",
        "2",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    let facts: Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("facts.json")).unwrap()).unwrap();
    assert_valid("facts.schema.json", &facts);

    let rnd_dir = dir.path().join("rnd");
    mvote(&[
        "random",
        "--n",
        "3",
        "--m",
        "2",
        "--seed",
        "1",
        "--out",
        rnd_dir.to_str().unwrap(),
    ]);
    let info: Value =
        serde_json::from_str(&fs::read_to_string(rnd_dir.join("info.json")).unwrap()).unwrap();
    assert_valid("random-info.schema.json", &info);
}
