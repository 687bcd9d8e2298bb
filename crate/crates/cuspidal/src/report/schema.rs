//! Structural validation of reports against the shipped JSON schema.
//!
//! The checker interprets the small schema subset the shipped file uses:
//! type, required, properties, items, enum, and additionalProperties with
//! a schema value. Kept in-tree so validation needs no extra dependency.

use serde_json::Value;

use crate::error::{Error, Result};

pub const REPORT_SCHEMA: &str = include_str!("../../schema/report.schema.json");

fn type_matches(name: &str, v: &Value) -> bool {
    match name {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        "number" => v.is_number(),
        "integer" => v.as_i64().is_some() || v.as_u64().is_some(),
        _ => false,
    }
}

fn check(schema: &Value, v: &Value, path: &str, errors: &mut Vec<String>) {
    if let Some(ty) = schema.get("type") {
        let names: Vec<&str> = match ty {
            Value::String(s) => vec![s.as_str()],
            Value::Array(xs) => xs.iter().filter_map(Value::as_str).collect(),
            _ => vec![],
        };
        if !names.is_empty() && !names.iter().any(|n| type_matches(n, v)) {
            errors.push(format!("{path}: expected type {names:?}"));
            return;
        }
    }
    if let Some(allowed) = schema.get("enum").and_then(Value::as_array) {
        if !allowed.contains(v) {
            errors.push(format!("{path}: value not in enum"));
        }
    }
    if let Some(obj) = v.as_object() {
        if let Some(req) = schema.get("required").and_then(Value::as_array) {
            for key in req.iter().filter_map(Value::as_str) {
                if !obj.contains_key(key) {
                    errors.push(format!("{path}: missing required key {key:?}"));
                }
            }
        }
        let props = schema.get("properties").and_then(Value::as_object);
        if let Some(props) = props {
            for (key, sub) in props {
                if let Some(child) = obj.get(key) {
                    check(sub, child, &format!("{path}.{key}"), errors);
                }
            }
        }
        if let Some(extra) = schema.get("additionalProperties") {
            if extra.is_object() {
                for (key, child) in obj {
                    let covered = props.map(|p| p.contains_key(key)).unwrap_or(false);
                    if !covered {
                        check(extra, child, &format!("{path}.{key}"), errors);
                    }
                }
            }
        }
    }
    if let (Some(items), Some(xs)) = (schema.get("items"), v.as_array()) {
        for (i, child) in xs.iter().enumerate() {
            check(items, child, &format!("{path}[{i}]"), errors);
        }
    }
}

/// Validates a serialized report against the shipped schema; Err lists
/// every violation.
pub fn validate_report_value(report: &Value) -> Result<()> {
    let schema: Value = serde_json::from_str(REPORT_SCHEMA)?;
    let mut errors = Vec::new();
    check(&schema, report, "$", &mut errors);
    if errors.is_empty() {
        Ok(())
    } else {
        Err(Error::analysis(format!("report fails schema: {}", errors.join("; "))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn rejects_missing_keys_and_bad_types() {
        let v = json!({"tool": {"name": "x"}, "schema_version": "1"});
        let err = validate_report_value(&v).unwrap_err().to_string();
        assert!(err.contains("missing required key"), "{err}");
        assert!(err.contains("$.schema_version"), "{err}");
        assert!(err.contains("$.tool: missing required key \"version\""), "{err}");
    }

    #[test]
    fn rejects_bad_status_enum_and_non_numeric_timing() {
        let v = json!({
            "tool": {"name": "x", "version": "0"},
            "schema_version": 1,
            "config": {"group": {}, "radii": [1], "analyses": []},
            "group_display": "g",
            "builds": [],
            "analyses": [{"name": "00-x", "kind": "x", "status": "MAYBE"}],
            "failed_stages": [],
            "timings": {"total": "fast"}
        });
        let err = validate_report_value(&v).unwrap_err().to_string();
        assert!(err.contains("not in enum"), "{err}");
        assert!(err.contains("$.timings.total"), "{err}");
    }
}
