//! Text output for reports without a dedicated layout: one `key: value`
//! line per scalar field, arrays of scalars on one line, nested objects
//! under dotted keys. Built from the JSON value, so both forms carry the
//! same numbers.

use serde_json::Value;

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn walk(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                walk(&key, x, out);
            }
        }
        Value::Array(items) => {
            let flat: Option<Vec<String>> = items.iter().map(scalar).collect();
            if let Some(flat) = flat {
                out.push_str(&format!("{prefix}: {}\n", flat.join(" ")));
                return;
            }
            // arrays of triples print one per line
            for (i, x) in items.iter().enumerate() {
                if let Value::Array(inner) = x {
                    if let Some(flat) = inner.iter().map(scalar).collect::<Option<Vec<_>>>() {
                        out.push_str(&format!("{prefix}[{i}]: {}\n", flat.join(" ")));
                        continue;
                    }
                }
                walk(&format!("{prefix}[{i}]"), x, out);
            }
        }
        _ => out.push_str(&format!("{prefix}: {}\n", scalar(v).unwrap_or_default())),
    }
}

pub fn text(v: &Value) -> String {
    let mut out = String::new();
    walk("", v, &mut out);
    out
}
