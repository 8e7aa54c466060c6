use serde_json::Value;

use crate::error::{Error, Result};

/// `path,value` rows, one per leaf of the JSON document.
pub fn flatten(json: &str) -> Result<String> {
    let value: Value =
        serde_json::from_str(json).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })?;
    let mut rows = Vec::new();
    walk(&value, String::new(), &mut rows);
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Config(e.to_string());
    w.write_record(["path", "value"]).map_err(io)?;
    for (p, v) in rows {
        w.write_record([p, v]).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Config(e.to_string()))
}

fn walk(v: &Value, path: String, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if path.is_empty() { k.to_string() } else { format!("{path}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                walk(x, join(k), out);
            }
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                walk(x, join(&i.to_string()), out);
            }
        }
        Value::Null => out.push((path, String::new())),
        Value::String(s) => out.push((path, s.clone())),
        other => out.push((path, other.to_string())),
    }
}
