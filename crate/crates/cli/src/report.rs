//! Rendering of JSON reports.

use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

pub fn render(report: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("values always serialize") + "\n",
        Format::Text => {
            let mut out = String::new();
            text(report, "", &mut out);
            out
        }
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

/// One `path: value` line per leaf; arrays of scalars stay on one line.
fn text(v: &Value, path: &str, out: &mut String) {
    let join = |k: &str| if path.is_empty() { k.to_string() } else { format!("{path}.{k}") };
    match v {
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str(&format!("{path}: {{}}\n"));
            }
            for (k, x) in map {
                text(x, &join(k), out);
            }
        }
        Value::Array(items) => {
            if let Some(words) = items.iter().map(scalar).collect::<Option<Vec<_>>>() {
                out.push_str(&format!("{path}: [{}]\n", words.join(" ")));
            } else {
                for (i, x) in items.iter().enumerate() {
                    text(x, &join(&i.to_string()), out);
                }
            }
        }
        _ => out.push_str(&format!("{path}: {}\n", scalar(v).unwrap())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn text_mirrors_json() {
        let v = json!({"b": [1, 2], "a": {"x": true, "y": [[0, 1], [2]]}});
        assert_eq!(render(&v, Format::Text), "a.x: true\na.y.0: [0 1]\na.y.1: [2]\nb: [1 2]\n");
        assert_eq!(render(&json!({}), Format::Text), ": {}\n");
    }

    #[test]
    fn json_keys_sorted() {
        let v = json!({"z": 1, "a": 2});
        assert!(render(&v, Format::Json).find("\"a\"") < render(&v, Format::Json).find("\"z\""));
    }
}
