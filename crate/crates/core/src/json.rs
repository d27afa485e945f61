//! JSON helpers shared by every report type.

use serde::ser::{Error as _, Serialize, Serializer};
use serde_json::value::RawValue;
use serde_json::Value;

/// A float written with 17 significant digits, which round-trips every
/// finite `f64`. Non-finite values serialize as `null`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sig17(pub f64);

pub fn format_sig17(x: f64) -> String {
    format!("{x:.16e}")
}

impl Sig17 {
    pub fn to_value(self) -> Value {
        if !self.0.is_finite() {
            return Value::Null;
        }
        // Parsing the exact text keeps the value bit-identical.
        serde_json::from_str(&format_sig17(self.0)).expect("formatted float parses")
    }
}

impl Serialize for Sig17 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(format_sig17(self.0)).map_err(S::Error::custom)?;
        raw.serialize(s)
    }
}

/// Pretty JSON where every float keeps 17 significant digits.
///
/// `serde_json` prints `f64` in shortest round-trip form; this rewrites
/// numeric leaves through [`Sig17`] so the output is independent of that
/// choice.
pub fn to_pretty_string(value: &Value) -> String {
    let mut out = String::new();
    write_value(value, 0, &mut out);
    out.push('\n');
    out
}

fn write_value(value: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match value {
        Value::Number(n) if n.is_f64() => {
            out.push_str(&format_sig17(n.as_f64().expect("f64 number")));
        }
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(is_scalar) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(item, indent, out);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(item, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, v)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(v, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        other => out.push_str(&other.to_string()),
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn sig17_round_trips() {
        for x in [0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, std::f64::consts::PI] {
            let text = serde_json::to_string(&Sig17(x)).unwrap();
            let back: f64 = serde_json::from_str(&text).unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{text}");
        }
        assert_eq!(serde_json::to_string(&Sig17(f64::NAN)).unwrap(), "null");
    }

    #[test]
    fn pretty_output_uses_fixed_digits() {
        let text = to_pretty_string(&json!({"a": 0.5, "b": [1, 2.0], "c": "x"}));
        assert!(text.contains("\"a\": 5.0000000000000000e-1"));
        assert!(text.contains("[1, 2.0000000000000000e0]"));
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["a"], json!(0.5));
    }
}
