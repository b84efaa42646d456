//! Matrix file format `{"n": int, "data": [[re, im], ...]}` (row-major) and
//! a JSON writer that prints every float with 17 significant digits.

use num_complex::Complex64;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

fn parse_err(field: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::Parse {
        field: field.into(),
        reason: reason.into(),
    }
}

/// Parses the matrix file format. Unknown sibling keys (such as `meta`) are
/// ignored; errors name the offending field, e.g. `data[3][1]`.
pub fn matrix_from_json(text: &str) -> Result<ComplexMatrix> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_err("<document>", e.to_string()))?;
    matrix_from_value(&v)
}

pub fn matrix_from_value(v: &Value) -> Result<ComplexMatrix> {
    let obj = v.as_object().ok_or_else(|| parse_err("<document>", "expected a JSON object"))?;
    let n = obj
        .get("n")
        .ok_or_else(|| parse_err("n", "missing"))?
        .as_u64()
        .filter(|&n| n >= 1)
        .ok_or_else(|| parse_err("n", "expected a positive integer"))? as usize;
    let data = obj
        .get("data")
        .ok_or_else(|| parse_err("data", "missing"))?
        .as_array()
        .ok_or_else(|| parse_err("data", "expected an array"))?;
    if data.len() != n * n {
        return Err(parse_err("data", format!("expected {} entries for n = {n}, found {}", n * n, data.len())));
    }
    let mut entries = Vec::with_capacity(n * n);
    for (k, e) in data.iter().enumerate() {
        let pair = e
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| parse_err(format!("data[{k}]"), "expected a [re, im] pair"))?;
        let part = |j: usize| {
            pair[j]
                .as_f64()
                .filter(|x| x.is_finite())
                .ok_or_else(|| parse_err(format!("data[{k}][{j}]"), "expected a finite number"))
        };
        entries.push(Complex64::new(part(0)?, part(1)?));
    }
    ComplexMatrix::new(n, entries)
}

/// Matrix as a JSON value; `meta` becomes a sibling object when given.
pub fn matrix_to_value(a: &ComplexMatrix, meta: Option<Value>) -> Value {
    let mut obj = Map::new();
    obj.insert("n".into(), Value::from(a.n()));
    let data = a.data().iter().map(|z| Value::from(vec![z.re, z.im])).collect();
    obj.insert("data".into(), Value::Array(data));
    if let Some(m) = meta {
        obj.insert("meta".into(), m);
    }
    Value::Object(obj)
}

/// Float in scientific notation with 17 significant digits; non-finite
/// values become `null`.
pub fn format_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

/// Pretty JSON with two-space indentation. Integers print as integers and
/// floats via [`format_f64`]. Key order is that of the map.
pub fn to_json_string(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(num) => {
            if let Some(u) = num.as_u64() {
                out.push_str(&u.to_string());
            } else if let Some(i) = num.as_i64() {
                out.push_str(&i.to_string());
            } else {
                out.push_str(&format_f64(num.as_f64().unwrap_or(f64::NAN)));
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            // Short arrays of scalars (the [re, im] pairs) stay on one line.
            if items.len() <= 2 && items.iter().all(|x| !x.is_array() && !x.is_object()) {
                out.push('[');
                for (k, x) in items.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, x, depth + 1);
                }
                out.push(']');
                return;
            }
            write_seq(out, depth, '[', ']', items.iter().map(|x| (None, x)));
        }
        Value::Object(map) => write_seq(out, depth, '{', '}', map.iter().map(|(k, x)| (Some(k), x))),
    }
}

fn write_seq<'a>(
    out: &mut String,
    depth: usize,
    open: char,
    close: char,
    items: impl ExactSizeIterator<Item = (Option<&'a String>, &'a Value)>,
) {
    if items.len() == 0 {
        out.push(open);
        out.push(close);
        return;
    }
    out.push(open);
    let pad = "  ".repeat(depth + 1);
    for (k, (key, x)) in items.enumerate() {
        if k > 0 {
            out.push(',');
        }
        out.push('\n');
        out.push_str(&pad);
        if let Some(key) = key {
            out.push_str(&Value::String(key.clone()).to_string());
            out.push_str(": ");
        }
        write_value(out, x, depth + 1);
    }
    out.push('\n');
    out.push_str(&"  ".repeat(depth));
    out.push(close);
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn round_trips_exactly() {
        let a = ComplexMatrix::new(
            2,
            vec![
                Complex64::new(0.1, -1e-300),
                Complex64::new(1.0 / 3.0, 2.0),
                Complex64::new(-0.0, 5e300),
                Complex64::new(std::f64::consts::PI, 0.0),
            ],
        )
        .unwrap();
        let text = to_json_string(&matrix_to_value(&a, Some(json!({"check": "x", "seed": 7u64}))));
        let b = matrix_from_json(&text).unwrap();
        for (x, y) in a.data().iter().zip(b.data()) {
            assert_eq!(x.re.to_bits(), y.re.to_bits());
            assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
        assert!(text.contains("\"seed\": 7"));
    }

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(format_f64(0.5), "5.0000000000000000e-1");
        assert_eq!(format_f64(-1.0), "-1.0000000000000000e0");
        assert_eq!(format_f64(f64::NAN), "null");
        let v: Value = serde_json::from_str(&to_json_string(&json!({"x": 0.1}))).unwrap();
        assert_eq!(v["x"].as_f64(), Some(0.1));
    }

    #[test]
    fn parse_errors_name_the_field() {
        let field = |text: &str| match matrix_from_json(text) {
            Err(Error::Parse { field, .. }) => field,
            other => panic!("expected parse error, got {other:?}"),
        };
        assert_eq!(field(r#"{"data": []}"#), "n");
        assert_eq!(field(r#"{"n": 0, "data": []}"#), "n");
        assert_eq!(field(r#"{"n": 1}"#), "data");
        assert_eq!(field(r#"{"n": 2, "data": [[1,0]]}"#), "data");
        assert_eq!(field(r#"{"n": 2, "data": [[1,0],[0,0],[0,0],[1]]}"#), "data[3]");
        assert_eq!(field(r#"{"n": 1, "data": [[1,"a"]]}"#), "data[0][1]");
        assert_eq!(field("[1, 2"), "<document>");
    }

    #[test]
    fn reads_identity() {
        let a = matrix_from_json(r#"{"n": 2, "data": [[1,0],[0,0],[0,0],[1,0]]}"#).unwrap();
        assert_eq!(a, ComplexMatrix::identity(2));
    }
}
