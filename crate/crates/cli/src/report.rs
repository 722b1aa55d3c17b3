//! Report envelope and rendering.
//!
//! JSON output goes through `serde_json::Value`, whose object maps are
//! ordered by key, so identical reports serialize to identical bytes.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "gbord.report.v1";

/// Largest magnitude emitted as a JSON number; anything wider is a string.
const SAFE_INTEGER: i64 = (1 << 53) - 1;

pub struct Report {
    pub command: &'static str,
    pub args: Map<String, Value>,
    pub result: Value,
    pub warnings: Vec<String>,
    /// False when a verification inside the command failed.
    pub ok: bool,
}

impl Report {
    pub fn new(command: &'static str, args: Map<String, Value>) -> Report {
        Report { command, args, result: Value::Null, warnings: Vec::new(), ok: true }
    }

    pub fn to_value(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "command": { "name": self.command, "args": Value::Object(self.args.clone()) },
            "result": self.result,
            "warnings": self.warnings,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("values serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", SCHEMA, self.command);
        render(&self.result, 0, &mut out);
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out
    }
}

/// Integer as a JSON number when it is exactly representable everywhere.
pub fn int(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) if v.abs() <= SAFE_INTEGER => Value::from(v),
        _ => Value::from(n.to_string()),
    }
}

pub fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn strings<T: ToString>(v: impl IntoIterator<Item = T>) -> Value {
    Value::Array(v.into_iter().map(|x| Value::from(x.to_string())).collect())
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn render(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                if is_scalar(x) {
                    out.push_str(&format!("{pad}{k}: {}\n", scalar_text(x)));
                } else if let Some(line) = inline_array(x) {
                    out.push_str(&format!("{pad}{k}: {line}\n"));
                } else {
                    out.push_str(&format!("{pad}{k}:\n"));
                    render(x, indent + 1, out);
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                if is_scalar(x) {
                    out.push_str(&format!("{pad}- {}\n", scalar_text(x)));
                } else if let Some(line) = inline_array(x) {
                    out.push_str(&format!("{pad}- {line}\n"));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    render(x, indent + 1, out);
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar_text(other))),
    }
}

/// `[a, b, c]` for arrays of numbers and booleans.
fn inline_array(v: &Value) -> Option<String> {
    let items = v.as_array()?;
    if items.iter().all(|x| x.is_number() || x.is_boolean()) {
        let parts: Vec<String> = items.iter().map(scalar_text).collect();
        return Some(format!("[{}]", parts.join(", ")));
    }
    if items.iter().all(|x| inline_array(x).is_some() && !x.as_array().is_some_and(Vec::is_empty)) && !items.is_empty() {
        let parts: Vec<String> = items.iter().filter_map(inline_array).collect();
        return Some(format!("[{}]", parts.join(", ")));
    }
    None
}
