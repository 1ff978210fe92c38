//! The JSON report every invocation prints, plus its decimal mirror and the
//! `--pretty` text rendering.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use cuspcheck::io::ValidationError;
use cuspcheck::rational::{parse_rational, to_decimal};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const REPORT_SCHEMA: &str = "cuspcheck.report.v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Violated,
    InputError,
    InternalError,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::InputError => 1,
            Status::InternalError => 2,
            Status::Violated => 3,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Violated => "violated",
            Status::InputError => "input_error",
            Status::InternalError => "internal_error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub level: &'static str,
    pub pointer: Option<String>,
    pub message: String,
}

impl Diagnostic {
    pub fn warning(message: impl Into<String>) -> Self {
        Self { level: "warning", pointer: None, message: message.into() }
    }

    pub fn error(message: impl Into<String>) -> Self {
        Self { level: "error", pointer: None, message: message.into() }
    }

    fn to_json(&self) -> Value {
        let mut o = json!({ "level": self.level, "message": self.message });
        if let Some(p) = &self.pointer {
            o["pointer"] = json!(p);
        }
        o
    }
}

impl From<ValidationError> for Diagnostic {
    fn from(e: ValidationError) -> Self {
        Self { level: "error", pointer: Some(e.pointer), message: e.message }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub input_digest: Option<String>,
    pub status: Status,
    pub result: Value,
    pub diagnostics: Vec<Diagnostic>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            input_digest: None,
            status: Status::Ok,
            result: Value::Null,
            diagnostics: Vec::new(),
        }
    }

    pub fn to_json(&self, float_digits: Option<usize>) -> Value {
        let mut o = json!({
            "schema": REPORT_SCHEMA,
            "command": self.command,
            "version": VERSION,
            "status": self.status.as_str(),
            "input_digest": self.input_digest,
            "result": self.result,
            "diagnostics": self.diagnostics.iter().map(Diagnostic::to_json).collect::<Vec<_>>(),
        });
        if let Some(d) = float_digits {
            o["result_decimal"] = decimal_mirror(&self.result, d, false);
        }
        o
    }
}

pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

/// Copy of `v` with every exact rational string replaced by a decimal string.
/// Fields whose key mentions "label" are names, not numbers, and are kept.
pub fn decimal_mirror(v: &Value, digits: usize, is_label: bool) -> Value {
    match v {
        Value::String(s) if !is_label => match parse_rational(s) {
            Ok(r) => Value::String(to_decimal(&r, digits)),
            Err(_) => v.clone(),
        },
        Value::Array(xs) => Value::Array(xs.iter().map(|x| decimal_mirror(x, digits, is_label)).collect()),
        Value::Object(m) => Value::Object(
            m.iter()
                .map(|(k, x)| (k.clone(), decimal_mirror(x, digits, is_label || k.contains("label"))))
                .collect::<Map<_, _>>(),
        ),
        _ => v.clone(),
    }
}

struct Palette {
    on: bool,
}

impl Palette {
    fn paint(&self, code: &str, s: &str) -> String {
        if self.on {
            format!("\x1b[{code}m{s}\x1b[0m")
        } else {
            s.to_string()
        }
    }
}

pub fn render_pretty(report: &Value, color: bool) -> String {
    let pal = Palette { on: color };
    let status = report["status"].as_str().unwrap_or("");
    let badge = match status {
        "ok" => pal.paint("32", "OK"),
        "violated" => pal.paint("33", "VIOLATED"),
        _ => pal.paint("31", &status.to_uppercase()),
    };
    let mut out = format!(
        "{} {} [{}]\n",
        pal.paint("1", "cuspcheck"),
        report["command"].as_str().unwrap_or(""),
        badge
    );
    if let Some(d) = report["input_digest"].as_str() {
        out.push_str(&format!("input: {d}\n"));
    }
    if let Some(diags) = report["diagnostics"].as_array() {
        for d in diags {
            let level = d["level"].as_str().unwrap_or("");
            let tag = if level == "error" { pal.paint("31", level) } else { pal.paint("33", level) };
            let at = d["pointer"].as_str().map(|p| format!(" {p}")).unwrap_or_default();
            out.push_str(&format!("{tag}{at}: {}\n", d["message"].as_str().unwrap_or("")));
        }
    }
    for key in ["result", "result_decimal"] {
        if !report[key].is_null() {
            out.push_str(&pal.paint("1", key));
            out.push('\n');
            tree(&report[key], 1, &mut out);
        }
    }
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Null => Some("-".into()),
        Value::Bool(_) | Value::Number(_) => Some(v.to_string()),
        Value::Array(xs) if xs.iter().all(|x| !x.is_array() && !x.is_object()) => {
            Some(format!("[{}]", xs.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn tree(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            let width = m.keys().map(String::len).max().unwrap_or(0);
            for (k, x) in m {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k:width$}  {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}\n"));
                        tree(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}[{i}] {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}[{i}]\n"));
                        tree(x, depth + 1, out);
                    }
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar(v).unwrap_or_default())),
    }
}
