//! Reports: one JSON value per run, with a text rendering derived from it.

use alr_core::fgab::{Index, Subgroup};
use alr_core::phom::PHomClass;
use alr_core::{AlgebraError, Int, QMatrix};
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::workspace::SCHEMA_VERSION;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A negative verdict: validation failure, failed check, inexact
    /// junction, oracle disagreement.
    Fail,
    HypothesisViolated,
    Error,
    Usage,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Fail => "fail",
            Status::HypothesisViolated => "hypothesis_violated",
            Status::Error => "error",
            Status::Usage => "usage_error",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Fail | Status::HypothesisViolated => 1,
            Status::Error => 2,
            Status::Usage => 3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub object: Option<String>,
    pub status: Status,
    pub body: Value,
}

impl Report {
    pub fn ok(command: &str, object: Option<&str>, result: Value) -> Self {
        Report::with_status(command, object, Status::Ok, result)
    }

    pub fn with_status(command: &str, object: Option<&str>, status: Status, result: Value) -> Self {
        Report {
            command: command.to_string(),
            object: object.map(str::to_string),
            status,
            body: result,
        }
    }

    pub fn error(command: &str, object: Option<&str>, status: Status, error: Value) -> Self {
        let mut r = Report::with_status(command, object, status, Value::Null);
        r.body = json!({ "error": error });
        r
    }

    pub fn usage(command: &str, object: Option<&str>, message: impl Into<String>) -> Self {
        Report::error(command, object, Status::Usage, json!({ "message": message.into() }))
    }

    /// An error from the algebra layer, classified by exit status.
    pub fn algebra(command: &str, object: Option<&str>, e: &AlgebraError) -> Self {
        let status = match e {
            AlgebraError::HypothesisViolated(_)
            | AlgebraError::NotAnIdeal(_)
            | AlgebraError::NotASubring(_)
            | AlgebraError::NotASubmodule(_)
            | AlgebraError::NotInH0
            | AlgebraError::InfiniteIndexDomain
            | AlgebraError::UnsupportedCarrier(_)
            | AlgebraError::SizeBoundExceeded { .. }
            | AlgebraError::ReduciblePolynomial(_) => Status::HypothesisViolated,
            AlgebraError::AxiomViolated { .. } => Status::Fail,
            AlgebraError::AmbientMismatch(_) | AlgebraError::ShapeMismatch(_) | AlgebraError::EmptyFamily => {
                Status::Usage
            }
            _ => Status::Error,
        };
        Report::error(command, object, status, json!({ "message": e.to_string() }))
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("schema_version".into(), json!(SCHEMA_VERSION));
        m.insert("command".into(), json!(self.command));
        m.insert("object".into(), self.object.as_ref().map_or(Value::Null, |o| json!(o)));
        m.insert("status".into(), json!(self.status.label()));
        match &self.body {
            Value::Object(b) if b.contains_key("error") => {
                m.insert("error".into(), b["error"].clone());
            }
            other => {
                m.insert("result".into(), other.clone());
            }
        }
        Value::Object(m)
    }

    pub fn render(&self, format: Format) -> String {
        let v = self.to_json();
        match format {
            Format::Json => serde_json::to_string_pretty(&v).expect("reports serialise") + "\n",
            Format::Text => {
                let mut out = String::new();
                text(&v, 0, &mut out);
                out
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Object(m) if m.is_empty() => Some("{}".into()),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(format!("[{}]", a.iter().map(|x| scalar(x).unwrap()).collect::<Vec<_>>().join(", ")))
        }
        Value::Array(a) if a.iter().all(|x| x.is_array() && scalar(x).is_some()) && !a.is_empty() => {
            Some(a.iter().map(|x| scalar(x).unwrap()).collect::<Vec<_>>().join(" "))
        }
        _ => None,
    }
}

fn text(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        text(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        text(x, depth + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

/// Small integers as JSON numbers, large ones as decimal strings.
pub fn int(x: &Int) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

pub fn ints(v: &[Int]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn index(i: &Index) -> Value {
    match i {
        Index::Finite(n) => int(n),
        Index::Infinite => json!("INFINITE"),
    }
}

/// Generators read off the canonical lattice, reduced modulo the
/// relations, so equal subgroups print identically.
pub fn canonical_generators(s: &Subgroup) -> Vec<Vec<Int>> {
    let g = s.ambient();
    let mut out: Vec<Vec<Int>> = Vec::new();
    for c in s.lattice().columns() {
        let x = g.canonical(&c);
        if !g.is_zero_element(&x) && !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

pub fn subgroup(s: &Subgroup) -> Value {
    json!({
        "generators": canonical_generators(s).iter().map(|g| ints(g)).collect::<Vec<_>>(),
        "rank": s.rank(),
        "finite": s.is_finite(),
        "index": index(&s.index_in_ambient()),
    })
}

/// Rational matrix rows, entries as strings.
pub fn qmatrix(m: &QMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(|x| json!(x.to_string())).collect()))
            .collect(),
    )
}

pub fn class(c: &PHomClass) -> Value {
    json!({ "matrix": qmatrix(c.matrix()), "zero": c.is_zero() })
}
