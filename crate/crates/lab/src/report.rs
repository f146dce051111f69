//! JSON encodings shared by every command.

use closure_lab_core::closure::{ClosureOperator, ValidationReport};
use closure_lab_core::partition::Entropy;
use closure_lab_core::{BigRational, Subset};
use serde_json::{json, Map, Value};

/// Sorted 1-indexed vertex list.
pub fn subset(x: Subset) -> Value {
    Value::from(x.vertices().collect::<Vec<_>>())
}

pub fn subsets(xs: impl IntoIterator<Item = Subset>) -> Value {
    Value::from(xs.into_iter().map(subset).collect::<Vec<_>>())
}

fn integer(text: String) -> Value {
    text.parse::<i64>().map_or(Value::String(text), Value::from)
}

/// `{"num": .., "den": ..}`; components beyond `i64` become strings.
pub fn rational(q: &BigRational) -> Value {
    json!({ "num": integer(q.numer().to_string()), "den": integer(q.denom().to_string()) })
}

pub fn entropy(h: &Entropy) -> Value {
    match h {
        Entropy::Exact(q) => rational(q),
        Entropy::Approx(x) => json!({ "approx": x }),
    }
}

pub fn validation(report: &ValidationReport) -> Value {
    json!({
        "valid": report.is_valid(),
        "violations": report.violations.iter().map(|v| json!({
            "axiom": v.axiom.id(),
            "witness": subsets(v.witness.iter().copied()),
        })).collect::<Vec<_>>(),
    })
}

pub fn operator(op: &ClosureOperator) -> Value {
    let rank = op.is_spanning(op.ground()).then(|| op.rank());
    json!({ "n": op.n(), "label": op.label(), "rank": rank })
}

/// `{"command": .., "argv": [..], "operator": .., "results": ..}`.
pub fn envelope(command: &str, argv: &[String], operator: Option<Value>, results: Map<String, Value>) -> Value {
    let mut out = Map::new();
    out.insert("command".into(), Value::from(command));
    out.insert("argv".into(), Value::from(argv.to_vec()));
    if let Some(op) = operator {
        out.insert("operator".into(), op);
    }
    out.insert("results".into(), Value::Object(results));
    Value::Object(out)
}

pub fn error(command: &str, argv: &[String], kind: &str, message: &str, code: i32) -> Value {
    json!({
        "command": command,
        "argv": argv,
        "error": { "kind": kind, "message": message, "exit_code": code },
    })
}
