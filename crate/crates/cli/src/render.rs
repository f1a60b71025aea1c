//! Stable JSON schema for library results, and a plain-text view of it.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use qpcount::fit::FitOutcome;
use qpcount::frobenius::GapData;
use qpcount::geometry::Q;
use qpcount::qpoly::{Eqp, Pqp, QuasiPolynomial};
use serde_json::{json, Map, Value};

/// Integers that fit in 64 bits are JSON numbers, larger ones decimal strings.
pub fn int(n: &BigInt) -> Value {
    n.to_i64().map_or_else(|| Value::String(n.to_string()), Value::from)
}

pub fn rational(q: &Q) -> Value {
    if q.is_integer() {
        int(&q.to_integer())
    } else {
        Value::String(q.to_string())
    }
}

pub fn qp(q: &QuasiPolynomial, var: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("period".into(), json!(q.period()));
    m.insert(
        "constituents".into(),
        q.constituents()
            .iter()
            .map(|c| Value::String(c.fmt_with(var)))
            .collect(),
    );
    m
}

pub fn eqp(e: &Eqp, var: &str) -> Map<String, Value> {
    let mut m = qp(&e.qp, var);
    m.insert("threshold".into(), json!(e.threshold));
    let ex: Map<String, Value> = e
        .exceptions
        .iter()
        .map(|(t, v)| (t.to_string(), v.as_ref().map_or(Value::Null, int)))
        .collect();
    m.insert("exceptions".into(), Value::Object(ex));
    m
}

pub fn fit(out: &FitOutcome, var: &str) -> Map<String, Value> {
    let mut m = eqp(&out.eqp, var);
    m.insert("status".into(), json!(out.status.as_str()));
    m.insert("samples_used".into(), json!(out.samples_used));
    m
}

pub fn pqp(p: &Pqp) -> Value {
    let names: Vec<&str> = p.params.iter().map(String::as_str).collect();
    let pieces: Vec<Value> = p
        .pieces
        .iter()
        .map(|piece| {
            json!({
                "chamber": piece.chamber.inequalities.iter()
                    .map(|(a, b)| json!({"normal": a, "bound": b}))
                    .collect::<Vec<_>>(),
                "coset": {"moduli": piece.coset.moduli, "residues": piece.coset.residues},
                "polynomial": piece.poly.fmt_with(&names),
            })
        })
        .collect();
    json!({"params": p.params, "pieces": pieces})
}

/// Gaps and the Apéry set are omitted when trivial.
pub fn gap_data(d: &GapData) -> Value {
    let mut m = Map::new();
    m.insert("frobenius".into(), json!(d.frobenius));
    m.insert("genus".into(), json!(d.genus));
    if !d.gaps.is_empty() {
        m.insert("gaps".into(), json!(d.gaps));
    }
    if let Some(a) = d.apery.as_ref().filter(|a| a.len() > 1) {
        let a: Map<String, Value> = a.iter().map(|(r, v)| (r.to_string(), json!(v))).collect();
        m.insert("apery".into(), Value::Object(a));
    }
    Value::Object(m)
}

pub fn error(kind: &str, message: &str) -> Value {
    json!({"error": {"kind": kind, "message": message}})
}

/// Indented `key: value` lines; scalar arrays inline, other arrays one item per line.
pub fn text(v: &Value) -> String {
    let mut out = String::new();
    write_text(v, 0, &mut out);
    out
}

/// Strings inside a top-level array go one per line; nested arrays stay inline.
fn scalar(v: &Value) -> Option<String> {
    scalar_at(v, true)
}

fn scalar_at(v: &Value, top: bool) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !(top && i.is_string())) => {
            let parts: Option<Vec<String>> = items.iter().map(|i| scalar_at(i, false)).collect();
            parts.map(|p| format!("[{}]", p.join(", ")))
        }
        Value::Object(m) if m.is_empty() => Some("{}".into()),
        _ => None,
    }
}

fn write_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        write_text(x, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}[{i}] {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}[{i}]\n"));
                        write_text(x, indent + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}
