//! Canonical JSON: sorted keys, compact separators, and integers beyond
//! the 53-bit safe range written as decimal strings.

use quartic_core::field::Field;
use quartic_core::matrix::MatrixF;
use quartic_core::poly::MultiPoly;
use serde_json::{json, Value};

const SAFE: u64 = 1 << 53;

fn fix_numbers(v: Value) -> Value {
    match v {
        Value::Number(n) => {
            let big = match (n.as_u64(), n.as_i64()) {
                (Some(u), _) => u > SAFE,
                (None, Some(i)) => i.unsigned_abs() > SAFE,
                _ => false,
            };
            if big {
                Value::String(n.to_string())
            } else {
                Value::Number(n)
            }
        }
        Value::Array(a) => Value::Array(a.into_iter().map(fix_numbers).collect()),
        // serde_json's default map is ordered by key
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, fix_numbers(v))).collect()),
        other => other,
    }
}

pub fn canonical(v: Value) -> Value {
    fix_numbers(v)
}

pub fn to_canonical_string(v: Value) -> String {
    let mut s = serde_json::to_string(&canonical(v)).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Terms leading first, each `{"exps": [...], "value": ...}`.
pub fn poly_json<F: Field>(p: &MultiPoly<F>) -> Value {
    let field = p.field();
    let terms: Vec<Value> = p
        .terms()
        .iter()
        .rev()
        .map(|(e, c)| json!({"exps": e, "value": field.to_json(c)}))
        .collect();
    json!({"vars": p.vars().to_vec(), "terms": terms})
}

pub fn matrix_json<F: Field>(m: &MatrixF<F>) -> Value {
    let field = m.field();
    let rows: Vec<Value> = (0..m.rows())
        .map(|i| Value::Array(m.row(i).iter().map(|c| field.to_json(c)).collect()))
        .collect();
    Value::Array(rows)
}
