//! Browser bindings for the interactive demo page: verify a matrix, walk
//! through a decode, build a random construction, and plot rate bounds.
//!
//! Every export takes and returns strings (matrix text in, JSON out) so the
//! page needs no shared memory handling. The JSON-producing logic lives in
//! plain functions that also run on the host for testing; the
//! `#[wasm_bindgen]` wrappers only translate errors.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use sepmat::{
    build_2ssm, decode_ssm, is_bar_separable, is_disjunct, is_ssm, known_bounds, penalty_term,
    rate_bound, BinaryMatrix, BitVec, SupportSet,
};

fn parse_matrix(text: &str) -> sepmat::Result<BinaryMatrix> {
    if text.trim_start().starts_with('{') {
        BinaryMatrix::parse_json(text)
    } else {
        BinaryMatrix::parse_text(text)
    }
}

fn verify_json(matrix_text: &str, property: &str, d: usize) -> sepmat::Result<String> {
    let m = parse_matrix(matrix_text)?;
    let report = match property {
        "dm" => is_disjunct(&m, d)?,
        "sm" => is_bar_separable(&m, d)?,
        "ssm" => is_ssm(&m, d)?,
        other => {
            return Err(sepmat::Error::InvalidParameter(format!(
                "unknown property '{other}'"
            )))
        }
    };
    Ok(report.to_json())
}

fn outcome_json(matrix_text: &str, positives: &[u32]) -> sepmat::Result<String> {
    let m = parse_matrix(matrix_text)?;
    let outcome = if positives.is_empty() {
        BitVec::zeros(m.tests())
    } else {
        m.boolean_sum(&SupportSet::from_indices(
            positives.iter().map(|&j| j as usize),
        ))?
    };
    Ok(json!({ "outcome": outcome.to_string() }).to_string())
}

fn decode_json(matrix_text: &str, outcome: &str, d: usize) -> sepmat::Result<String> {
    let m = parse_matrix(matrix_text)?;
    let r = BitVec::parse(outcome)?;
    let result = decode_ssm(&m, &r, d)?;

    // covered survivors of the elimination phase, for highlighting
    let covered: Vec<usize> = (1..=m.items())
        .filter(|&j| r.len() == m.tests() && r.covers(m.column(j)))
        .collect();
    // rows where exactly one covered column has a 1: the private rows
    let mut private_rows: Vec<Value> = Vec::new();
    if let Some(positives) = result.identified() {
        for j in positives.iter() {
            let rows: Vec<usize> = (0..m.tests())
                .filter(|&i| {
                    r.get(i)
                        && m.column(j).get(i)
                        && covered.iter().all(|&l| l == j || !m.column(l).get(i))
                })
                .map(|i| i + 1)
                .collect();
            private_rows.push(json!({ "item": j, "rows": rows }));
        }
    }
    let mut value: Value = serde_json::from_str(&result.to_json())
        .expect("decode result serializes to valid JSON");
    value["covered"] = json!(covered);
    value["private_rows"] = Value::Array(private_rows);
    Ok(value.to_string())
}

fn construct_json(t: usize, n: usize, q: usize, seed: u64, d: usize) -> sepmat::Result<String> {
    let c = build_2ssm(t, n, q, seed, d)?;
    let verified = c.matrix.items() >= 2 && is_ssm(&c.matrix, d)?.holds;
    Ok(json!({
        "matrix_text": c.matrix.to_text(),
        "rows": c.matrix.tests(),
        "columns": c.matrix.items(),
        "rate": c.rate(),
        "verified_ssm": verified,
        "log": serde_json::from_str::<Value>(&c.log.to_json()).expect("log is valid JSON"),
    })
    .to_string())
}

fn rate_curve_json(q_lo: usize, q_hi: usize, m_cap: u32) -> sepmat::Result<String> {
    if q_lo < 2 || q_hi < q_lo {
        return Err(sepmat::Error::InvalidParameter(
            "need 2 <= q_lo <= q_hi".to_string(),
        ));
    }
    let points: Vec<Value> = (q_lo..=q_hi)
        .map(|q| {
            let report = rate_bound(q, m_cap)?;
            Ok(json!({
                "q": q,
                "bound": report.bound,
                "m_star": report.m_star,
                "tail_dominated": report.tail_dominated,
            }))
        })
        .collect::<sepmat::Result<_>>()?;
    Ok(Value::Array(points).to_string())
}

fn penalty_curve_json(q: usize, m_max: u32) -> sepmat::Result<String> {
    if q < 2 || m_max < 1 {
        return Err(sepmat::Error::InvalidParameter(
            "need q >= 2 and m_max >= 1".to_string(),
        ));
    }
    let terms: Vec<Value> = (1..=m_max)
        .map(|m| json!({ "m": m, "term": penalty_term(q, m) }))
        .collect();
    Ok(json!({ "q": q, "tail": 1.0 / q as f64, "terms": terms }).to_string())
}

fn js_err(e: sepmat::Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// Property report for a matrix: `property` is `"dm"`, `"sm"` or `"ssm"`.
#[wasm_bindgen]
pub fn verify(matrix_text: &str, property: &str, d: usize) -> Result<String, JsValue> {
    verify_json(matrix_text, property, d).map_err(js_err)
}

/// Boolean sum of the selected (1-based) items, as `{"outcome":"0101.."}`.
#[wasm_bindgen]
pub fn pooled_outcome(matrix_text: &str, positives: Vec<u32>) -> Result<String, JsValue> {
    outcome_json(matrix_text, &positives).map_err(js_err)
}

/// Runs the two-phase identification and reports the verdict along with the
/// covered set and each identified item's private rows.
#[wasm_bindgen]
pub fn decode(matrix_text: &str, outcome: &str, d: usize) -> Result<String, JsValue> {
    decode_json(matrix_text, outcome, d).map_err(js_err)
}

/// Random-coding construction: seeded `(t,n,q)` code, expurgation,
/// concatenation; returns the matrix text, rate, verification flag and log.
#[wasm_bindgen]
pub fn construct(t: usize, n: usize, q: usize, seed: u64, d: usize) -> Result<String, JsValue> {
    construct_json(t, n, q, seed, d).map_err(js_err)
}

/// Rate lower bound per alphabet size, for plotting.
#[wasm_bindgen]
pub fn rate_curve(q_lo: usize, q_hi: usize, m_cap: u32) -> Result<String, JsValue> {
    rate_curve_json(q_lo, q_hi, m_cap).map_err(js_err)
}

/// Penalty term per `m` at a fixed alphabet size, with the `1/q` tail.
#[wasm_bindgen]
pub fn penalty_curve(q: usize, m_max: u32) -> Result<String, JsValue> {
    penalty_curve_json(q, m_max).map_err(js_err)
}

/// The table of known rate bounds.
#[wasm_bindgen]
pub fn bounds_table() -> String {
    known_bounds().to_json()
}
