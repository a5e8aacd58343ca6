//! The instance document format: UTF-8 JSON with fields "H1".."H4", "S1",
//! "S2" and optional "label". A matrix is an array of rows; an entry is
//! either a number (real) or a two-element array [re, im]. The same matrix
//! encoding is reused for certificates and standalone matrix files.

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use super::error::ChannelError;
use crate::matlib::CMatrix;

pub fn matrix_from_value(v: &Value, name: &str) -> Result<CMatrix, ChannelError> {
    let rows = v
        .as_array()
        .ok_or_else(|| ChannelError::Parse(format!("{name}: expected an array of rows")))?;
    if rows.is_empty() {
        return Err(ChannelError::Parse(format!("{name}: matrix has no rows")));
    }
    let mut parsed: Vec<Vec<Complex64>> = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let entries = row
            .as_array()
            .ok_or_else(|| ChannelError::Parse(format!("{name}: row {i} is not an array")))?;
        if entries.is_empty() {
            return Err(ChannelError::Parse(format!("{name}: row {i} is empty")));
        }
        let mut out = Vec::with_capacity(entries.len());
        for (j, e) in entries.iter().enumerate() {
            out.push(entry_from_value(e).ok_or_else(|| {
                ChannelError::Parse(format!(
                    "{name}: entry ({i}, {j}) must be a number or [re, im]"
                ))
            })?);
        }
        parsed.push(out);
    }
    let width = parsed[0].len();
    if parsed.iter().any(|r| r.len() != width) {
        return Err(ChannelError::Parse(format!("{name}: ragged rows")));
    }
    CMatrix::from_rows(&parsed).map_err(|e| ChannelError::Parse(format!("{name}: {e}")))
}

fn entry_from_value(v: &Value) -> Option<Complex64> {
    if let Some(x) = v.as_f64() {
        return Some(Complex64::new(x, 0.0));
    }
    let pair = v.as_array()?;
    if pair.len() != 2 {
        return None;
    }
    Some(Complex64::new(pair[0].as_f64()?, pair[1].as_f64()?))
}

pub fn matrix_to_value(m: &CMatrix) -> Value {
    let mut rows = Vec::with_capacity(m.rows());
    for i in 0..m.rows() {
        let mut row = Vec::with_capacity(m.cols());
        for j in 0..m.cols() {
            let z = m[(i, j)];
            if z.im == 0.0 {
                row.push(json!(z.re));
            } else {
                row.push(json!([z.re, z.im]));
            }
        }
        rows.push(Value::Array(row));
    }
    Value::Array(rows)
}

/// Parse a standalone matrix file: either a bare array of rows or an object
/// with a single "matrix" field.
pub fn matrix_from_str(text: &str) -> Result<CMatrix, ChannelError> {
    let v: Value = serde_json::from_str(text).map_err(|e| ChannelError::Parse(e.to_string()))?;
    match &v {
        Value::Array(_) => matrix_from_value(&v, "matrix"),
        Value::Object(map) => {
            let inner = map
                .get("matrix")
                .ok_or_else(|| ChannelError::Parse("expected a \"matrix\" field".into()))?;
            matrix_from_value(inner, "matrix")
        }
        _ => Err(ChannelError::Parse(
            "expected an array of rows or {\"matrix\": ...}".into(),
        )),
    }
}

pub fn object_get<'a>(map: &'a Map<String, Value>, key: &str) -> Result<&'a Value, ChannelError> {
    map.get(key)
        .ok_or_else(|| ChannelError::Parse(format!("missing field \"{key}\"")))
}
