//! JSON documents for representations and reports.
//!
//! Floating-point numbers are written with 12 significant digits so that
//! identical inputs produce byte-identical output.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::dynamics::{OrbitKind, OrbitSegment};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::params::AlgebraParams;
use crate::rep::{RelationReport, RepKind, Representation};
use crate::Point;

pub const SIGNIFICANT_DIGITS: usize = 12;
pub const SEED_ENV: &str = "AFFREP_SEED";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepresentationDoc {
    pub kind: RepKind,
    pub dim: usize,
    pub beta: f64,
    pub params: AlgebraParams,
    #[serde(default)]
    pub boundary: Vec<usize>,
    pub orbit: Vec<Point>,
    #[serde(rename = "W")]
    pub w: MatrixDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<RelationReport>,
}

pub fn matrix_doc(m: &CMatrix) -> MatrixDoc {
    let rows = |f: fn(&Complex64) -> f64| {
        (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect())
            .collect()
    };
    MatrixDoc {
        re: rows(|z| z.re),
        im: rows(|z| z.im),
    }
}

pub fn matrix_from_doc(doc: &MatrixDoc) -> Result<CMatrix> {
    let n = doc.re.len();
    if doc.im.len() != n || doc.re.iter().chain(&doc.im).any(|row| row.len() != n) {
        return Err(Error::ShapeMismatch(
            "W.re and W.im must be square of equal size".into(),
        ));
    }
    let mut m = linalg::zeros(n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = Complex64::new(doc.re[i][j], doc.im[i][j]);
        }
    }
    Ok(m)
}

pub fn representation_doc(
    rep: &Representation,
    report: Option<RelationReport>,
) -> RepresentationDoc {
    RepresentationDoc {
        kind: rep.kind,
        dim: rep.dim(),
        beta: rep.beta,
        params: rep.params,
        boundary: rep.boundary.clone(),
        orbit: rep.orbit.points.clone(),
        w: matrix_doc(&rep.w),
        report,
    }
}

pub fn representation_from_doc(doc: &RepresentationDoc) -> Result<Representation> {
    doc.params.validate()?;
    let w = matrix_from_doc(&doc.w)?;
    if w.nrows() != doc.dim {
        return Err(Error::ShapeMismatch(format!(
            "dim {} but W is {}×{}",
            doc.dim,
            w.nrows(),
            w.ncols()
        )));
    }
    let kind = match doc.kind {
        RepKind::String => OrbitKind::String,
        RepKind::OneSidedTruncated => OrbitKind::ForwardRay,
        RepKind::TwoSidedTruncated => OrbitKind::TwoSidedWindow,
        RepKind::Loop | RepKind::Scalar => OrbitKind::Loop,
    };
    let orbit = OrbitSegment {
        points: doc.orbit.clone(),
        kind,
    };
    Representation::from_parts(
        doc.kind,
        doc.params,
        w,
        doc.beta,
        orbit,
        doc.boundary.clone(),
    )
}

/// `x` rounded to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .unwrap_or(x)
}

/// Rounds every float in a JSON tree; integers are left alone.
pub fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().expect("f64"));
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_value).collect()),
        Value::Object(map) => {
            Value::Object(map.into_iter().map(|(k, v)| (k, round_value(v))).collect())
        }
        other => other,
    }
}

fn to_value<T: Serialize>(value: &T) -> Result<Value> {
    serde_json::to_value(value)
        .map(round_value)
        .map_err(|e| Error::InvalidInput(format!("serialization failed: {e}")))
}

pub fn to_pretty_json<T: Serialize>(value: &T) -> Result<String> {
    let v = to_value(value)?;
    serde_json::to_string_pretty(&v).map_err(|e| Error::InvalidInput(e.to_string()))
}

/// One line of a JSON-lines stream, without the trailing newline.
pub fn to_json_line<T: Serialize>(value: &T) -> Result<String> {
    let v = to_value(value)?;
    serde_json::to_string(&v).map_err(|e| Error::InvalidInput(e.to_string()))
}

/// Seed for randomized runs: `AFFREP_SEED` if set and parseable, else
/// `default`.
pub fn seed_from_env(default: u64) -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(default)
}
