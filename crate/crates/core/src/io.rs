//! File formats: the `ppsm-v1` model JSON, sample batch CSV, optimizer result
//! JSON and optimizer trace CSV.
//!
//! A model file holds exactly one of
//!
//! ```json
//! {"format": "ppsm-v1", "coefficients": [c1, c2, c3, c4, c5, c6, c7]}
//! {"format": "ppsm-v1", "table": [p0, p1, p2, p3, p4, p5, p6, p7]}
//! ```
//!
//! with table entries in flat index order `4 b(psi) + 2 b(s) + b(phi)`.

use std::io::{Read, Write};

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::model::{CoefficientVector, Outcome, ProbabilityTable, Sign};
use crate::montecarlo::SampleBatch;
use crate::optimize::OptimizationResult;

pub const MODEL_FORMAT: &str = "ppsm-v1";

/// A model as given in a file: either representation is kept verbatim so it can be re-emitted.
#[derive(Clone, Debug, PartialEq)]
pub enum ModelSpec {
    Coefficients(CoefficientVector),
    Table(ProbabilityTable),
}

impl ModelSpec {
    pub fn table(&self) -> Result<ProbabilityTable> {
        match self {
            ModelSpec::Coefficients(c) => c.to_table(),
            ModelSpec::Table(t) => Ok(*t),
        }
    }

    pub fn to_json(&self) -> String {
        let v = match self {
            ModelSpec::Coefficients(c) => json!({"format": MODEL_FORMAT, "coefficients": c}),
            ModelSpec::Table(t) => json!({"format": MODEL_FORMAT, "table": t}),
        };
        v.to_string()
    }
}

fn numbers<const N: usize>(v: &Value, key: &str) -> Result<[f64; N]> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Format(format!("{key} must be an array")))?;
    if arr.len() != N {
        return Err(Error::Format(format!(
            "{key} must have {N} entries, found {}",
            arr.len()
        )));
    }
    let mut out = [0.0; N];
    for (i, (o, x)) in out.iter_mut().zip(arr).enumerate() {
        *o = x
            .as_f64()
            .ok_or_else(|| Error::Format(format!("{key}[{i}] is not a number")))?;
    }
    Ok(out)
}

pub fn parse_model(text: &str) -> Result<ModelSpec> {
    let v: Value = serde_json::from_str(text)?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Format("model must be a JSON object".into()))?;
    match obj.get("format").and_then(Value::as_str) {
        Some(MODEL_FORMAT) => {}
        Some(other) => return Err(Error::Format(format!("unsupported format {other:?}"))),
        None => return Err(Error::Format("missing \"format\" field".into())),
    }
    if let Some(k) = obj
        .keys()
        .find(|k| !["format", "coefficients", "table"].contains(&k.as_str()))
    {
        return Err(Error::Format(format!("unexpected field {k:?}")));
    }
    match (obj.get("coefficients"), obj.get("table")) {
        (Some(c), None) => {
            let c = CoefficientVector::new(numbers::<7>(c, "coefficients")?);
            c.to_table()?;
            Ok(ModelSpec::Coefficients(c))
        }
        (None, Some(t)) => Ok(ModelSpec::Table(ProbabilityTable::new(numbers::<8>(
            t, "table",
        )?)?)),
        (Some(_), Some(_)) => Err(Error::Format(
            "exactly one of \"coefficients\" and \"table\" may be present".into(),
        )),
        (None, None) => Err(Error::Format(
            "one of \"coefficients\" or \"table\" is required".into(),
        )),
    }
}

pub fn read_model(path: &std::path::Path) -> Result<ModelSpec> {
    parse_model(&std::fs::read_to_string(path)?)
}

#[derive(Serialize, serde::Deserialize)]
struct BatchRow {
    psi: i8,
    s: i8,
    phi: i8,
    count: u64,
}

/// Writes `psi,s,phi,count` rows in flat index order.
pub fn write_batch_csv<W: Write>(batch: &SampleBatch, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for o in Outcome::all() {
        w.serialize(BatchRow {
            psi: o.psi.as_i8(),
            s: o.s.as_i8(),
            phi: o.phi.as_i8(),
            count: batch.count(o),
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_batch_csv<R: Read>(input: R, seed: u64) -> Result<SampleBatch> {
    let mut r = csv::Reader::from_reader(input);
    let mut counts = [0u64; 8];
    let mut seen = [false; 8];
    for row in r.deserialize() {
        let row: BatchRow = row?;
        let sign = |v: i8| {
            Sign::from_i64(v.into())
                .ok_or_else(|| Error::Format(format!("sign must be +1 or -1, got {v}")))
        };
        let o = Outcome::new(sign(row.psi)?, sign(row.s)?, sign(row.phi)?);
        if seen[o.index()] {
            return Err(Error::Format(format!("duplicate row for {o}")));
        }
        seen[o.index()] = true;
        counts[o.index()] = row.count;
    }
    Ok(SampleBatch::new(counts, seed))
}

/// `{best_margin, coefficients, witness, restarts_used, ...}`.
pub fn optimization_json(result: &OptimizationResult) -> Value {
    json!({
        "best_margin": result.best_margin,
        "coefficients": result.best_model,
        "witness": {"psi": result.witness.0, "phi": result.witness.1},
        "restarts_used": result.restarts_used,
        "best_restart": result.best_restart,
        "evaluations": result.evaluations,
    })
}

pub fn write_trace_csv<W: Write>(trace: &[(usize, f64)], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["iteration", "margin"])?;
    for (i, m) in trace {
        w.write_record([i.to_string(), m.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
