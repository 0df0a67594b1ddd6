//! JSON file formats and canonical serialization.
//!
//! Complex numbers are always [re, im] pairs. Canonical output sorts object
//! keys and prints every float with 17 significant digits so golden files
//! and repeated runs are byte-identical.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::evaluation::{MomentReport, Reconstruction};
use crate::hilbert::{PhysicalState, StateVector};
use crate::operators::Observable;
use crate::symdata::{Chart, SymmetryData};

fn complex_value(c: Complex64) -> Value {
    json!([c.re, c.im])
}

fn vector_value(v: &DVector<Complex64>) -> Value {
    Value::Array(v.iter().map(|c| complex_value(*c)).collect())
}

fn matrix_value(m: &DMatrix<Complex64>) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|r| Value::Array((0..m.ncols()).map(|c| complex_value(m[(r, c)])).collect()))
            .collect(),
    )
}

pub fn state_to_value(dim: usize, hbar: f64, z: &DVector<Complex64>) -> Value {
    json!({ "dim": dim, "hbar": hbar, "z": vector_value(z) })
}

pub fn state_vector_to_value(s: &StateVector) -> Value {
    state_to_value(s.dim(), s.hbar(), s.z())
}

pub fn physical_state_to_value(p: &PhysicalState) -> Value {
    state_to_value(p.dim(), p.hbar(), p.z_fixed())
}

pub fn operator_to_value(o: &Observable) -> Value {
    json!({ "dim": o.dim(), "hbar": o.hbar(), "B": matrix_value(o.matrix()) })
}

pub fn symdata_to_value(sd: &SymmetryData, state: Value) -> Value {
    json!({
        "chart": sd.chart().name(),
        "f": complex_value(sd.f()),
        "X": vector_value(sd.x()),
        "Xbar": vector_value(sd.xbar()),
        "K": matrix_value(sd.k()),
        "state": state,
    })
}

pub fn moment_report_to_value(r: &MomentReport, sampled: Option<&[f64]>) -> Value {
    let mut map = Map::new();
    map.insert("K".into(), json!(r.order));
    map.insert("exact".into(), json!(r.exact));
    map.insert("spectral".into(), json!(r.spectral));
    map.insert("p".into(), json!(r.probabilities));
    map.insert("scale".into(), json!(r.scale));
    if let Some(s) = sampled {
        map.insert("sampled".into(), json!(s));
    }
    Value::Object(map)
}

pub fn reconstruction_to_value(r: &Reconstruction) -> Value {
    let mut v = physical_state_to_value(&r.state);
    v.as_object_mut()
        .expect("object")
        .insert("residual".into(), json!(r.residual));
    v
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| parse_err(format!("missing field `{key}`")))
}

fn as_f64(v: &Value, what: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| parse_err(format!("{what} is not a number")))
}

fn parse_complex(v: &Value) -> Result<Complex64> {
    let pair = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| parse_err("complex numbers are [re, im] pairs"))?;
    Ok(Complex64::new(
        as_f64(&pair[0], "re")?,
        as_f64(&pair[1], "im")?,
    ))
}

fn parse_vector(v: &Value) -> Result<DVector<Complex64>> {
    let arr = v.as_array().ok_or_else(|| parse_err("expected array"))?;
    let items: Result<Vec<Complex64>> = arr.iter().map(parse_complex).collect();
    Ok(DVector::from_vec(items?))
}

fn parse_matrix(v: &Value) -> Result<DMatrix<Complex64>> {
    let rows = v.as_array().ok_or_else(|| parse_err("expected matrix array"))?;
    let n = rows.len();
    let mut data = Vec::with_capacity(n * n);
    for row in rows {
        let cols = row.as_array().ok_or_else(|| parse_err("expected matrix row"))?;
        if cols.len() != n {
            return Err(parse_err("matrix is not square"));
        }
        for cell in cols {
            data.push(parse_complex(cell)?);
        }
    }
    Ok(DMatrix::from_row_slice(n, n, &data))
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))
}

pub fn parse_state(text: &str) -> Result<StateVector> {
    let v = parse_json(text)?;
    let dim = get(&v, "dim")?
        .as_u64()
        .ok_or_else(|| parse_err("dim is not an integer"))? as usize;
    let hbar = as_f64(get(&v, "hbar")?, "hbar")?;
    let z = parse_vector(get(&v, "z")?)?;
    if z.len() != dim {
        return Err(Error::DimensionMismatch(z.len(), dim));
    }
    StateVector::new(z, hbar)
}

pub fn parse_operator(text: &str) -> Result<Observable> {
    let v = parse_json(text)?;
    let dim = get(&v, "dim")?
        .as_u64()
        .ok_or_else(|| parse_err("dim is not an integer"))? as usize;
    let hbar = as_f64(get(&v, "hbar")?, "hbar")?;
    let b = parse_matrix(get(&v, "B")?)?;
    if b.nrows() != dim {
        return Err(Error::DimensionMismatch(b.nrows(), dim));
    }
    Observable::new(b, hbar)
}

pub fn parse_chart(name: &str) -> Result<Chart> {
    match name {
        "H" => Ok(Chart::HChart),
        "z" => Ok(Chart::HomogeneousFs),
        "w" => Ok(Chart::AffineFs),
        other => Err(parse_err(format!("unknown chart `{other}`"))),
    }
}

pub fn parse_symdata(text: &str) -> Result<SymmetryData> {
    let v = parse_json(text)?;
    let chart = parse_chart(
        get(&v, "chart")?
            .as_str()
            .ok_or_else(|| parse_err("chart is not a string"))?,
    )?;
    let f = parse_complex(get(&v, "f")?)?;
    let x = parse_vector(get(&v, "X")?)?;
    let xbar = parse_vector(get(&v, "Xbar")?)?;
    let k = parse_matrix(get(&v, "K")?)?;
    let state = get(&v, "state")?;
    let hbar = as_f64(get(state, "hbar")?, "hbar")?;
    let z = parse_vector(get(state, "z")?)?;
    let point = match chart {
        Chart::AffineFs => {
            // stored state is the homogeneous representative; the triplet's
            // evaluation point is its affine image
            if z[0].norm() == 0.0 {
                return Err(Error::ChartUndefined);
            }
            DVector::from_fn(z.len() - 1, |n, _| z[n + 1] / z[0])
        }
        _ => z,
    };
    SymmetryData::from_parts(chart, f, x, xbar, k, point, hbar)
}

/// Serialize a JSON value canonically: keys sorted, floats printed with 17
/// significant digits, no insignificant whitespace.
pub fn canonical_to_string(v: &Value) -> String {
    let mut out = String::new();
    write_canonical(v, &mut out);
    out
}

fn write_canonical(v: &Value, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                out.push_str(&format_float(n.as_f64().expect("finite float")));
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("string"));
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_canonical(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            // sort explicitly rather than relying on serde_json's map order
            let mut entries: Vec<(&String, &Value)> = map.iter().collect();
            entries.sort_by_key(|(k, _)| *k);
            out.push('{');
            for (i, (key, val)) in entries.into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(key).expect("key"));
                out.push(':');
                write_canonical(val, out);
            }
            out.push('}');
        }
    }
}

fn format_float(x: f64) -> String {
    format!("{:.16e}", x)
}
