//! JSON encodings. Scalars travel as strings in the text grammar so that
//! values in `Q(√21)` survive exactly.

use std::collections::BTreeMap;

use opmod::cohomology::Cochain1;
use opmod::intertwiner::{IntertwinerVerdict, Status};
use opmod::{Density, DiffOp, NormalSymbol, Poly, Scalar, SymbolScheme};
use serde_json::{json, Value};

use crate::expr::{parse_scalar, ParseError};

#[derive(Debug, thiserror::Error)]
pub enum DecodeError {
    #[error("invalid JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("expected {0}")]
    Shape(&'static str),
    #[error("in scalar: {0}")]
    Scalar(#[from] ParseError),
}

pub fn scalar(s: &Scalar) -> Value {
    Value::String(s.to_string())
}

/// Dense coefficient list, ascending powers of `x`.
pub fn poly(p: &Poly) -> Value {
    Value::Array(p.coeffs().iter().map(scalar).collect())
}

fn polys(ps: &[Poly]) -> Value {
    Value::Array(ps.iter().map(poly).collect())
}

pub fn diffop(a: &DiffOp) -> Value {
    json!({"kind": "diffop", "lambda": scalar(&a.weight), "coeffs": polys(a.coeffs())})
}

pub fn symbol(s: &NormalSymbol) -> Value {
    json!({"kind": "symbol", "lambda": scalar(&s.weight), "bars": polys(s.bars())})
}

pub fn density(d: &Density) -> Value {
    json!({"kind": "density", "lambda": scalar(&d.weight), "value": poly(&d.value)})
}

pub fn scheme(s: &SymbolScheme) -> Value {
    let rows: Vec<Value> = s
        .table()
        .iter()
        .map(|row| Value::Array(row.iter().map(scalar).collect()))
        .collect();
    json!({"kind": "scheme", "k": s.order(), "lambda": scalar(s.weight()), "alpha": rows})
}

/// `alphas` lists a basis of the solution space, one vector per entry.
pub fn verdict(v: &IntertwinerVerdict) -> Value {
    let status = match v.status {
        Status::Isomorphic => "isomorphic",
        Status::NotIsomorphic => "not-isomorphic",
    };
    let alphas: Vec<Value> = v
        .basis
        .iter()
        .map(|m| Value::Array(m.alphas.iter().map(scalar).collect()))
        .collect();
    json!({
        "status": status,
        "dimension": v.solution_dimension,
        "alphas": alphas,
        "degenerate_slots": v.degenerate_slots,
    })
}

pub fn cochain(c: &Cochain1) -> Value {
    let terms: serde_json::Map<String, Value> = c
        .terms()
        .iter()
        .map(|((p, q), v)| (format!("{p},{q}"), scalar(v)))
        .collect();
    json!({"kind": "cochain", "s": scalar(c.source()), "m": c.shift(), "terms": terms})
}

fn field<'a>(v: &'a Value, key: &str, what: &'static str) -> Result<&'a Value, DecodeError> {
    v.get(key).ok_or(DecodeError::Shape(what))
}

fn kind_is(v: &Value, kind: &str, what: &'static str) -> Result<(), DecodeError> {
    match v.get("kind").and_then(Value::as_str) {
        Some(k) if k == kind => Ok(()),
        _ => Err(DecodeError::Shape(what)),
    }
}

pub fn decode_scalar(v: &Value) -> Result<Scalar, DecodeError> {
    let s = v.as_str().ok_or(DecodeError::Shape("a scalar string"))?;
    Ok(parse_scalar(s)?)
}

pub fn decode_poly(v: &Value) -> Result<Poly, DecodeError> {
    let items = v.as_array().ok_or(DecodeError::Shape("a coefficient list"))?;
    Ok(Poly::new(items.iter().map(decode_scalar).collect::<Result<_, _>>()?))
}

fn decode_polys(v: &Value) -> Result<Vec<Poly>, DecodeError> {
    let items = v.as_array().ok_or(DecodeError::Shape("a list of coefficient lists"))?;
    items.iter().map(decode_poly).collect()
}

pub fn decode_diffop(v: &Value) -> Result<DiffOp, DecodeError> {
    const WHAT: &str = "{\"kind\":\"diffop\",\"lambda\",\"coeffs\"}";
    kind_is(v, "diffop", WHAT)?;
    let weight = decode_scalar(field(v, "lambda", WHAT)?)?;
    Ok(DiffOp::new(weight, decode_polys(field(v, "coeffs", WHAT)?)?))
}

pub fn decode_symbol(v: &Value) -> Result<NormalSymbol, DecodeError> {
    const WHAT: &str = "{\"kind\":\"symbol\",\"lambda\",\"bars\"}";
    kind_is(v, "symbol", WHAT)?;
    let weight = decode_scalar(field(v, "lambda", WHAT)?)?;
    Ok(NormalSymbol::new(weight, decode_polys(field(v, "bars", WHAT)?)?))
}

pub fn decode_density(v: &Value) -> Result<Density, DecodeError> {
    const WHAT: &str = "{\"kind\":\"density\",\"lambda\",\"value\"}";
    kind_is(v, "density", WHAT)?;
    let weight = decode_scalar(field(v, "lambda", WHAT)?)?;
    Ok(Density::new(weight, decode_poly(field(v, "value", WHAT)?)?))
}

pub fn decode_cochain(v: &Value) -> Result<Cochain1, DecodeError> {
    const WHAT: &str = "{\"kind\":\"cochain\",\"s\",\"m\",\"terms\"}";
    kind_is(v, "cochain", WHAT)?;
    let s = decode_scalar(field(v, "s", WHAT)?)?;
    let m = field(v, "m", WHAT)?
        .as_u64()
        .ok_or(DecodeError::Shape("an integer grade"))? as usize;
    let raw = field(v, "terms", WHAT)?.as_object().ok_or(DecodeError::Shape(WHAT))?;
    let mut terms = BTreeMap::new();
    for (key, value) in raw {
        let (p, q) = key
            .split_once(',')
            .and_then(|(p, q)| Some((p.parse().ok()?, q.parse().ok()?)))
            .ok_or(DecodeError::Shape("term keys \"p,q\""))?;
        terms.insert((p, q), decode_scalar(value)?);
    }
    Cochain1::new(s, m, terms).map_err(|_| DecodeError::Shape("terms of grade m"))
}
