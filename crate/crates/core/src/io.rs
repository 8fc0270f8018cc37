//! JSON encodings of pairs, scalars, polynomials and tables.
//!
//! Scalars are always strings (`"3/4"`, `"1/2+3i"`) so exact values survive
//! the round trip; on input plain JSON numbers are accepted too and read as
//! exact decimals.

use serde_json::{json, Map, Value};

use crate::algebra::{Poly, Scalar};
use crate::error::{Error, Result};
use crate::pearson::PearsonPair;
use crate::recurrence::RecurrencePair;

/// A pair read from JSON, with its optional normalization `u_0`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairSpec {
    pub pair: PearsonPair,
    pub u0: Option<Scalar>,
}

pub fn scalar_from_json(value: &Value, field: &str) -> Result<Scalar> {
    match value {
        Value::String(s) => s.parse().map_err(|e| Error::Parse(format!("{field}: {e}"))),
        Value::Number(n) => n.to_string().parse().map_err(|e| Error::Parse(format!("{field}: {e}"))),
        other => Err(Error::Parse(format!("{field}: expected a string or number, found {other}"))),
    }
}

/// Coefficients lowest degree first.
pub fn poly_from_json(value: &Value, field: &str) -> Result<Poly> {
    let items = value
        .as_array()
        .ok_or_else(|| Error::Parse(format!("{field}: expected an array of coefficients")))?;
    items
        .iter()
        .enumerate()
        .map(|(i, v)| scalar_from_json(v, &format!("{field}[{i}]")))
        .collect::<Result<Vec<_>>>()
        .map(Poly::new)
}

/// Parses a coefficient array given as JSON text, e.g. `[1, "1/2"]`.
pub fn poly_from_str(text: &str, field: &str) -> Result<Poly> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("{field}: {e}")))?;
    poly_from_json(&value, field)
}

/// Reads `{"phi": [c, b, a], "psi": [q, p], "u0": "1"}`. Missing high
/// coefficients are zero and `u0` is optional.
pub fn pair_from_json_str(text: &str) -> Result<PairSpec> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("pair JSON: {e}")))?;
    let obj = value.as_object().ok_or_else(|| Error::Parse("pair JSON: expected an object".into()))?;
    if let Some(key) = obj.keys().find(|k| !matches!(k.as_str(), "phi" | "psi" | "u0")) {
        return Err(Error::Parse(format!("pair JSON: unknown field '{key}'")));
    }
    let field = |name: &str| obj.get(name).ok_or_else(|| Error::Parse(format!("pair JSON: missing field '{name}'")));
    let phi = poly_from_json(field("phi")?, "phi")?;
    let psi = poly_from_json(field("psi")?, "psi")?;
    let u0 = obj.get("u0").map(|v| scalar_from_json(v, "u0")).transpose()?;
    Ok(PairSpec { pair: PearsonPair::new(phi, psi)?, u0 })
}

pub fn scalar_to_json(s: &Scalar) -> Value {
    Value::String(s.to_string())
}

pub fn option_to_json(s: Option<&Scalar>) -> Value {
    s.map(scalar_to_json).unwrap_or(Value::Null)
}

pub fn poly_to_json(p: &Poly) -> Value {
    Value::Array(p.coeffs().iter().map(scalar_to_json).collect())
}

pub fn pair_to_json(spec: &PairSpec) -> Value {
    let mut obj = Map::new();
    obj.insert("phi".into(), poly_to_json(spec.pair.phi()));
    obj.insert("psi".into(), poly_to_json(spec.pair.psi()));
    if let Some(u0) = &spec.u0 {
        obj.insert("u0".into(), scalar_to_json(u0));
    }
    Value::Object(obj)
}

/// Moment dump: `["u_0", "u_1", …]`.
pub fn moments_to_json(moments: &[Scalar]) -> Value {
    Value::Array(moments.iter().map(scalar_to_json).collect())
}

/// Recurrence table: `[{"n": 0, "beta": …, "gamma": …}, …]`.
pub fn recurrence_to_json(rows: &[RecurrencePair]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| json!({"n": r.n, "beta": scalar_to_json(&r.beta), "gamma": scalar_to_json(&r.gamma)}))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_pairs() {
        let spec = pair_from_json_str(r#"{"phi": [1], "psi": [0, -2], "u0": "3/2"}"#).unwrap();
        assert_eq!(spec.pair.c(), Scalar::one());
        assert_eq!(spec.pair.p(), Scalar::from_int(-2));
        assert_eq!(spec.u0, Some(Scalar::ratio(3, 2)));
        let spec = pair_from_json_str(r#"{"phi": ["1", 2, 0.5], "psi": ["1/3+i", "-4"]}"#).unwrap();
        assert_eq!(spec.pair.a(), Scalar::ratio(1, 2));
        assert_eq!(spec.pair.q(), "1/3+i".parse().unwrap());
        assert_eq!(spec.u0, None);
    }

    #[test]
    fn reports_bad_fields() {
        let err = pair_from_json_str(r#"{"phi": [1]}"#).unwrap_err();
        assert!(err.to_string().contains("psi"));
        let err = pair_from_json_str(r#"{"phi": [1, "x"], "psi": [0, 1]}"#).unwrap_err();
        assert!(err.to_string().contains("phi[1]"));
        let err = pair_from_json_str("{\"phi\": [1],\n \"psi\": [0, 1").unwrap_err();
        assert!(err.to_string().contains("line 2"));
        assert!(pair_from_json_str(r#"{"phi": [1], "psi": [0, 1], "extra": 1}"#).is_err());
    }

    #[test]
    fn writes_sorted_keys() {
        let rows = vec![RecurrencePair { n: 1, beta: Scalar::zero(), gamma: Scalar::ratio(1, 2) }];
        let text = serde_json::to_string(&recurrence_to_json(&rows)).unwrap();
        assert_eq!(text, r#"[{"beta":"0","gamma":"1/2","n":1}]"#);
    }

    #[test]
    fn round_trips_pairs() {
        let spec = pair_from_json_str(r#"{"phi": [1, 0, -1], "psi": [0, "-2"], "u0": "1"}"#).unwrap();
        let again = pair_from_json_str(&pair_to_json(&spec).to_string()).unwrap();
        assert_eq!(again, spec);
    }
}
