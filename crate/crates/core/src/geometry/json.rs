//! JSON forms: rationals as `"p/q"` strings, integers as JSON numbers
//! (or decimal strings when they exceed 64 bits).

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Halfspace, Polytope};
use crate::error::{GeometryError, Result};
use crate::rat::{fmt_rat, parse_rat, IntVector, Point};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub dim: usize,
    pub vertices: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HalfspaceJson {
    pub normal: Vec<Value>,
    pub offset: String,
}

pub fn int_to_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

pub fn int_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| GeometryError::Parse(format!("expected an integer, found {n}"))),
        Value::String(s) => s.trim().parse().map_err(|_| GeometryError::Parse(format!("invalid integer {s:?}"))),
        other => Err(GeometryError::Parse(format!("expected an integer, found {other}"))),
    }
}

pub fn int_vector_to_json(v: &[BigInt]) -> Vec<Value> {
    v.iter().map(int_to_json).collect()
}

pub fn int_vector_from_json(v: &[Value]) -> Result<IntVector> {
    v.iter().map(int_from_json).collect()
}

pub fn point_to_json(p: &[crate::rat::Rat]) -> Vec<String> {
    p.iter().map(fmt_rat).collect()
}

pub fn point_from_json(p: &[String]) -> Result<Point> {
    p.iter().map(|s| parse_rat(s)).collect()
}

impl From<&Polytope> for PolytopeJson {
    fn from(p: &Polytope) -> Self {
        PolytopeJson { dim: p.dim(), vertices: p.vertices().iter().map(|v| point_to_json(v)).collect() }
    }
}

impl PolytopeJson {
    pub fn to_polytope(&self) -> Result<Polytope> {
        let pts: Vec<Point> = self.vertices.iter().map(|v| point_from_json(v)).collect::<Result<_>>()?;
        if let Some(p) = pts.iter().find(|p| p.len() != self.dim) {
            return Err(GeometryError::DimensionMismatch { expected: self.dim, found: p.len() });
        }
        Polytope::from_points(pts)
    }
}

impl From<&Halfspace> for HalfspaceJson {
    fn from(h: &Halfspace) -> Self {
        HalfspaceJson { normal: int_vector_to_json(&h.normal), offset: fmt_rat(&h.offset) }
    }
}

impl HalfspaceJson {
    pub fn to_halfspace(&self) -> Result<Halfspace> {
        Ok(Halfspace::new(int_vector_from_json(&self.normal)?, parse_rat(&self.offset)?))
    }
}

pub fn polytope_to_json(p: &Polytope) -> Value {
    serde_json::to_value(PolytopeJson::from(p)).expect("plain data serializes")
}

pub fn polytope_from_str(s: &str) -> Result<Polytope> {
    let j: PolytopeJson = serde_json::from_str(s).map_err(|e| GeometryError::Parse(e.to_string()))?;
    j.to_polytope()
}

pub fn polytope_from_value(v: &Value) -> Result<Polytope> {
    let j: PolytopeJson = serde_json::from_value(v.clone()).map_err(|e| GeometryError::Parse(e.to_string()))?;
    j.to_polytope()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::point;

    #[test]
    fn polytope_round_trip() {
        let p = Polytope::from_points(vec![point(&[(0, 1), (0, 1)]), point(&[(1, 1), (0, 1)]), point(&[(1, 1), (1, 2)])])
            .unwrap();
        let s = serde_json::to_string(&polytope_to_json(&p)).unwrap();
        assert_eq!(s, r#"{"dim":2,"vertices":[["0","0"],["1","0"],["1","1/2"]]}"#);
        assert_eq!(polytope_from_str(&s).unwrap(), p);
    }

    #[test]
    fn halfspace_json() {
        let j: HalfspaceJson = serde_json::from_str(r#"{"normal":[1,-2],"offset":"-3/4"}"#).unwrap();
        let h = j.to_halfspace().unwrap();
        assert_eq!(serde_json::to_string(&HalfspaceJson::from(&h)).unwrap(), r#"{"normal":[1,-2],"offset":"-3/4"}"#);
    }

    #[test]
    fn malformed_inputs() {
        assert!(polytope_from_str(r#"{"dim":2,"vertices":[["0","x"]]}"#).is_err());
        assert!(polytope_from_str(r#"{"dim":2,"vertices":[["0"]]}"#).is_err());
        assert!(polytope_from_str(r#"{"dim":2}"#).is_err());
        assert!(polytope_from_str(r#"{"dim":2,"vertices":[]}"#).is_err());
    }
}
