//! Algebra JSON: `{ "dim": n, "basis": [...], "brackets": { "i,j": [[k, "num/den"], ...] } }`.
//!
//! Indices are 0-based and scalars are canonical rational strings. Output
//! lists bracket keys in numeric `(i, j)` order and terms by ascending `k`, so
//! a canonical document survives a read/write round trip byte for byte.

use serde::ser::{SerializeMap, SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::linalg::{format_scalar, parse_scalar, Vector};

fn json_err(msg: impl Into<String>) -> Error {
    Error::Json(msg.into())
}

/// Serializable view of an algebra.
pub struct AlgebraDoc<'a>(pub &'a Algebra);

struct Terms<'a>(&'a Vector);

impl Serialize for Terms<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let support: Vec<usize> = self.0.support().collect();
        let mut seq = s.serialize_seq(Some(support.len()))?;
        for k in support {
            seq.serialize_element(&(k, format_scalar(&self.0[k])))?;
        }
        seq.end()
    }
}

struct Brackets<'a>(&'a Algebra);

impl Serialize for Brackets<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        // BTreeMap iteration over (usize, usize) is already numeric order.
        let mut map = s.serialize_map(None)?;
        for (&(i, j), v) in self.0.products() {
            map.serialize_entry(&format!("{i},{j}"), &Terms(v))?;
        }
        map.end()
    }
}

impl Serialize for AlgebraDoc<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Algebra", 3)?;
        st.serialize_field("dim", &self.0.dim())?;
        st.serialize_field("basis", self.0.labels())?;
        st.serialize_field("brackets", &Brackets(self.0))?;
        st.end()
    }
}

pub fn algebra_to_json(alg: &Algebra) -> String {
    serde_json::to_string_pretty(&AlgebraDoc(alg)).expect("algebra serialization cannot fail")
}

pub fn algebra_to_value(alg: &Algebra) -> Value {
    serde_json::to_value(AlgebraDoc(alg)).expect("algebra serialization cannot fail")
}

/// Parses and validates an algebra document. Syntax errors carry the
/// line/column; schema errors carry the JSON path of the offending value.
pub fn algebra_from_json(text: &str) -> Result<Algebra> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| json_err(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    algebra_from_value(&value)
}

fn index(value: &Value, dim: usize, path: &str) -> Result<usize> {
    let k = value
        .as_u64()
        .ok_or_else(|| json_err(format!("{path}: expected a non-negative integer index")))?;
    let k = usize::try_from(k).map_err(|_| json_err(format!("{path}: index too large")))?;
    if k >= dim {
        return Err(json_err(format!(
            "{path}: index {k} out of range for dimension {dim}"
        )));
    }
    Ok(k)
}

fn parse_key(key: &str, dim: usize) -> Result<(usize, usize)> {
    let path = format!("brackets[{key:?}]");
    let bad = || json_err(format!("{path}: key must have the form \"i,j\""));
    let (a, b) = key.split_once(',').ok_or_else(bad)?;
    let parse = |s: &str| -> Result<usize> {
        if s.is_empty()
            || !s.bytes().all(|c| c.is_ascii_digit())
            || (s.len() > 1 && s.starts_with('0'))
        {
            return Err(bad());
        }
        let k: usize = s.parse().map_err(|_| bad())?;
        if k >= dim {
            return Err(json_err(format!(
                "{path}: index {k} out of range for dimension {dim}"
            )));
        }
        Ok(k)
    };
    Ok((parse(a)?, parse(b)?))
}

pub fn algebra_from_value(value: &Value) -> Result<Algebra> {
    let obj = value
        .as_object()
        .ok_or_else(|| json_err("top level: expected an object"))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "dim" | "basis" | "brackets") {
            return Err(json_err(format!("unknown field {key:?}")));
        }
    }
    let dim = obj
        .get("dim")
        .ok_or_else(|| json_err("missing field \"dim\""))?
        .as_u64()
        .filter(|&d| d > 0)
        .ok_or_else(|| json_err("dim: expected a positive integer"))? as usize;
    let basis = obj
        .get("basis")
        .ok_or_else(|| json_err("missing field \"basis\""))?
        .as_array()
        .ok_or_else(|| json_err("basis: expected an array of strings"))?;
    if basis.len() != dim {
        return Err(json_err(format!(
            "basis: {} labels for dimension {dim}",
            basis.len()
        )));
    }
    let labels = basis
        .iter()
        .enumerate()
        .map(|(i, l)| {
            l.as_str()
                .map(str::to_owned)
                .ok_or_else(|| json_err(format!("basis[{i}]: expected a string")))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut alg = Algebra::new(labels).map_err(|e| json_err(format!("basis: {e}")))?;

    let brackets = match obj.get("brackets") {
        None => return Ok(alg),
        Some(b) => b
            .as_object()
            .ok_or_else(|| json_err("brackets: expected an object"))?,
    };
    for (key, terms) in brackets {
        let (i, j) = parse_key(key, dim)?;
        let path = format!("brackets[{key:?}]");
        let terms = terms.as_array().ok_or_else(|| {
            json_err(format!(
                "{path}: expected an array of [k, \"coefficient\"] pairs"
            ))
        })?;
        let mut v = Vector::zeros(dim);
        let mut seen = vec![false; dim];
        for (t, term) in terms.iter().enumerate() {
            let tpath = format!("{path}[{t}]");
            let pair = term
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| json_err(format!("{tpath}: expected [k, \"coefficient\"]")))?;
            let k = index(&pair[0], dim, &format!("{tpath}[0]"))?;
            if std::mem::replace(&mut seen[k], true) {
                return Err(json_err(format!("{tpath}: basis index {k} listed twice")));
            }
            let c = pair[1].as_str().ok_or_else(|| {
                json_err(format!(
                    "{tpath}[1]: expected a rational string such as \"-3/2\""
                ))
            })?;
            v[k] = parse_scalar(c).map_err(|e| json_err(format!("{tpath}[1]: {e}")))?;
        }
        alg.set_product(i, j, v)?;
    }
    Ok(alg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{make, Family, FamilySpec};
    use crate::linalg::frac;

    #[test]
    fn round_trip_is_byte_exact() {
        for spec in [
            FamilySpec::lie(Family::TauNp1, 12, 4, vec![3, 5]),
            FamilySpec::m(Family::M2, 8, 4),
            FamilySpec::m4(12, 6, 1),
        ] {
            let alg = make(&spec).unwrap();
            let text = algebra_to_json(&alg);
            let back = algebra_from_json(&text).unwrap();
            assert_eq!(back, alg);
            assert_eq!(algebra_to_json(&back), text);
        }
    }

    #[test]
    fn keys_are_in_numeric_order() {
        let mut alg = Algebra::abelian(11).unwrap();
        alg.add_term(10, 0, frac(-3, 2), 1).unwrap();
        alg.add_term(2, 0, frac(1, 1), 3).unwrap();
        let text = serde_json::to_string(&AlgebraDoc(&alg)).unwrap();
        assert!(text.find("\"2,0\"").unwrap() < text.find("\"10,0\"").unwrap());
        assert!(text.contains(r#""10,0":[[1,"-3/2"]]"#), "{text}");
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = algebra_from_json("{\n  \"dim\": 2,\n  \"basis\": [\"a\" \"b\"]\n}").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn schema_errors_carry_path() {
        let cases = [
            (
                r#"{"dim":2,"basis":["a","b"],"brackets":{"0,1":[[2,"1"]]}}"#,
                "brackets[\"0,1\"][0][0]",
            ),
            (
                r#"{"dim":2,"basis":["a","b"],"brackets":{"0,5":[[1,"1"]]}}"#,
                "out of range",
            ),
            (
                r#"{"dim":2,"basis":["a","b"],"brackets":{"0,1":[[1,"2/4"]]}}"#,
                "brackets[\"0,1\"][0][1]",
            ),
            (
                r#"{"dim":2,"basis":["a","b"],"brackets":{"0;1":[]}}"#,
                "\"i,j\"",
            ),
            (r#"{"dim":3,"basis":["a","b"]}"#, "basis"),
            (r#"{"dim":2,"basis":["a","a"]}"#, "duplicate"),
            (r#"{"dim":2,"basis":["a","b"],"extra":1}"#, "unknown field"),
            (
                r#"{"dim":2,"basis":["a","b"],"brackets":{"0,1":[[1,"1"],[1,"2"]]}}"#,
                "twice",
            ),
        ];
        for (text, needle) in cases {
            let err = algebra_from_json(text).unwrap_err();
            assert!(matches!(err, Error::Json(_)), "{text}: {err}");
            assert!(err.to_string().contains(needle), "{text}: {err}");
        }
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let alg = algebra_from_json(r#"{"dim":2,"basis":["a","b"],"brackets":{"0,0":[[1,"0"]]}}"#)
            .unwrap();
        assert_eq!(alg.products().count(), 0);
    }
}
