//! JSON encodings of values, functions, spaces and capacities.
//!
//! Infinities are the strings `"+inf"` / `"-inf"`. Exact rationals with a
//! terminating decimal expansion are written as JSON numbers; any other
//! rational is the string `"p/q"`, so every exact value round-trips.

use std::str::FromStr;
use std::sync::Arc;

use num::{BigInt, BigRational, Integer, Signed, Zero};
use serde::{Serialize, Serializer};
use serde_json::{Number, Value};

use crate::error::{Error, Result};
use crate::ext_real::{Backing, ExtReal, Scalar};
use crate::integrals::Capacity;
use crate::lattice::FnClass;
use crate::measure::{AtomSet, MeasureSpace};

fn terminating_decimal(r: &BigRational) -> Option<String> {
    let mut d = r.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0u32, 0u32);
    while d.is_even() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if d != BigInt::from(1) {
        return None;
    }
    let places = twos.max(fives);
    if places == 0 {
        return Some(r.numer().to_string());
    }
    let scaled = r.numer() * num::pow::pow(BigInt::from(10), places as usize) / r.denom();
    let digits = scaled.abs().to_string();
    let digits = format!("{digits:0>width$}", width = places as usize + 1);
    let (int, frac) = digits.split_at(digits.len() - places as usize);
    let sign = if scaled.is_negative() { "-" } else { "" };
    Some(format!("{sign}{int}.{frac}"))
}

pub fn scalar_to_json(s: &Scalar) -> Value {
    match s {
        Scalar::Exact(r) => match terminating_decimal(r) {
            Some(text) => Value::Number(Number::from_str(&text).expect("decimal literal")),
            None => Value::String(format!("{}/{}", r.numer(), r.denom())),
        },
        Scalar::Float(x) => Number::from_f64(*x)
            .map(Value::Number)
            .unwrap_or_else(|| Value::String(format!("{x}"))),
    }
}

pub fn ext_to_json(v: &ExtReal) -> Value {
    match v {
        ExtReal::NegInf => Value::String("-inf".into()),
        ExtReal::PosInf => Value::String("+inf".into()),
        ExtReal::Finite(s) => scalar_to_json(s),
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ext_to_json(self).serialize(s)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        scalar_to_json(self).serialize(s)
    }
}

impl Serialize for FnClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.values().serialize(s)
    }
}

impl Serialize for MeasureSpace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        space_to_json(self).serialize(s)
    }
}

pub fn space_to_json(space: &MeasureSpace) -> Value {
    let mut obj = serde_json::Map::new();
    obj.insert("atoms".into(), space.atoms().into());
    obj.insert(
        "weights".into(),
        Value::Array(space.weights().iter().map(scalar_to_json).collect()),
    );
    if let Some(t) = space.truncation_of() {
        obj.insert("truncation_of".into(), t.into());
    }
    Value::Object(obj)
}

pub fn scalar_from_json(v: &Value, backing: Backing) -> Result<Scalar> {
    match v {
        Value::Number(n) => backing.parse_scalar(&n.to_string()),
        Value::String(s) => backing.parse_scalar(s),
        other => Err(Error::schema(format!("expected a number, got {other}"))),
    }
}

pub fn ext_from_json(v: &Value, backing: Backing) -> Result<ExtReal> {
    if let Value::String(s) = v {
        match s.trim() {
            "+inf" | "inf" | "+infinity" | "infinity" => return Ok(ExtReal::PosInf),
            "-inf" | "-infinity" => return Ok(ExtReal::NegInf),
            _ => {}
        }
    }
    Ok(ExtReal::finite(scalar_from_json(v, backing)?))
}

pub fn space_from_json(v: &Value, backing: Backing) -> Result<MeasureSpace> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::schema("space must be an object"))?;
    let weights = obj
        .get("weights")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::schema("space.weights must be an array"))?
        .iter()
        .map(|w| scalar_from_json(w, backing))
        .collect::<Result<Vec<_>>>()?;
    let space = match obj.get("atoms") {
        None => MeasureSpace::from_weights(weights)?,
        Some(a) => {
            let atoms = a
                .as_array()
                .ok_or_else(|| Error::schema("space.atoms must be an array"))?
                .iter()
                .map(|x| match x {
                    Value::String(s) => Ok(s.clone()),
                    Value::Number(n) => Ok(n.to_string()),
                    _ => Err(Error::schema("atom identifiers must be strings")),
                })
                .collect::<Result<Vec<_>>>()?;
            MeasureSpace::new(atoms, weights)?
        }
    };
    Ok(match obj.get("truncation_of").and_then(Value::as_str) {
        Some(t) => space.with_truncation(t),
        None => space,
    })
}

pub fn fn_from_json(v: &Value, space: &Arc<MeasureSpace>, backing: Backing) -> Result<FnClass> {
    let values = v
        .as_array()
        .ok_or_else(|| Error::schema("a function literal must be an array"))?
        .iter()
        .map(|x| ext_from_json(x, backing))
        .collect::<Result<Vec<_>>>()?;
    if values.len() != space.len() {
        return Err(Error::schema(format!(
            "function literal has {} values for {} atoms",
            values.len(),
            space.len()
        )));
    }
    FnClass::new(space.clone(), values)
}

/// Parses `"{a,b}"` (or `"{}"`) into an atom set.
pub fn atom_set_from_label(label: &str, space: &MeasureSpace) -> Result<AtomSet> {
    let inner = label
        .trim()
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| Error::schema(format!("set label {label:?} must look like {{a,b}}")))?;
    let ids: Vec<&str> = inner
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    space.atom_set(&ids)
}

/// `{"kind":"table","values":{...}}` or
/// `{"kind":"distortion","of_measure":true,"gamma":0.8}`.
pub fn capacity_from_json(v: &Value, space: &Arc<MeasureSpace>, backing: Backing) -> Result<Capacity> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::schema("capacity must be an object"))?;
    match obj.get("kind").and_then(Value::as_str) {
        Some("table") => {
            let values = obj
                .get("values")
                .and_then(Value::as_object)
                .ok_or_else(|| Error::schema("table capacity needs a \"values\" object"))?;
            let entries = values
                .iter()
                .map(|(k, x)| Ok((atom_set_from_label(k, space)?, ext_from_json(x, backing)?)))
                .collect::<Result<Vec<_>>>()?;
            Capacity::table(space.clone(), entries)
        }
        Some("distortion") => {
            if obj.get("of_measure").and_then(Value::as_bool) == Some(false) {
                return Err(Error::schema("only distortions of the space measure are supported"));
            }
            let gamma = obj
                .get("gamma")
                .ok_or_else(|| Error::schema("distortion capacity needs \"gamma\""))?;
            Capacity::distortion(space.clone(), scalar_from_json(gamma, backing)?)
        }
        Some("measure") => Ok(Capacity::from_measure(space.clone())),
        other => Err(Error::schema(format!("unknown capacity kind {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn values_round_trip() {
        let cases = [
            ExtReal::PosInf,
            ExtReal::NegInf,
            ExtReal::int(-100),
            ExtReal::ratio(17, 10),
            ExtReal::ratio(-1, 3),
            ExtReal::ratio(1, 8),
            ExtReal::ratio(-3, 40),
        ];
        for v in cases {
            let j = ext_to_json(&v);
            assert_eq!(ext_from_json(&j, Backing::Rational).unwrap(), v, "{j}");
        }
        assert_eq!(ext_to_json(&ExtReal::ratio(17, 10)).to_string(), "1.7");
        assert_eq!(ext_to_json(&ExtReal::ratio(-3, 40)).to_string(), "-0.075");
        assert_eq!(ext_to_json(&ExtReal::ratio(1, 3)), json!("1/3"));
        assert_eq!(ext_to_json(&ExtReal::PosInf), json!("+inf"));
    }

    #[test]
    fn decimal_numbers_parse_exactly() {
        let v: Value = serde_json::from_str("[0.1, 1e9, -2.5]").unwrap();
        let s = MeasureSpace::from_weights(vec![Scalar::one(); 3]).unwrap().into_shared();
        let f = fn_from_json(&v, &s, Backing::Rational).unwrap();
        assert_eq!(*f.value(0), ExtReal::ratio(1, 10));
        assert_eq!(*f.value(1), ExtReal::int(1_000_000_000));
    }

    #[test]
    fn space_and_capacity() {
        let s = space_from_json(&json!({"atoms": ["a", "b"], "weights": [1, 1]}), Backing::Rational)
            .unwrap()
            .into_shared();
        let c = capacity_from_json(
            &json!({"kind": "table", "values": {"{a}": 0.5, "{b}": 0.7, "{a,b}": 1}}),
            &s,
            Backing::Rational,
        )
        .unwrap();
        assert_eq!(c.value(&s.atom_set(&["b"]).unwrap()).unwrap(), ExtReal::ratio(7, 10));
        let bad = capacity_from_json(
            &json!({"kind": "table", "values": {"{a}": 2, "{b}": 0.7, "{a,b}": 1}}),
            &s,
            Backing::Rational,
        );
        assert!(bad.is_err());
        assert!(fn_from_json(&json!([1]), &s, Backing::Rational).is_err());
        assert!(space_from_json(&json!({"weights": "x"}), Backing::Rational).is_err());
    }
}
