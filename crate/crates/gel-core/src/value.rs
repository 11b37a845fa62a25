//! Exact rational edge values. All comparisons in this crate are exact;
//! no floating point is used anywhere.

use num_rational::Rational64;
use num_traits::Zero;
use std::str::FromStr;

/// An exact edge label.
pub type Value = Rational64;

/// Shorthand for constructing a rational value.
pub fn rat(num: i64, den: i64) -> Value {
    Value::new(num, den)
}

/// Shorthand for an integer value.
pub fn int(num: i64) -> Value {
    Value::from_integer(num)
}

pub fn is_negative(v: &Value) -> bool {
    *v < Value::zero()
}

/// Parses "p/q" or a plain integer.
pub fn parse_value(s: &str) -> Result<Value, String> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = i64::from_str(p.trim()).map_err(|e| format!("bad numerator {p:?}: {e}"))?;
        let q = i64::from_str(q.trim()).map_err(|e| format!("bad denominator {q:?}: {e}"))?;
        if q == 0 {
            return Err("zero denominator".into());
        }
        Ok(Value::new(p, q))
    } else {
        let p = i64::from_str(s).map_err(|e| format!("bad integer {s:?}: {e}"))?;
        Ok(Value::from_integer(p))
    }
}

/// Renders a value as "p/q", or "p" when integral.
pub fn format_value(v: &Value) -> String {
    if v.is_integer() {
        format!("{}", v.numer())
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Serde adapter rendering values as "p/q" strings in JSON.
pub mod value_serde {
    use super::{format_value, parse_value, Value};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Value, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_value(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Value, D::Error> {
        let s = String::deserialize(d)?;
        parse_value(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        for s in ["17/24", "-1", "3/4", "0", "-10/3"] {
            let v = parse_value(s).unwrap();
            assert_eq!(parse_value(&format_value(&v)).unwrap(), v);
        }
        assert!(parse_value("1/0").is_err());
        assert!(parse_value("x").is_err());
    }

    #[test]
    fn exactness() {
        assert!(rat(17, 24) > rat(2, 3));
        assert!(rat(17, 24) < rat(3, 4));
        assert_eq!(rat(2, 4), rat(1, 2));
    }
}
