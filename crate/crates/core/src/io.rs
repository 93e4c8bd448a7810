//! Shared JSON encodings for exact numbers.

use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};

/// A rational written either as an integer or as `[numerator, denominator]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalJson {
    Integer(i64),
    Pair([i64; 2]),
}

impl RationalJson {
    pub fn to_rational(&self) -> Result<BigRational> {
        match *self {
            RationalJson::Integer(n) => Ok(BigRational::from_integer(n.into())),
            RationalJson::Pair([_, 0]) => Err(Error::Parse("zero denominator".into())),
            RationalJson::Pair([n, d]) => Ok(BigRational::new(n.into(), d.into())),
        }
    }
}

fn bigint_to_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(n.to_string()),
    }
}

/// `[num, den]` in lowest terms (denominator positive).
pub fn rational_to_json(q: &BigRational) -> Value {
    Value::Array(vec![bigint_to_json(q.numer()), bigint_to_json(q.denom())])
}

/// Integers as plain numbers, everything else as `[num, den]`.
pub fn rational_to_compact_json(q: &BigRational) -> Value {
    if q.is_integer() {
        bigint_to_json(&q.to_integer())
    } else {
        rational_to_json(q)
    }
}

/// `{"conductor": n, "coefficients": [[num, den], ...]}` over the full basis.
pub fn cyclotomic_to_json(z: &Cyclotomic) -> Value {
    serde_json::json!({
        "conductor": z.conductor(),
        "coefficients": z.coefficients().iter().map(rational_to_json).collect::<Vec<_>>(),
        "text": z.to_string(),
    })
}

pub fn rational_to_string(q: &BigRational) -> String {
    if q.denom().is_one() || q.is_zero() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable");
    s.push('\n');
    s
}
