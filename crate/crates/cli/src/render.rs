//! Deterministic JSON, CSV and text rendering.

use flatperm::{QPoly, Rational};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Map, Value};

/// `{"0": "2", "1": "4"}`, every exponent up to the degree.
pub fn coefficient_map(p: &QPoly) -> Value {
    let mut m = Map::new();
    for (i, c) in p.coeffs().iter().enumerate() {
        m.insert(i.to_string(), Value::String(c.to_string()));
    }
    if p.is_zero() {
        m.insert("0".into(), Value::String("0".into()));
    }
    Value::Object(m)
}

pub fn rational(r: &Rational) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Rounds half away from zero to `digits` places.
pub fn decimal(r: &Rational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = r.abs() * Rational::from_integer(scale.clone());
    let rounded = (scaled + Rational::new(1.into(), 2.into())).floor().to_integer();
    let (int, frac) = (&rounded / &scale, &rounded % &scale);
    let sign = if r.is_negative() && !rounded.is_zero() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int}");
    }
    format!("{sign}{int}.{:0>width$}", frac.to_string(), width = digits as usize)
}

pub fn json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values are serialisable");
    s.push('\n');
    s
}

pub fn json_rational(r: &Rational) -> Value {
    json!({
        "num": r.numer().to_string(),
        "den": r.denom().to_string(),
        "value": rational(r),
    })
}
