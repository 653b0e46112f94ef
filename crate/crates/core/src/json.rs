//! JSON with every float written as a decimal with 17 significant digits.

use serde::Serialize;
use serde_json::{Number, Value};

use crate::error::{Error, Result};

/// `x` with 17 significant digits; non-finite values become `null`.
pub fn float17(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let s = format!("{x:.16e}");
    Value::Number(s.parse::<Number>().expect("formatted float is a JSON number"))
}

fn rewrite(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => float17(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(a) => Value::Array(a.into_iter().map(rewrite).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, rewrite(v))).collect()),
        other => other,
    }
}

pub fn to_value17<T: Serialize + ?Sized>(v: &T) -> Result<Value> {
    Ok(rewrite(serde_json::to_value(v).map_err(Error::from)?))
}

/// Single-line form, as used for JSON-lines records.
pub fn to_string17<T: Serialize + ?Sized>(v: &T) -> Result<String> {
    Ok(serde_json::to_string(&to_value17(v)?)?)
}

pub fn to_string_pretty17<T: Serialize + ?Sized>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(&to_value17(v)?)?)
}
