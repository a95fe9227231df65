//! Serialization helpers. Every float is written with 17 significant digits
//! so values survive a text round trip bit for bit.

use serde::ser::{Error as _, SerializeTuple};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// Formats a float with 17 significant digits; non-finite values become
/// `NaN`, `inf` or `-inf`.
pub fn fmt17(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

fn raw_number(v: f64) -> Result<Box<RawValue>, serde_json::Error> {
    let text = if v.is_finite() { fmt17(v) } else { "null".to_owned() };
    RawValue::from_string(text)
}

/// `serialize_with` hook for `f64` fields. Intended for `serde_json` output;
/// non-finite values are written as `null`.
pub fn ser_f64<S: Serializer>(v: &f64, ser: S) -> Result<S::Ok, S::Error> {
    raw_number(*v).map_err(S::Error::custom)?.serialize(ser)
}

pub fn ser_opt_f64<S: Serializer>(v: &Option<f64>, ser: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => ser_f64(x, ser),
        None => ser.serialize_none(),
    }
}

pub fn ser_triple<S: Serializer>(v: &(f64, f64, f64), ser: S) -> Result<S::Ok, S::Error> {
    let mut tup = ser.serialize_tuple(3)?;
    for x in [v.0, v.1, v.2] {
        tup.serialize_element(&raw_number(x).map_err(S::Error::custom)?)?;
    }
    tup.end()
}

pub fn ser_opt_pair<S: Serializer>(v: &Option<(f64, f64)>, ser: S) -> Result<S::Ok, S::Error> {
    match v {
        Some((x, y)) => {
            let mut tup = ser.serialize_tuple(2)?;
            tup.serialize_element(&raw_number(*x).map_err(S::Error::custom)?)?;
            tup.serialize_element(&raw_number(*y).map_err(S::Error::custom)?)?;
            tup.end()
        }
        None => ser.serialize_none(),
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

/// A CSV cell for an optional float: empty when absent.
pub fn csv_opt(v: Option<f64>) -> String {
    v.map(fmt17).unwrap_or_default()
}
