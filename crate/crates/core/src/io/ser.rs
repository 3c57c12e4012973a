//! Serde helpers: big integers become JSON numbers when they fit in an
//! `i64` and decimal strings otherwise; rationals are written as `"p/q"`
//! strings (or plain integers when the denominator is 1).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::ser::SerializeSeq;
use serde::Serializer;

pub fn big_value(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(x.to_string()),
    }
}

pub fn rat_value(x: &BigRational) -> serde_json::Value {
    if x.is_integer() {
        big_value(x.numer())
    } else {
        serde_json::Value::from(format!("{}/{}", x.numer(), x.denom()))
    }
}

pub fn big<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&big_value(x), s)
}

pub fn rat<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&rat_value(x), s)
}

pub fn big_vec<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&big_value(x))?;
    }
    seq.end()
}

pub fn rat_vec<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&rat_value(x))?;
    }
    seq.end()
}

pub fn opt_big_vec<S: Serializer>(v: &Option<Vec<BigInt>>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => big_vec(v, s),
        None => s.serialize_none(),
    }
}

pub fn opt_big<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => big(v, s),
        None => s.serialize_none(),
    }
}

pub fn opt_rat_vec<S: Serializer>(v: &Option<Vec<BigRational>>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => rat_vec(v, s),
        None => s.serialize_none(),
    }
}

pub fn big_matrix<S: Serializer>(m: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
    let rows: Vec<Vec<serde_json::Value>> =
        m.iter().map(|r| r.iter().map(big_value).collect()).collect();
    serde::Serialize::serialize(&rows, s)
}
