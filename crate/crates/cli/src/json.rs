//! JSON encodings of exact numbers, series and fields.
//!
//! Rationals are `[num, den]` pairs of JSON integers of any size, quadratic
//! numbers `a + b√(2p)` are `[[a_num, a_den], [b_num, b_den]]`, and a series is
//! a list of `{"z", "q", "c"}` records sorted by `(q, z)`.

use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Number, Value};
use voa_coset_core::num::{BiSeries, Exponent, QuadNumber, Rational};
use voa_coset_core::ope::{Dir, FieldExpr};

#[derive(Debug, thiserror::Error)]
#[error("malformed JSON: {0}")]
pub struct DecodeError(String);

fn bad(what: &str, v: &Value) -> DecodeError {
    DecodeError(format!("expected {what}, found {v}"))
}

fn integer(n: &BigInt) -> Value {
    Value::Number(Number::from_str(&n.to_string()).expect("integers are valid JSON numbers"))
}

pub fn rational(r: &Rational) -> Value {
    json!([integer(r.numer()), integer(r.denom())])
}

pub fn exponent(e: &Exponent) -> Value {
    json!([e.numer(), e.denom()])
}

pub fn quad(x: &QuadNumber) -> Value {
    json!([rational(x.rat()), rational(x.irr())])
}

pub fn series(s: &BiSeries) -> Value {
    Value::Array(
        s.terms()
            .map(|(z, q, c)| json!({"z": exponent(&z), "q": exponent(&q), "c": quad(c)}))
            .collect(),
    )
}

pub fn field(f: &FieldExpr) -> Value {
    let terms: Vec<Value> = f
        .to_terms()
        .iter()
        .map(|t| {
            let factors: Vec<Value> = t
                .factors
                .iter()
                .map(|x| {
                    let dir = match x.dir {
                        Dir::Plus => "+",
                        Dir::Minus => "-",
                    };
                    json!({"dir": dir, "order": x.order})
                })
                .collect();
            json!({
                "coeff": quad(&t.coeff),
                "momentum": {"plus": quad(&t.momentum.plus), "minus": quad(&t.momentum.minus)},
                "factors": factors,
            })
        })
        .collect();
    json!({"text": f.to_string(), "terms": terms})
}

fn decode_integer(v: &Value) -> Result<BigInt, DecodeError> {
    match v {
        Value::Number(n) => BigInt::from_str(&n.to_string()).map_err(|_| bad("an integer", v)),
        _ => Err(bad("an integer", v)),
    }
}

fn pair(v: &Value) -> Result<(&Value, &Value), DecodeError> {
    match v.as_array().map(Vec::as_slice) {
        Some([a, b]) => Ok((a, b)),
        _ => Err(bad("a pair", v)),
    }
}

pub fn decode_rational(v: &Value) -> Result<Rational, DecodeError> {
    let (n, d) = pair(v)?;
    let d = decode_integer(d)?;
    if d == BigInt::from(0) {
        return Err(bad("a nonzero denominator", v));
    }
    Ok(Rational::new(decode_integer(n)?, d))
}

pub fn decode_exponent(v: &Value) -> Result<Exponent, DecodeError> {
    let (n, d) = pair(v)?;
    match (n.as_i64(), d.as_i64()) {
        (Some(n), Some(d)) if d != 0 => Ok(Exponent::new(n, d)),
        _ => Err(bad("a machine-sized exponent", v)),
    }
}

/// Reads `[[a_num, a_den], [b_num, b_den]]` as `a + b√(2p)`.
pub fn decode_quad(v: &Value, p: u32) -> Result<QuadNumber, DecodeError> {
    let (a, b) = pair(v)?;
    Ok(QuadNumber::new(decode_rational(a)?, decode_rational(b)?, p))
}

/// Inverse of [`series`]; the cutoff and window are not part of the record list.
pub fn decode_series(v: &Value, p: u32, q_cutoff: Exponent) -> Result<BiSeries, DecodeError> {
    let records = v.as_array().ok_or_else(|| bad("a list of records", v))?;
    let mut out = BiSeries::new(q_cutoff);
    for r in records {
        let get = |k: &str| {
            r.get(k)
                .ok_or_else(|| bad(&format!("a record with `{k}`"), r))
        };
        out.add_term(
            decode_exponent(get("z")?)?,
            decode_exponent(get("q")?)?,
            decode_quad(get("c")?, p)?,
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use voa_coset_core::num::{exponent as e, rat};

    #[test]
    fn large_integers_survive() {
        let big = Rational::new(BigInt::from(10).pow(40) + 1, BigInt::from(3));
        let v = rational(&big);
        assert_eq!(
            v.to_string(),
            "[10000000000000000000000000000000000000001,3]"
        );
        assert_eq!(decode_rational(&v).unwrap(), big);
    }

    #[test]
    fn series_round_trip() {
        let mut s = BiSeries::new(e(5, 1));
        s.add_term(e(-1, 2), e(1, 3), QuadNumber::new(rat(2, 3), rat(-1, 4), 3));
        s.add_term(e(0, 1), e(-1, 24), QuadNumber::from_int(1));
        let v = series(&s);
        assert_eq!(v[0]["q"], json!([-1, 24]));
        assert_eq!(decode_series(&v, 3, e(5, 1)).unwrap(), s);
    }

    #[test]
    fn zero_denominator_is_rejected() {
        assert!(decode_rational(&json!([1, 0])).is_err());
        assert!(decode_quad(&json!([[1, 2]]), 2).is_err());
    }
}
