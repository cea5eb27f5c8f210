//! Canonical JSON for the exact values.
//!
//! A rational function `q^s a(q)/b(q)` is `{"numerator": [a_0, a_1, ..],
//! "denominator": [b_0, ..], "laurent_shift": s}` with ascending coefficients
//! and `a(0), b(0)` not both divisible by `q`. Plain rationals are
//! `{"numerator": n, "denominator": d}`.

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{Map, Number, Value};

use quiver_dt::arith::Poly;
use quiver_dt::report::Report;
use quiver_dt::{BigRational, DimVector, QLaurent, QRational, Stability};

use crate::input::Layout;

pub fn to_pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialize")
}

pub fn int(n: &BigInt) -> Value {
    Value::Number(n.to_string().parse::<Number>().expect("integer literal"))
}

fn coeffs(p: &Poly) -> Value {
    Value::Array(p.coeffs().iter().map(int).collect())
}

fn function(num: &Poly, den: &Poly, shift: i64) -> Value {
    let mut m = Map::new();
    m.insert("numerator".into(), coeffs(num));
    m.insert("denominator".into(), coeffs(den));
    m.insert("laurent_shift".into(), Value::from(shift));
    Value::Object(m)
}

pub fn rational_function(r: &QRational) -> Value {
    if r.is_zero() {
        return function(&Poly::zero(), &Poly::one(), 0);
    }
    let (num, den) = (r.numerator(), r.denominator());
    let a = num.valuation().unwrap_or(0);
    let b = den.valuation().unwrap_or(0);
    function(&num.shift_down(a), &den.shift_down(b), a as i64 - b as i64)
}

pub fn laurent(l: &QLaurent) -> Value {
    let (shift, p) = l.to_shifted_poly();
    function(&p, &Poly::one(), shift)
}

pub fn rational(r: &BigRational) -> Value {
    let mut m = Map::new();
    m.insert("numerator".into(), int(r.numer()));
    m.insert("denominator".into(), int(r.denom()));
    Value::Object(m)
}

pub fn dim(layout: &Layout, d: &DimVector) -> Value {
    Value::Object(layout.entries(d).map(|(v, x)| (v.to_string(), Value::from(x))).collect())
}

pub fn theta(layout: &Layout, theta: &Stability) -> Value {
    Value::Object(layout.weights(theta).map(|(v, w)| (v.to_string(), Value::from(w))).collect())
}

pub fn report(r: &Report) -> Value {
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| {
            let mut m = Map::new();
            m.insert("label".into(), Value::from(c.label.clone()));
            m.insert("passed".into(), Value::from(c.passed));
            if !c.passed {
                m.insert("detail".into(), Value::from(c.detail.clone()));
            }
            Value::Object(m)
        })
        .collect();
    let mut m = Map::new();
    m.insert("name".into(), Value::from(r.name.clone()));
    m.insert("passed".into(), Value::from(r.is_success()));
    m.insert("checks".into(), Value::Array(checks));
    m.insert("notes".into(), Value::Array(r.notes.iter().cloned().map(Value::from).collect()));
    Value::Object(m)
}

fn parse_int(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.to_string().parse().ok(),
        _ => None,
    }
}

fn parse_poly(v: &Value) -> Option<Poly> {
    let cs: Option<Vec<BigInt>> = v.as_array()?.iter().map(parse_int).collect();
    Some(Poly::from_coeffs(cs?))
}

/// Inverse of [`rational_function`] and [`laurent`].
pub fn parse_rational_function(v: &Value) -> Option<QRational> {
    let num = parse_poly(v.get("numerator")?)?;
    let den = parse_poly(v.get("denominator")?)?;
    let shift = v.get("laurent_shift")?.as_i64()?;
    let r = QRational::new(num, den).ok()?;
    Some(r * &QRational::q_pow(shift))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(cs: &[i64]) -> Poly {
        Poly::from_i64s(cs)
    }

    #[test]
    fn shifts_are_split_off() {
        // q^2/(q^3 - q) = q/(q^2 - 1)
        let r = QRational::new(poly(&[0, 0, 1]), poly(&[0, -1, 0, 1])).unwrap();
        let v = rational_function(&r);
        assert_eq!(v["laurent_shift"], Value::from(1));
        assert_eq!(v["numerator"], serde_json::json!([1]));
        assert_eq!(v["denominator"], serde_json::json!([-1, 0, 1]));
        assert_eq!(parse_rational_function(&v).unwrap(), r);
    }

    #[test]
    fn laurent_polynomials_round_trip() {
        let l = QLaurent::from_pairs(&[(-2, 1), (0, 3), (1, -1)]);
        let v = laurent(&l);
        assert_eq!(v["laurent_shift"], Value::from(-2));
        assert_eq!(parse_rational_function(&v).unwrap(), l.to_qrational());
        let z = rational_function(&QRational::zero());
        assert_eq!(parse_rational_function(&z).unwrap(), QRational::zero());
    }

    #[test]
    fn big_integers_survive() {
        let n: BigInt = "123456789012345678901234567890".parse().unwrap();
        let v = int(&n);
        assert_eq!(v.to_string(), "123456789012345678901234567890");
        assert_eq!(parse_int(&v).unwrap(), n);
        assert!(BigInt::zero() == parse_int(&int(&BigInt::zero())).unwrap());
    }
}
