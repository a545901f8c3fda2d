//! Serializable report pieces and their text/CSV renderings.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use pdrank_core::{Rational, SparsePoly};
use serde::Serialize;
use serde_json::Value;

use crate::formats::ratio_string;

pub const SIGNIFICANT_DIGITS: u32 = 12;

/// An exact rational with a 12-significant-digit decimal rendering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Num {
    pub exact: String,
    pub decimal: String,
}

impl Num {
    pub fn new(r: &Rational) -> Self {
        Num {
            exact: ratio_string(r),
            decimal: decimal(r, SIGNIFICANT_DIGITS),
        }
    }

    pub fn int(v: impl Into<BigInt>) -> Self {
        Num::new(&Rational::from_integer(v.into()))
    }
}

/// Natural number as a JSON number when it fits in `u64`, else a decimal string.
pub fn big_nat(v: &BigUint) -> Value {
    match u64::try_from(v) {
        Ok(x) => Value::from(x),
        Err(_) => Value::from(v.to_string()),
    }
}

/// Rounds `r` to `digits` significant digits (half away from zero).
///
/// Positional notation for exponents in `-6..15`, scientific otherwise.
pub fn decimal(r: &Rational, digits: u32) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let (num, den) = (r.numer().abs(), r.denom().clone());
    let ten = BigInt::from(10);

    // e = floor(log10 |r|)
    let mut e: i64 = num.to_string().len() as i64 - den.to_string().len() as i64;
    let ge_pow = |e: i64| -> bool {
        if e >= 0 {
            num >= &den * ten.pow(e as u32)
        } else {
            &num * ten.pow((-e) as u32) >= den
        }
    };
    while !ge_pow(e) {
        e -= 1;
    }
    while ge_pow(e + 1) {
        e += 1;
    }

    // m = round(|r| * 10^(digits-1-e)), an integer with `digits` digits
    let shift = digits as i64 - 1 - e;
    let (n2, d2) = if shift >= 0 {
        (&num * ten.pow(shift as u32), den.clone())
    } else {
        (num.clone(), &den * ten.pow((-shift) as u32))
    };
    let (q, rem) = n2.div_rem(&d2);
    let mut m = if &rem * 2 >= d2 { q + 1 } else { q };
    if m == ten.pow(digits) {
        m /= &ten;
        e += 1;
    }
    let mut mantissa = m.to_string();
    debug_assert_eq!(mantissa.len(), digits as usize);

    let body = if (-6..15).contains(&e) {
        if e >= 0 {
            let int_len = e as usize + 1;
            if int_len >= mantissa.len() {
                mantissa.push_str(&"0".repeat(int_len - mantissa.len()));
                mantissa
            } else {
                let (i, f) = mantissa.split_at(int_len);
                trim_fraction(format!("{i}.{f}"))
            }
        } else {
            trim_fraction(format!("0.{}{}", "0".repeat((-e - 1) as usize), mantissa))
        }
    } else {
        let (i, f) = mantissa.split_at(1);
        let m = trim_fraction(format!("{i}.{f}"));
        format!("{m}e{}{}", if e < 0 { "-" } else { "+" }, e.abs())
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

fn trim_fraction(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Shape summary of an input polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub variables: usize,
    pub vars: Vec<String>,
    pub terms: usize,
    pub degree: Option<u64>,
    pub multilinear: bool,
    pub homogeneous: bool,
}

impl InputDigest {
    pub fn of(f: &SparsePoly) -> Self {
        InputDigest {
            variables: f.nvars(),
            vars: f.vars().to_vec(),
            terms: f.terms().len(),
            degree: f.degree(),
            multilinear: f.is_multilinear(),
            homogeneous: f.is_homogeneous(),
        }
    }
}

/// Indented `key: value` rendering of a JSON value. Objects of the shape
/// `{exact, decimal}` print as `exact (decimal)`.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    render_into(&mut out, v, 0);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| matches!(x, Value::Number(_) | Value::String(_))) => Some(format!(
            "[{}]",
            a.iter().map(|x| scalar(x).unwrap_or_default()).collect::<Vec<_>>().join(", ")
        )),
        Value::Object(o) if o.len() == 2 && o.contains_key("exact") && o.contains_key("decimal") => {
            Some(format!("{} ({})", scalar(&o["exact"])?, scalar(&o["decimal"])?))
        }
        _ => None,
    }
}

fn render_into(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(o) => {
            for (k, x) in o {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_into(out, x, indent + 1);
                    }
                }
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}[{i}]\n"));
                        render_into(out, x, indent + 1);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

/// Sign-aware comparison helper for the self-check.
pub fn nat_to_rational(v: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from_biguint(Sign::Plus, v.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn decimals() {
        assert_eq!(decimal(&q(15, 1), 12), "15");
        assert_eq!(decimal(&q(1, 3), 12), "0.333333333333");
        assert_eq!(decimal(&q(2, 3), 12), "0.666666666667");
        assert_eq!(decimal(&q(-3, 4), 12), "-0.75");
        assert_eq!(decimal(&q(1, 1000), 12), "0.001");
        assert_eq!(decimal(&q(1, 10_000_000), 12), "1e-7");
        assert_eq!(decimal(&q(10i64.pow(15), 1), 12), "1e+15");
        assert_eq!(decimal(&q(123_456_789_012_345, 1), 12), "123456789012000");
        assert_eq!(decimal(&q(9_999_999_999_999, 10), 12), "1000000000000");
        assert_eq!(decimal(&q(0, 1), 12), "0");
        assert_eq!(decimal(&q(100, 1), 12), "100");
        assert_eq!(decimal(&q(7, 2), 12), "3.5");
    }

    #[test]
    fn text_rendering() {
        let v = serde_json::json!({
            "k": 2,
            "value": {"exact": "1/2", "decimal": "0.5"},
            "list": [1, 2],
            "nested": {"ok": true, "none": null},
            "items": [{"a": 1}]
        });
        assert_eq!(
            render_text(&v),
            "k: 2\nvalue: 1/2 (0.5)\nlist: [1, 2]\nnested:\n  ok: true\n  none: -\nitems:\n  [0]\n    a: 1\n"
        );
    }
}
