//! Exact rational helpers shared across the crate.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rational = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Parses `p/q`, `p`, or a decimal such as `0.25`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let neg = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches('-'), frac);
        let n: BigInt = digits.parse().ok()?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rational::new(n, d);
        return Some(if neg { -r } else { r });
    }
    s.parse::<BigInt>().ok().map(Rational::from_integer)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Smallest integer `k >= 0` with `k >= base^exp` for a nonnegative rational exponent.
pub fn ceil_pow(base: u64, exp: &Rational) -> BigUint {
    assert!(!exp.is_negative(), "negative exponent");
    let a = exp.numer().to_biguint().unwrap();
    let b = exp.denom().to_biguint().unwrap();
    let a = a.to_u32().expect("exponent numerator too large");
    let b = b.to_u32().expect("exponent denominator too large");
    // base^(a/b) <= k  iff  base^a <= k^b
    let target = num_traits::pow(BigUint::from(base), a as usize);
    if b == 1 {
        return target;
    }
    let mut k = target.nth_root(b);
    while num_traits::pow(k.clone(), b as usize) < target {
        k += 1u32;
    }
    k
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// `{num, den}` JSON form; components are numbers when they fit in `i64`, strings otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonRational(pub Rational);

impl Serialize for JsonRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            num: serde_json::Value,
            den: serde_json::Value,
        }
        fn comp(b: &BigInt) -> serde_json::Value {
            match b.to_i64() {
                Some(v) => serde_json::Value::from(v),
                None => serde_json::Value::from(b.to_string()),
            }
        }
        Repr {
            num: comp(self.0.numer()),
            den: comp(self.0.denom()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for JsonRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            num: serde_json::Value,
            den: serde_json::Value,
        }
        fn comp<E: serde::de::Error>(v: &serde_json::Value) -> std::result::Result<BigInt, E> {
            match v {
                serde_json::Value::Number(n) => n
                    .as_i64()
                    .map(BigInt::from)
                    .ok_or_else(|| E::custom("non-integer rational component")),
                serde_json::Value::String(s) => s.parse().map_err(E::custom),
                _ => Err(E::custom("rational component must be a number or string")),
            }
        }
        let r = Repr::deserialize(d)?;
        let den = comp::<D::Error>(&r.den)?;
        if den.is_zero() {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(JsonRational(Rational::new(comp::<D::Error>(&r.num)?, den)))
    }
}

impl From<Rational> for JsonRational {
    fn from(r: Rational) -> Self {
        JsonRational(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_pow_exact_and_rounded() {
        assert_eq!(ceil_pow(4, &rat(1, 2)), BigUint::from(2u32));
        assert_eq!(ceil_pow(5, &rat(1, 2)), BigUint::from(3u32));
        assert_eq!(ceil_pow(3, &int(2)), BigUint::from(9u32));
        assert_eq!(ceil_pow(7, &int(0)), BigUint::from(1u32));
        assert_eq!(ceil_pow(8, &rat(2, 3)), BigUint::from(4u32));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("5/8"), Some(rat(5, 8)));
        assert_eq!(parse_rational("3"), Some(int(3)));
        assert_eq!(parse_rational("0.25"), Some(rat(1, 4)));
        assert_eq!(parse_rational("-1.5"), Some(rat(-3, 2)));
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn json_roundtrip() {
        let r = JsonRational(rat(-9, 23));
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, r#"{"num":-9,"den":23}"#);
        let back: JsonRational = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}
