//! Exact rational scalars and their canonical string form.
//!
//! Every coefficient in the library is a `BigRational`; serialized form is the
//! canonical `"p/q"` (or `"p"` for integers) so that reports are reproducible
//! byte-for-byte.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

pub type Scalar = BigRational;

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Scalar {
    assert!(q != 0, "zero denominator");
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

/// n! as an exact scalar.
pub fn factorial(n: u32) -> Scalar {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Scalar::from_integer(acc)
}

/// Binomial coefficient C(n, k), exact.
pub fn binomial(n: u32, k: u32) -> Scalar {
    if k > n {
        return zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n - i);
        acc /= BigInt::from(i + 1);
    }
    Scalar::from_integer(acc)
}

/// Canonical display: `p` for integers, `p/q` otherwise, `-` on the numerator.
pub fn to_string(s: &Scalar) -> String {
    if s.denom().is_one() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

/// Parse `"p"` or `"p/q"`. Whitespace is not tolerated; signs only on the numerator.
pub fn parse(text: &str) -> Result<Scalar, String> {
    let mk_err = || format!("invalid rational literal {text:?}");
    match text.split_once('/') {
        None => {
            let p: BigInt = text.parse().map_err(|_| mk_err())?;
            Ok(Scalar::from_integer(p))
        }
        Some((ps, qs)) => {
            let p: BigInt = ps.parse().map_err(|_| mk_err())?;
            let q: BigInt = qs.parse().map_err(|_| mk_err())?;
            if q.is_zero() || q.is_negative() {
                return Err(mk_err());
            }
            Ok(Scalar::new(p, q))
        }
    }
}

pub mod serde_scalar {
    //! Serialize scalars as canonical `"p/q"` strings.
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: &Scalar, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&to_string(s))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Scalar, D::Error> {
        let text = String::deserialize(de)?;
        parse(&text).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), int(1));
        assert_eq!(factorial(5), int(120));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), int(6));
        assert_eq!(binomial(3, 5), zero());
    }

    #[test]
    fn string_round_trip() {
        for s in [int(7), frac(-3, 4), zero(), frac(22, 7)] {
            assert_eq!(parse(&to_string(&s)).unwrap(), s);
        }
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }
}
