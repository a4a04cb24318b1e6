//! Exact arithmetic substrate: rational scalars, univariate polynomials,
//! reduced rational functions, partial fractions and terminating
//! hypergeometric sums.
//!
//! Nothing in here touches floating point. Every value is canonical after
//! construction, so equality is structural.

mod hyper;
mod partial;
mod poly;
mod ratfun;

pub use hyper::{factorial, hyp_sum_terminating, pochhammer};
pub use partial::{partial_fractions, PartialFractions};
pub use poly::Poly;
pub use ratfun::{ratfun_reduce, RatFun};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact rational number; numerator and denominator are coprime and the
/// denominator is positive (maintained by `num-rational`).
pub type RatScalar = BigRational;

pub fn rat(n: i64, d: i64) -> RatScalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> RatScalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn zero() -> RatScalar {
    RatScalar::zero()
}

pub fn one() -> RatScalar {
    RatScalar::one()
}

pub fn is_integer(r: &RatScalar) -> bool {
    r.is_integer()
}

/// Parses `"p"` or `"p/q"` (optional leading sign) into a reduced rational.
pub fn parse_rat(s: &str) -> Result<RatScalar> {
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator in {s:?}")))?;
    let d: BigInt = d
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator in {s:?}")))?;
    if d.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(BigRational::new(n, d))
}

/// Canonical text form: `"p"` when the denominator is 1, otherwise `"p/q"`.
pub fn fmt_rat(r: &RatScalar) -> String {
    r.to_string()
}

/// Rationals cross the serialization boundary as canonical strings.
pub mod rat_serde {
    use super::{fmt_rat, parse_rat, RatScalar};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &RatScalar, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<RatScalar, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(D::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[RatScalar], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&fmt_rat(r))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<RatScalar>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter()
                .map(|s| parse_rat(s).map_err(D::Error::custom))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rat("-2/4").unwrap(), rat(-1, 2));
        assert_eq!(parse_rat("3").unwrap(), int(3));
        assert_eq!(parse_rat(" 6/-4 ").unwrap(), rat(-3, 2));
        assert_eq!(fmt_rat(&rat(-1, 2)), "-1/2");
        assert_eq!(fmt_rat(&rat(4, 2)), "2");
        assert!(matches!(parse_rat("1/0"), Err(Error::ZeroDenominator)));
        assert!(parse_rat("x").is_err());
        assert!(parse_rat("0.5").is_err());
    }
}
