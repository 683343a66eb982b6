//! Exact rational arithmetic helpers.
//!
//! Rationals are serialized as `p/q` (or a bare integer when the
//! denominator is 1); no value in this crate is ever printed as a float.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use thiserror::Error;

pub type Rat = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RatParseError {
    #[error("empty rational token")]
    Empty,
    #[error("malformed rational `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// `n/d` as an exact rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_usize(n: usize) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `p`, `-p`, or `p/q`.
pub fn parse_rat(token: &str) -> Result<Rat, RatParseError> {
    let token = token.trim();
    if token.is_empty() {
        return Err(RatParseError::Empty);
    }
    let mut parts = token.splitn(2, '/');
    let num_part = parts.next().unwrap();
    let num: BigInt = num_part
        .parse()
        .map_err(|_| RatParseError::Malformed(token.to_string()))?;
    match parts.next() {
        None => Ok(Rat::from_integer(num)),
        Some(den_part) => {
            let den: BigInt = den_part
                .parse()
                .map_err(|_| RatParseError::Malformed(token.to_string()))?;
            if den.is_zero() {
                return Err(RatParseError::ZeroDenominator(token.to_string()));
            }
            Ok(Rat::new(num, den))
        }
    }
}

/// Canonical `p/q` form (bare integer when `q == 1`).
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// True iff `r` lies in `[0, 1]`.
pub fn is_unit_interval(r: &Rat) -> bool {
    !r.is_negative() && *r <= Rat::one()
}
