//! Real-valued class parameters that remember whether they are exact.
//!
//! Parameters typed on the command line (`0.25`, `1/3`, `-1`) are parsed
//! into exact rationals so that identity checks stay bit-exact. Values that
//! only exist as floats (sweep grids over float endpoints, library callers
//! passing `f64`) are carried as [`Real::Float`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub enum Real {
    Exact(BigRational),
    Float(f64),
}

impl Real {
    pub fn ratio(num: i64, den: i64) -> Real {
        Real::Exact(BigRational::new(num.into(), den.into()))
    }

    pub fn int(n: i64) -> Real {
        Real::ratio(n, 1)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            Real::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Real::Exact(q) => Some(q),
            Real::Float(_) => None,
        }
    }

    pub fn exact(&self) -> Result<BigRational> {
        match self {
            Real::Exact(q) => Ok(q.clone()),
            Real::Float(x) => Err(Error::InexactValue(*x)),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Real::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Real::Exact(q) => q.is_zero(),
            Real::Float(x) => *x == 0.0,
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Real::Exact(q) => q.is_integer(),
            Real::Float(x) => x.fract() == 0.0,
        }
    }

    fn binary(
        &self,
        other: &Real,
        exact: impl Fn(&BigRational, &BigRational) -> BigRational,
        float: impl Fn(f64, f64) -> f64,
    ) -> Real {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(exact(a, b)),
            _ => Real::Float(float(self.to_f64(), other.to_f64())),
        }
    }

    pub fn add(&self, other: &Real) -> Real {
        self.binary(other, |a, b| a + b, |a, b| a + b)
    }

    pub fn sub(&self, other: &Real) -> Real {
        self.binary(other, |a, b| a - b, |a, b| a - b)
    }

    pub fn mul(&self, other: &Real) -> Real {
        self.binary(other, |a, b| a * b, |a, b| a * b)
    }

    pub fn neg(&self) -> Real {
        match self {
            Real::Exact(q) => Real::Exact(-q),
            Real::Float(x) => Real::Float(-x),
        }
    }

    /// Division; `None` when dividing by zero.
    pub fn div(&self, other: &Real) -> Option<Real> {
        if other.is_zero() {
            return None;
        }
        Some(self.binary(other, |a, b| a / b, |a, b| a / b))
    }

    pub fn powi(&self, n: i32) -> Real {
        match self {
            Real::Exact(q) => Real::Exact(num_traits::pow::Pow::pow(q, n)),
            Real::Float(x) => Real::Float(x.powi(n)),
        }
    }

    /// `lo + (hi - lo) * i / n`, exact when both ends are exact.
    pub fn lerp(lo: &Real, hi: &Real, i: usize, n: usize) -> Real {
        let t = Real::ratio(i as i64, n as i64);
        lo.add(&hi.sub(lo).mul(&t))
    }

    pub fn cmp_f64(&self, other: f64) -> std::cmp::Ordering {
        match self {
            Real::Exact(q) => {
                if let Some(o) = BigRational::from_float(other) {
                    q.cmp(&o)
                } else {
                    self.to_f64().total_cmp(&other)
                }
            }
            Real::Float(x) => x.total_cmp(&other),
        }
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => a == b,
            _ => self.to_f64() == other.to_f64(),
        }
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Some(a.cmp(b)),
            _ => self.to_f64().partial_cmp(&other.to_f64()),
        }
    }
}

impl From<f64> for Real {
    fn from(x: f64) -> Real {
        Real::Float(x)
    }
}

impl From<BigRational> for Real {
    fn from(q: BigRational) -> Real {
        Real::Exact(q)
    }
}

impl From<i64> for Real {
    fn from(n: i64) -> Real {
        Real::int(n)
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.trim_start_matches('+').parse().ok()
}

/// Exact value of a decimal literal such as `-0.125` or `2.5e-3`.
fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (sign, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("0{int_part}{frac_part}").parse().ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    Some(if sign < 0 { -value } else { value })
}

impl FromStr for Real {
    type Err = Error;

    fn from_str(s: &str) -> Result<Real> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let (n, d) = (parse_int(n.trim()), parse_int(d.trim()));
            return match (n, d) {
                (Some(n), Some(d)) if !d.is_zero() => Ok(Real::Exact(BigRational::new(n, d))),
                (Some(_), Some(_)) => Err(Error::Parse(format!("zero denominator in '{s}'"))),
                _ => Err(Error::Parse(format!("malformed fraction '{s}'"))),
            };
        }
        parse_decimal(s)
            .map(Real::Exact)
            .ok_or_else(|| Error::Parse(format!("malformed number '{s}'")))
    }
}

/// Terminating decimal expansion of `q`, if its denominator is `2^a 5^b`.
fn terminating_decimal(q: &BigRational) -> Option<String> {
    let mut den = q.denom().clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let (mut twos, mut fives) = (0usize, 0usize);
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return None;
    }
    let places = twos.max(fives);
    let scaled = q * BigRational::from_integer(num_traits::pow(BigInt::from(10), places));
    let digits = scaled.to_integer().abs().to_string();
    let digits = format!("{digits:0>width$}", width = places + 1);
    let (int_part, frac_part) = digits.split_at(digits.len() - places);
    let sign = if q.is_negative() { "-" } else { "" };
    Some(format!("{sign}{int_part}.{frac_part}"))
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Real::Exact(q) => match terminating_decimal(q) {
                Some(s) => f.write_str(&s),
                None => write!(f, "{}/{}", q.numer(), q.denom()),
            },
            Real::Float(x) => write!(f, "{x}"),
        }
    }
}
