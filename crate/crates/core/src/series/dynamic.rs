use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::{fmt_series, ScalarKind, Series};
use crate::error::{Error, Result};
use crate::number::Real;

/// A series whose scalar backend is chosen at runtime.
///
/// Operations between two different backends are refused; call
/// [`TruncatedSeries::to_complex`] to promote explicitly.
#[derive(Debug, Clone, PartialEq)]
pub enum TruncatedSeries {
    Rational(Series<BigRational>),
    Complex(Series<Complex64>),
}

macro_rules! dispatch2 {
    ($x:expr, $y:expr, |$a:ident, $b:ident| $body:expr) => {
        match ($x, $y) {
            (TruncatedSeries::Rational($a), TruncatedSeries::Rational($b)) => {
                Ok(TruncatedSeries::Rational($body?))
            }
            (TruncatedSeries::Complex($a), TruncatedSeries::Complex($b)) => {
                Ok(TruncatedSeries::Complex($body?))
            }
            (l, r) => Err(Error::MixedScalarKinds {
                left: l.scalar_kind(),
                right: r.scalar_kind(),
            }),
        }
    };
}

macro_rules! dispatch1 {
    ($x:expr, |$a:ident| $body:expr) => {
        match $x {
            TruncatedSeries::Rational($a) => Ok(TruncatedSeries::Rational($body?)),
            TruncatedSeries::Complex($a) => Ok(TruncatedSeries::Complex($body?)),
        }
    };
}

impl TruncatedSeries {
    pub fn rational(coeffs: Vec<BigRational>) -> Result<Self> {
        Series::new(coeffs).map(TruncatedSeries::Rational)
    }

    pub fn complex(coeffs: Vec<Complex64>) -> Result<Self> {
        Series::new(coeffs).map(TruncatedSeries::Complex)
    }

    pub fn scalar_kind(&self) -> ScalarKind {
        match self {
            TruncatedSeries::Rational(_) => ScalarKind::ExactRational,
            TruncatedSeries::Complex(_) => ScalarKind::ComplexFloat,
        }
    }

    pub fn order(&self) -> usize {
        match self {
            TruncatedSeries::Rational(s) => s.order(),
            TruncatedSeries::Complex(s) => s.order(),
        }
    }

    pub fn to_complex(&self) -> Series<Complex64> {
        match self {
            TruncatedSeries::Complex(s) => s.clone(),
            TruncatedSeries::Rational(s) => Series::from_fn(s.order(), |k| {
                Complex64::new(s.coeffs()[k].to_f64().unwrap_or(f64::NAN), 0.0)
            }),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        dispatch2!(self, other, |a, b| Ok::<_, Error>(a.mul(b)))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        dispatch2!(self, other, |a, b| a.div(b))
    }

    pub fn compose(&self, inner: &Self) -> Result<Self> {
        dispatch2!(self, inner, |a, b| a.compose(b))
    }

    pub fn revert(&self) -> Result<Self> {
        dispatch1!(self, |a| a.revert())
    }

    pub fn mobius_to_disk(&self) -> Result<Self> {
        dispatch1!(self, |a| a.mobius_to_disk())
    }

    /// `self^exponent`. An exact exponent keeps an exact series exact (the
    /// formal log/exp recurrences only ever divide by integers); a float
    /// exponent promotes an exact series to complex floats.
    pub fn pow_real(&self, exponent: &Real) -> Result<Self> {
        match (self, exponent) {
            (TruncatedSeries::Rational(s), Real::Exact(e)) => {
                s.pow(e).map(TruncatedSeries::Rational)
            }
            (s, e) => {
                let e = Complex64::new(e.to_f64(), 0.0);
                s.to_complex().pow(&e).map(TruncatedSeries::Complex)
            }
        }
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TruncatedSeries::Rational(s) => fmt_series(
                s.coeffs().iter().map(|c| Real::Exact(c.clone()).to_string()),
                "z",
                f,
            ),
            TruncatedSeries::Complex(s) => fmt_series(
                s.coeffs().iter().map(|c| {
                    if c.im == 0.0 {
                        c.re.to_string()
                    } else {
                        format!("{} {} {}i", c.re, if c.im < 0.0 { "-" } else { "+" }, c.im.abs())
                    }
                }),
                "z",
                f,
            ),
        }
    }
}
