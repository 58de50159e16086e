use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::number::Real;
use crate::poly::Poly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScalarKind {
    ExactRational,
    ComplexFloat,
    Symbolic,
}

/// Coefficient field for [`Series`](super::Series).
///
/// Only ring operations are required of every backend; division goes through
/// [`Scalar::inv`], which may refuse (zero, or a non-constant polynomial).
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    const KIND: ScalarKind;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_real(x: &Real) -> Result<Self>;

    fn inv(&self) -> Option<Self>;
}

impl Scalar for BigRational {
    const KIND: ScalarKind = ScalarKind::ExactRational;

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(num.into(), den.into())
    }

    fn from_real(x: &Real) -> Result<Self> {
        x.exact()
    }

    fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
}

impl Scalar for Complex64 {
    const KIND: ScalarKind = ScalarKind::ComplexFloat;

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn from_real(x: &Real) -> Result<Self> {
        Ok(Complex64::new(x.to_f64(), 0.0))
    }

    fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.inv())
    }
}

impl Scalar for Poly {
    const KIND: ScalarKind = ScalarKind::Symbolic;

    fn from_ratio(num: i64, den: i64) -> Self {
        Poly::constant(BigRational::new(num.into(), den.into()))
    }

    fn from_real(x: &Real) -> Result<Self> {
        x.exact().map(Poly::constant)
    }

    fn inv(&self) -> Option<Self> {
        let c = self.as_constant()?;
        (!c.is_zero()).then(|| Poly::constant(c.recip()))
    }
}
