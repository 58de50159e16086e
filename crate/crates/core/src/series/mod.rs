//! Truncated formal power series.
//!
//! A [`Series`] stores the coefficients `c_0..=c_order`. Binary operations
//! truncate to the smaller of the two orders. Everything is generic over the
//! [`Scalar`] backend: exact rationals, complex doubles, or symbolic
//! polynomials.

mod dynamic;
mod scalar;

use std::fmt;

pub use dynamic::TruncatedSeries;
pub use scalar::{Scalar, ScalarKind};

use crate::error::{Error, Result};

/// Truncation order used throughout the crate: one past `a5`.
pub const DEFAULT_ORDER: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct Series<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Series<T> {
    pub fn new(coeffs: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Empty);
        }
        Ok(Series { coeffs })
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> T) -> Self {
        Series {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    pub fn zero(order: usize) -> Self {
        Series::from_fn(order, |_| T::zero())
    }

    pub fn constant(c: T, order: usize) -> Self {
        let mut s = Series::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The series `z`.
    pub fn identity(order: usize) -> Self {
        let mut s = Series::zero(order);
        if order >= 1 {
            s.coeffs[1] = T::one();
        }
        s
    }

    /// `z + a_2 z^2 + ... + a_{n+1} z^{n+1}` for `tail = [a_2, ..]`.
    pub fn normalized(tail: &[T]) -> Self {
        let mut coeffs = vec![T::zero(), T::one()];
        coeffs.extend(tail.iter().cloned());
        Series { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `z^k`; zero beyond the truncation order.
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Series::from_fn(order, |k| self.coeff(k))
    }

    pub fn is_normalized(&self) -> bool {
        self.order() >= 1 && self.coeffs[0].is_zero() && self.coeffs[1] == T::one()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Series::from_fn(n, |k| self.coeffs[k].clone() + other.coeffs[k].clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Series::from_fn(n, |k| self.coeffs[k].clone() - other.coeffs[k].clone())
    }

    pub fn neg(&self) -> Self {
        Series::from_fn(self.order(), |k| -self.coeffs[k].clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        Series::from_fn(self.order(), |k| c.clone() * self.coeffs[k].clone())
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Series::from_fn(n, |k| {
            (0..=k).fold(T::zero(), |acc, i| {
                acc + self.coeffs[i].clone() * other.coeffs[k - i].clone()
            })
        })
    }

    /// Multiplicative inverse; requires an invertible constant term.
    pub fn recip(&self) -> Result<Self> {
        let inv0 = self.coeffs[0].inv().ok_or(Error::NonInvertible)?;
        let n = self.order();
        let mut out: Vec<T> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let s = (1..=k).fold(T::zero(), |acc, i| {
                acc + self.coeffs[i].clone() * out[k - i].clone()
            });
            out.push(-(inv0.clone() * s));
        }
        Ok(Series { coeffs: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    /// `f'`, one order shorter.
    pub fn derivative(&self) -> Self {
        let n = self.order();
        if n == 0 {
            return Series::zero(0);
        }
        Series::from_fn(n - 1, |k| T::from_ratio(k as i64 + 1, 1) * self.coeffs[k + 1].clone())
    }

    /// Antiderivative with zero constant, one order longer.
    pub fn integral(&self) -> Self {
        Series::from_fn(self.order() + 1, |k| {
            if k == 0 {
                T::zero()
            } else {
                T::from_ratio(1, k as i64) * self.coeffs[k - 1].clone()
            }
        })
    }

    /// `f(z)/z` for `f(0) = 0`, one order shorter.
    pub fn shift_down(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonZeroConstant("division by z"));
        }
        if self.order() == 0 {
            return Err(Error::OrderTooSmall { need: 1, got: 0 });
        }
        Ok(Series {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// `z f(z)`, one order longer.
    pub fn shift_up(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(T::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Series { coeffs }
    }

    /// `self ∘ inner`; `inner` must vanish at the origin.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonZeroConstant("composition"));
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = Series::constant(self.coeff(n), n);
        for k in (0..n).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] = acc.coeffs[0].clone() + self.coeffs[k].clone();
        }
        Ok(acc)
    }

    /// Compositional inverse of a normalized series, by Newton iteration
    /// `g <- g - (f∘g - z) / (f'∘g)`.
    pub fn revert(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonZeroConstant("reversion"));
        }
        let n = self.order();
        if n == 0 {
            return Err(Error::OrderTooSmall { need: 1, got: 0 });
        }
        if self.coeffs[1] != T::one() {
            return Err(Error::NotNormalized);
        }
        let id = Series::identity(n);
        // f' padded back to order n; the padding only ever meets the
        // vanishing low coefficients of the residual.
        let mut dfs = self.derivative().coeffs;
        dfs.push(T::zero());
        let df = Series { coeffs: dfs };

        let mut g = id.clone();
        let mut correct = 2usize;
        loop {
            let residual = self.compose(&g)?.sub(&id);
            if residual.coeffs.iter().all(|c| c.is_zero()) {
                break;
            }
            let step = residual.div(&df.compose(&g)?)?;
            g = g.sub(&step);
            if correct > n {
                break;
            }
            correct = 2 * correct - 1;
        }
        Ok(g)
    }

    /// Formal logarithm; constant term must be one.
    pub fn ln(&self) -> Result<Self> {
        if self.coeffs[0] != T::one() {
            return Err(Error::ConstantNotOne("logarithm"));
        }
        let n = self.order();
        if n == 0 {
            return Ok(Series::zero(0));
        }
        Ok(self.derivative().div(&self.truncate(n - 1))?.integral())
    }

    /// Formal exponential; constant term must be zero.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonZeroConstant("exponential"));
        }
        let n = self.order();
        let mut out: Vec<T> = Vec::with_capacity(n + 1);
        out.push(T::one());
        for k in 1..=n {
            let s = (1..=k).fold(T::zero(), |acc, i| {
                acc + T::from_ratio(i as i64, 1) * self.coeffs[i].clone() * out[k - i].clone()
            });
            out.push(T::from_ratio(1, k as i64) * s);
        }
        Ok(Series { coeffs: out })
    }

    /// `self^exponent = exp(exponent · ln self)`; constant term must be one.
    pub fn pow(&self, exponent: &T) -> Result<Self> {
        if self.coeffs[0] != T::one() {
            return Err(Error::ConstantNotOne("real power"));
        }
        self.ln()?.scale(exponent).exp()
    }

    /// `r = (p - 1)/(p + 1)`, the Schwarz function attached to a function
    /// with positive real part.
    pub fn mobius_to_disk(&self) -> Result<Self> {
        if self.coeffs[0] != T::one() {
            return Err(Error::ConstantNotOne("Möbius map"));
        }
        let one = Series::constant(T::one(), self.order());
        self.sub(&one).div(&self.add(&one))
    }

    /// `p = (1 + r)/(1 - r)`, inverse of [`Series::mobius_to_disk`].
    pub fn disk_to_caratheodory(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonZeroConstant("Cayley map"));
        }
        let one = Series::constant(T::one(), self.order());
        one.add(self).div(&one.sub(self))
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for Series<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_series(self.coeffs.iter().map(|c| c.to_string()), "z", f)
    }
}

impl<T: Scalar + fmt::Display> Series<T> {
    /// Like `Display`, in the variable `var`.
    pub fn display_in(&self, var: &str) -> String {
        struct In<'a, T>(&'a Series<T>, &'a str);
        impl<T: Scalar + fmt::Display> fmt::Display for In<'_, T> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt_series(self.0.coeffs.iter().map(|c| c.to_string()), self.1, f)
            }
        }
        In(self, var).to_string()
    }
}

/// Pretty-print coefficient strings as `c0 + c1*z + c2*z^2 + ...`, dropping
/// zero terms and parenthesizing fractions and multi-term coefficients.
pub(crate) fn fmt_series(
    coeffs: impl Iterator<Item = String>,
    var: &str,
    f: &mut fmt::Formatter<'_>,
) -> fmt::Result {
    let mut first = true;
    for (k, c) in coeffs.enumerate() {
        if c == "0" {
            continue;
        }
        let multi_term = c.trim_start_matches('-').contains(' ');
        let (neg, body) = match c.strip_prefix('-') {
            Some(rest) if !multi_term => (true, rest),
            _ => (false, c.as_str()),
        };
        let body = if k > 0 && (multi_term || body.contains('/')) {
            format!("({body})")
        } else {
            body.to_string()
        };
        let term = match k {
            0 => body,
            _ => {
                let power = if k == 1 { var.to_string() } else { format!("{var}^{k}") };
                if body == "1" {
                    power
                } else {
                    format!("{body}*{power}")
                }
            }
        };
        match (first, neg) {
            (true, true) => write!(f, "-{term}")?,
            (true, false) => write!(f, "{term}")?,
            (false, true) => write!(f, " - {term}")?,
            (false, false) => write!(f, " + {term}")?,
        }
        first = false;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

/// Taylor–Maclaurin coefficients `a2, a3, ...` of a normalized function.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> CoefficientVector<T> {
    pub fn new(coeffs: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Empty);
        }
        Ok(CoefficientVector { coeffs })
    }

    /// Reads `a2..` off a normalized series.
    pub fn from_series(f: &Series<T>) -> Result<Self> {
        if !f.is_normalized() {
            return Err(Error::NotNormalized);
        }
        CoefficientVector::new(f.coeffs()[2..].to_vec())
    }

    /// `a_n` for `n >= 2`.
    pub fn get(&self, n: usize) -> Option<&T> {
        n.checked_sub(2).and_then(|i| self.coeffs.get(i))
    }

    pub fn a2(&self) -> &T {
        &self.coeffs[0]
    }

    pub fn a3(&self) -> Option<&T> {
        self.get(3)
    }

    pub fn a4(&self) -> Option<&T> {
        self.get(4)
    }

    pub fn a5(&self) -> Option<&T> {
        self.get(5)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.coeffs
    }

    /// `z + a2 z^2 + ...` of order `len + 1`.
    pub fn to_series(&self) -> Series<T> {
        Series::normalized(&self.coeffs)
    }
}
