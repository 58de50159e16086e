//! Ma-Minda generators, the two differential operators, and the coefficient
//! systems obtained by equating `operator(f) = φ((p-1)/(p+1))`.
//!
//! Nothing here hard-codes a coefficient equation. Each system is solved by
//! expanding both sides as truncated series and peeling off one unknown per
//! degree, using the fact that the degree-`n` coefficient is affine in the
//! newest unknown with a pivot that depends only on `λ` (or on `B₁`).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::caratheodory::CaratheodoryTuple;
use crate::error::{Error, Result};
use crate::number::Real;
use crate::series::{CoefficientVector, Scalar, Series, TruncatedSeries, DEFAULT_ORDER};

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `(1 + A z)/(1 + B z)`.
    Janowski { a: Real, b: Real },
    /// `(1 + (1 - 2ρ) z)/(1 - z)`.
    Order { rho: Real },
    /// `((1 + z)/(1 - z))^β`.
    Strong { beta: Real },
    Custom,
}

/// `φ(z) = 1 + B₁ z + B₂ z² + ...`, stored as `[B₁, B₂, ...]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MindaGenerator {
    coeffs: Vec<Real>,
    family: Family,
}

impl MindaGenerator {
    pub fn new(coeffs: Vec<Real>, family: Family) -> Result<Self> {
        if coeffs.len() < 3 {
            return Err(Error::Parameter(format!(
                "generator needs at least B1, B2, B3 (got {} coefficients)",
                coeffs.len()
            )));
        }
        if coeffs[0].cmp_f64(0.0) != std::cmp::Ordering::Greater {
            return Err(Error::Parameter(format!("B1 must be positive (got {})", coeffs[0])));
        }
        Ok(MindaGenerator { coeffs, family })
    }

    pub fn custom(coeffs: Vec<Real>) -> Result<Self> {
        MindaGenerator::new(coeffs, Family::Custom)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn coeffs(&self) -> &[Real] {
        &self.coeffs
    }

    /// `B_n`, one-based.
    pub fn b(&self, n: usize) -> &Real {
        &self.coeffs[n - 1]
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(Real::to_f64).collect()
    }

    /// `1 + B₁ z + ... + B_K z^K`.
    pub fn series<T: Scalar>(&self) -> Result<Series<T>> {
        let mut c = vec![T::one()];
        for b in &self.coeffs {
            c.push(T::from_real(b)?);
        }
        Series::new(c)
    }

    /// True when every coefficient is an exact rational.
    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(Real::is_exact)
    }
}

/// `B_n = (-B)^{n-1} (A - B)` for `n = 1..=k`.
pub fn janowski_coeffs(a: Real, b: Real, k: usize) -> Result<MindaGenerator> {
    if !(Real::int(-1) <= b && b < a && a <= Real::int(1)) {
        return Err(Error::Parameter(format!(
            "Janowski parameters need -1 <= B < A <= 1 (got A={a}, B={b})"
        )));
    }
    let diff = a.sub(&b);
    let coeffs = (0..k).map(|n| b.neg().powi(n as i32).mul(&diff)).collect();
    MindaGenerator::new(coeffs, Family::Janowski { a, b })
}

/// Starlike of order `ρ`: Janowski with `A = 1 - 2ρ`, `B = -1`.
pub fn order_coeffs(rho: Real, k: usize) -> Result<MindaGenerator> {
    if !(Real::int(0) <= rho && rho < Real::int(1)) {
        return Err(Error::Parameter(format!("order needs 0 <= rho < 1 (got {rho})")));
    }
    let a = Real::int(1).sub(&rho.mul(&Real::int(2)));
    let g = janowski_coeffs(a, Real::int(-1), k)?;
    Ok(MindaGenerator {
        coeffs: g.coeffs,
        family: Family::Order { rho },
    })
}

/// Strongly starlike of order `β`, expanded through a formal power.
pub fn strong_coeffs(beta: Real, k: usize) -> Result<MindaGenerator> {
    if !(Real::int(0) < beta && beta <= Real::int(1)) {
        return Err(Error::Parameter(format!("strong order needs 0 < beta <= 1 (got {beta})")));
    }
    let one = BigRational::one();
    let num = Series::from_fn(k, |n| if n <= 1 { one.clone() } else { BigRational::zero() });
    let den = Series::from_fn(k, |n| match n {
        0 => one.clone(),
        1 => -one.clone(),
        _ => BigRational::zero(),
    });
    let base = TruncatedSeries::Rational(num.div(&den)?);
    let coeffs = match base.pow_real(&beta)? {
        TruncatedSeries::Rational(s) => s.coeffs()[1..].iter().cloned().map(Real::Exact).collect(),
        TruncatedSeries::Complex(s) => s.coeffs()[1..].iter().map(|c| Real::Float(c.re)).collect(),
    };
    MindaGenerator::new(coeffs, Family::Strong { beta })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operator {
    /// `z f'/f + λ z² f''/f`.
    StLambda,
    /// `λ (1 + z f''/f') + (1 - λ) z f'/f`.
    MLambda,
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Operator::StLambda => "st",
            Operator::MLambda => "m",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassSpec {
    pub operator: Operator,
    pub lambda: Real,
    pub generator: MindaGenerator,
}

impl ClassSpec {
    pub fn new(operator: Operator, lambda: Real, generator: MindaGenerator) -> Result<Self> {
        if lambda.cmp_f64(0.0) == std::cmp::Ordering::Less {
            return Err(Error::Parameter(format!("lambda must be >= 0 (got {lambda})")));
        }
        Ok(ClassSpec {
            operator,
            lambda,
            generator,
        })
    }

    pub fn st(lambda: Real, generator: MindaGenerator) -> Result<Self> {
        ClassSpec::new(Operator::StLambda, lambda, generator)
    }

    pub fn m(lambda: Real, generator: MindaGenerator) -> Result<Self> {
        ClassSpec::new(Operator::MLambda, lambda, generator)
    }

    pub fn lambda_f64(&self) -> f64 {
        self.lambda.to_f64()
    }

    /// `B₁, B₂, B₃` as floats.
    pub fn b123(&self) -> (f64, f64, f64) {
        let g = &self.generator;
        (g.b(1).to_f64(), g.b(2).to_f64(), g.b(3).to_f64())
    }
}

fn parse_pairs(segment: &str, allowed: &[&str], lowercase: bool) -> Result<BTreeMap<String, Real>> {
    let mut out = BTreeMap::new();
    for item in segment.split(',') {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got '{item}'")))?;
        let key = if lowercase {
            key.trim().to_ascii_lowercase()
        } else {
            key.trim().to_string()
        };
        if !allowed.contains(&key.as_str()) {
            return Err(Error::Parse(format!("unknown key '{key}'")));
        }
        let value: Real = value.parse()?;
        if out.insert(key.clone(), value).is_some() {
            return Err(Error::Parse(format!("duplicate key '{key}'")));
        }
    }
    Ok(out)
}

fn take(map: &mut BTreeMap<String, Real>, key: &str) -> Result<Real> {
    map.remove(key)
        .ok_or_else(|| Error::Parse(format!("missing key '{key}'")))
}

fn parse_family(name: &str, params: &str) -> Result<MindaGenerator> {
    let k = DEFAULT_ORDER;
    match name {
        "janowski" => {
            let mut kv = parse_pairs(params, &["a", "b"], true)?;
            janowski_coeffs(take(&mut kv, "a")?, take(&mut kv, "b")?, k)
        }
        "order" => order_coeffs(take(&mut parse_pairs(params, &["rho"], false)?, "rho")?, k),
        "strong" => strong_coeffs(take(&mut parse_pairs(params, &["beta"], false)?, "beta")?, k),
        "custom" => {
            let mut coeffs = Vec::new();
            let mut seen = BTreeMap::new();
            for item in params.split(',') {
                let (key, value) = item
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("expected key=value, got '{item}'")))?;
                let key = key.trim();
                let n: usize = key
                    .strip_prefix('b')
                    .and_then(|d| d.parse().ok())
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| Error::Parse(format!("unknown key '{key}'")))?;
                if seen.insert(n, value.parse::<Real>()?).is_some() {
                    return Err(Error::Parse(format!("duplicate key '{key}'")));
                }
            }
            for (i, (n, v)) in seen.into_iter().enumerate() {
                if n != i + 1 {
                    return Err(Error::Parse(format!("custom coefficients must be b1..bK without gaps (missing b{})", i + 1)));
                }
                coeffs.push(v);
            }
            MindaGenerator::custom(coeffs)
        }
        other => Err(Error::Parse(format!("unknown family '{other}'"))),
    }
}

impl FromStr for ClassSpec {
    type Err = Error;

    /// `st:lambda=V:<family>`, `m:lambda=V:<family>` or the shorthand
    /// `ss:beta=V` for `st:lambda=0:strong:beta=V`.
    fn from_str(s: &str) -> Result<ClassSpec> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        match parts.as_slice() {
            ["ss", params] => {
                let beta = take(&mut parse_pairs(params, &["beta"], false)?, "beta")?;
                ClassSpec::st(Real::int(0), strong_coeffs(beta, DEFAULT_ORDER)?)
            }
            [op @ ("st" | "m"), lambda, family, params] => {
                let lambda = take(&mut parse_pairs(lambda, &["lambda"], false)?, "lambda")?;
                let generator = parse_family(family, params)?;
                let op = if *op == "st" { Operator::StLambda } else { Operator::MLambda };
                ClassSpec::new(op, lambda, generator)
            }
            [op, ..] if !["st", "m", "ss"].contains(op) => {
                Err(Error::Parse(format!("unknown operator '{op}' (expected st, m or ss)")))
            }
            _ => Err(Error::Parse(format!(
                "malformed class spec '{s}' (expected st|m:lambda=V:family:key=V,...)"
            ))),
        }
    }
}

impl fmt::Display for ClassSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:lambda={}:", self.operator, self.lambda)?;
        match &self.generator.family {
            Family::Janowski { a, b } => write!(f, "janowski:A={a},B={b}"),
            Family::Order { rho } => write!(f, "order:rho={rho}"),
            Family::Strong { beta } => write!(f, "strong:beta={beta}"),
            Family::Custom => {
                f.write_str("custom:")?;
                for (i, b) in self.generator.coeffs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "b{}={b}", i + 1)?;
                }
                Ok(())
            }
        }
    }
}

/// The left-hand side operator applied to a normalized `f` of order `n`;
/// the result has order `n - 1`.
pub fn apply_operator<T: Scalar>(op: Operator, lambda: &T, f: &Series<T>) -> Result<Series<T>> {
    if !f.is_normalized() {
        return Err(Error::NotNormalized);
    }
    let h = f.shift_down()?;
    let df = f.derivative();
    let z_d2f = df.derivative().shift_up();
    let starlike = df.div(&h)?;
    match op {
        Operator::StLambda => Ok(starlike.add(&z_d2f.div(&h)?.scale(lambda))),
        Operator::MLambda => {
            let one = Series::constant(T::one(), starlike.order());
            let convex = one.add(&z_d2f.div(&df)?);
            Ok(convex
                .scale(lambda)
                .add(&starlike.scale(&(T::one() - lambda.clone()))))
        }
    }
}

/// The coefficient system of a class at a fixed depth `m`: unknowns
/// `a₂..a_{m+1}` on the `f` side and `q₁..q_m` on the inverse side.
#[derive(Debug, Clone)]
pub struct System<T> {
    operator: Operator,
    lambda: T,
    phi: Series<T>,
    depth: usize,
    a_pivot_inv: Vec<T>,
    q_pivot_inv: T,
}

impl<T: Scalar> System<T> {
    pub fn new(spec: &ClassSpec, depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::OrderTooSmall { need: 1, got: 0 });
        }
        if spec.generator.len() < depth {
            return Err(Error::OrderTooSmall {
                need: depth,
                got: spec.generator.len(),
            });
        }
        let mut sys = System {
            operator: spec.operator,
            lambda: T::from_real(&spec.lambda)?,
            phi: spec.generator.series()?,
            depth,
            a_pivot_inv: Vec::with_capacity(depth),
            q_pivot_inv: T::zero(),
        };
        for n in 1..=depth {
            let mut probe = vec![T::zero(); n];
            let base = sys.lhs(&probe)?.coeff(n);
            probe[n - 1] = T::one();
            let pivot = sys.lhs(&probe)?.coeff(n) - base;
            let inv = pivot
                .inv()
                .ok_or_else(|| Error::Degenerate(format!("zero pivot for a{}", n + 1)))?;
            sys.a_pivot_inv.push(inv);
        }
        let base = sys.rhs(&[T::zero()])?.coeff(1);
        let pivot = sys.rhs(&[T::one()])?.coeff(1) - base;
        sys.q_pivot_inv = pivot
            .inv()
            .ok_or_else(|| Error::Degenerate("zero pivot on the inverse side".into()))?;
        Ok(sys)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn operator(&self) -> Operator {
        self.operator
    }

    /// `φ((p - 1)/(p + 1))` for `p = 1 + p₁ z + ...`.
    pub fn rhs(&self, p: &[T]) -> Result<Series<T>> {
        let mut c = Vec::with_capacity(p.len() + 1);
        c.push(T::one());
        c.extend(p.iter().cloned());
        self.phi.compose(&Series::new(c)?.mobius_to_disk()?)
    }

    /// The operator applied to `z + a₂ z² + ...`.
    pub fn lhs(&self, a: &[T]) -> Result<Series<T>> {
        apply_operator(self.operator, &self.lambda, &Series::normalized(a))
    }

    /// `a₂..a_{m+1}` from the `f`-side equations.
    pub fn solve(&self, p: &[T]) -> Result<CoefficientVector<T>> {
        let m = self.depth;
        if p.len() < m {
            return Err(Error::OrderTooSmall { need: m, got: p.len() });
        }
        let rhs = self.rhs(&p[..m])?;
        let mut a = vec![T::zero(); m];
        for n in 1..=m {
            let base = self.lhs(&a[..n])?.coeff(n);
            a[n - 1] = (rhs.coeff(n) - base) * self.a_pivot_inv[n - 1].clone();
        }
        CoefficientVector::new(a)
    }

    /// `q₁..q_m` making the inverse-side equations hold for `a`.
    pub fn implied_q(&self, a: &CoefficientVector<T>) -> Result<Vec<T>> {
        let m = self.depth;
        if a.len() < m {
            return Err(Error::OrderTooSmall { need: m, got: a.len() });
        }
        let g = Series::normalized(&a.as_slice()[..m]).revert()?;
        let lhs = apply_operator(self.operator, &self.lambda, &g)?;
        let mut q = vec![T::zero(); m];
        for n in 1..=m {
            let base = self.rhs(&q[..n])?.coeff(n);
            q[n - 1] = (lhs.coeff(n) - base) * self.q_pivot_inv.clone();
        }
        Ok(q)
    }
}

/// Solve the `f`-side system of `spec` for a Carathéodory tuple.
pub fn solve_coefficients(spec: &ClassSpec, p: &CaratheodoryTuple) -> Result<CoefficientVector<Complex64>> {
    System::<Complex64>::new(spec, p.len())?.solve(p.entries())
}

/// The inverse-side tuple forced by `a`.
pub fn implied_q(spec: &ClassSpec, a: &CoefficientVector<Complex64>) -> Result<CaratheodoryTuple> {
    let q = System::<Complex64>::new(spec, a.len())?.implied_q(a)?;
    CaratheodoryTuple::new(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn r(n: i64, d: i64) -> Real {
        Real::ratio(n, d)
    }

    fn koebe_spec(op: Operator, lambda: Real) -> ClassSpec {
        ClassSpec::new(op, lambda, order_coeffs(r(0, 1), DEFAULT_ORDER).unwrap()).unwrap()
    }

    #[test]
    fn janowski_examples() {
        let g = janowski_coeffs(r(1, 1), r(-1, 1), 4).unwrap();
        assert_eq!(g.coeffs(), &[r(2, 1), r(2, 1), r(2, 1), r(2, 1)]);
        let g = janowski_coeffs(r(1, 2), r(0, 1), 3).unwrap();
        assert_eq!(g.coeffs(), &[r(1, 2), r(0, 1), r(0, 1)]);
        let g = order_coeffs(r(1, 4), 3).unwrap();
        assert_eq!(g.coeffs(), &[r(3, 2), r(3, 2), r(3, 2)]);
        assert!(janowski_coeffs(r(0, 1), r(0, 1), 3).is_err());
        assert!(janowski_coeffs(r(2, 1), r(0, 1), 3).is_err());
        assert!(janowski_coeffs(r(1, 2), r(-2, 1), 3).is_err());
    }

    #[test]
    fn strong_examples() {
        assert_eq!(strong_coeffs(r(1, 1), 3).unwrap().coeffs(), &[r(2, 1), r(2, 1), r(2, 1)]);
        assert_eq!(strong_coeffs(r(1, 2), 3).unwrap().coeffs(), &[r(1, 1), r(1, 2), r(1, 2)]);
        assert_eq!(strong_coeffs(r(1, 3), 3).unwrap().coeffs(), &[r(2, 3), r(2, 9), r(22, 81)]);
        let fl = strong_coeffs(Real::Float(0.3), 3).unwrap();
        let b = fl.coeffs_f64();
        let beta = 0.3f64;
        assert!((b[2] - (4.0 * beta.powi(3) + 2.0 * beta) / 3.0).abs() < 1e-14);
        assert!(strong_coeffs(r(0, 1), 3).is_err());
        assert!(strong_coeffs(r(3, 2), 3).is_err());
    }

    #[test]
    fn generator_invariants() {
        assert!(MindaGenerator::custom(vec![r(1, 1), r(1, 1)]).is_err());
        assert!(MindaGenerator::custom(vec![r(0, 1), r(1, 1), r(1, 1)]).is_err());
        assert!(ClassSpec::st(r(-1, 2), order_coeffs(r(0, 1), 3).unwrap()).is_err());
    }

    #[test]
    fn spec_text_round_trips() {
        for text in [
            "st:lambda=0.5:janowski:A=1,B=-1",
            "m:lambda=1:strong:beta=0.5",
            "st:lambda=0:order:rho=1/3",
            "m:lambda=2:custom:b1=1,b2=0.3,b3=0.1",
        ] {
            let spec: ClassSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
            assert_eq!(spec.to_string().parse::<ClassSpec>().unwrap(), spec);
        }
        let ss: ClassSpec = "ss:beta=1/2".parse().unwrap();
        assert_eq!(ss.to_string(), "st:lambda=0:strong:beta=0.5");
        let lower: ClassSpec = "st:lambda=0:janowski:a=1,b=-1".parse().unwrap();
        assert_eq!(lower.to_string(), "st:lambda=0:janowski:A=1,B=-1");
    }

    #[test]
    fn spec_text_errors_name_the_problem() {
        let err = "st:lambda=0:order:sigma=0".parse::<ClassSpec>().unwrap_err();
        assert!(err.to_string().contains("sigma"));
        let err = "st:mu=0:order:rho=0".parse::<ClassSpec>().unwrap_err();
        assert!(err.to_string().contains("mu"));
        for bad in [
            "bad:spec",
            "st:lambda=0",
            "st:lambda=0:order:rho=0,rho=0",
            "st:lambda=x:order:rho=0",
            "st:lambda=0:custom:b1=1,b3=1,b4=1",
            "st:lambda=0:cardioid:k=1",
            "ss:rho=0",
        ] {
            assert!(bad.parse::<ClassSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn operator_on_identity_is_one() {
        let z = Series::<BigRational>::identity(4);
        for op in [Operator::StLambda, Operator::MLambda] {
            let out = apply_operator(op, &q(3, 7), &z).unwrap();
            assert_eq!(out, Series::constant(q(1, 1), 3));
        }
        let bad = Series::new(vec![q(0, 1), q(2, 1), q(1, 1)]).unwrap();
        assert_eq!(apply_operator(Operator::StLambda, &q(0, 1), &bad).unwrap_err(), Error::NotNormalized);
    }

    fn symbols() -> (Poly, Poly, Poly, Poly) {
        (Poly::var("l"), Poly::var("a2"), Poly::var("a3"), Poly::var("a4"))
    }

    fn c(n: i64) -> Poly {
        Poly::int(n)
    }

    #[test]
    fn st_operator_symbolic_expansion() {
        let (l, a2, a3, a4) = symbols();
        let f = Series::normalized(&[a2.clone(), a3.clone(), a4.clone()]);
        let out = apply_operator(Operator::StLambda, &l, &f).unwrap();
        let k = |x: i64, y: i64| c(x) + c(y) * l.clone();
        assert_eq!(out.coeff(1), k(1, 2) * a2.clone());
        assert_eq!(out.coeff(2), c(2) * k(1, 3) * a3.clone() - k(1, 2) * a2.clone() * a2.clone());
        assert_eq!(
            out.coeff(3),
            c(3) * k(1, 4) * a4.clone() - k(3, 8) * a2.clone() * a3.clone()
                + k(1, 2) * a2.clone() * a2.clone() * a2.clone()
        );

        let g = f.revert().unwrap();
        let out = apply_operator(Operator::StLambda, &l, &g).unwrap();
        assert_eq!(out.coeff(1), -(k(1, 2) * a2.clone()));
        assert_eq!(out.coeff(2), -(c(2) * k(1, 3) * a3.clone()) + k(3, 10) * a2.clone() * a2.clone());
        assert_eq!(
            out.coeff(3),
            -(c(3) * k(1, 4) * a4) + k(12, 52) * a2.clone() * a3
                - k(10, 46) * a2.clone() * a2.clone() * a2
        );
    }

    #[test]
    fn m_operator_symbolic_expansion() {
        let (l, a2, a3, a4) = symbols();
        let f = Series::normalized(&[a2.clone(), a3.clone(), a4.clone()]);
        let k = |x: i64, y: i64| c(x) + c(y) * l.clone();
        let out = apply_operator(Operator::MLambda, &l, &f).unwrap();
        assert_eq!(out.coeff(1), k(1, 1) * a2.clone());
        assert_eq!(out.coeff(2), c(2) * k(1, 2) * a3.clone() - k(1, 3) * a2.clone() * a2.clone());
        assert_eq!(
            out.coeff(3),
            c(3) * k(1, 3) * a4.clone() - k(3, 15) * a2.clone() * a3.clone()
                + k(1, 7) * a2.clone() * a2.clone() * a2.clone()
        );
        let g = f.revert().unwrap();
        let out = apply_operator(Operator::MLambda, &l, &g).unwrap();
        assert_eq!(out.coeff(1), -(k(1, 1) * a2.clone()));
        assert_eq!(out.coeff(2), -(c(2) * k(1, 2) * a3.clone()) + k(3, 5) * a2.clone() * a2.clone());
        assert_eq!(
            out.coeff(3),
            -(c(3) * k(1, 3) * a4) + k(12, 30) * a2.clone() * a3
                - k(10, 22) * a2.clone() * a2.clone() * a2
        );
    }

    #[test]
    fn rhs_matches_printed_expansion() {
        let names = ["B1", "B2", "B3", "p1", "p2", "p3"];
        let [b1, b2, b3, p1, p2, p3]: [Poly; 6] =
            names.map(Poly::var);
        let phi = Series::new(vec![Poly::one(), b1.clone(), b2.clone(), b3.clone()]).unwrap();
        let p = Series::new(vec![Poly::one(), p1.clone(), p2.clone(), p3.clone()]).unwrap();
        let out = phi.compose(&p.mobius_to_disk().unwrap()).unwrap();
        let h = |n: i64, d: i64| Poly::constant(q(n, d));
        let p1sq = p1.clone() * p1.clone();
        assert_eq!(out.coeff(1), h(1, 2) * b1.clone() * p1.clone());
        assert_eq!(
            out.coeff(2),
            h(1, 2) * b1.clone() * (p2.clone() - h(1, 2) * p1sq.clone()) + h(1, 4) * b2.clone() * p1sq.clone()
        );
        assert_eq!(
            out.coeff(3),
            h(1, 2) * b1 * (h(1, 4) * p1sq.clone() * p1.clone() - p1.clone() * p2.clone() + p3)
                + h(1, 2) * b2 * p1.clone() * (p2 - h(1, 2) * p1sq.clone())
                + h(1, 8) * b3 * p1sq * p1
        );
    }

    #[test]
    fn zero_tuple_gives_identity() {
        for op in [Operator::StLambda, Operator::MLambda] {
            let sys = System::<BigRational>::new(&koebe_spec(op, r(1, 2)), 4).unwrap();
            let a = sys.solve(&vec![q(0, 1); 4]).unwrap();
            assert!(a.as_slice().iter().all(Zero::is_zero));
            assert!(sys.implied_q(&a).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn koebe_and_convex_extremals() {
        let two = vec![q(2, 1); 3];
        let st = System::<BigRational>::new(&koebe_spec(Operator::StLambda, r(0, 1)), 3).unwrap();
        assert_eq!(st.solve(&two).unwrap().as_slice(), &[q(2, 1), q(3, 1), q(4, 1)]);
        let m = System::<BigRational>::new(&koebe_spec(Operator::MLambda, r(1, 1)), 3).unwrap();
        assert_eq!(m.solve(&two).unwrap().as_slice(), &[q(1, 1), q(1, 1), q(1, 1)]);
    }

    #[test]
    fn q1_is_minus_p1_and_sum_relation() {
        let spec = koebe_spec(Operator::StLambda, r(0, 1));
        let sys = System::<BigRational>::new(&spec, 3).unwrap();
        let p = vec![q(2, 1); 3];
        let a = sys.solve(&p).unwrap();
        let qv = sys.implied_q(&a).unwrap();
        assert_eq!(qv[0], -p[0].clone());
        let (b1, b2) = (q(2, 1), q(2, 1));
        let lhs = q(2, 1) * a.a2() * a.a2();
        let rhs = q(1, 2) * &b1 * (&p[1] + &qv[1])
            - q(1, 4) * (&p[0] * &p[0] + &qv[0] * &qv[0]) * (&b1 - &b2);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn pivots_do_not_depend_on_lower_coefficients() {
        let spec = koebe_spec(Operator::MLambda, r(3, 4));
        let sys = System::<BigRational>::new(&spec, 4).unwrap();
        let lower = [q(5, 3), q(-2, 7), q(1, 9)];
        for n in 1..=3 {
            let mut a: Vec<_> = lower[..n - 1].to_vec();
            a.push(q(0, 1));
            let c0 = sys.lhs(&a).unwrap().coeff(n);
            a[n - 1] = q(1, 1);
            let c1 = sys.lhs(&a).unwrap().coeff(n);
            assert_eq!((c1 - c0) * &sys.a_pivot_inv[n - 1], q(1, 1));
        }
    }

    #[test]
    fn depth_must_fit_generator() {
        let spec: ClassSpec = "st:lambda=0:custom:b1=1,b2=1,b3=1".parse().unwrap();
        assert!(System::<BigRational>::new(&spec, 4).is_err());
        assert!(System::<BigRational>::new(&spec, 3).is_ok());
    }

    #[test]
    fn complex_helpers_agree_with_exact_solve() {
        let spec = koebe_spec(Operator::StLambda, r(1, 2));
        let p = CaratheodoryTuple::new(vec![
            Complex64::new(0.5, 0.25),
            Complex64::new(-0.75, 0.0),
            Complex64::new(0.125, -0.5),
        ])
        .unwrap();
        let a = solve_coefficients(&spec, &p).unwrap();
        let qv = implied_q(&spec, &a).unwrap();
        assert!((qv.entries()[0] + p.entries()[0]).norm() < 1e-15);

        let real_p = [q(1, 2), q(-3, 4), q(1, 8)];
        let exact = System::<BigRational>::new(&spec, 3).unwrap().solve(&real_p).unwrap();
        let cp = CaratheodoryTuple::new(vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(-0.75, 0.0),
            Complex64::new(0.125, 0.0),
        ])
        .unwrap();
        let approx = solve_coefficients(&spec, &cp).unwrap();
        for (x, y) in exact.as_slice().iter().zip(approx.as_slice()) {
            assert!((num_traits::ToPrimitive::to_f64(x).unwrap() - y.re).abs() < 1e-14);
        }
    }

    fn small_rational() -> impl Strategy<Value = BigRational> {
        (-12i64..=12, 1i64..=6).prop_map(|(n, d)| q(n, d))
    }

    fn nonneg_rational() -> impl Strategy<Value = BigRational> {
        (0i64..=12, 1i64..=6).prop_map(|(n, d)| q(n, d))
    }

    fn custom_spec(op: Operator, l: &BigRational, b: [BigRational; 3]) -> ClassSpec {
        let g = MindaGenerator::custom(b.into_iter().map(Real::Exact).collect()).unwrap();
        ClassSpec::new(op, Real::Exact(l.clone()), g).unwrap()
    }

    proptest! {
        #[test]
        fn solve_then_expand_reproduces_rhs(
            p in proptest::collection::vec(small_rational(), 3),
            l in nonneg_rational(),
            b1 in (1i64..=8, 1i64..=4).prop_map(|(n, d)| q(n, d)),
            b2 in small_rational(),
            b3 in small_rational(),
            st in any::<bool>(),
        ) {
            let op = if st { Operator::StLambda } else { Operator::MLambda };
            let sys = System::<BigRational>::new(&custom_spec(op, &l, [b1, b2, b3]), 3).unwrap();
            let a = sys.solve(&p).unwrap();
            prop_assert_eq!(sys.lhs(a.as_slice()).unwrap(), sys.rhs(&p).unwrap());
            let qv = sys.implied_q(&a).unwrap();
            let g = Series::normalized(a.as_slice()).revert().unwrap();
            let lhs_g = apply_operator(op, &l, &g).unwrap();
            prop_assert_eq!(lhs_g, sys.rhs(&qv).unwrap());
            prop_assert_eq!(qv[0].clone(), -p[0].clone());
        }

        #[test]
        fn st_sum_and_difference_relations(
            p in proptest::collection::vec(small_rational(), 3),
            l in nonneg_rational(),
            b1 in (1i64..=8, 1i64..=4).prop_map(|(n, d)| q(n, d)),
            b2 in small_rational(),
            b3 in small_rational(),
        ) {
            let spec = custom_spec(Operator::StLambda, &l, [b1.clone(), b2.clone(), b3]);
            let sys = System::<BigRational>::new(&spec, 3).unwrap();
            let a = sys.solve(&p).unwrap();
            let qv = sys.implied_q(&a).unwrap();
            let k = |x: i64, y: i64| q(x, 1) + q(y, 1) * &l;
            let k2 = k(1, 2);
            let big = k(1, 4) * &b1 * &b1 + (&b1 - &b2) * &k2 * &k2;
            prop_assert_eq!(
                &p[0] * &p[0] * &big,
                (&p[1] + &qv[1]) * &b1 * &k2 * &k2
            );
            let diff_den = k(9, 44) * &b1 * &b1 - q(8, 1) * k(1, 3) * &k2 * (&b2 - &b1);
            prop_assert_eq!(
                &p[0] * (&p[1] - &qv[1]) * diff_den,
                q(8, 1) * k(1, 3) * &k2 * &b1 * (&p[2] + &qv[2])
            );
        }
    }
}
