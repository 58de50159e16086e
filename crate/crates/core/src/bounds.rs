//! Closed-form coefficient bounds with branch and route provenance.
//!
//! Every estimate comes from a two-way case split on the size of `|p₁|`
//! (`CaseA` when the refined estimate is below 2, `CaseB` otherwise) and,
//! for `a₃` and `a₄`, from the minimum of two independent estimates.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::classes::{ClassSpec, Family, Operator};
use crate::error::{Error, Result};
use crate::number::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    CaseA,
    CaseB,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::CaseA => "case-a",
            Branch::CaseB => "case-b",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Route {
    RouteOne,
    RouteTwo,
    Min,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::RouteOne => "route-1",
            Route::RouteTwo => "route-2",
            Route::Min => "min",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundBreakdown {
    pub value: f64,
    pub branch: Branch,
    pub route: Route,
    /// Both route values when `route` is `Min`.
    pub routes: Option<[f64; 2]>,
    pub constants: BTreeMap<String, f64>,
}

impl BoundBreakdown {
    fn single(value: f64, branch: Branch, constants: &BTreeMap<String, f64>) -> Self {
        BoundBreakdown {
            value,
            branch,
            route: Route::RouteOne,
            routes: None,
            constants: constants.clone(),
        }
    }

    fn min(one: f64, two: f64, branch: Branch, constants: &BTreeMap<String, f64>) -> Self {
        BoundBreakdown {
            value: one.min(two),
            branch,
            route: Route::Min,
            routes: Some([one, two]),
            constants: constants.clone(),
        }
    }

    /// The route attaining the minimum; `RouteOne` on ties.
    pub fn attained_by(&self) -> Route {
        match self.routes {
            Some([one, two]) if two < one => Route::RouteTwo,
            Some(_) => Route::RouteOne,
            None => self.route,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSet {
    pub a2: BoundBreakdown,
    pub a3: BoundBreakdown,
    pub a4: BoundBreakdown,
}

impl BoundSet {
    /// Bound for `a_n`, `n` in `2..=4`.
    pub fn get(&self, n: usize) -> Option<&BoundBreakdown> {
        match n {
            2 => Some(&self.a2),
            3 => Some(&self.a3),
            4 => Some(&self.a4),
            _ => None,
        }
    }
}

fn nonzero(x: &Real, what: &str) -> Result<()> {
    let zero = match x {
        Real::Exact(_) => x.is_zero(),
        Real::Float(v) => v.abs() <= 1e-14,
    };
    if zero {
        return Err(Error::Degenerate(format!("{what} vanishes")));
    }
    Ok(())
}

fn r(n: i64) -> Real {
    Real::int(n)
}

/// `c + d λ`.
fn lin(c: i64, d: i64, l: &Real) -> Real {
    r(c).add(&r(d).mul(l))
}

pub fn bounds(spec: &ClassSpec) -> Result<BoundSet> {
    match spec.operator {
        Operator::StLambda => st_bounds(spec),
        Operator::MLambda => m_bounds(spec),
    }
}

/// Estimates for `|a₂|, |a₃|, |a₄|` over the class built on `z f'/f + λ z² f''/f`.
pub fn st_bounds(spec: &ClassSpec) -> Result<BoundSet> {
    if spec.operator != Operator::StLambda {
        return Err(Error::Unsupported("st_bounds needs an st spec".into()));
    }
    let g = &spec.generator;
    let lr = &spec.lambda;
    let (b1r, b2r) = (g.b(1), g.b(2));
    let dr = lin(1, 4, lr)
        .mul(&b1r.powi(2))
        .add(&b1r.sub(b2r).mul(&lin(1, 2, lr).powi(2)));
    let er = lin(9, 44, lr)
        .mul(&b1r.powi(2))
        .sub(&r(8).mul(&lin(1, 2, lr)).mul(&lin(1, 3, lr)).mul(&b2r.sub(b1r)));
    nonzero(&dr, "(1+4λ)B1² + (B1-B2)(1+2λ)²")?;
    nonzero(&er, "(9+44λ)B1² - 8(1+2λ)(1+3λ)(B2-B1)")?;

    let l = spec.lambda_f64();
    let (b1, b2, b3) = spec.b123();
    let (d, e) = (dr.to_f64(), er.to_f64());
    let (k2, k3, k4) = (1.0 + 2.0 * l, 1.0 + 3.0 * l, 1.0 + 4.0 * l);

    let branch = if k2 * k2 * b1 >= d.abs() {
        Branch::CaseB
    } else {
        Branch::CaseA
    };
    // Bound on |p₁|.
    let p1 = match branch {
        Branch::CaseA => 2.0 * k2 * b1.sqrt() / d.abs().sqrt(),
        Branch::CaseB => 2.0,
    };

    let shared = b1 * (2.0 * k2.powi(3).recip() * k3 * b1.powi(3) + (b1 + b3 - 2.0 * b2)) * k2 * k2
        / (4.0 * d);
    let mixed = (3.0 + 8.0 * l) * b1 * b1 / (8.0 * k2 * k3);
    let a = (b2 - b1) + mixed + shared;
    let c = -mixed + shared;
    let constants = BTreeMap::from([("A".to_string(), a), ("C".to_string(), c)]);

    let a2 = BoundBreakdown::single(b1 * p1 / (2.0 * k2), branch, &constants);

    let u = k2 * b1 * b1 - k2 * k2 * (b1 - b2);
    let a3_one = b1 / (4.0 * k3 * d.abs())
        * (((3.0 + 10.0 * l) * b1 * b1 + (b1 - b2) * k2 * k2).abs() + u.abs());
    let a3_two = match branch {
        Branch::CaseA => b1 * (u.abs() + d.abs()) / (2.0 * k3 * d.abs()),
        Branch::CaseB => ((b1 * b1 - k2 * (b1 - b2)).abs() + k2 * b1) / (2.0 * k3 * k2),
    };
    let a3 = BoundBreakdown::min(a3_one, a3_two, branch, &constants);

    let x = (12.0 + 52.0 * l) * b1 * b1 - 4.0 * k2 * k3 * (b2 - b1);
    let y = (3.0 + 8.0 * l) * b1 * b1 + 4.0 * k2 * k3 * (b2 - b1);
    let w = (b2 - b1)
        + b1 * (2.0 * k3 * b1.powi(3) + k2.powi(3) * (b1 + b3 - 2.0 * b2)) / (2.0 * k2 * d);
    let a4_one = (b1 + p1 * (a.abs() + c.abs())) / (3.0 * k4);
    let a4_two = 2.0 * b1 * (x.abs() + y.abs()) / (6.0 * k4 * e.abs()) + p1 * w.abs() / (3.0 * k4);
    let a4 = BoundBreakdown::min(a4_one, a4_two, branch, &constants);

    finish(BoundSet { a2, a3, a4 })
}

/// Estimates for `|a₂|, |a₃|, |a₄|` over the class built on
/// `λ(1 + z f''/f') + (1 - λ) z f'/f`.
pub fn m_bounds(spec: &ClassSpec) -> Result<BoundSet> {
    if spec.operator != Operator::MLambda {
        return Err(Error::Unsupported("m_bounds needs an m spec".into()));
    }
    let g = &spec.generator;
    let lr = &spec.lambda;
    let (b1r, b2r) = (g.b(1), g.b(2));
    let dr = b1r.powi(2).add(&lin(1, 1, lr).mul(&b1r.sub(b2r)));
    let er = lin(9, 15, lr)
        .mul(&b1r.powi(2))
        .sub(&r(8).mul(&lin(1, 2, lr)).mul(&lin(1, 1, lr)).mul(&b2r.sub(b1r)));
    nonzero(&dr, "B1² + (1+λ)(B1-B2)")?;
    nonzero(&er, "(9+15λ)B1² - 8(1+2λ)(1+λ)(B2-B1)")?;

    let l = spec.lambda_f64();
    let (b1, b2, b3) = spec.b123();
    let (d, e) = (dr.to_f64(), er.to_f64());
    let (k1, k2, k3) = (1.0 + l, 1.0 + 2.0 * l, 1.0 + 3.0 * l);

    let branch = if k1 * b1 >= d.abs() {
        Branch::CaseB
    } else {
        Branch::CaseA
    };
    let p1 = match branch {
        Branch::CaseA => 2.0 * (k1 * b1).sqrt() / d.abs().sqrt(),
        Branch::CaseB => 2.0,
    };

    let tail = (b1 + b3 - 2.0 * b2) + 2.0 * (1.0 + 4.0 * l) * b1.powi(3) / k1.powi(3);
    let shared = b1 * k1 / (4.0 * d) * tail;
    let mixed = 3.0 * (1.0 + 5.0 * l) * b1 * b1 / (8.0 * k1 * k2);
    let a1 = (b2 - b1) + mixed + shared;
    let c1 = -mixed + shared;
    let constants = BTreeMap::from([("A1".to_string(), a1), ("C1".to_string(), c1)]);

    let a2 = BoundBreakdown::single(b1 * p1 / (2.0 * k1), branch, &constants);

    let u = (1.0 + 3.0 * l) * b1 * b1 - k1 * k1 * (b1 - b2);
    let a3_one = b1 / (4.0 * k2 * k1 * d.abs())
        * (((3.0 + 5.0 * l) * b1 * b1 + k1 * k1 * (b1 - b2)).abs() + u.abs());
    let a3_two = match branch {
        Branch::CaseA => {
            b1 * (u.abs() + (k1 * b1 * b1 + k1 * k1 * (b1 - b2)).abs()) / (2.0 * k2 * k1 * d.abs())
        }
        Branch::CaseB => (u.abs() + b1 * k1 * k1) / (2.0 * k2 * k1 * k1),
    };
    let a3 = BoundBreakdown::min(a3_one, a3_two, branch, &constants);

    let x = (12.0 + 30.0 * l) * b1 * b1 - 4.0 * k1 * k2 * (b2 - b1);
    let y = 4.0 * k1 * k2 * (b2 - b1) + 3.0 * b1 * b1 * (1.0 + 5.0 * l);
    let w = b2 - b1
        + b1 * ((b1 + b3 - 2.0 * b2) * k1.powi(3) + 2.0 * (1.0 + 4.0 * l) * b1.powi(3))
            / (2.0 * k1 * k1 * d);
    let a4_one = (b1 + p1 * (a1.abs() + c1.abs())) / (3.0 * k3);
    let a4_two = (b1 * ((x / e).abs() + (y / e).abs()) + p1 * w.abs()) / (3.0 * k3);
    let a4 = BoundBreakdown::min(a4_one, a4_two, branch, &constants);

    finish(BoundSet { a2, a3, a4 })
}

fn finish(set: BoundSet) -> Result<BoundSet> {
    for b in [&set.a2, &set.a3, &set.a4] {
        if !(b.value.is_finite() && b.value >= 0.0) {
            return Err(Error::Degenerate(format!("non-finite bound {}", b.value)));
        }
    }
    Ok(set)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum A5Variant {
    /// The inequality as announced.
    Stated,
    /// The value the displayed derivation for order `ρ` ends with.
    Proof,
    /// The strong-order estimate recomputed from the displayed steps.
    Rederived,
}

impl fmt::Display for A5Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            A5Variant::Stated => "stated",
            A5Variant::Proof => "proof",
            A5Variant::Rederived => "rederived",
        })
    }
}

impl std::str::FromStr for A5Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stated" => Ok(A5Variant::Stated),
            "proof" => Ok(A5Variant::Proof),
            "rederived" => Ok(A5Variant::Rederived),
            other => Err(Error::Parse(format!("unknown a5 variant '{other}'"))),
        }
    }
}

/// `|a₅|` for bi-starlike functions of order `ρ`, `0 ≤ ρ ≤ 1/2`.
pub fn st_rho_a5(rho: f64, variant: A5Variant) -> Result<f64> {
    if !(0.0..=0.5).contains(&rho) {
        return Err(Error::Parameter(format!("a5 estimate needs 0 <= rho <= 1/2 (got {rho})")));
    }
    let t = 1.0 - rho;
    let tail = 2.0 * 2f64.sqrt() / 3.0 * t.powf(1.5);
    match variant {
        A5Variant::Stated => Ok(2.0 / 3.0 * t + 1.5 * t * t + tail),
        A5Variant::Proof => Ok(0.5 * t + 5.0 / 3.0 * t * t + tail),
        A5Variant::Rederived => Err(Error::Parameter("order-rho a5 has stated and proof variants".into())),
    }
}

/// `|a₅|` for strongly bi-starlike functions of order `β`, `1/2 ≤ β ≤ 1`.
pub fn ss_beta_a5(beta: f64, variant: A5Variant) -> Result<f64> {
    if !(0.5..=1.0).contains(&beta) {
        return Err(Error::Parameter(format!("a5 estimate needs 1/2 <= beta <= 1 (got {beta})")));
    }
    let power = match variant {
        A5Variant::Stated => 4,
        A5Variant::Rederived => 2,
        A5Variant::Proof => {
            return Err(Error::Parameter("strong-order a5 has stated and rederived variants".into()))
        }
    };
    let b = beta;
    Ok(b / 9.0
        * (30.0 * b * b - 21.0 * b + 9.0
            + (38.0 * b * b - 30.0 * b + 7.0) * b / (b + 1.0).powi(power)
            + 3.0 * (7.0 * b - 3.0) / (b + 1.0).sqrt()))
}

/// Every available `a₅` estimate for `spec`, default variant first.
pub fn a5_bounds(spec: &ClassSpec) -> Result<Vec<(A5Variant, f64)>> {
    let unsupported = || {
        Error::Unsupported(
            "a5 estimates exist only for st:lambda=0 with order (rho <= 1/2) or strong (1/2 <= beta <= 1)".into(),
        )
    };
    if spec.operator != Operator::StLambda || !spec.lambda.is_zero() {
        return Err(unsupported());
    }
    match spec.generator.family() {
        Family::Order { rho } => {
            let rho = rho.to_f64();
            Ok(vec![
                (A5Variant::Proof, st_rho_a5(rho, A5Variant::Proof).map_err(|_| unsupported())?),
                (A5Variant::Stated, st_rho_a5(rho, A5Variant::Stated)?),
            ])
        }
        Family::Strong { beta } => {
            let beta = beta.to_f64();
            Ok(vec![
                (A5Variant::Stated, ss_beta_a5(beta, A5Variant::Stated).map_err(|_| unsupported())?),
                (A5Variant::Rederived, ss_beta_a5(beta, A5Variant::Rederived)?),
            ])
        }
        _ => Err(unsupported()),
    }
}

/// `|a_n| ≤ Π_{k=2}^{n} (k - 2ρ) / (n-1)!` for starlike functions of order `ρ`.
pub fn baseline_starlike_an(rho: f64, n: usize) -> Result<f64> {
    if !(0.0..1.0).contains(&rho) || n < 2 {
        return Err(Error::Parameter(format!("need 0 <= rho < 1 and n >= 2 (got rho={rho}, n={n})")));
    }
    Ok((2..=n).map(|k| (k as f64 - 2.0 * rho) / (k - 1) as f64).product())
}

/// The known `|a₅|` estimate for strongly starlike functions of order `β`,
/// when one of its two hypotheses holds.
pub fn ali_singh_a5(beta: f64) -> Result<Option<f64>> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::Parameter(format!("need 0 < beta <= 1 (got {beta})")));
    }
    let b = beta;
    if 38.0 * b.powi(3) - 30.0 * b * b + 16.0 * b >= 4.5 {
        return Ok(Some(b * b / 9.0 * (38.0 * b * b + 7.0)));
    }
    if 228.0 * b.powi(4) - 194.0 * b.powi(3) + 2.0 * b * b + 39.0 * b - 9.0 <= 0.0 {
        return Ok(Some(b / 2.0));
    }
    Ok(None)
}

/// Piecewise closed forms for bi-starlike functions of order `ρ`.
pub mod order_rho {
    pub fn a2(rho: f64) -> f64 {
        if rho <= 0.5 {
            (2.0 * (1.0 - rho)).sqrt()
        } else {
            2.0 * (1.0 - rho)
        }
    }

    pub fn a3(rho: f64) -> f64 {
        if rho <= 0.5 {
            2.0 * (1.0 - rho)
        } else {
            (1.0 - rho) * (3.0 - 2.0 * rho)
        }
    }

    pub fn a4(rho: f64) -> f64 {
        let t = 1.0 - rho;
        if rho <= 0.5 {
            2.0 * t / 3.0 * (1.0 + 2.0 * (2.0 * t).sqrt())
        } else {
            2.0 * t / 3.0 * (1.0 + 4.0 * t)
        }
    }
}

/// Piecewise closed forms for strongly bi-starlike functions of order `β`.
pub mod strong_beta {
    pub const A3_BREAKPOINT: f64 = 1.0 / 3.0;

    pub fn a2(beta: f64) -> f64 {
        2.0 * beta / (1.0 + beta).sqrt()
    }

    /// `(β, 4β²/(1+β))`; the estimate is the first below the breakpoint.
    pub fn a3_pieces(beta: f64) -> (f64, f64) {
        (beta, 4.0 * beta * beta / (1.0 + beta))
    }

    pub fn a3(beta: f64) -> f64 {
        let (lo, hi) = a3_pieces(beta);
        if beta <= A3_BREAKPOINT {
            lo
        } else {
            hi
        }
    }

    /// `(2β/3)(1 ∓ 2(16β² - 3β - 1)/(3(1+β)^{3/2}))`.
    pub fn a4_pieces(beta: f64) -> (f64, f64) {
        let s = 2.0 * (16.0 * beta * beta - 3.0 * beta - 1.0) / (3.0 * (1.0 + beta).powf(1.5));
        (2.0 * beta / 3.0 * (1.0 - s), 2.0 * beta / 3.0 * (1.0 + s))
    }

    /// Positive root of `16β² - 3β - 1`, where the two `a₄` pieces meet.
    pub fn a4_breakpoint() -> f64 {
        (3.0 + 73f64.sqrt()) / 32.0
    }

    pub fn a4(beta: f64) -> f64 {
        let (lo, hi) = a4_pieces(beta);
        if beta < a4_breakpoint() {
            lo
        } else {
            hi
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::{order_coeffs, strong_coeffs, ClassSpec, MindaGenerator};
    use crate::series::DEFAULT_ORDER;
    use approx::assert_relative_eq;

    fn spec(text: &str) -> ClassSpec {
        text.parse().unwrap()
    }

    #[test]
    fn starlike_rho_zero_constants() {
        let b = st_bounds(&spec("st:lambda=0:order:rho=0")).unwrap();
        assert_relative_eq!(b.a2.value, 2f64.sqrt(), epsilon = 1e-14);
        assert_relative_eq!(b.a3.value, 2.0, epsilon = 1e-14);
        assert_relative_eq!(b.a4.value, 2.0 / 3.0 * (1.0 + 2.0 * 2f64.sqrt()), epsilon = 1e-14);
        assert_eq!(b.a2.branch, Branch::CaseA);
        assert_relative_eq!(b.a2.constants["A"], 3.5, epsilon = 1e-14);
        assert_relative_eq!(b.a2.constants["C"], 0.5, epsilon = 1e-14);
        let [one, two] = b.a4.routes.unwrap();
        assert_relative_eq!(one, 2.0 / 3.0 * (1.0 + 2.0 * 2f64.sqrt()), epsilon = 1e-14);
        assert_relative_eq!(two, 10.0 / 9.0 + 4.0 * 2f64.sqrt() / 3.0, epsilon = 1e-14);
        assert_eq!(b.a4.attained_by(), Route::RouteOne);
    }

    #[test]
    fn junction_at_rho_half() {
        let b = st_bounds(&spec("st:lambda=0:order:rho=1/2")).unwrap();
        assert_relative_eq!(b.a2.value, 1.0, epsilon = 1e-14);
        assert_relative_eq!(b.a3.value, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn order_rho_chain() {
        for i in 0..50 {
            let rho = 0.99 * i as f64 / 49.0;
            let s = ClassSpec::st(Real::Float(0.0), order_coeffs(Real::Float(rho), 3).unwrap()).unwrap();
            let b = st_bounds(&s).unwrap();
            assert_relative_eq!(b.a2.value, order_rho::a2(rho), epsilon = 1e-12);
            assert_relative_eq!(b.a3.value, order_rho::a3(rho), epsilon = 1e-12);
            assert_relative_eq!(b.a4.value, order_rho::a4(rho), epsilon = 1e-12);
        }
    }

    #[test]
    fn strong_beta_chain() {
        for i in 1..=60 {
            let beta = i as f64 / 60.0;
            let s = ClassSpec::st(Real::Float(0.0), strong_coeffs(Real::Float(beta), 3).unwrap()).unwrap();
            let b = st_bounds(&s).unwrap();
            assert_eq!(b.a2.branch, Branch::CaseA);
            assert_relative_eq!(b.a2.value, strong_beta::a2(beta), epsilon = 1e-12);
            assert_relative_eq!(b.a3.value, strong_beta::a3(beta), epsilon = 1e-12);
            assert_relative_eq!(b.a4.value, strong_beta::a4(beta), epsilon = 1e-12);
        }
    }

    #[test]
    fn strong_pieces_meet_at_breakpoints() {
        let (lo, hi) = strong_beta::a3_pieces(strong_beta::A3_BREAKPOINT);
        assert_relative_eq!(lo, hi, epsilon = 1e-12);
        let (lo, hi) = strong_beta::a4_pieces(strong_beta::a4_breakpoint());
        assert_relative_eq!(lo, hi, epsilon = 1e-12);
    }

    #[test]
    fn convex_corollary() {
        let b = m_bounds(&spec("m:lambda=1:order:rho=0")).unwrap();
        assert_relative_eq!(b.a2.value, 1.0, epsilon = 1e-14);
        assert_eq!(b.a2.branch, Branch::CaseB);
        let b = m_bounds(&spec("m:lambda=1:custom:b1=1,b2=0.3,b3=0.1")).unwrap();
        for x in [&b.a2, &b.a3, &b.a4] {
            assert!(x.value.is_finite() && x.value > 0.0);
        }
    }

    #[test]
    fn operators_agree_at_lambda_zero() {
        for g in ["order:rho=0", "order:rho=0.3", "strong:beta=0.6", "janowski:A=0.5,B=-0.5", "custom:b1=1,b2=0.3,b3=0.1"] {
            let s = st_bounds(&spec(&format!("st:lambda=0:{g}"))).unwrap();
            let m = m_bounds(&spec(&format!("m:lambda=0:{g}"))).unwrap();
            for n in 2..=4 {
                assert_relative_eq!(s.get(n).unwrap().value, m.get(n).unwrap().value, epsilon = 1e-12);
            }
            assert_relative_eq!(s.a4.constants["A"], m.a4.constants["A1"], epsilon = 1e-12);
            assert_relative_eq!(s.a4.constants["C"], m.a4.constants["C1"], epsilon = 1e-12);
        }
    }

    #[test]
    fn degenerate_generators_are_errors() {
        // D = B1² + B1 - B2 = 0.
        let g = MindaGenerator::custom(vec![Real::int(1), Real::int(2), Real::int(1)]).unwrap();
        let err = st_bounds(&ClassSpec::st(Real::int(0), g.clone()).unwrap()).unwrap_err();
        assert!(err.to_string().contains("bound formula degenerate for this generator"));
        assert!(m_bounds(&ClassSpec::m(Real::int(0), g).unwrap()).is_err());
        // 9B1² - 8(B2 - B1) = 0.
        let g = MindaGenerator::custom(vec![Real::int(8), Real::int(80), Real::int(1)]).unwrap();
        assert!(st_bounds(&ClassSpec::st(Real::int(0), g).unwrap()).is_err());
    }

    #[test]
    fn branch_continuity_at_equality_points() {
        // (1+2λ)²B1 = |(1+4λ)B1² + (B1-B2)(1+2λ)²| for order ρ = 1/2 at every λ.
        for l in [0.0, 0.5, 1.0, 2.0] {
            let k2: f64 = 1.0 + 2.0 * l;
            let b1 = 1.0;
            let b2 = b1 + ((1.0 + 4.0 * l) * b1 * b1 - k2 * k2 * b1) / (k2 * k2);
            let d = (1.0 + 4.0 * l) * b1 * b1 + (b1 - b2) * k2 * k2;
            assert_relative_eq!(d, k2 * k2 * b1, epsilon = 1e-12);
            let case_a = b1 * b1.sqrt() / d.sqrt();
            let case_b = b1 / k2;
            assert_relative_eq!(case_a, case_b, epsilon = 1e-12);
        }
    }

    #[test]
    fn a5_values() {
        let corollary = 13.0 / 6.0 + 2.0 * 2f64.sqrt() / 3.0;
        assert_relative_eq!(st_rho_a5(0.0, A5Variant::Stated).unwrap(), corollary, epsilon = 1e-14);
        assert_relative_eq!(st_rho_a5(0.0, A5Variant::Proof).unwrap(), corollary, epsilon = 1e-14);
        assert_relative_eq!(st_rho_a5(0.5, A5Variant::Proof).unwrap(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(st_rho_a5(0.25, A5Variant::Stated).unwrap(), 1.95612, epsilon = 1e-5);
        assert_relative_eq!(st_rho_a5(0.25, A5Variant::Proof).unwrap(), 1.92487, epsilon = 1e-5);
        assert!(st_rho_a5(0.6, A5Variant::Proof).is_err());

        let stated = (332.0 / 27.0 + 6f64.sqrt()) / 36.0;
        assert_relative_eq!(ss_beta_a5(0.5, A5Variant::Stated).unwrap(), stated, epsilon = 1e-14);
        assert_relative_eq!(ss_beta_a5(0.5, A5Variant::Stated).unwrap(), 0.409605, epsilon = 1e-6);
        assert_relative_eq!(ss_beta_a5(0.5, A5Variant::Rederived).unwrap(), 0.419893, epsilon = 1e-6);
        assert_relative_eq!(
            ss_beta_a5(1.0, A5Variant::Stated).unwrap(),
            (18.0 + 15.0 / 16.0 + 12.0 / 2f64.sqrt()) / 9.0,
            epsilon = 1e-14
        );
        assert!(ss_beta_a5(0.4, A5Variant::Stated).is_err());
    }

    #[test]
    fn a5_variant_ordering() {
        for i in 0..=50 {
            let beta = 0.5 + 0.5 * i as f64 / 50.0;
            assert!(ss_beta_a5(beta, A5Variant::Rederived).unwrap() >= ss_beta_a5(beta, A5Variant::Stated).unwrap());
            let rho = 0.5 * i as f64 / 50.0;
            assert!(st_rho_a5(rho, A5Variant::Proof).unwrap() <= baseline_starlike_an(rho, 5).unwrap());
        }
    }

    #[test]
    fn a5_dispatch() {
        let v = a5_bounds(&spec("st:lambda=0:order:rho=0")).unwrap();
        assert_eq!(v[0].0, A5Variant::Proof);
        assert_eq!(v.len(), 2);
        let v = a5_bounds(&spec("ss:beta=1/2")).unwrap();
        assert_eq!(v[0].0, A5Variant::Stated);
        assert!(a5_bounds(&spec("st:lambda=1:order:rho=0")).is_err());
        assert!(a5_bounds(&spec("m:lambda=0:order:rho=0")).is_err());
        assert!(a5_bounds(&spec("st:lambda=0:order:rho=0.75")).is_err());
    }

    #[test]
    fn baselines() {
        assert_relative_eq!(baseline_starlike_an(0.0, 5).unwrap(), 5.0, epsilon = 1e-14);
        assert_relative_eq!(baseline_starlike_an(0.5, 5).unwrap(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(baseline_starlike_an(0.0, 2).unwrap(), 2.0, epsilon = 1e-14);
        assert_relative_eq!(ali_singh_a5(1.0).unwrap().unwrap(), 5.0, epsilon = 1e-14);
        assert_relative_eq!(ali_singh_a5(0.5).unwrap().unwrap(), 33.0 / 72.0, epsilon = 1e-14);
        assert_relative_eq!(ali_singh_a5(0.01).unwrap().unwrap(), 0.005, epsilon = 1e-14);
    }

    #[test]
    fn lambda_sweep_is_monotone() {
        let mut last = f64::INFINITY;
        for i in 0..=40 {
            let l = 2.0 * i as f64 / 40.0;
            let s = ClassSpec::st(Real::Float(l), order_coeffs(Real::int(0), DEFAULT_ORDER).unwrap()).unwrap();
            let v = st_bounds(&s).unwrap().a2.value;
            assert!(v <= last + 1e-15);
            last = v;
        }
    }
}
