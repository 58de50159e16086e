//! Numerical maximization of `|a_n|` over admissible coefficient systems.
//!
//! The `f` side is parametrized by an atomic measure whose moments give
//! `p`; the coefficients and the inverse-side tuple `q` then follow from
//! the class equations, and the point counts as feasible when `q` passes
//! the Toeplitz test. This relaxed set contains every coefficient system
//! of the class, so the closed-form bounds must dominate its supremum.

mod fit;
mod search;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, A5Variant};
use crate::caratheodory::{CaratheodoryTuple, DEFAULT_MAX_ATOMS};
use crate::classes::{order_coeffs, strong_coeffs, ClassSpec, System};
use crate::error::{Error, Result};
use crate::number::Real;
use crate::series::DEFAULT_ORDER;

pub use fit::{fit_atoms, fit_residual};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub seed: u64,
    pub samples: usize,
    pub local_refine_steps: usize,
    pub tol_feasible: f64,
    pub tol_violation: f64,
    /// Sample only conjugate-symmetric measures. Otherwise every fourth
    /// sample is still real.
    pub restrict_real: bool,
    /// Refined starts per block of samples.
    pub starts: usize,
    pub max_atoms: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            seed: 0,
            samples: 10_000,
            local_refine_steps: 10,
            tol_feasible: 1e-7,
            tol_violation: 1e-8,
            restrict_real: false,
            starts: 3,
            max_atoms: DEFAULT_MAX_ATOMS,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::Parameter("samples must be at least 1".into()));
        }
        if !(self.tol_feasible >= 0.0 && self.tol_violation >= 0.0) {
            return Err(Error::Parameter("tolerances must be nonnegative".into()));
        }
        if self.max_atoms == 0 {
            return Err(Error::Parameter("max_atoms must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    A2,
    A3,
    A4,
    A5,
}

impl Target {
    pub fn index(self) -> usize {
        match self {
            Target::A2 => 2,
            Target::A3 => 3,
            Target::A4 => 4,
            Target::A5 => 5,
        }
    }

    pub fn from_index(n: usize) -> Option<Self> {
        match n {
            2 => Some(Target::A2),
            3 => Some(Target::A3),
            4 => Some(Target::A4),
            5 => Some(Target::A5),
            _ => None,
        }
    }

    /// Depth of the coefficient system searched for this target.
    pub fn depth(self) -> usize {
        (self.index() - 1).max(2)
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.index())
    }
}

impl FromStr for Target {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.strip_prefix('a')
            .and_then(|n| n.parse().ok())
            .and_then(Target::from_index)
            .ok_or_else(|| Error::Parse(format!("unknown target '{s}' (expected a2, a3, a4 or a5)")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum A5Family {
    StRho,
    SsBeta,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantCheck {
    pub variant: A5Variant,
    pub bound_value: f64,
    pub slack: f64,
    pub violated: bool,
    /// Whether the estimate is backed by a complete derivation.
    pub proven: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub target: Target,
    pub spec: String,
    pub best_value: f64,
    /// The proven estimate the search is checked against.
    pub bound_value: f64,
    pub slack: f64,
    pub violated: bool,
    pub witness: CaratheodoryTuple,
    pub implied_q: CaratheodoryTuple,
    pub coefficients: Vec<Complex64>,
    pub variants: Vec<VariantCheck>,
    pub feasible: usize,
    pub samples: usize,
}

fn is_proven(v: A5Variant) -> bool {
    matches!(v, A5Variant::Proof | A5Variant::Rederived)
}

/// Maximizes `|a_target|` over admissible systems of `spec`.
pub fn max_coeff(spec: &ClassSpec, target: Target, cfg: &SearchConfig) -> Result<OracleReport> {
    cfg.validate()?;
    let (bound_value, variants) = match target {
        Target::A5 => {
            let all = bounds::a5_bounds(spec)?;
            let proven = all
                .iter()
                .find(|(v, _)| is_proven(*v))
                .map(|&(_, b)| b)
                .expect("every a5 family has a proven variant");
            (proven, all)
        }
        t => (bounds::bounds(spec)?.get(t.index()).expect("a2..a4").value, Vec::new()),
    };
    let problem = search::Problem {
        system: System::new(spec, target.depth())?,
        target: target.index(),
        depth: target.depth(),
        tol_feasible: cfg.tol_feasible,
    };
    let outcome = search::run(&problem, cfg);
    let best = outcome.best.ok_or(Error::NoFeasiblePoint)?;
    let p = crate::caratheodory::moments(&best.atoms, problem.depth);
    let (a, q, _) = problem
        .evaluate_tuple(&p)
        .expect("the best point was evaluated during the search");
    let check = |bound: f64| (bound - best.value, best.value > bound + cfg.tol_violation);
    let (slack, violated) = check(bound_value);
    let variants = variants
        .into_iter()
        .map(|(variant, b)| {
            let (slack, violated) = check(b);
            VariantCheck { variant, bound_value: b, slack, violated, proven: is_proven(variant) }
        })
        .collect();
    Ok(OracleReport {
        target,
        spec: spec.to_string(),
        best_value: best.value,
        bound_value,
        slack,
        violated,
        witness: CaratheodoryTuple::new(p)?,
        implied_q: CaratheodoryTuple::new(q)?,
        coefficients: a,
        variants,
        feasible: outcome.feasible,
        samples: cfg.samples,
    })
}

/// The class whose order-4 system `check_a5_system` searches.
pub fn a5_spec(family: A5Family, param: f64) -> Result<ClassSpec> {
    let generator = match family {
        A5Family::StRho => {
            if !(0.0..=0.5).contains(&param) {
                return Err(Error::Parameter(format!("need 0 <= rho <= 1/2 (got {param})")));
            }
            order_coeffs(Real::Float(param), DEFAULT_ORDER)?
        }
        A5Family::SsBeta => {
            if !(0.5..=1.0).contains(&param) {
                return Err(Error::Parameter(format!("need 1/2 <= beta <= 1 (got {param})")));
            }
            strong_coeffs(Real::Float(param), DEFAULT_ORDER)?
        }
    };
    ClassSpec::st(Real::int(0), generator)
}

/// Maximizes `|a₅|` and compares the result with every variant of the estimate.
pub fn check_a5_system(family: A5Family, param: f64, cfg: &SearchConfig) -> Result<OracleReport> {
    max_coeff(&a5_spec(family, param)?, Target::A5, cfg)
}

/// Target value and smallest eigenvalue of the implied `q` for one tuple.
pub fn evaluate_tuple(spec: &ClassSpec, target: Target, p: &CaratheodoryTuple) -> Result<(f64, f64)> {
    let problem = search::Problem {
        system: System::new(spec, target.depth())?,
        target: target.index(),
        depth: target.depth(),
        tol_feasible: 0.0,
    };
    if p.len() < problem.depth {
        return Err(Error::OrderTooSmall { need: problem.depth, got: p.len() });
    }
    let (_, _, e) = problem
        .evaluate_tuple(&p.entries()[..problem.depth])
        .ok_or_else(|| Error::Degenerate("system could not be solved".into()))?;
    Ok((e.value, e.min_eigenvalue))
}
