//! The coefficient body of the Carathéodory class.
//!
//! A tuple `(p₁, …, p_m)` starts some `p` with `p(0) = 1` and `Re p > 0`
//! exactly when the Hermitian Toeplitz matrix built from `(2, p₁, …, p_m)`
//! is positive semidefinite. Admissible tuples are generated from the
//! Herglotz representation `p_n = 2 Σ w_k e^{-i n θ_k}`.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_ATOMS: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaratheodoryTuple {
    entries: Vec<Complex64>,
}

impl CaratheodoryTuple {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Empty);
        }
        Ok(CaratheodoryTuple { entries })
    }

    pub fn real(entries: &[f64]) -> Result<Self> {
        CaratheodoryTuple::new(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zero(m: usize) -> Self {
        CaratheodoryTuple {
            entries: vec![Complex64::new(0.0, 0.0); m.max(1)],
        }
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `p_n`, one-based.
    pub fn get(&self, n: usize) -> Complex64 {
        self.entries[n - 1]
    }

    pub fn scale(&self, t: f64) -> Self {
        CaratheodoryTuple {
            entries: self.entries.iter().map(|p| p * t).collect(),
        }
    }

    pub fn truncate(&self, m: usize) -> Self {
        CaratheodoryTuple {
            entries: self.entries[..m.min(self.len())].to_vec(),
        }
    }

    /// `T_{jk} = t_{j-k}` with `t_0 = 2`, `t_n = p_n`, `t_{-n} = conj(p_n)`.
    pub fn toeplitz(&self) -> DMatrix<Complex64> {
        let n = self.entries.len() + 1;
        DMatrix::from_fn(n, n, |j, k| {
            if j == k {
                Complex64::new(2.0, 0.0)
            } else if j > k {
                self.entries[j - k - 1]
            } else {
                self.entries[k - j - 1].conj()
            }
        })
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.toeplitz()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_admissible(&self, tol: f64) -> bool {
        self.min_eigenvalue() >= -tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub angle: f64,
    pub weight: f64,
}

/// A probability measure on the circle with finitely many atoms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomicMeasure {
    atoms: Vec<Atom>,
}

impl AtomicMeasure {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("no atoms".into()));
        }
        let mut total = 0.0;
        for a in &atoms {
            if !a.angle.is_finite() || !a.weight.is_finite() {
                return Err(Error::InvalidMeasure("non-finite atom".into()));
            }
            if a.weight < 0.0 {
                return Err(Error::InvalidMeasure(format!("negative weight {}", a.weight)));
            }
            total += a.weight;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidMeasure(format!("weights sum to {total}, not 1")));
        }
        let atoms = atoms
            .into_iter()
            .map(|a| Atom {
                angle: a.angle.rem_euclid(TAU),
                weight: a.weight,
            })
            .collect();
        Ok(AtomicMeasure { atoms })
    }

    /// Normalizes nonnegative weights before validating.
    pub fn from_parts(angles: &[f64], weights: &[f64]) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidMeasure("weights do not have positive mass".into()));
        }
        AtomicMeasure::new(
            angles
                .iter()
                .zip(weights)
                .map(|(&angle, &w)| Atom {
                    angle,
                    weight: w / total,
                })
                .collect(),
        )
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// `p_n = 2 Σ w_k e^{-i n θ_k}` for `n = 1..=m`.
    pub fn moments(&self, m: usize) -> Vec<Complex64> {
        moments(&self.atoms, m)
    }
}

pub(crate) fn moments(atoms: &[Atom], m: usize) -> Vec<Complex64> {
    (1..=m)
        .map(|n| {
            atoms.iter().fold(Complex64::new(0.0, 0.0), |acc, a| {
                acc + Complex64::from_polar(2.0 * a.weight, -(n as f64) * a.angle)
            })
        })
        .collect()
}

pub fn from_atoms(mu: &AtomicMeasure, m: usize) -> Result<CaratheodoryTuple> {
    if !(1..=4).contains(&m) {
        return Err(Error::Parameter(format!("tuple length must be in 1..=4 (got {m})")));
    }
    CaratheodoryTuple::new(mu.moments(m))
}

/// Random atomic measure: atom count uniform in `1..=max_atoms`, uniform
/// angles, Dirichlet(1, …, 1) weights. With `real_only`, atoms come in
/// conjugate pairs `±θ` so every moment is real.
pub fn sample_measure<R: Rng>(rng: &mut R, max_atoms: usize, real_only: bool) -> AtomicMeasure {
    let count = rng.random_range(1..=max_atoms.max(1));
    let mut angles = Vec::with_capacity(2 * count);
    let mut weights = Vec::with_capacity(2 * count);
    for _ in 0..count {
        let w: f64 = Exp1.sample(rng);
        let theta = rng.random_range(0.0..TAU);
        if real_only {
            angles.extend([theta, -theta]);
            weights.extend([w, w]);
        } else {
            angles.push(theta);
            weights.push(w);
        }
    }
    AtomicMeasure::from_parts(&angles, &weights).expect("exponential weights have positive mass")
}

pub fn sample(seed: u64, m: usize, max_atoms: usize) -> CaratheodoryTuple {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CaratheodoryTuple {
        entries: sample_measure(&mut rng, max_atoms, false).moments(m),
    }
}

pub fn sample_real(seed: u64, m: usize, max_atoms: usize) -> CaratheodoryTuple {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CaratheodoryTuple {
        entries: sample_measure(&mut rng, max_atoms, true).moments(m),
    }
}
