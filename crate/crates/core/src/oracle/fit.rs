//! Recovering an atomic measure from its first trigonometric moments.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::caratheodory::{Atom, AtomicMeasure, CaratheodoryTuple};
use crate::error::{Error, Result};

const ADMISSIBLE_TOL: f64 = 1e-8;
const SINGULAR_TOL: f64 = 1e-10;
const MAX_RESIDUAL: f64 = 1e-8;

/// A measure with at most `len + 1` atoms whose moments reproduce `p`.
///
/// Runs the Levinson recursion on `c_n = p_n / 2`. If the Toeplitz matrix
/// degenerates at order `k`, the measure has `k` atoms and is unique;
/// otherwise the sequence is extended by one moment with a unimodular
/// reflection coefficient. Atoms are the roots of the resulting
/// recurrence, weights come from a Vandermonde least-squares solve and
/// a few Gauss-Newton steps polish the whole fit.
pub fn fit_atoms(p: &CaratheodoryTuple, max_atoms: usize) -> Result<AtomicMeasure> {
    let min_eigenvalue = p.min_eigenvalue();
    if min_eigenvalue < -ADMISSIBLE_TOL {
        return Err(Error::NotAdmissible { min_eigenvalue });
    }
    let m = p.len();
    let mut c: Vec<Complex64> = std::iter::once(Complex64::new(1.0, 0.0))
        .chain(p.entries().iter().map(|x| x / 2.0))
        .collect();

    let (count, predictor) = levinson(&mut c, m);
    if count > max_atoms {
        return Err(Error::Parameter(format!(
            "tuple needs {count} atoms but max_atoms is {max_atoms}"
        )));
    }
    let nodes = unit_roots(&predictor);
    let weights = vandermonde_weights(&nodes, &c[..=m]);
    let mut angles: Vec<f64> = nodes.iter().map(|z| (-z.arg()).rem_euclid(TAU)).collect();
    let mut weights: Vec<f64> = weights.iter().map(|w| w.max(0.0)).collect();
    polish(&mut angles, &mut weights, p.entries());

    let mu = AtomicMeasure::from_parts(&angles, &weights)?;
    let residual = fit_residual(p, &mu);
    if residual > MAX_RESIDUAL {
        return Err(Error::InvalidMeasure(format!("moment fit residual {residual:.3e}")));
    }
    Ok(mu)
}

/// Largest moment mismatch `max |p_n - μ̂_n|`.
pub fn fit_residual(p: &CaratheodoryTuple, mu: &AtomicMeasure) -> f64 {
    mu.moments(p.len())
        .iter()
        .zip(p.entries())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}

/// Returns the atom count and the monic recurrence `x^k + b_{k-1} x^{k-1} + ... + b_0`
/// (coefficients low to high, leading one included). May append `c_{m+1}`.
fn levinson(c: &mut Vec<Complex64>, m: usize) -> (usize, Vec<Complex64>) {
    let mut a = vec![Complex64::new(1.0, 0.0)];
    let mut err = c[0].re;
    for k in 1..=m + 1 {
        if k == m + 1 {
            // Extend with a unimodular reflection coefficient κ = 1.
            let tail: Complex64 = (1..k).map(|j| a[j] * c[k - j]).sum();
            c.push(-err - tail);
        }
        let delta: Complex64 = (0..k).map(|j| a[j] * c[k - j]).sum();
        let kappa = -delta / err;
        let mut next = a.clone();
        next.push(Complex64::new(0.0, 0.0));
        for j in 1..=k {
            next[j] = a.get(j).copied().unwrap_or_default() + kappa * a[k - j].conj();
        }
        a = next;
        err *= 1.0 - kappa.norm_sqr();
        if err <= SINGULAR_TOL || k == m + 1 {
            return (k, recurrence(c, k));
        }
    }
    unreachable!("loop returns at k = m + 1")
}

/// Solves `Σ_{j<k} b_j c_{n+j} = -c_{n+k}` for `n = 1-k..=0`, with `c_{-n} = conj(c_n)`.
fn recurrence(c: &[Complex64], k: usize) -> Vec<Complex64> {
    let at = |i: isize| -> Complex64 {
        if i >= 0 {
            c[i as usize]
        } else {
            c[(-i) as usize].conj()
        }
    };
    let ki = k as isize;
    let h = DMatrix::from_fn(k, k, |r, j| at(r as isize - (ki - 1) + j as isize));
    let rhs = DVector::from_fn(k, |r, _| -at(r as isize + 1));
    let b = h
        .clone()
        .lu()
        .solve(&rhs)
        .unwrap_or_else(|| h.svd(true, true).solve(&rhs, 1e-14).expect("svd solve"));
    b.iter().copied().chain(std::iter::once(Complex64::new(1.0, 0.0))).collect()
}

/// Aberth iteration for the roots of a monic polynomial, projected to the circle.
fn unit_roots(poly: &[Complex64]) -> Vec<Complex64> {
    let deg = poly.len() - 1;
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut v = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for coeff in poly.iter().rev() {
            d = d * z + v;
            v = v * z + coeff;
        }
        (v, d)
    };
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::from_polar(1.0, TAU * (k as f64 + 0.25) / deg as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let (v, d) = eval(z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / d;
            let repulsion: Complex64 = (0..deg)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            z[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 {
            break;
        }
    }
    z.into_iter().map(|r| r / r.norm()).collect()
}

fn vandermonde_weights(nodes: &[Complex64], c: &[Complex64]) -> Vec<f64> {
    let v = DMatrix::from_fn(c.len(), nodes.len(), |n, k| nodes[k].powu(n as u32));
    let rhs = DVector::from_column_slice(c);
    let w = v.svd(true, true).solve(&rhs, 1e-14).expect("svd solve");
    w.iter().map(|x| x.re).collect()
}

/// Gauss-Newton on angles and weights against the complex moment equations.
fn polish(angles: &mut [f64], weights: &mut [f64], p: &[Complex64]) {
    let k = angles.len();
    let m = p.len();
    for _ in 0..20 {
        let atoms: Vec<Atom> = angles
            .iter()
            .zip(weights.iter())
            .map(|(&angle, &weight)| Atom { angle, weight })
            .collect();
        let fitted = crate::caratheodory::moments(&atoms, m);
        let total: f64 = weights.iter().sum();
        // Rows: re/im of each moment, then the mass constraint.
        let rows = 2 * m + 1;
        let mut jac = DMatrix::<f64>::zeros(rows, 2 * k);
        let mut res = DVector::<f64>::zeros(rows);
        for n in 1..=m {
            let d = fitted[n - 1] - p[n - 1];
            res[2 * n - 2] = d.re;
            res[2 * n - 1] = d.im;
            for j in 0..k {
                let e = Complex64::from_polar(2.0, -(n as f64) * angles[j]);
                let dw = e;
                let dt = e * Complex64::new(0.0, -(n as f64)) * weights[j];
                jac[(2 * n - 2, j)] = dt.re;
                jac[(2 * n - 1, j)] = dt.im;
                jac[(2 * n - 2, k + j)] = dw.re;
                jac[(2 * n - 1, k + j)] = dw.im;
            }
        }
        res[2 * m] = total - 1.0;
        for j in 0..k {
            jac[(2 * m, k + j)] = 1.0;
        }
        if res.amax() < 1e-15 {
            break;
        }
        let Ok(step) = jac.svd(true, true).solve(&res, 1e-12) else {
            break;
        };
        for j in 0..k {
            angles[j] -= step[j];
            weights[j] = (weights[j] - step[k + j]).max(0.0);
        }
    }
    for a in angles.iter_mut() {
        *a = a.rem_euclid(TAU);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caratheodory::{sample, sample_real, DEFAULT_MAX_ATOMS};
    use std::f64::consts::PI;

    fn dist(a: f64, b: f64) -> f64 {
        let d = (a - b).rem_euclid(TAU);
        d.min(TAU - d)
    }

    #[test]
    fn single_atom() {
        let mu = fit_atoms(&CaratheodoryTuple::real(&[2.0, 2.0, 2.0]).unwrap(), 4).unwrap();
        assert_eq!(mu.atoms().len(), 1);
        assert!(dist(mu.atoms()[0].angle, 0.0) < 1e-12);
        assert!((mu.atoms()[0].weight - 1.0).abs() < 1e-12);
    }

    #[test]
    fn antipodal_pair() {
        let mu = fit_atoms(&CaratheodoryTuple::real(&[0.0, 2.0, 0.0]).unwrap(), 4).unwrap();
        assert_eq!(mu.atoms().len(), 2);
        let mut angles: Vec<f64> = mu.atoms().iter().map(|a| a.angle).collect();
        angles.sort_by(f64::total_cmp);
        assert!(dist(angles[0], 0.0) < 1e-12 && dist(angles[1], PI) < 1e-12);
        for a in mu.atoms() {
            assert!((a.weight - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn interior_points_fit() {
        for seed in 0..200u64 {
            let p = if seed % 2 == 0 {
                sample(seed, 4, DEFAULT_MAX_ATOMS).scale(0.9)
            } else {
                sample_real(seed, 3, DEFAULT_MAX_ATOMS).scale(0.7)
            };
            let mu = fit_atoms(&p, p.len() + 1).unwrap();
            assert!(mu.atoms().len() <= p.len() + 1);
            assert!(fit_residual(&p, &mu) < 1e-8, "seed {seed}");
        }
    }

    #[test]
    fn boundary_points_fit() {
        for seed in 0..100u64 {
            let p = sample(seed, 4, 3);
            let mu = fit_atoms(&p, 5).unwrap();
            assert!(fit_residual(&p, &mu) < 1e-8, "seed {seed}");
        }
    }

    #[test]
    fn zero_tuple_is_uniform() {
        let mu = fit_atoms(&CaratheodoryTuple::zero(3), 4).unwrap();
        assert_eq!(mu.atoms().len(), 4);
        for a in mu.atoms() {
            assert!((a.weight - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_outside_points() {
        let p = CaratheodoryTuple::real(&[2.1, 0.0]).unwrap();
        assert!(matches!(fit_atoms(&p, 3), Err(Error::NotAdmissible { .. })));
        let p = CaratheodoryTuple::real(&[0.0, 2.0, 0.0]).unwrap();
        assert!(fit_atoms(&p, 1).is_err());
    }
}
