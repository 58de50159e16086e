//! Multi-start sampling with local refinement over atomic measures.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::SearchConfig;
use crate::caratheodory::{moments, sample_measure, Atom, CaratheodoryTuple};
use crate::classes::System;

/// Samples are ranked and refined in blocks of this size.
pub(crate) const BLOCK: usize = 2048;

const GOLDEN_ITERS: usize = 6;
const PENALTY: f64 = 100.0;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

pub(crate) struct Problem {
    pub system: System<Complex64>,
    pub target: usize,
    pub depth: usize,
    pub tol_feasible: f64,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Eval {
    pub value: f64,
    pub min_eigenvalue: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct Candidate {
    pub value: f64,
    pub index: usize,
    pub atoms: Vec<Atom>,
}

#[derive(Debug, Clone)]
pub(crate) struct Outcome {
    pub best: Option<Candidate>,
    pub feasible: usize,
}

impl Problem {
    pub fn evaluate_tuple(&self, p: &[Complex64]) -> Option<(Vec<Complex64>, Vec<Complex64>, Eval)> {
        let a = self.system.solve(p).ok()?;
        let q = self.system.implied_q(&a).ok()?;
        let value = a.get(self.target)?.norm();
        let min_eigenvalue = CaratheodoryTuple::new(q.clone()).ok()?.min_eigenvalue();
        if !value.is_finite() || !min_eigenvalue.is_finite() {
            return None;
        }
        Some((a.as_slice().to_vec(), q, Eval { value, min_eigenvalue }))
    }

    pub fn evaluate(&self, atoms: &[Atom]) -> Option<Eval> {
        self.evaluate_tuple(&moments(atoms, self.depth)).map(|(_, _, e)| e)
    }

    fn feasible(&self, e: &Eval) -> bool {
        e.min_eigenvalue >= -self.tol_feasible
    }

    fn merit(&self, atoms: &[Atom]) -> f64 {
        match self.evaluate(atoms) {
            Some(e) => e.value - PENALTY * (-e.min_eigenvalue).max(0.0),
            None => f64::NEG_INFINITY,
        }
    }

    /// Refinement only moves to points whose implied tuple is admissible
    /// without tolerance.
    fn accept(&self, atoms: &[Atom], current: f64) -> Option<f64> {
        let e = self.evaluate(atoms)?;
        (e.min_eigenvalue >= 0.0 && e.value > current).then_some(e.value)
    }
}

fn sample_atoms(cfg: &SearchConfig, index: usize) -> Vec<Atom> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let real_only = cfg.restrict_real || index % 4 == 0;
    sample_measure(&mut rng, cfg.max_atoms, real_only).atoms().to_vec()
}

fn better(a: &Candidate, b: &Candidate) -> bool {
    a.value > b.value || (a.value == b.value && a.index < b.index)
}

pub(crate) fn run(problem: &Problem, cfg: &SearchConfig) -> Outcome {
    let blocks = cfg.samples.div_ceil(BLOCK);
    let results: Vec<Outcome> = (0..blocks)
        .into_par_iter()
        .map(|b| run_block(problem, cfg, b))
        .collect();
    results.into_iter().fold(Outcome { best: None, feasible: 0 }, |acc, o| Outcome {
        feasible: acc.feasible + o.feasible,
        best: match (acc.best, o.best) {
            (Some(x), Some(y)) => Some(if better(&y, &x) { y } else { x }),
            (x, y) => x.or(y),
        },
    })
}

/// Every index of the block is evaluated for ranking, so the refined starts
/// below `samples` only grow as `samples` does.
fn run_block(problem: &Problem, cfg: &SearchConfig, block: usize) -> Outcome {
    let lo = block * BLOCK;
    let mut ranked = Vec::new();
    let mut feasible = 0;
    let mut best: Option<Candidate> = None;
    for index in lo..lo + BLOCK {
        let atoms = sample_atoms(cfg, index);
        let Some(e) = problem.evaluate(&atoms) else { continue };
        if !problem.feasible(&e) {
            continue;
        }
        let c = Candidate { value: e.value, index, atoms };
        if index < cfg.samples {
            feasible += 1;
            if best.as_ref().is_none_or(|b| better(&c, b)) {
                best = Some(c.clone());
            }
        }
        ranked.push(c);
    }
    ranked.sort_by(|a, b| b.value.total_cmp(&a.value).then(a.index.cmp(&b.index)));
    for start in ranked.into_iter().take(cfg.starts).filter(|c| c.index < cfg.samples) {
        let refined = refine(problem, start, cfg.local_refine_steps);
        if best.as_ref().is_none_or(|b| better(&refined, b)) {
            best = Some(refined);
        }
    }
    Outcome { best, feasible }
}

/// Coordinate-wise golden section on the angles, then a projected-gradient
/// step on the weights, with shrinking radii.
pub(crate) fn refine(problem: &Problem, start: Candidate, steps: usize) -> Candidate {
    let mut cur = start;
    for s in 0..steps {
        let radius = 0.4 * 0.6f64.powi(s as i32);
        for i in 0..cur.atoms.len() {
            let theta = cur.atoms[i].angle;
            let mut trial = cur.atoms.clone();
            let mut f = |t: f64| {
                trial[i].angle = t;
                problem.merit(&trial)
            };
            let (mut a, mut b) = (theta - radius, theta + radius);
            let mut x1 = b - INV_PHI * (b - a);
            let mut x2 = a + INV_PHI * (b - a);
            let (mut f1, mut f2) = (f(x1), f(x2));
            for _ in 0..GOLDEN_ITERS {
                if f1 >= f2 {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - INV_PHI * (b - a);
                    f1 = f(x1);
                } else {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + INV_PHI * (b - a);
                    f2 = f(x2);
                }
            }
            let t = if f1 >= f2 { x1 } else { x2 };
            let mut next = cur.atoms.clone();
            next[i].angle = t;
            if let Some(v) = problem.accept(&next, cur.value) {
                cur.atoms = next;
                cur.value = v;
            }
        }
        if cur.atoms.len() > 1 {
            weight_step(problem, &mut cur, 0.2 * 0.6f64.powi(s as i32));
        }
    }
    for a in cur.atoms.iter_mut() {
        a.angle = a.angle.rem_euclid(std::f64::consts::TAU);
    }
    cur
}

fn weight_step(problem: &Problem, cur: &mut Candidate, mut eta: f64) {
    const H: f64 = 1e-6;
    let k = cur.atoms.len();
    let mut grad = vec![0.0; k];
    for (j, g) in grad.iter_mut().enumerate() {
        let mut plus = cur.atoms.clone();
        let mut minus = cur.atoms.clone();
        plus[j].weight += H;
        minus[j].weight -= H;
        *g = (problem.merit(&plus) - problem.merit(&minus)) / (2.0 * H);
    }
    if grad.iter().any(|g| !g.is_finite()) {
        return;
    }
    let mean = grad.iter().sum::<f64>() / k as f64;
    let norm = grad.iter().map(|g| (g - mean).powi(2)).sum::<f64>().sqrt();
    if norm == 0.0 {
        return;
    }
    for _ in 0..4 {
        let raw: Vec<f64> = cur
            .atoms
            .iter()
            .zip(&grad)
            .map(|(a, g)| a.weight + eta * (g - mean) / norm)
            .collect();
        let w = project_simplex(&raw);
        let next: Vec<Atom> = cur
            .atoms
            .iter()
            .zip(w)
            .map(|(a, weight)| Atom { angle: a.angle, weight })
            .collect();
        if let Some(v) = problem.accept(&next, cur.value) {
            cur.atoms = next;
            cur.value = v;
            return;
        }
        eta /= 2.0;
    }
}

/// Euclidean projection onto the probability simplex.
pub(crate) fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut shift = 0.0;
    for (i, x) in u.iter().enumerate() {
        cumulative += x;
        let t = (cumulative - 1.0) / (i + 1) as f64;
        if x - t > 0.0 {
            shift = t;
        }
    }
    v.iter().map(|x| (x - shift).max(0.0)).collect()
}
