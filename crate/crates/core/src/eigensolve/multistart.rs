use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::dedup::cluster;
use super::{
    newton_refine, power_method, Eigenpair, PowerOutcome, Source, ACCEPT_TOL, DEFAULT_ANGLE_TOL,
    DEFAULT_LAMBDA_TOL,
};
use crate::error::{Error, Result};
use crate::tensor::SymmetricTensor;

/// Newton iterations allowed when polishing a power-iteration endpoint.
const POLISH_MAX_ITER: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct SolveSummary {
    /// Distinct canonical pairs, `λ` descending.
    pub pairs: Vec<Eigenpair>,
    /// `basin_counts[i]` is how many starts the power iteration carried to `pairs[i]`.
    pub basin_counts: Vec<usize>,
    /// Starts on which the power iteration did not converge.
    pub failures: usize,
    /// Failed starts that Newton could not turn into a pair either.
    pub unrecovered: usize,
}

impl SolveSummary {
    pub fn counts(&self) -> impl Iterator<Item = PairCount<'_>> {
        self.pairs.iter().zip(&self.basin_counts).map(|(pair, &count)| PairCount { pair, count })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PairCount<'a> {
    pub pair: &'a Eigenpair,
    pub count: usize,
}

/// Uniform direction on the unit sphere for start `index` under `seed`.
///
/// Each start draws from its own ChaCha stream, so the result does not
/// depend on how starts are scheduled across threads.
fn sphere_sample(seed: u64, index: u64, n: usize) -> DVector<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    loop {
        let v = DVector::from_iterator(n, (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)));
        let norm = v.norm();
        if norm > 1e-8 {
            return v / norm;
        }
    }
}

struct StartResult {
    pair: Option<Eigenpair>,
    converged: bool,
}

fn run_start(s: &SymmetricTensor, v0: &DVector<f64>, tol: f64, max_iter: usize) -> StartResult {
    let power = match power_method(s, v0, tol, max_iter) {
        Ok(res) => res,
        Err(_) => return StartResult { pair: None, converged: false },
    };
    match power.outcome {
        PowerOutcome::Converged(p) => {
            let refined = match newton_refine(s, &p.v, ACCEPT_TOL, POLISH_MAX_ITER) {
                Ok(mut r) if r.v.dot(&p.v).abs() > 1.0 - 1e-6 => {
                    r.source = Source::PowerMethod;
                    r.iterations = p.iterations;
                    Some(r)
                }
                _ => (p.kkt_residual <= ACCEPT_TOL).then_some(p),
            };
            StartResult { converged: refined.is_some(), pair: refined }
        }
        PowerOutcome::Cycling | PowerOutcome::MaxIter => StartResult {
            pair: newton_refine(s, power.last_iterate(), ACCEPT_TOL, POLISH_MAX_ITER).ok(),
            converged: false,
        },
    }
}

/// Power iteration from `starts` random directions, each limit (or last
/// iterate, when the iteration fails to settle) polished by Newton's method.
pub fn multi_start(
    s: &SymmetricTensor,
    starts: usize,
    seed: u64,
    tol: f64,
    max_iter: usize,
) -> Result<SolveSummary> {
    if starts == 0 {
        return Err(Error::InputDomain("need at least one start".into()));
    }
    let n = s.dim();
    let results: Vec<StartResult> = (0..starts as u64)
        .into_par_iter()
        .map(|i| run_start(s, &sphere_sample(seed, i, n), tol, max_iter))
        .collect();
    Ok(summarize(results))
}

/// Like [`multi_start`] but from caller-supplied start vectors.
pub fn multi_start_from(
    s: &SymmetricTensor,
    starts: &[DVector<f64>],
    tol: f64,
    max_iter: usize,
) -> Result<SolveSummary> {
    if starts.is_empty() {
        return Err(Error::InputDomain("need at least one start".into()));
    }
    let results: Vec<StartResult> =
        starts.par_iter().map(|v0| run_start(s, v0, tol, max_iter)).collect();
    Ok(summarize(results))
}

fn summarize(results: Vec<StartResult>) -> SolveSummary {
    let failures = results.iter().filter(|r| !r.converged).count();
    let unrecovered = results.iter().filter(|r| r.pair.is_none()).count();
    let (pairs, converged): (Vec<Eigenpair>, Vec<bool>) =
        results.into_iter().filter_map(|r| r.pair.map(|p| (p, r.converged))).unzip();

    let clusters = cluster(&pairs, DEFAULT_ANGLE_TOL, DEFAULT_LAMBDA_TOL);
    let basin_counts = clusters.iter().map(|(_, members)| members.iter().filter(|&&i| converged[i]).count()).collect();
    let reps: Vec<Eigenpair> = clusters.iter().map(|(rep, _)| pairs[*rep].clone()).collect();
    SolveSummary { pairs: reps, basin_counts, failures, unrecovered }
}

/// Newton's method from each seed; failed seeds are dropped and the
/// survivors deduplicated.
pub fn newton_seeded(
    s: &SymmetricTensor,
    seeds: &[DVector<f64>],
    tol: f64,
    max_iter: usize,
) -> Vec<Eigenpair> {
    let found: Vec<Eigenpair> = seeds
        .par_iter()
        .filter_map(|v0| newton_refine(s, v0, tol, max_iter).ok())
        .collect();
    super::dedup(found, DEFAULT_ANGLE_TOL, DEFAULT_LAMBDA_TOL)
}

/// Deterministic, roughly even covering of the unit sphere in `R^n`.
///
/// `n = 2` uses equally spaced angles and `n = 3` a Fibonacci spiral. Higher
/// dimensions push an additive-recurrence (Kronecker) sequence through the
/// Box-Muller transform, which is even only in the low-discrepancy sense.
pub fn sphere_grid(n: usize, count: usize) -> Vec<DVector<f64>> {
    match n {
        0 => Vec::new(),
        1 => (0..count).map(|k| DVector::from_element(1, if k % 2 == 0 { 1.0 } else { -1.0 })).collect(),
        2 => (0..count)
            .map(|k| {
                let t = std::f64::consts::TAU * (k as f64 + 0.5) / count as f64;
                DVector::from_vec(vec![t.cos(), t.sin()])
            })
            .collect(),
        3 => {
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|k| {
                    let z = 1.0 - 2.0 * (k as f64 + 0.5) / count as f64;
                    let r = (1.0 - z * z).sqrt();
                    let phi = golden * k as f64;
                    DVector::from_vec(vec![r * phi.cos(), r * phi.sin(), z])
                })
                .collect()
        }
        _ => {
            let dims = n + n % 2;
            let alpha = kronecker_alphas(dims);
            (0..count)
                .map(|k| {
                    let u: Vec<f64> =
                        alpha.iter().map(|a| (0.5 + a * (k as f64 + 1.0)).fract()).collect();
                    let mut g = Vec::with_capacity(dims);
                    for pair in u.chunks(2) {
                        let r = (-2.0 * (1.0 - pair[0]).ln()).sqrt();
                        let t = std::f64::consts::TAU * pair[1];
                        g.push(r * t.cos());
                        g.push(r * t.sin());
                    }
                    let v = DVector::from_iterator(n, g.into_iter().take(n));
                    let norm = v.norm();
                    if norm > 1e-12 { v / norm } else { DVector::from_element(n, 1.0 / (n as f64).sqrt()) }
                })
                .collect()
        }
    }
}

/// `α_j = φ_d^{-j}` where `φ_d` is the positive root of `x^{d+1} = x + 1`.
fn kronecker_alphas(d: usize) -> Vec<f64> {
    let mut phi = 2.0f64;
    for _ in 0..64 {
        phi = (1.0 + phi).powf(1.0 / (d as f64 + 1.0));
    }
    (1..=d).map(|j| phi.powi(-(j as i32))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolve::{line_angle, DEFAULT_MAX_ITER, DEFAULT_TOL};
    use crate::frames::{regular_simplex_frame, simplex_tensor};
    use crate::tensor::{from_rank_one_sum, Term};

    #[test]
    fn samples_are_unit_and_reproducible() {
        for i in 0..20 {
            let a = sphere_sample(42, i, 4);
            assert!((a.norm() - 1.0).abs() < 1e-15);
            assert_eq!(a, sphere_sample(42, i, 4));
        }
        assert_ne!(sphere_sample(42, 0, 3), sphere_sample(42, 1, 3));
        assert_ne!(sphere_sample(42, 0, 3), sphere_sample(43, 0, 3));
    }

    #[test]
    fn grids_are_unit() {
        for n in 1..=6 {
            let g = sphere_grid(n, 257);
            assert_eq!(g.len(), 257);
            assert!(g.iter().all(|v| v.len() == n && (v.norm() - 1.0).abs() < 1e-12));
        }
    }

    #[test]
    fn kronecker_constant_for_plane_is_golden_ratio() {
        let a = kronecker_alphas(1);
        assert!((1.0 / a[0] - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn simplex_quartic_basins_cover_frame() {
        let s = simplex_tensor(3, 4).unwrap();
        let sum = multi_start(&s, 500, 42, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        let frame = regular_simplex_frame(3).unwrap();
        for w in frame.columns() {
            let hit = sum.counts().find(|c| line_angle(&c.pair.v, &w) < 1e-8);
            let c = hit.unwrap_or_else(|| panic!("frame vector {w} not found"));
            assert!(c.count > 0);
            assert!((c.pair.lambda - 28.0 / 27.0).abs() < 1e-10);
        }
        assert!(sum.pairs.iter().all(|p| p.kkt_residual <= ACCEPT_TOL));
    }

    #[test]
    fn simplex_cubic_plane_repels_but_newton_recovers() {
        let s = simplex_tensor(2, 3).unwrap();
        let sum = multi_start(&s, 200, 7, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert!(sum.failures > 150, "failures {}", sum.failures);
        let frame = regular_simplex_frame(2).unwrap();
        for w in frame.columns() {
            assert!(sum.pairs.iter().any(|p| line_angle(&p.v, &w) < 1e-8));
        }
    }

    #[test]
    fn single_exact_start() {
        let s = simplex_tensor(3, 4).unwrap();
        let w = regular_simplex_frame(3).unwrap().vector(0);
        let sum = multi_start_from(&s, std::slice::from_ref(&w), DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert_eq!(sum.pairs.len(), 1);
        assert_eq!(sum.basin_counts, vec![1]);
        assert!(line_angle(&sum.pairs[0].v, &w) < 1e-12);
    }

    #[test]
    fn deterministic_across_runs() {
        let s = from_rank_one_sum(
            vec![
                Term::new(1.0, DVector::from_vec(vec![0.6, 0.8, 0.0])),
                Term::new(0.7, DVector::from_vec(vec![0.0, 0.6, 0.8])),
                Term::new(-0.4, DVector::from_vec(vec![0.8, 0.0, 0.6])),
            ],
            4,
        )
        .unwrap();
        let a = multi_start(&s, 64, 9, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        let b = multi_start(&s, 64, 9, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert_eq!(a, b);
        assert!(multi_start(&s, 0, 9, DEFAULT_TOL, DEFAULT_MAX_ITER).is_err());
    }
}
