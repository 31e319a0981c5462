#![allow(dead_code)]

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use simplex_spectra::eigensolve::{
    dedup, enumerate_2d, multi_start, newton_seeded, sphere_grid, Eigenpair, ACCEPT_TOL,
    DEFAULT_ANGLE_TOL, DEFAULT_LAMBDA_TOL, DEFAULT_MAX_ITER, DEFAULT_TOL,
};
use simplex_spectra::frames::{odeco_tensor, simplex_tensor};
use simplex_spectra::tensor::{from_rank_one_sum, SymmetricTensor, Term};

pub fn random_unit(rng: &mut impl Rng, n: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_iterator(n, (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)));
        let norm = v.norm();
        if norm > 1e-6 {
            return v / norm;
        }
    }
}

/// Weighted rank-one sum with `r` random unit directions and weights in `[-1.5, 1.5]`.
pub fn random_factored(rng: &mut impl Rng, n: usize, r: usize, m: usize) -> SymmetricTensor {
    let terms = (0..r)
        .map(|_| {
            let w: f64 = rng.random_range(-1.5..1.5);
            Term::new(if w.abs() < 0.1 { 0.1 } else { w }, random_unit(rng, n))
        })
        .collect();
    from_rank_one_sum(terms, m).unwrap()
}

/// Every eigenpair the solvers can reach for `s`, deduplicated, and whether
/// they sample a continuum.
pub fn solve_all(s: &SymmetricTensor, starts: usize, seed: u64) -> (Vec<Eigenpair>, bool) {
    if s.dim() == 2 {
        if let Ok(spectrum) = enumerate_2d(s, 3600.max(8 * s.order())) {
            let continuum = spectrum.is_circle();
            return (spectrum.into_pairs(), continuum);
        }
    }
    let mut pairs = multi_start(s, starts, seed, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap().pairs;
    pairs.extend(newton_seeded(s, &sphere_grid(s.dim(), 400), ACCEPT_TOL, 100));
    (dedup(pairs, DEFAULT_ANGLE_TOL, DEFAULT_LAMBDA_TOL), false)
}

pub struct CorpusEntry {
    pub label: String,
    pub tensor: SymmetricTensor,
    pub pairs: Vec<Eigenpair>,
    /// Pairs are samples of a circle of eigenvectors, not isolated points.
    pub continuum: bool,
}

/// Simplex, odeco and random factored tensors with all their reachable
/// eigenpairs. Continuum cases contribute their grid samples.
pub fn corpus() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    let mut push = |label: String, tensor: SymmetricTensor, seed: u64| {
        let (pairs, continuum) = solve_all(&tensor, 200, seed);
        out.push(CorpusEntry { label, tensor, pairs, continuum });
    };
    for n in 2..=4 {
        for m in 3..=6 {
            push(format!("simplex({n},{m})"), simplex_tensor(n, m).unwrap(), 1);
            push(format!("odeco({n},{m})"), odeco_tensor(n, m).unwrap(), 2);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for k in 0..72 {
        let n = 2 + k % 3;
        let m = 3 + (k / 3) % 4;
        let r = rng.random_range(n..=n + 3);
        let t = random_factored(&mut rng, n, r, m);
        push(format!("random#{k}(n={n},m={m},r={r})"), t, 100 + k as u64);
    }
    out
}
