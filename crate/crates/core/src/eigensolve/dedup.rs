use std::cmp::Ordering;

use nalgebra::DVector;

use super::Eigenpair;

pub const DEFAULT_ANGLE_TOL: f64 = 1e-6;
pub const DEFAULT_LAMBDA_TOL: f64 = 1e-8;

/// Angle between the lines spanned by two unit vectors, in `[0, π/2]`.
pub fn line_angle(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let chord = (a - b).norm().min((a + b).norm());
    2.0 * (chord / 2.0).min(1.0).asin()
}

/// Groups canonical pairs into clusters; returns, per cluster, the index of
/// its representative and the indices of all members.
pub(crate) fn cluster(pairs: &[Eigenpair], angle_tol: f64, lambda_tol: f64) -> Vec<(usize, Vec<usize>)> {
    let mut by_residual: Vec<usize> = (0..pairs.len()).collect();
    by_residual.sort_by(|&i, &j| {
        pairs[i].kkt_residual.total_cmp(&pairs[j].kkt_residual).then(i.cmp(&j))
    });

    let mut clusters: Vec<(usize, Vec<usize>)> = Vec::new();
    for i in by_residual {
        let p = &pairs[i];
        let hit = clusters.iter_mut().find(|(rep, _)| {
            let q = &pairs[*rep];
            (p.lambda - q.lambda).abs() <= lambda_tol && line_angle(&p.v, &q.v) <= angle_tol
        });
        match hit {
            Some((_, members)) => members.push(i),
            None => clusters.push((i, vec![i])),
        }
    }
    clusters.sort_by(|a, b| pair_order(&pairs[a.0], &pairs[b.0]));
    clusters
}

/// `λ` descending, then `v` lexicographically.
pub(crate) fn pair_order(a: &Eigenpair, b: &Eigenpair) -> Ordering {
    b.lambda.total_cmp(&a.lambda).then_with(|| {
        a.v.iter()
            .zip(b.v.iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}

/// Merges pairs that agree in `λ` and whose directions span nearly the same
/// line, keeping the member with the smallest KKT residual.
///
/// Inputs are expected in canonical sign, so two pairs on the same line with
/// the same `λ` are the same eigenpair regardless of the order's parity.
pub fn dedup(pairs: Vec<Eigenpair>, angle_tol: f64, lambda_tol: f64) -> Vec<Eigenpair> {
    let reps: Vec<usize> = cluster(&pairs, angle_tol, lambda_tol).into_iter().map(|(r, _)| r).collect();
    let mut slots: Vec<Option<Eigenpair>> = pairs.into_iter().map(Some).collect();
    reps.into_iter().map(|r| slots[r].take().expect("each representative used once")).collect()
}
