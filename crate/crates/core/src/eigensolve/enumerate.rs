use nalgebra::{dvector, DVector};

use super::{dedup, Eigenpair, Source};
use crate::error::{Error, Result};
use crate::tensor::SymmetricTensor;

const BISECT_TOL: f64 = 1e-14;

/// Eigenstructure of a bivariate symmetric tensor.
#[derive(Debug, Clone, PartialEq)]
pub enum Spectrum2d {
    /// Finitely many eigen-directions, each listed once in canonical sign.
    Isolated(Vec<Eigenpair>),
    /// Every unit vector is an eigenvector with the same `λ`, which happens
    /// when `S v^m` is a multiple of `‖v‖^m` (e.g. the quartic simplex tensor
    /// in the plane). `samples` are the grid directions.
    Circle { lambda: f64, samples: Vec<Eigenpair> },
}

impl Spectrum2d {
    pub fn pairs(&self) -> &[Eigenpair] {
        match self {
            Spectrum2d::Isolated(p) => p,
            Spectrum2d::Circle { samples, .. } => samples,
        }
    }

    pub fn into_pairs(self) -> Vec<Eigenpair> {
        match self {
            Spectrum2d::Isolated(p) => p,
            Spectrum2d::Circle { samples, .. } => samples,
        }
    }

    pub fn is_circle(&self) -> bool {
        matches!(self, Spectrum2d::Circle { .. })
    }
}

fn direction(theta: f64) -> DVector<f64> {
    dvector![theta.cos(), theta.sin()]
}

/// Tangential component `v⊥ᵀ S v^{m-1}` at angle `theta`; zero exactly at eigenvectors.
fn tangential(s: &SymmetricTensor, theta: f64) -> Result<(f64, f64)> {
    let v = direction(theta);
    let g = s.apply_m1(&v)?;
    Ok((-theta.sin() * g[0] + theta.cos() * g[1], g.norm()))
}

/// Every real eigenpair of a bivariate tensor, found by scanning the
/// tangential residual over `θ ∈ [0, π)` and bisecting each sign change.
///
/// The tangential residual is a trigonometric polynomial of degree `m`, so
/// a grid of at least `8m` points (and never fewer than 360) separates its
/// roots.
pub fn enumerate_2d(s: &SymmetricTensor, grid: usize) -> Result<Spectrum2d> {
    if s.dim() != 2 {
        return Err(Error::InputDomain(format!("angle scan needs n = 2, got n = {}", s.dim())));
    }
    let m = s.order();
    if grid < 360 || grid < 8 * m {
        return Err(Error::InputDomain(format!(
            "grid must be at least max(360, 8m) = {}, got {grid}",
            360.max(8 * m)
        )));
    }

    let step = std::f64::consts::PI / grid as f64;
    let mut values = Vec::with_capacity(grid + 1);
    let mut gscale = 0.0f64;
    for k in 0..grid {
        let (g, full) = tangential(s, k as f64 * step)?;
        gscale = gscale.max(full);
        values.push(g);
    }
    // v(θ + π) = -v(θ), so g(π) = (-1)^m g(0).
    values.push(if m.is_multiple_of(2) { values[0] } else { -values[0] });

    if !(gscale > 1e-13 * s.scale().max(f64::MIN_POSITIVE)) {
        return Err(Error::ZeroTensor);
    }
    let zero_tol = 1e-13 * gscale;

    if values.iter().all(|g| g.abs() <= zero_tol) {
        let samples = (0..grid)
            .map(|k| Eigenpair::at(s, direction(k as f64 * step), 0, Source::AngleScan))
            .collect::<Result<Vec<_>>>()?;
        let lambda = samples.iter().map(|p| p.lambda).sum::<f64>() / samples.len() as f64;
        return Ok(Spectrum2d::Circle { lambda, samples });
    }

    let mut pairs = Vec::new();
    for k in 0..grid {
        let (a, b) = (values[k], values[k + 1]);
        let theta = k as f64 * step;
        if a.abs() <= zero_tol {
            pairs.push(Eigenpair::at(s, direction(theta), 0, Source::AngleScan)?);
        } else if b.abs() > zero_tol && a.signum() != b.signum() {
            let (root, iters) = bisect(s, theta, theta + step, a)?;
            pairs.push(Eigenpair::at(s, direction(root), iters, Source::AngleScan)?);
        }
    }
    Ok(Spectrum2d::Isolated(dedup(pairs, 1e-8, 1e-8)))
}

fn bisect(s: &SymmetricTensor, mut lo: f64, mut hi: f64, g_lo: f64) -> Result<(f64, usize)> {
    let lo_sign = g_lo.signum();
    let mut iters = 0;
    while hi - lo > BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (g, _) = tangential(s, mid)?;
        if g == 0.0 {
            return Ok((mid, iters));
        }
        if g.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
        iters += 1;
    }
    Ok((0.5 * (lo + hi), iters))
}
