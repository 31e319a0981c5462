use std::collections::VecDeque;

use nalgebra::DVector;

use super::{Eigenpair, Source};
use crate::error::{Error, Result};
use crate::tensor::SymmetricTensor;

/// Number of trailing iterates kept in a [`PowerResult`].
pub const TAIL_LEN: usize = 8;

const DEGENERATE_NORM: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub enum PowerOutcome {
    Converged(Eigenpair),
    /// Iterates alternate between two points, e.g. `v ↔ -v` at a negative
    /// eigenvalue of an even-order tensor.
    Cycling,
    MaxIter,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerResult {
    pub outcome: PowerOutcome,
    /// Oldest first; the last entry is the final iterate.
    pub trajectory_tail: Vec<DVector<f64>>,
}

impl PowerResult {
    pub fn last_iterate(&self) -> &DVector<f64> {
        self.trajectory_tail.last().expect("tail always holds the start point")
    }
}

/// One step of the power map `v ↦ S v^{m-1} / ‖S v^{m-1}‖`.
pub fn power_step(s: &SymmetricTensor, v: &DVector<f64>) -> Result<DVector<f64>> {
    let mut y = s.apply_m1(v)?;
    let norm = y.norm();
    if !(norm > DEGENERATE_NORM) {
        return Err(Error::DegeneratePoint { norm });
    }
    y /= norm;
    Ok(y)
}

/// Iterates the power map from `v0` until the displacement drops below `tol`.
pub fn power_method(
    s: &SymmetricTensor,
    v0: &DVector<f64>,
    tol: f64,
    max_iter: usize,
) -> Result<PowerResult> {
    if !(tol > 0.0) {
        return Err(Error::InputDomain(format!("tolerance must be positive, got {tol}")));
    }
    if v0.len() != s.dim() {
        return Err(Error::DimensionMismatch { expected: s.dim(), got: v0.len() });
    }
    let norm = v0.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::InputDomain(format!("start vector must be unit, norm {norm}")));
    }

    let mut tail: VecDeque<DVector<f64>> = VecDeque::with_capacity(TAIL_LEN + 1);
    let mut prev: Option<DVector<f64>> = None;
    let mut v = v0.clone();
    tail.push_back(v.clone());

    for k in 0..max_iter {
        let next = power_step(s, &v)?;
        let moved = (&next - &v).norm();
        let cycled = prev.as_ref().is_some_and(|p| (&next - p).norm() <= tol);

        tail.push_back(next.clone());
        if tail.len() > TAIL_LEN {
            tail.pop_front();
        }

        if moved <= tol {
            let pair = Eigenpair::at(s, next, k, Source::PowerMethod)?;
            return Ok(PowerResult {
                outcome: PowerOutcome::Converged(pair),
                trajectory_tail: tail.into(),
            });
        }
        if cycled {
            return Ok(PowerResult { outcome: PowerOutcome::Cycling, trajectory_tail: tail.into() });
        }
        prev = Some(std::mem::replace(&mut v, next));
    }
    Ok(PowerResult { outcome: PowerOutcome::MaxIter, trajectory_tail: tail.into() })
}
