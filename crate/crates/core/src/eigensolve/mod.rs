//! Real Z-eigenpairs `S v^{m-1} = λ v`, `‖v‖ = 1`.
//!
//! Pairs are found by the tensor power iteration, polished (or found
//! outright, including saddles and minima) by Newton's method on the KKT
//! system, and for `n = 2` enumerated exhaustively by an angle scan. All
//! paths report pairs in a canonical sign convention so they can be
//! compared and deduplicated.

mod dedup;
mod enumerate;
mod multistart;
mod newton;
mod power;

pub use dedup::{dedup, line_angle, DEFAULT_ANGLE_TOL, DEFAULT_LAMBDA_TOL};
pub use enumerate::{enumerate_2d, Spectrum2d};
pub use multistart::{
    multi_start, multi_start_from, newton_seeded, sphere_grid, PairCount, SolveSummary,
};
pub use newton::newton_refine;
pub use power::{power_method, power_step, PowerOutcome, PowerResult, TAIL_LEN};

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::tensor::SymmetricTensor;

/// KKT residual a converged pair must meet.
pub const ACCEPT_TOL: f64 = 1e-10;
/// Displacement tolerance for the power iteration.
pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 5000;
/// `|λ|` at or below this marks a zero-eigenvalue pair.
pub const ZERO_LAMBDA_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Source {
    PowerMethod,
    Newton,
    AngleScan,
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub lambda: f64,
    pub v: DVector<f64>,
    /// `‖S v^{m-1} - λ v‖`.
    pub kkt_residual: f64,
    pub iterations: usize,
    pub source: Source,
}

impl Eigenpair {
    /// Evaluates `λ = S v^m` and the KKT residual at a unit vector and
    /// returns the pair in canonical sign.
    pub fn at(s: &SymmetricTensor, v: DVector<f64>, iterations: usize, source: Source) -> Result<Self> {
        let lambda = s.apply_m(&v)?;
        let kkt_residual = kkt_residual(s, &v, lambda)?;
        Ok(Self { lambda, v, kkt_residual, iterations, source }.canonical(s.order()))
    }

    /// Flips `(λ, v)` into the canonical representative of its class.
    ///
    /// For odd `m`, `(λ, v)` and `(-λ, -v)` are the same pair and the
    /// representative has `λ ≥ 0`. For even `m`, `(λ, v)` and `(λ, -v)` are
    /// the same and the representative has `Σ vᵢ > 0`, falling back to a
    /// positive first nonzero component when the sum vanishes.
    pub fn canonical(mut self, order: usize) -> Self {
        let flip = if order % 2 == 1 && self.lambda.abs() > ZERO_LAMBDA_TOL {
            self.lambda < 0.0
        } else {
            let sum: f64 = self.v.iter().sum();
            if sum.abs() > 1e-12 {
                sum < 0.0
            } else {
                self.v.iter().find(|x| x.abs() > 1e-12).is_some_and(|&x| x < 0.0)
            }
        };
        if flip {
            self.v.neg_mut();
            if order % 2 == 1 {
                self.lambda = -self.lambda;
            }
        }
        self
    }

    pub fn is_zero_eigenvalue(&self) -> bool {
        self.lambda.abs() <= ZERO_LAMBDA_TOL
    }
}

pub fn kkt_residual(s: &SymmetricTensor, v: &DVector<f64>, lambda: f64) -> Result<f64> {
    let mut g = s.apply_m1(v)?;
    g.axpy(-lambda, v, 1.0);
    Ok(g.norm())
}
