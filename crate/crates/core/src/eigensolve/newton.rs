use nalgebra::{DMatrix, DVector};

use super::{kkt_residual, Eigenpair, Source};
use crate::error::{Error, Result};
use crate::tensor::SymmetricTensor;

/// Newton's method on the bordered KKT system
///
/// ```text
/// F(v, λ) = [ S v^{m-1} - λ v ;  (1 - vᵀv) / 2 ] = 0
/// ```
///
/// After every step `v` is renormalized and `λ` reset to `S v^m`. Unlike
/// the power iteration this converges to saddles and minima as readily as
/// to maxima, so it is also used to polish non-attracting limits.
///
/// Once the residual is within `tol`, steps continue while each one at
/// least halves the residual. Near a singular root convergence is only
/// linear, and stopping at `tol` would leave `v` far from the root.
pub fn newton_refine(
    s: &SymmetricTensor,
    v0: &DVector<f64>,
    tol: f64,
    max_iter: usize,
) -> Result<Eigenpair> {
    if !(tol > 0.0) {
        return Err(Error::InputDomain(format!("tolerance must be positive, got {tol}")));
    }
    if v0.len() != s.dim() {
        return Err(Error::DimensionMismatch { expected: s.dim(), got: v0.len() });
    }
    let norm = v0.norm();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::InputDomain("start vector must be nonzero and finite".into()));
    }

    let n = s.dim();
    let m = s.order() as f64;
    let mut v = v0 / norm;
    let mut lambda = s.apply_m(&v)?;
    let mut residual = kkt_residual(s, &v, lambda)?;

    // Residuals this small are round-off; further steps only shuffle bits.
    let noise = 16.0 * f64::EPSILON * s.scale().max(1.0);
    let mut accepted: Option<(DVector<f64>, f64, usize)> = None;
    for k in 0..=max_iter {
        if residual <= tol {
            match &accepted {
                Some((_, best, _)) if residual > 0.5 * best => break,
                _ => accepted = Some((v.clone(), residual, k)),
            }
            if residual <= noise {
                break;
            }
        }
        if k == max_iter {
            break;
        }

        let mut jac = DMatrix::zeros(n + 1, n + 1);
        let hess = s.apply_m2(&v)? * (m - 1.0) - DMatrix::identity(n, n) * lambda;
        jac.view_mut((0, 0), (n, n)).copy_from(&hess);
        for i in 0..n {
            jac[(i, n)] = -v[i];
            jac[(n, i)] = -v[i];
        }
        let mut rhs = DVector::zeros(n + 1);
        let mut g = s.apply_m1(&v)?;
        g.axpy(-lambda, &v, 1.0);
        rhs.rows_mut(0, n).copy_from(&(-g));
        rhs[n] = -(1.0 - v.norm_squared()) / 2.0;

        let Some(step) = jac.lu().solve(&rhs).filter(|d| d.iter().all(|x| x.is_finite())) else {
            if accepted.is_some() {
                break;
            }
            return Err(Error::RefineFailure { residual, iterations: k });
        };

        v += step.rows(0, n);
        let vn = v.norm();
        if !(vn > 0.0) || !vn.is_finite() {
            if accepted.is_some() {
                break;
            }
            return Err(Error::RefineFailure { residual, iterations: k + 1 });
        }
        v /= vn;
        lambda = s.apply_m(&v)?;
        residual = kkt_residual(s, &v, lambda)?;
    }
    match accepted {
        Some((v, _, k)) => Eigenpair::at(s, v, k, Source::Newton),
        None => Err(Error::RefineFailure { residual, iterations: max_iter }),
    }
}
