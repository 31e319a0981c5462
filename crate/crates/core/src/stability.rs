//! Second-order and fixed-point classification of Z-eigenpairs.
//!
//! For an eigenpair `(λ, v)` of an order-`m` tensor `S`:
//!
//! ```text
//! H = (m-1) S v^{m-2} - λ I                  Hessian of the Lagrangian
//! K = P H P,  P = I - v vᵀ                   projected Hessian
//! J = ((m-1)/λ) (S v^{m-2} - λ v vᵀ)         Jacobian of the power map
//! ```
//!
//! `K` decides the stationarity type on the tangent space of the sphere and
//! `ρ(J) < 1` decides whether `v` attracts the power iteration. Both
//! matrices annihilate `v`, and they are tied by `λ J = K + λ P`, so on the
//! tangent space their eigenvalues satisfy `λ σᴶ = σᴷ + λ`.

use nalgebra::{DMatrix, DVector};
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::eigensolve::Eigenpair;
use crate::error::{Error, Result};
use crate::linalg::{sym_eigen, SymEigen};
use crate::tensor::SymmetricTensor;

pub const LAMBDA_FLOOR: f64 = 1e-8;
pub const STATIONARITY_TOL: f64 = 1e-8;
pub const ROBUSTNESS_TOL: f64 = 1e-9;

/// Minimum `|⟨u, v⟩|` for an eigenvector `u` to count as the `v`-mode.
const V_MODE_OVERLAP: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stationarity {
    LocalMax,
    LocalMin,
    Saddle,
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Robustness {
    Robust,
    NotRobust,
    /// `ρ(J) = 1` within tolerance. Not robust under the strict criterion.
    Boundary,
    /// `|λ|` at or below the floor; the Jacobian is undefined.
    Undefined,
}

impl Robustness {
    pub fn is_robust(self) -> bool {
        self == Robustness::Robust
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityOptions {
    pub stationarity_tol: f64,
    pub robustness_tol: f64,
    pub lambda_floor: f64,
}

impl Default for StabilityOptions {
    fn default() -> Self {
        Self {
            stationarity_tol: STATIONARITY_TOL,
            robustness_tol: ROBUSTNESS_TOL,
            lambda_floor: LAMBDA_FLOOR,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub pair: Eigenpair,
    /// Eigenvalues of `K`, ascending.
    pub k_spectrum: Vec<f64>,
    /// Eigenvalues of `J`, ascending; `None` when `λ` is below the floor.
    pub j_spectrum: Option<Vec<f64>>,
    pub rho: Option<f64>,
    pub stationarity: Stationarity,
    pub robust: Robustness,
}

fn check_pair(s: &SymmetricTensor, pair: &Eigenpair) -> Result<()> {
    if pair.v.len() != s.dim() {
        return Err(Error::DimensionMismatch { expected: s.dim(), got: pair.v.len() });
    }
    Ok(())
}

fn tangent_projector(v: &DVector<f64>) -> DMatrix<f64> {
    let n = v.len();
    DMatrix::identity(n, n) - v * v.transpose()
}

fn symmetrize(a: DMatrix<f64>) -> DMatrix<f64> {
    (&a + a.transpose()) * 0.5
}

/// `(m-1) S v^{m-2} - λ I`.
pub fn hessian(s: &SymmetricTensor, pair: &Eigenpair) -> Result<DMatrix<f64>> {
    check_pair(s, pair)?;
    let n = s.dim();
    let m = s.order() as f64;
    Ok(s.apply_m2(&pair.v)? * (m - 1.0) - DMatrix::identity(n, n) * pair.lambda)
}

/// `(I - v vᵀ) H (I - v vᵀ)`.
pub fn projected_hessian(s: &SymmetricTensor, pair: &Eigenpair) -> Result<DMatrix<f64>> {
    let h = hessian(s, pair)?;
    let p = tangent_projector(&pair.v);
    Ok(symmetrize(&p * h * &p))
}

/// `((m-1)/λ) (S v^{m-2} - λ v vᵀ)`, defined only for `|λ| > lambda_floor`.
pub fn jacobian(s: &SymmetricTensor, pair: &Eigenpair, lambda_floor: f64) -> Result<DMatrix<f64>> {
    check_pair(s, pair)?;
    if !(pair.lambda.abs() > lambda_floor) {
        return Err(Error::LambdaBelowFloor { lambda: pair.lambda, floor: lambda_floor });
    }
    let m = s.order() as f64;
    let vvt = &pair.v * pair.v.transpose();
    let inner = s.apply_m2(&pair.v)? - vvt * pair.lambda;
    Ok(symmetrize(inner * ((m - 1.0) / pair.lambda)))
}

/// Drops the eigenvalue belonging to the `v` direction: the smallest `|σ|`
/// among eigenvectors overlapping `v` by more than 0.9. `None` if no
/// eigenvector qualifies.
fn tangent_values(eig: &SymEigen, v: &DVector<f64>) -> Option<Vec<f64>> {
    let n = eig.values.len();
    let drop = (0..n)
        .filter(|&k| eig.vectors.column(k).dot(v).abs() > V_MODE_OVERLAP)
        .min_by(|&a, &b| eig.values[a].abs().total_cmp(&eig.values[b].abs()))?;
    Some((0..n).filter(|&k| k != drop).map(|k| eig.values[k]).collect())
}

/// Stationarity type from the spectrum of `K`.
///
/// After discarding the `v`-mode, all remaining eigenvalues below `-tol`
/// is a local max, all above `tol` a local min, mixed signs a saddle, and
/// any value within `±tol` degenerate.
pub fn classify_stationarity(k: &SymEigen, pair: &Eigenpair, tol: f64) -> Stationarity {
    let Some(rest) = tangent_values(k, &pair.v) else {
        return Stationarity::Degenerate;
    };
    if rest.iter().any(|x| x.abs() <= tol) {
        Stationarity::Degenerate
    } else if rest.iter().all(|&x| x < -tol) {
        Stationarity::LocalMax
    } else if rest.iter().all(|&x| x > tol) {
        Stationarity::LocalMin
    } else {
        Stationarity::Saddle
    }
}

/// Robustness verdict from the spectrum of `J`.
pub fn classify_robustness(j_spectrum: &[f64], lambda: f64, tol: f64, lambda_floor: f64) -> Robustness {
    if !(lambda.abs() > lambda_floor) {
        return Robustness::Undefined;
    }
    let rho = spectral_radius(j_spectrum);
    if rho < 1.0 - tol {
        Robustness::Robust
    } else if rho > 1.0 + tol {
        Robustness::NotRobust
    } else {
        Robustness::Boundary
    }
}

pub fn spectral_radius(values: &[f64]) -> f64 {
    values.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

pub fn analyze(s: &SymmetricTensor, pair: &Eigenpair, opts: &StabilityOptions) -> Result<StabilityReport> {
    let k = sym_eigen(&projected_hessian(s, pair)?)?;
    let stationarity = classify_stationarity(&k, pair, opts.stationarity_tol);
    let (j_spectrum, rho, robust) = if pair.lambda.abs() > opts.lambda_floor {
        let j = sym_eigen(&jacobian(s, pair, opts.lambda_floor)?)?;
        let values: Vec<f64> = j.values.iter().copied().collect();
        let robust = classify_robustness(&values, pair.lambda, opts.robustness_tol, opts.lambda_floor);
        let rho = spectral_radius(&values);
        (Some(values), Some(rho), robust)
    } else {
        (None, None, Robustness::Undefined)
    };
    Ok(StabilityReport {
        pair: pair.clone(),
        k_spectrum: k.values.iter().copied().collect(),
        j_spectrum,
        rho,
        stationarity,
        robust,
    })
}

/// Frobenius norm of `λ J - K - λ (I - v vᵀ)`, which vanishes at every eigenpair.
pub fn lemma_bridge_residual(s: &SymmetricTensor, pair: &Eigenpair, lambda_floor: f64) -> Result<f64> {
    let j = jacobian(s, pair, lambda_floor)?;
    let k = projected_hessian(s, pair)?;
    let p = tangent_projector(&pair.v);
    Ok((j * pair.lambda - k - p * pair.lambda).norm())
}

/// Orthonormal basis of the complement of unit `v`, as the last `n-1`
/// columns of the Householder reflector sending `v` to `±e₁`.
fn tangent_basis(v: &DVector<f64>) -> DMatrix<f64> {
    let n = v.len();
    let mut u = v.clone();
    let sign = if v[0] >= 0.0 { 1.0 } else { -1.0 };
    u[0] += sign;
    let h = DMatrix::identity(n, n) - &u * u.transpose() * (2.0 / u.norm_squared());
    h.columns(1, n - 1).into_owned()
}

/// Largest mismatch in `λ σᴶ = σᴷ + λ` over the tangent-space eigenvalues.
///
/// Both matrices are restricted to the complement of `v`, where the
/// projector is the identity, and their sorted spectra compared. Sorting
/// `λ σᴶ` rather than `σᴶ` keeps the pairing right when `λ < 0`.
pub fn spectrum_relation_gap(s: &SymmetricTensor, pair: &Eigenpair, lambda_floor: f64) -> Result<f64> {
    let j = jacobian(s, pair, lambda_floor)?;
    let k = projected_hessian(s, pair)?;
    if s.dim() < 2 {
        return Ok(0.0);
    }
    let u = tangent_basis(&pair.v);
    let jt = sym_eigen(&symmetrize(u.transpose() * j * &u))?;
    let kt = sym_eigen(&symmetrize(u.transpose() * k * &u))?;
    let mut lhs: Vec<f64> = jt.values.iter().map(|x| pair.lambda * x).collect();
    let mut rhs: Vec<f64> = kt.values.iter().map(|x| x + pair.lambda).collect();
    lhs.sort_by(f64::total_cmp);
    rhs.sort_by(f64::total_cmp);
    Ok(lhs.iter().zip(&rhs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

pub type Rational = Ratio<i128>;

/// Exact predictions at a frame vector of the regular simplex tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormReport {
    pub n: usize,
    pub m: usize,
    /// `1 + n / (-n)^m`.
    pub lambda: Rational,
    /// The Jacobian eigenvalue of multiplicity `n-1`,
    /// `(n+1)(m-1) / (1 + (-n)^{m-2} n)`. `None` for `n = 1` or `λ = 0`.
    pub j_nonzero: Option<Rational>,
    /// `None` when `λ = 0`.
    pub rho: Option<Rational>,
    pub robust_predicted: bool,
    /// `n ≥ 2` and `m ≥ 3`.
    pub in_regime: bool,
}

impl ClosedFormReport {
    pub fn verdict(&self) -> Robustness {
        match &self.rho {
            None => Robustness::Undefined,
            Some(r) if *r < Rational::from_integer(1) => Robustness::Robust,
            Some(r) if *r == Rational::from_integer(1) => Robustness::Boundary,
            Some(_) => Robustness::NotRobust,
        }
    }

    pub fn lambda_f64(&self) -> f64 {
        to_f64(&self.lambda)
    }

    pub fn rho_f64(&self) -> Option<f64> {
        self.rho.as_ref().map(to_f64)
    }

    pub fn j_nonzero_f64(&self) -> Option<f64> {
        self.j_nonzero.as_ref().map(to_f64)
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().expect("i128 ratio converts to f64")
}

/// Exact `λ`, Jacobian spectrum and spectral radius at any frame vector of
/// the order-`m` regular simplex tensor on `R^n`.
pub fn frame_vector_prediction(n: usize, m: usize) -> ClosedFormReport {
    let ni = n as i128;
    let mi = m as i128;
    let neg_n = -ni;
    let lambda = Rational::from_integer(1) + Rational::new(ni, neg_n.pow(m as u32));

    let (j_nonzero, rho) = if lambda.is_zero() {
        (None, None)
    } else if n < 2 {
        (None, Some(Rational::zero()))
    } else {
        let denom = 1 + neg_n.pow(m as u32 - 2) * ni;
        let j = Rational::new((ni + 1) * (mi - 1), denom);
        let rho = j.abs();
        (Some(j), Some(rho))
    };
    let robust_predicted = rho.as_ref().is_some_and(|r| *r < Rational::from_integer(1));
    ClosedFormReport { n, m, lambda, j_nonzero, rho, robust_predicted, in_regime: n >= 2 && m >= 3 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolve::Source;
    use crate::frames::{odeco_tensor, regular_simplex_frame, simplex_tensor};
    use approx::assert_relative_eq;
    use nalgebra::dvector;

    fn exact(s: &SymmetricTensor, v: DVector<f64>) -> Eigenpair {
        Eigenpair::at(s, v, 0, Source::ClosedForm).unwrap()
    }

    fn assert_mat(a: &DMatrix<f64>, expect: &[f64], tol: f64) {
        let e = DMatrix::from_row_slice(a.nrows(), a.ncols(), expect);
        assert!((a - &e).amax() <= tol, "got {a}, expected {e}");
    }

    #[test]
    fn odeco_basis_vector_matrices() {
        let s = odeco_tensor(2, 3).unwrap();
        let p = exact(&s, dvector![1.0, 0.0]);
        assert_mat(&hessian(&s, &p).unwrap(), &[1.0, 0.0, 0.0, -1.0], 0.0);
        assert_mat(&projected_hessian(&s, &p).unwrap(), &[0.0, 0.0, 0.0, -1.0], 0.0);
        let j = jacobian(&s, &p, LAMBDA_FLOOR).unwrap();
        assert_mat(&j, &[0.0; 4], 0.0);
        let r = analyze(&s, &p, &StabilityOptions::default()).unwrap();
        assert_eq!(r.stationarity, Stationarity::LocalMax);
        assert_eq!(r.robust, Robustness::Robust);
        assert_eq!(r.rho, Some(0.0));
    }

    #[test]
    fn simplex_plane_cubic_matrices() {
        // S w₁ = diag(3/4, -3/4), so H = diag(3/4, -9/4), K = diag(0, -9/4)
        // and J = (8/3) diag(0, -3/4) = diag(0, -2).
        let s = simplex_tensor(2, 3).unwrap();
        let p = exact(&s, regular_simplex_frame(2).unwrap().vector(0));
        assert_mat(&hessian(&s, &p).unwrap(), &[0.75, 0.0, 0.0, -2.25], 1e-15);
        assert_mat(&projected_hessian(&s, &p).unwrap(), &[0.0, 0.0, 0.0, -2.25], 1e-15);
        assert_mat(&jacobian(&s, &p, LAMBDA_FLOOR).unwrap(), &[0.0, 0.0, 0.0, -2.0], 1e-14);
        let r = analyze(&s, &p, &StabilityOptions::default()).unwrap();
        assert_eq!(r.stationarity, Stationarity::LocalMax);
        assert_eq!(r.robust, Robustness::NotRobust);
        assert_relative_eq!(r.rho.unwrap(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn zero_lambda_hessian_is_defined() {
        let s = crate::tensor::from_rank_one_sum(
            vec![crate::tensor::Term::unit(dvector![1.0, 0.0])],
            3,
        )
        .unwrap();
        let p = exact(&s, dvector![0.0, 1.0]);
        assert_eq!(p.lambda, 0.0);
        assert_mat(&hessian(&s, &p).unwrap(), &[0.0; 4], 0.0);
        assert!(matches!(jacobian(&s, &p, LAMBDA_FLOOR), Err(Error::LambdaBelowFloor { .. })));
        let r = analyze(&s, &p, &StabilityOptions::default()).unwrap();
        assert_eq!(r.robust, Robustness::Undefined);
        assert_eq!(r.stationarity, Stationarity::Degenerate);
        assert!(r.j_spectrum.is_none());
    }

    #[test]
    fn simplex_tetra_quartic_jacobian() {
        let s = simplex_tensor(3, 4).unwrap();
        let p = exact(&s, regular_simplex_frame(3).unwrap().vector(0));
        let r = analyze(&s, &p, &StabilityOptions::default()).unwrap();
        let j = r.j_spectrum.unwrap();
        assert!(j[0].abs() < 1e-14);
        assert_relative_eq!(j[1], 3.0 / 7.0, epsilon = 1e-14);
        assert_relative_eq!(j[2], 3.0 / 7.0, epsilon = 1e-14);
        assert_eq!(r.robust, Robustness::Robust);
        // λσᴷ relation: σᴷ = λ(σᴶ - 1) = (28/27)(-4/7) = -16/27.
        assert_relative_eq!(r.k_spectrum[0], -16.0 / 27.0, epsilon = 1e-14);
        assert_relative_eq!(r.k_spectrum[1], -16.0 / 27.0, epsilon = 1e-14);
        assert_eq!(r.stationarity, Stationarity::LocalMax);
        assert!(lemma_bridge_residual(&s, &p, LAMBDA_FLOOR).unwrap() <= 1e-10);
    }

    #[test]
    fn odeco_diagonal_pair_is_local_min() {
        // S v = diag(v) = I/√2 so H = (2/√2 - 1/√2) I and K restricted is +1/√2.
        let s = odeco_tensor(2, 3).unwrap();
        let r2 = 0.5f64.sqrt();
        let p = exact(&s, dvector![r2, r2]);
        let r = analyze(&s, &p, &StabilityOptions::default()).unwrap();
        assert_relative_eq!(r.k_spectrum[1], r2, epsilon = 1e-15);
        assert_eq!(r.stationarity, Stationarity::LocalMin);
        assert_eq!(r.robust, Robustness::NotRobust);
        assert_relative_eq!(r.rho.unwrap(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn robustness_thresholds() {
        assert_eq!(classify_robustness(&[0.0, 3.0 / 7.0], 1.0, 1e-9, LAMBDA_FLOOR), Robustness::Robust);
        assert_eq!(classify_robustness(&[-1.0, 0.0], 1.0, 1e-9, LAMBDA_FLOOR), Robustness::Boundary);
        assert_eq!(classify_robustness(&[-2.0, 0.0], 1.0, 1e-9, LAMBDA_FLOOR), Robustness::NotRobust);
        assert_eq!(classify_robustness(&[0.0], 1e-9, 1e-9, LAMBDA_FLOOR), Robustness::Undefined);
    }

    #[test]
    fn stationarity_from_spectrum() {
        let pair = Eigenpair {
            lambda: 1.0,
            v: dvector![1.0, 0.0, 0.0],
            kkt_residual: 0.0,
            iterations: 0,
            source: Source::ClosedForm,
        };
        let eig = |d: [f64; 3]| SymEigen {
            values: DVector::from_row_slice(&d),
            vectors: DMatrix::identity(3, 3),
        };
        assert_eq!(classify_stationarity(&eig([0.0, -1.0, -2.0]), &pair, 1e-8), Stationarity::LocalMax);
        assert_eq!(classify_stationarity(&eig([0.0, 1.0, 2.0]), &pair, 1e-8), Stationarity::LocalMin);
        assert_eq!(classify_stationarity(&eig([0.0, -1.0, 2.0]), &pair, 1e-8), Stationarity::Saddle);
        assert_eq!(classify_stationarity(&eig([0.0, 1e-9, 2.0]), &pair, 1e-8), Stationarity::Degenerate);
        // v-mode missing from the eigenbasis
        let rotated = SymEigen {
            values: DVector::from_row_slice(&[0.0, 0.0, 1.0]),
            vectors: DMatrix::from_row_slice(3, 3, &[0.6, 0.8, 0.0, -0.8, 0.6, 0.0, 0.0, 0.0, 1.0]),
        };
        assert_eq!(classify_stationarity(&rotated, &pair, 1e-8), Stationarity::Degenerate);
    }

    #[test]
    fn closed_form_values() {
        let r = |a: i128, b: i128| Rational::new(a, b);
        let p = frame_vector_prediction(3, 4);
        assert_eq!(p.lambda, r(28, 27));
        assert_eq!(p.j_nonzero, Some(r(3, 7)));
        assert_eq!(p.rho, Some(r(3, 7)));
        assert!(p.robust_predicted);

        let p = frame_vector_prediction(2, 3);
        assert_eq!(p.lambda, r(3, 4));
        assert_eq!(p.j_nonzero, Some(r(-2, 1)));
        assert_eq!(p.rho, Some(r(2, 1)));
        assert!(!p.robust_predicted);

        let p = frame_vector_prediction(2, 4);
        assert_eq!(p.lambda, r(9, 8));
        assert_eq!(p.rho, Some(r(1, 1)));
        assert_eq!(p.verdict(), Robustness::Boundary);
        assert!(!p.robust_predicted);

        assert_eq!(frame_vector_prediction(3, 3).rho, Some(r(1, 1)));
        assert_eq!(frame_vector_prediction(4, 3).rho, Some(r(2, 3)));
        assert_eq!(frame_vector_prediction(2, 5).rho, Some(r(4, 5)));
    }

    #[test]
    fn closed_form_line_case() {
        let p = frame_vector_prediction(1, 3);
        assert!(p.lambda.is_zero() && p.rho.is_none() && !p.in_regime);
        assert_eq!(p.verdict(), Robustness::Undefined);
        let p = frame_vector_prediction(1, 4);
        assert_eq!(p.lambda, Rational::from_integer(2));
        assert_eq!(p.rho, Some(Rational::zero()));
    }

    #[test]
    fn tangent_basis_is_orthonormal_complement() {
        for v in [dvector![1.0, 0.0, 0.0], dvector![-0.6, 0.0, 0.8], dvector![0.5, -0.5, 0.5, 0.5]] {
            let u = tangent_basis(&v);
            let n = v.len();
            assert!((u.transpose() * &u - DMatrix::identity(n - 1, n - 1)).amax() < 1e-15);
            assert!((u.transpose() * &v).amax() < 1e-15);
        }
    }
}
