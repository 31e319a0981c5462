//! Equiangular sets, tight frames, and the regular simplex frame.
//!
//! A frame is stored as an `n x r` matrix whose columns are unit vectors.
//! An equiangular set has a single coherence `α` with `|⟨wᵢ,wⱼ⟩| = α` for
//! all `i ≠ j`; it is tight when `WWᵀ = aI`. The regular simplex frame is
//! the tight equiangular set of `n+1` vectors in `R^n` with signed inner
//! products `-1/n`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::tensor::{SymmetricTensor, Term};

#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    vectors: DMatrix<f64>,
    /// Common absolute inner product, when known to be equiangular.
    pub coherence: Option<f64>,
    /// Common signed inner product, recorded for the simplex frame.
    pub signed_coherence: Option<f64>,
    /// `a` in `WWᵀ = aI`, when known to be tight.
    pub tight_constant: Option<f64>,
}

impl Frame {
    /// Wraps an arbitrary `n x r` matrix without asserting any structure.
    pub fn from_columns(vectors: DMatrix<f64>) -> Result<Self> {
        if vectors.ncols() == 0 || vectors.nrows() == 0 {
            return Err(Error::EmptyFrame);
        }
        Ok(Self { vectors, coherence: None, signed_coherence: None, tight_constant: None })
    }

    pub fn dim(&self) -> usize {
        self.vectors.nrows()
    }

    pub fn count(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.vectors
    }

    pub fn vector(&self, j: usize) -> DVector<f64> {
        self.vectors.column(j).into_owned()
    }

    pub fn columns(&self) -> impl Iterator<Item = DVector<f64>> + '_ {
        self.vectors.column_iter().map(|c| c.into_owned())
    }

    pub fn gram(&self) -> DMatrix<f64> {
        self.vectors.transpose() * &self.vectors
    }

    /// Applies `Q` to every column. Structural metadata is kept only if `Q`
    /// is orthogonal, which the caller is trusted to ensure.
    pub fn rotated(&self, q: &DMatrix<f64>) -> Self {
        Self { vectors: q * &self.vectors, ..self.clone() }
    }
}

/// The canonical regular simplex frame: `n+1` unit vectors in `R^n`.
///
/// Built by centering the standard basis of `R^{n+1}`, running Gram-Schmidt
/// over the centered vertices in index order, and reading each vertex in
/// that basis. For `n = 2` this gives `(1,0), (-1/2,√3/2), (-1/2,-√3/2)`.
pub fn regular_simplex_frame(n: usize) -> Result<Frame> {
    if n == 0 {
        return Err(Error::InputDomain("simplex frame needs n >= 1".into()));
    }
    let r = n + 1;
    let centroid = 1.0 / r as f64;
    let centered = DMatrix::from_fn(r, r, |i, j| if i == j { 1.0 - centroid } else { -centroid });

    // Modified Gram-Schmidt over the first n centered vertices.
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut b = centered.column(j).into_owned();
        for q in &basis {
            let c = q.dot(&b);
            b.axpy(-c, q, 1.0);
        }
        b /= b.norm();
        basis.push(b);
    }

    let mut vectors = DMatrix::zeros(n, r);
    for j in 0..r {
        let vertex = centered.column(j);
        let mut col = DVector::from_iterator(n, basis.iter().map(|b| b.dot(&vertex)));
        col /= col.norm();
        vectors.set_column(j, &col);
    }
    // The last vertex is minus the sum of the others; use that exact identity.
    let mut last = -vectors.columns(0, n).column_sum();
    last /= last.norm();
    vectors.set_column(n, &last);

    let nf = n as f64;
    Ok(Frame {
        vectors,
        coherence: Some(1.0 / nf),
        signed_coherence: Some(-1.0 / nf),
        tight_constant: Some((nf + 1.0) / nf),
    })
}

/// The standard basis `e₁ … e_n` as an equiangular tight frame with `α = 0`, `a = 1`.
pub fn orthonormal_frame(n: usize) -> Result<Frame> {
    if n == 0 {
        return Err(Error::InputDomain("orthonormal frame needs n >= 1".into()));
    }
    Ok(Frame {
        vectors: DMatrix::identity(n, n),
        coherence: Some(0.0),
        signed_coherence: None,
        tight_constant: Some(1.0),
    })
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CertificationReport {
    pub unit_norms: bool,
    pub equiangular: bool,
    pub alpha: Option<f64>,
    pub tight: bool,
    pub a: Option<f64>,
    pub max_violation: f64,
}

/// Checks unit norms, equiangularity and tightness of an arbitrary frame.
///
/// `α` is estimated as the mean off-diagonal `|G_ij|` and `a` as
/// `trace(WWᵀ)/n`; each condition passes when its largest absolute
/// deviation is within `tol`. `max_violation` is the largest of the three.
pub fn certify(frame: &Frame, tol: f64) -> Result<CertificationReport> {
    if !(tol > 0.0) {
        return Err(Error::InputDomain(format!("tolerance must be positive, got {tol}")));
    }
    let r = frame.count();
    let n = frame.dim();
    if r == 0 || n == 0 {
        return Err(Error::EmptyFrame);
    }
    let g = frame.gram();

    let norm_violation = (0..r).map(|i| (g[(i, i)] - 1.0).abs()).fold(0.0, f64::max);

    let off: Vec<f64> = (0..r)
        .flat_map(|i| ((i + 1)..r).map(move |j| (i, j)))
        .map(|(i, j)| g[(i, j)].abs())
        .collect();
    let alpha = if off.is_empty() { 0.0 } else { off.iter().sum::<f64>() / off.len() as f64 };
    let angle_violation = off.iter().map(|x| (x - alpha).abs()).fold(0.0, f64::max);

    let wwt = frame.matrix() * frame.matrix().transpose();
    let a = wwt.trace() / n as f64;
    let tight_violation = (&wwt - DMatrix::<f64>::identity(n, n) * a).amax();

    let equiangular = angle_violation <= tol;
    let tight = tight_violation <= tol;
    Ok(CertificationReport {
        unit_norms: norm_violation <= tol,
        equiangular,
        alpha: equiangular.then_some(alpha),
        tight,
        a: tight.then_some(a),
        max_violation: norm_violation.max(angle_violation).max(tight_violation),
    })
}

/// `Σ wᵢ^{∘m}` over the regular simplex frame of `R^n`, unit weights.
pub fn simplex_tensor(n: usize, m: usize) -> Result<SymmetricTensor> {
    if m < 3 {
        return Err(Error::InputDomain(format!("simplex tensor needs order m >= 3, got {m}")));
    }
    let frame = regular_simplex_frame(n)?;
    SymmetricTensor::factored(frame.columns().map(Term::unit).collect(), m)
}

/// `Σ eᵢ^{∘m}`, the diagonal odeco tensor.
pub fn odeco_tensor(n: usize, m: usize) -> Result<SymmetricTensor> {
    let frame = orthonormal_frame(n)?;
    SymmetricTensor::factored(frame.columns().map(Term::unit).collect(), m)
}
