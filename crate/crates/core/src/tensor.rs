//! Real symmetric tensors of order `m` on `R^n`, stored either as a full
//! dense array or as a weighted sum of symmetric rank-one terms.
//!
//! Every consumer in this crate needs only three contractions of a tensor
//! `S` with a vector `v`:
//!
//! ```text
//! apply_m  : S v^m      (scalar)
//! apply_m1 : S v^(m-1)  (vector)
//! apply_m2 : S v^(m-2)  (symmetric matrix)
//! ```
//!
//! They satisfy the chain `apply_m2(v) v = apply_m1(v)` and
//! `v . apply_m1(v) = apply_m(v)`. For the factored form each costs
//! `O(r n)` (or `O(r n^2)` for the matrix) with `r` terms; the dense form
//! costs `O(n^m)`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Default upper bound on the number of dense entries `n^m`.
pub const DEFAULT_CAPACITY: usize = 10_000_000;

/// Environment variable overriding [`DEFAULT_CAPACITY`] in [`capacity_from_env`].
pub const CAPACITY_ENV: &str = "SIMPLEX_SPECTRA_CAP";

/// Tolerance on `|‖w‖ - 1|` for vectors that must be unit length.
pub const UNIT_TOL: f64 = 1e-12;

/// Reads the capacity cap from `SIMPLEX_SPECTRA_CAP`, falling back to the default.
pub fn capacity_from_env() -> usize {
    std::env::var(CAPACITY_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_CAPACITY)
}

/// One weighted symmetric rank-one term `weight * vector^{∘m}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub weight: f64,
    pub vector: DVector<f64>,
}

impl Term {
    pub fn new(weight: f64, vector: DVector<f64>) -> Self {
        Self { weight, vector }
    }

    pub fn unit(vector: DVector<f64>) -> Self {
        Self::new(1.0, vector)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Repr {
    /// Row-major over index tuples `(i_1, ..., i_m)`, length `n^m`.
    Dense(Vec<f64>),
    Factored(Vec<Term>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricTensor {
    order: usize,
    dim: usize,
    repr: Repr,
}

fn check_unit(v: &DVector<f64>) -> Result<()> {
    let norm = v.norm();
    if !norm.is_finite() || (norm - 1.0).abs() > UNIT_TOL {
        return Err(Error::InputDomain(format!(
            "vector must have unit norm, got {norm:.17e}"
        )));
    }
    Ok(())
}

fn dense_len(dim: usize, order: usize, cap: usize) -> Result<usize> {
    let needed = (dim as u128).checked_pow(order as u32).unwrap_or(u128::MAX);
    if needed > cap as u128 {
        return Err(Error::Capacity { needed, cap });
    }
    Ok(needed as usize)
}

/// Flattened `k`-fold Kronecker power of `v`, row-major, length `n^k`.
fn kron_power(v: &[f64], k: usize) -> Vec<f64> {
    let mut out = vec![1.0];
    for _ in 0..k {
        let mut next = Vec::with_capacity(out.len() * v.len());
        for &a in &out {
            next.extend(v.iter().map(|&b| a * b));
        }
        out = next;
    }
    out
}

/// Row-major array of length `dim^order` whose entry at each index tuple is
/// `value` of the sorted tuple. Entries related by a permutation are copies
/// of one computation, so the result is exactly symmetric.
fn symmetric_fill(dim: usize, order: usize, len: usize, value: impl Fn(&[usize]) -> f64) -> Vec<f64> {
    let mut entries = vec![0.0; len];
    let mut idx = vec![0usize; order];
    let mut sorted = vec![0usize; order];
    for flat in 0..len {
        sorted.copy_from_slice(&idx);
        sorted.sort_unstable();
        // Ascending digits give the smallest flat index in the orbit, which is already filled.
        let canon = sorted.iter().fold(0usize, |acc, &i| acc * dim + i);
        entries[flat] = if canon == flat { value(&sorted) } else { entries[canon] };
        for k in (0..order).rev() {
            idx[k] += 1;
            if idx[k] < dim {
                break;
            }
            idx[k] = 0;
        }
    }
    entries
}

/// `v^{∘m}` as a dense tensor.
pub fn outer_power(v: &DVector<f64>, order: usize) -> Result<SymmetricTensor> {
    outer_power_capped(v, order, DEFAULT_CAPACITY)
}

pub fn outer_power_capped(v: &DVector<f64>, order: usize, cap: usize) -> Result<SymmetricTensor> {
    if order < 2 {
        return Err(Error::InputDomain(format!("order must be >= 2, got {order}")));
    }
    if v.is_empty() {
        return Err(Error::InputDomain("vector must be non-empty".into()));
    }
    check_unit(v)?;
    let len = dense_len(v.len(), order, cap)?;
    let entries = symmetric_fill(v.len(), order, len, |idx| idx.iter().map(|&i| v[i]).product());
    Ok(SymmetricTensor { order, dim: v.len(), repr: Repr::Dense(entries) })
}

/// `Σ c_i w_i^{∘m}` in factored form.
pub fn from_rank_one_sum(terms: Vec<Term>, order: usize) -> Result<SymmetricTensor> {
    SymmetricTensor::factored(terms, order)
}

impl SymmetricTensor {
    pub fn factored(terms: Vec<Term>, order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::InputDomain(format!("order must be >= 2, got {order}")));
        }
        let first = terms.first().ok_or(Error::EmptyTerms)?;
        let dim = first.vector.len();
        if dim == 0 {
            return Err(Error::InputDomain("vectors must be non-empty".into()));
        }
        for t in &terms {
            if t.vector.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: t.vector.len() });
            }
            if !t.weight.is_finite() {
                return Err(Error::InputDomain("term weight must be finite".into()));
            }
            check_unit(&t.vector)?;
        }
        Ok(Self { order, dim, repr: Repr::Factored(terms) })
    }

    /// Builds a dense tensor from row-major entries, rejecting non-symmetric input.
    pub fn dense(entries: Vec<f64>, dim: usize, order: usize) -> Result<Self> {
        Self::dense_capped(entries, dim, order, DEFAULT_CAPACITY)
    }

    pub fn dense_capped(entries: Vec<f64>, dim: usize, order: usize, cap: usize) -> Result<Self> {
        if order < 2 || dim == 0 {
            return Err(Error::InputDomain(format!(
                "need order >= 2 and dim >= 1, got order {order}, dim {dim}"
            )));
        }
        let len = dense_len(dim, order, cap)?;
        if entries.len() != len {
            return Err(Error::DimensionMismatch { expected: len, got: entries.len() });
        }
        let t = Self { order, dim, repr: Repr::Dense(entries) };
        let asym = t.max_asymmetry();
        if asym > 1e-12 {
            return Err(Error::InputDomain(format!(
                "dense entries are not symmetric (max deviation {asym:e})"
            )));
        }
        Ok(t)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn repr(&self) -> &Repr {
        &self.repr
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.repr, Repr::Dense(_))
    }

    /// Largest `|S[idx] - S[sorted(idx)]|` over all index tuples; 0 for factored tensors.
    pub fn max_asymmetry(&self) -> f64 {
        let Repr::Dense(entries) = &self.repr else {
            return 0.0;
        };
        let (n, m) = (self.dim, self.order);
        let mut idx = vec![0usize; m];
        let mut worst = 0.0f64;
        for (flat, &value) in entries.iter().enumerate() {
            let mut rem = flat;
            for slot in idx.iter_mut().rev() {
                *slot = rem % n;
                rem /= n;
            }
            idx.sort_unstable();
            let canon = idx.iter().fold(0, |acc, &i| acc * n + i);
            worst = worst.max((value - entries[canon]).abs());
        }
        worst
    }

    /// Entry at an index tuple, computed from either representation.
    pub fn entry(&self, idx: &[usize]) -> Result<f64> {
        if idx.len() != self.order {
            return Err(Error::DimensionMismatch { expected: self.order, got: idx.len() });
        }
        if let Some(&bad) = idx.iter().find(|&&i| i >= self.dim) {
            return Err(Error::InputDomain(format!("index {bad} out of range for dim {}", self.dim)));
        }
        Ok(match &self.repr {
            Repr::Dense(e) => e[idx.iter().fold(0, |acc, &i| acc * self.dim + i)],
            Repr::Factored(terms) => terms
                .iter()
                .map(|t| t.weight * idx.iter().map(|&i| t.vector[i]).product::<f64>())
                .sum(),
        })
    }

    pub fn densify(&self) -> Result<Self> {
        self.densify_capped(DEFAULT_CAPACITY)
    }

    pub fn densify_capped(&self, cap: usize) -> Result<Self> {
        match &self.repr {
            Repr::Dense(_) => Ok(self.clone()),
            Repr::Factored(terms) => {
                let len = dense_len(self.dim, self.order, cap)?;
                let entries = symmetric_fill(self.dim, self.order, len, |idx| {
                    terms.iter().map(|t| t.weight * idx.iter().map(|&i| t.vector[i]).product::<f64>()).sum()
                });
                Ok(Self { order: self.order, dim: self.dim, repr: Repr::Dense(entries) })
            }
        }
    }

    fn check_dim(&self, v: &DVector<f64>) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        Ok(())
    }

    /// `S v^m`.
    pub fn apply_m(&self, v: &DVector<f64>) -> Result<f64> {
        self.check_dim(v)?;
        Ok(match &self.repr {
            Repr::Factored(terms) => terms
                .iter()
                .map(|t| t.weight * t.vector.dot(v).powi(self.order as i32))
                .sum(),
            Repr::Dense(e) => {
                let p = kron_power(v.as_slice(), self.order);
                e.iter().zip(&p).map(|(a, b)| a * b).sum()
            }
        })
    }

    /// `S v^(m-1)`.
    pub fn apply_m1(&self, v: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_dim(v)?;
        let n = self.dim;
        Ok(match &self.repr {
            Repr::Factored(terms) => {
                let mut out = DVector::zeros(n);
                for t in terms {
                    let c = t.weight * t.vector.dot(v).powi(self.order as i32 - 1);
                    out.axpy(c, &t.vector, 1.0);
                }
                out
            }
            Repr::Dense(e) => {
                let p = kron_power(v.as_slice(), self.order - 1);
                let stride = p.len();
                DVector::from_iterator(
                    n,
                    (0..n).map(|i| {
                        e[i * stride..(i + 1) * stride].iter().zip(&p).map(|(a, b)| a * b).sum()
                    }),
                )
            }
        })
    }

    /// `S v^(m-2)`, an `n x n` symmetric matrix.
    pub fn apply_m2(&self, v: &DVector<f64>) -> Result<DMatrix<f64>> {
        self.check_dim(v)?;
        let n = self.dim;
        Ok(match &self.repr {
            Repr::Factored(terms) => {
                let mut out = DMatrix::zeros(n, n);
                for t in terms {
                    let c = t.weight * t.vector.dot(v).powi(self.order as i32 - 2);
                    out.ger(c, &t.vector, &t.vector, 1.0);
                }
                out
            }
            Repr::Dense(e) => {
                let p = kron_power(v.as_slice(), self.order - 2);
                let stride = p.len();
                DMatrix::from_fn(n, n, |i, j| {
                    let base = (i * n + j) * stride;
                    e[base..base + stride].iter().zip(&p).map(|(a, b)| a * b).sum()
                })
            }
        })
    }

    /// Largest absolute entry weight scale, used to set relative tolerances.
    pub fn scale(&self) -> f64 {
        match &self.repr {
            Repr::Dense(e) => e.iter().fold(0.0f64, |a, x| a.max(x.abs())),
            Repr::Factored(terms) => terms.iter().map(|t| t.weight.abs()).sum(),
        }
    }
}
