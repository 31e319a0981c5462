//! Symmetric tensors built from frames, their real Z-eigenpairs, and the
//! classification of each eigenpair as a local maximum, minimum or saddle
//! of `S v^m` on the sphere and as an attracting (robust) or non-attracting
//! fixed point of the tensor power iteration.
//!
//! The regular simplex tensor `S = Σᵢ wᵢ^{∘m}`, summed over the `n+1`
//! vertices of a regular simplex in `R^n`, is the main subject: its frame
//! vectors are eigenvectors with closed-form eigenvalue and Jacobian
//! spectrum, and they attract the power iteration exactly when `n + m ≥ 7`.

// `!(x > 0.0)` is used on purpose throughout so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod eigensolve;
pub mod error;
pub mod frames;
pub mod harness;
pub mod io;
pub mod linalg;
pub mod stability;
pub mod tensor;

pub use eigensolve::{Eigenpair, Source};
pub use error::{Error, Result};
pub use frames::{regular_simplex_frame, simplex_tensor, Frame};
pub use stability::{Robustness, StabilityReport, Stationarity};
pub use tensor::{SymmetricTensor, Term};
