//! Build the regular simplex frame and certify it, then show that a random
//! rotation leaves the certificate unchanged.
//!
//! ```bash
//! cargo run --example frames -- 4
//! ```

use nalgebra::DMatrix;
use simplex_spectra::frames::{certify, orthonormal_frame, regular_simplex_frame};

fn main() -> simplex_spectra::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3);

    let w = regular_simplex_frame(n)?;
    println!("regular simplex frame in R^{n} ({} vectors):{:.6}", w.count(), w.matrix());
    println!("Gram matrix:{:.6}", w.gram());
    println!("{:#?}", certify(&w, 1e-10)?);

    // Any orthogonal Q will do; QR of a fixed matrix keeps the output stable.
    let q = DMatrix::from_fn(n, n, |i, j| ((i * 7 + j * 3) % 5) as f64 + if i == j { 3.0 } else { 0.0 }).qr().q();
    let rotated = certify(&w.rotated(&q), 1e-10)?;
    println!("after rotation: equiangular={} tight={} alpha={:?}", rotated.equiangular, rotated.tight, rotated.alpha);

    let e = certify(&orthonormal_frame(n)?, 1e-10)?;
    println!("orthonormal basis: alpha={:?} a={:?}", e.alpha, e.a);
    Ok(())
}
