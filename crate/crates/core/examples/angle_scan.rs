//! Exhaustive eigenpair enumeration in the plane, including the order-4
//! case where every unit vector is an eigenvector.
//!
//! ```bash
//! cargo run --example angle_scan
//! ```

use simplex_spectra::eigensolve::{enumerate_2d, Spectrum2d};
use simplex_spectra::frames::{odeco_tensor, simplex_tensor};

fn main() -> simplex_spectra::Result<()> {
    for m in 3..=6 {
        match enumerate_2d(&simplex_tensor(2, m)?, 3600)? {
            Spectrum2d::Isolated(pairs) => {
                println!("simplex m={m}: {} eigenpairs", pairs.len());
                for p in pairs {
                    println!("  lambda {:>9.6}  v = ({:>9.6}, {:>9.6})", p.lambda, p.v[0], p.v[1]);
                }
            }
            Spectrum2d::Circle { lambda, samples } => {
                println!("simplex m={m}: every unit vector, lambda = {lambda} ({} samples)", samples.len());
            }
        }
    }
    let odeco = enumerate_2d(&odeco_tensor(2, 3)?, 720)?;
    println!("odeco m=3: {:?}", odeco.pairs().iter().map(|p| p.lambda).collect::<Vec<_>>());
    Ok(())
}
