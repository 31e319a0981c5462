//! Factored and dense symmetric tensors: contractions, densification and the
//! capacity cap.
//!
//! ```bash
//! cargo run --example tensors
//! ```

use nalgebra::dvector;
use simplex_spectra::frames::simplex_tensor;
use simplex_spectra::tensor::{from_rank_one_sum, outer_power, Term};
use simplex_spectra::Error;

fn main() -> simplex_spectra::Result<()> {
    let s = simplex_tensor(3, 4)?;
    let d = s.densify()?;
    let v = dvector![0.6, 0.0, 0.8];

    println!("S v^m     factored {:.15}  dense {:.15}", s.apply_m(&v)?, d.apply_m(&v)?);
    println!("S v^(m-1) factored {:.15}", s.apply_m1(&v)?.transpose());
    println!("S v^(m-1) dense    {:.15}", d.apply_m1(&v)?.transpose());
    println!("S v^(m-2) =\n{:.6}", s.apply_m2(&v)?);
    println!("entry S[0,1,2,2] = {:.15}", d.entry(&[0, 1, 2, 2])?);

    // Weighted sums: a difference of two outer cubes.
    let t = from_rank_one_sum(vec![Term::new(2.0, dvector![1.0, 0.0]), Term::new(-1.0, dvector![0.0, 1.0])], 3)?;
    println!("2 e1^3 - e2^3 at (0.6, 0.8): {}", t.apply_m(&dvector![0.6, 0.8])?);
    println!("e1^3 dense entries: {:?}", outer_power(&dvector![1.0, 0.0], 3)?.densify()?.repr());

    match simplex_tensor(8, 6)?.densify_capped(100_000) {
        Err(Error::Capacity { needed, cap }) => println!("8^6 = {needed} entries exceeds cap {cap}"),
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
