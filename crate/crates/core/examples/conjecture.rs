//! Search a simplex tensor for robust eigenvectors other than the frame
//! vectors. Exhaustive for n = 2, sampled otherwise.
//!
//! ```bash
//! cargo run --release --example conjecture -- 3 5 2000
//! ```

use simplex_spectra::harness::{conjecture_check, ConjectureOptions};
use simplex_spectra::io;

fn main() -> simplex_spectra::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().ok());
    let n = args.next().flatten().unwrap_or(3);
    let m = args.next().flatten().unwrap_or(5);
    let starts = args.next().flatten().unwrap_or(1000);

    let report = conjecture_check(n, m, &ConjectureOptions::new(starts, 1))?;
    println!(
        "(n={n}, m={m}) {} pairs, {} robust, frames found {}/{}, heuristic={}",
        report.found_pairs,
        report.robust_pairs.len(),
        report.frames_found,
        n + 1,
        report.heuristic
    );
    for p in &report.robust_pairs {
        println!("  robust lambda {:.6} rho {:.6} angle to frame {:.1e}", p.lambda, p.rho, p.frame_angle);
    }
    println!("{}", io::to_string(&report.verdict)?);
    Ok(())
}
