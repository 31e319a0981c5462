//! Stationarity and robustness of every eigenpair of a simplex tensor,
//! with the two matrix identities that tie them together.
//!
//! ```bash
//! cargo run --example classify -- 2 3
//! ```

use simplex_spectra::eigensolve::enumerate_2d;
use simplex_spectra::harness::{gather_pairs, ConjectureOptions};
use simplex_spectra::simplex_tensor;
use simplex_spectra::stability::{analyze, lemma_bridge_residual, spectrum_relation_gap, StabilityOptions, LAMBDA_FLOOR};

fn main() -> simplex_spectra::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().ok());
    let n = args.next().flatten().unwrap_or(2);
    let m = args.next().flatten().unwrap_or(3);
    let s = simplex_tensor(n, m)?;

    let pairs = if n == 2 {
        enumerate_2d(&s, 3600)?.into_pairs()
    } else {
        gather_pairs(n, m, &ConjectureOptions::new(500, 0))?.0
    };
    let opts = StabilityOptions::default();
    println!("{:>10} {:>10} {:>11} {:>10} {:>9} {:>9}", "lambda", "rho", "stationary", "robust", "bridge", "gap");
    for p in pairs.iter().filter(|p| p.lambda.abs() > LAMBDA_FLOOR).take(20) {
        let r = analyze(&s, p, &opts)?;
        println!(
            "{:>10.6} {:>10.6} {:>11} {:>10} {:>9.1e} {:>9.1e}",
            p.lambda,
            r.rho.unwrap_or(f64::NAN),
            format!("{:?}", r.stationarity),
            format!("{:?}", r.robust),
            lemma_bridge_residual(&s, p, LAMBDA_FLOOR)?,
            spectrum_relation_gap(&s, p, LAMBDA_FLOOR)?,
        );
    }
    Ok(())
}
