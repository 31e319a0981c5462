//! Exact predictions at frame vectors next to the numbers the Jacobian
//! gives, over the default grid.
//!
//! ```bash
//! cargo run --example closed_form_sweep
//! ```

use simplex_spectra::harness::{sweep, write_sweep_csv};
use simplex_spectra::stability::frame_vector_prediction;

fn main() -> simplex_spectra::Result<()> {
    for (n, m) in [(2, 3), (3, 3), (2, 4), (3, 4), (4, 3), (2, 5)] {
        let c = frame_vector_prediction(n, m);
        println!("(n={n}, m={m}) lambda = {}  rho = {}  {:?}", c.lambda, c.rho.unwrap(), c.verdict());
    }

    let rows = sweep(2..=6, 3..=6)?;
    write_sweep_csv(&rows, std::io::stdout())?;
    let broken: Vec<String> = rows.iter().flat_map(|r| r.violations()).collect();
    println!("{} rows, {} invariant violations", rows.len(), broken.len());
    Ok(())
}
