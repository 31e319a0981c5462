//! Power iteration from a point near a frame vector, then multi-start search
//! with Newton polishing.
//!
//! ```bash
//! cargo run --example power_and_newton
//! ```

use nalgebra::dvector;
use simplex_spectra::eigensolve::{
    multi_start, newton_refine, power_method, PowerOutcome, DEFAULT_MAX_ITER, DEFAULT_TOL,
};
use simplex_spectra::frames::{regular_simplex_frame, simplex_tensor};

fn main() -> simplex_spectra::Result<()> {
    let (n, m) = (3, 4);
    let s = simplex_tensor(n, m)?;
    let w1 = regular_simplex_frame(n)?.vector(0);

    let v0 = (&w1 + dvector![0.1, -0.2, 0.15]).normalize();
    match power_method(&s, &v0, DEFAULT_TOL, DEFAULT_MAX_ITER)?.outcome {
        PowerOutcome::Converged(p) => println!(
            "power method: lambda = {:.15} (28/27 = {:.15}) after {} steps, v = {:.6}",
            p.lambda,
            28.0 / 27.0,
            p.iterations,
            p.v.transpose()
        ),
        other => println!("power method did not converge: {other:?}"),
    }

    // Newton also finds the saddles and minima that power iteration avoids.
    let saddle = newton_refine(&s, &dvector![1.0, 1.0, 0.0].normalize(), 1e-12, 100)?;
    println!("newton from (1,1,0): lambda = {:.12}, residual {:.1e}", saddle.lambda, saddle.kkt_residual);

    let summary = multi_start(&s, 500, 42, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
    println!(
        "multi-start: {} distinct pairs, {} of 500 starts did not converge",
        summary.pairs.len(),
        summary.failures
    );
    for c in summary.counts() {
        println!("  lambda {:>10.6}  basin {:>4}  v = {:.5}", c.pair.lambda, c.count, c.pair.v.transpose());
    }
    Ok(())
}
