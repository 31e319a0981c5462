//! End-to-end experiments over the regular simplex tensors: closed-form vs
//! numerical sweeps across `(n, m)`, and searches for robust eigenpairs
//! that are not frame vectors.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigensolve::{
    dedup, enumerate_2d, line_angle, multi_start, newton_seeded, sphere_grid, Eigenpair, Source,
    Spectrum2d, DEFAULT_ANGLE_TOL, DEFAULT_LAMBDA_TOL, DEFAULT_MAX_ITER, DEFAULT_TOL,
};
use crate::error::{Error, Result};
use crate::frames::{regular_simplex_frame, simplex_tensor};
use crate::io::{self, fmt_f64};
use crate::stability::{analyze, frame_vector_prediction, Robustness, StabilityOptions, Stationarity};

/// Largest allowed `|ρ_numeric - ρ_closed|` in a sweep row.
pub const RHO_AGREEMENT_TOL: f64 = 1e-8;
/// A robust pair counts as a frame vector when within this angle of one.
pub const FRAME_ALIGN_TOL: f64 = 1e-6;

pub const CSV_HEADER: [&str; 9] = [
    "n",
    "m",
    "lambda_closed",
    "rho_closed",
    "rho_numeric",
    "robust_closed",
    "robust_numeric",
    "n_plus_m",
    "threshold_pass",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub m: usize,
    pub lambda_closed: f64,
    pub rho_closed: f64,
    pub rho_numeric: f64,
    pub robust_closed: Robustness,
    pub robust_numeric: Robustness,
    pub n_plus_m: usize,
    pub threshold_pass: bool,
}

impl SweepRow {
    /// Descriptions of every row invariant this row breaks.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let gap = (self.rho_numeric - self.rho_closed).abs();
        if !(gap <= RHO_AGREEMENT_TOL) {
            out.push(format!(
                "(n={}, m={}): |rho_numeric - rho_closed| = {gap:e} > {RHO_AGREEMENT_TOL:e}",
                self.n, self.m
            ));
        }
        if self.n >= 2
            && self.m >= 3
            && self.robust_closed != Robustness::Boundary
            && (self.robust_closed == Robustness::Robust) != self.threshold_pass
        {
            out.push(format!(
                "(n={}, m={}): closed-form verdict {:?} disagrees with n+m >= 7 ({})",
                self.n, self.m, self.robust_closed, self.threshold_pass
            ));
        }
        if self.robust_closed != self.robust_numeric {
            out.push(format!(
                "(n={}, m={}): closed-form verdict {:?} but numeric {:?}",
                self.n, self.m, self.robust_closed, self.robust_numeric
            ));
        }
        out
    }
}

/// One row per `(n, m)`: closed-form `λ` and `ρ` next to `ρ` computed from
/// the Jacobian at the first frame vector.
pub fn sweep(ns: impl IntoIterator<Item = usize>, ms: impl IntoIterator<Item = usize>) -> Result<Vec<SweepRow>> {
    let ms: Vec<usize> = ms.into_iter().collect();
    let grid: Vec<(usize, usize)> = ns.into_iter().flat_map(|n| ms.iter().map(move |&m| (n, m))).collect();
    if let Some(&(n, m)) = grid.iter().find(|&&(n, m)| n < 2 || m < 3) {
        return Err(Error::InputDomain(format!("sweep needs n >= 2 and m >= 3, got (n={n}, m={m})")));
    }
    let mut rows = grid.into_par_iter().map(|(n, m)| sweep_row(n, m)).collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| (r.n, r.m));
    Ok(rows)
}

pub fn sweep_row(n: usize, m: usize) -> Result<SweepRow> {
    let closed = frame_vector_prediction(n, m);
    let s = simplex_tensor(n, m)?;
    let w1 = regular_simplex_frame(n)?.vector(0);
    let pair = Eigenpair::at(&s, w1, 0, Source::ClosedForm)?;
    let report = analyze(&s, &pair, &StabilityOptions::default())?;
    Ok(SweepRow {
        n,
        m,
        lambda_closed: closed.lambda_f64(),
        rho_closed: closed.rho_f64().unwrap_or(f64::NAN),
        rho_numeric: report.rho.unwrap_or(f64::NAN),
        robust_closed: closed.verdict(),
        robust_numeric: report.robust,
        n_plus_m: n + m,
        threshold_pass: n + m >= 7,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.m.to_string(),
            fmt_f64(r.lambda_closed),
            fmt_f64(r.rho_closed),
            fmt_f64(r.rho_numeric),
            format!("{:?}", r.robust_closed),
            format!("{:?}", r.robust_numeric),
            r.n_plus_m.to_string(),
            r.threshold_pass.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<u64>,
    pub rows: Vec<SweepRow>,
}

/// Writes sweep rows as CSV or JSON. `generated_at` is only emitted in JSON.
pub fn emit_report(rows: &[SweepRow], format: ReportFormat, path: &Path, generated_at: Option<u64>) -> Result<()> {
    match format {
        ReportFormat::Csv => write_sweep_csv(rows, std::fs::File::create(path)?),
        ReportFormat::Json => io::write_json(path, &SweepReport { generated_at, rows: rows.to_vec() }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjectureOptions {
    pub starts: usize,
    pub seed: u64,
    /// Deterministic sphere-grid seeds fed straight to Newton for `n ≥ 3`.
    pub grid_seeds: usize,
    /// Angle-scan resolution for `n = 2`.
    pub scan_grid: usize,
    pub tol: f64,
    pub max_iter: usize,
}

impl ConjectureOptions {
    pub fn new(starts: usize, seed: u64) -> Self {
        Self {
            starts,
            seed,
            grid_seeds: 2000,
            scan_grid: 3600,
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustPair {
    pub lambda: f64,
    pub v: Vec<f64>,
    pub rho: f64,
    /// Angle to the nearest frame line.
    pub frame_angle: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status")]
pub enum ConjectureVerdict {
    Consistent,
    Violation { lambda: f64, v: Vec<f64>, reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub n: usize,
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<u64>,
    /// Set when the eigenpair search is not provably complete (`n ≥ 3`).
    pub heuristic: bool,
    /// Set when every unit vector is an eigenvector; pairs are then grid samples.
    pub continuum: bool,
    pub starts: usize,
    pub seed: u64,
    pub found_pairs: usize,
    pub classified_pairs: usize,
    pub zero_eigenvalue_pairs: usize,
    pub robust_pairs: Vec<RobustPair>,
    pub local_max_not_robust: usize,
    /// Pairs classified robust that are not local maxima; expected to be 0.
    pub robust_not_local_max: usize,
    pub frame_closed_form: Robustness,
    pub frame_verdicts: Vec<Robustness>,
    pub frames_found: usize,
    pub verdict: ConjectureVerdict,
}

/// All eigenpairs of the simplex tensor that the search can reach.
///
/// `n = 2` is exhaustive by angle scan. Otherwise random-start power
/// iteration (polished by Newton) is combined with Newton from a fixed
/// sphere grid; the result is then evidence, not a proof of completeness.
pub fn gather_pairs(n: usize, m: usize, opts: &ConjectureOptions) -> Result<(Vec<Eigenpair>, bool, bool)> {
    let s = simplex_tensor(n, m)?;
    if n == 2 {
        let spectrum = enumerate_2d(&s, opts.scan_grid.max(8 * m))?;
        let continuum = matches!(spectrum, Spectrum2d::Circle { .. });
        return Ok((spectrum.into_pairs(), false, continuum));
    }
    let mut pairs = multi_start(&s, opts.starts, opts.seed, opts.tol, opts.max_iter)?.pairs;
    pairs.extend(newton_seeded(&s, &sphere_grid(n, opts.grid_seeds), crate::eigensolve::ACCEPT_TOL, 100));
    Ok((dedup(pairs, DEFAULT_ANGLE_TOL, DEFAULT_LAMBDA_TOL), true, false))
}

/// Classifies every eigenpair found for the `(n, m)` simplex tensor and
/// checks that the robust ones are exactly frame vectors.
pub fn conjecture_check(n: usize, m: usize, opts: &ConjectureOptions) -> Result<ConjectureReport> {
    if n < 2 || m < 3 {
        return Err(Error::InputDomain(format!("conjecture check needs n >= 2, m >= 3, got (n={n}, m={m})")));
    }
    let s = simplex_tensor(n, m)?;
    let frame = regular_simplex_frame(n)?;
    let stab = StabilityOptions::default();
    let closed = frame_vector_prediction(n, m);

    let (pairs, heuristic, continuum) = gather_pairs(n, m, opts)?;

    let reports = pairs
        .par_iter()
        .filter(|p| p.lambda.abs() > stab.lambda_floor)
        .map(|p| analyze(&s, p, &stab))
        .collect::<Result<Vec<_>>>()?;

    let frame_angle = |v: &nalgebra::DVector<f64>| {
        frame.columns().map(|w| line_angle(v, &w)).fold(f64::INFINITY, f64::min)
    };

    let mut robust_pairs = Vec::new();
    let mut verdict = ConjectureVerdict::Consistent;
    for r in reports.iter().filter(|r| r.robust.is_robust()) {
        let angle = frame_angle(&r.pair.v);
        if angle > FRAME_ALIGN_TOL && verdict == ConjectureVerdict::Consistent {
            verdict = ConjectureVerdict::Violation {
                lambda: r.pair.lambda,
                v: r.pair.v.iter().copied().collect(),
                reason: format!("robust pair is {angle:e} rad from the nearest frame vector"),
            };
        }
        robust_pairs.push(RobustPair {
            lambda: r.pair.lambda,
            v: r.pair.v.iter().copied().collect(),
            rho: r.rho.unwrap_or(f64::NAN),
            frame_angle: angle,
        });
    }

    let frame_verdicts = frame
        .columns()
        .map(|w| {
            let p = Eigenpair::at(&s, w, 0, Source::ClosedForm)?;
            Ok(analyze(&s, &p, &stab)?.robust)
        })
        .collect::<Result<Vec<_>>>()?;
    if verdict == ConjectureVerdict::Consistent {
        if let Some((j, v)) = frame_verdicts.iter().enumerate().find(|(_, v)| **v != closed.verdict()) {
            let w = frame.vector(j);
            verdict = ConjectureVerdict::Violation {
                lambda: s.apply_m(&w)?,
                v: w.iter().copied().collect(),
                reason: format!("frame vector {j} classified {v:?}, closed form says {:?}", closed.verdict()),
            };
        }
    }

    let frames_found = frame
        .columns()
        .filter(|w| pairs.iter().any(|p| line_angle(&p.v, w) <= FRAME_ALIGN_TOL))
        .count();

    Ok(ConjectureReport {
        n,
        m,
        generated_at: None,
        heuristic,
        continuum,
        starts: opts.starts,
        seed: opts.seed,
        found_pairs: pairs.len(),
        classified_pairs: reports.len(),
        zero_eigenvalue_pairs: pairs.len() - reports.len(),
        robust_pairs,
        local_max_not_robust: reports
            .iter()
            .filter(|r| r.stationarity == Stationarity::LocalMax && !r.robust.is_robust())
            .count(),
        robust_not_local_max: reports
            .iter()
            .filter(|r| r.robust.is_robust() && r.stationarity != Stationarity::LocalMax)
            .count(),
        frame_closed_form: closed.verdict(),
        frame_verdicts,
        frames_found,
        verdict,
    })
}

pub fn unix_timestamp() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sweep_spot_rows() {
        let rows = sweep([3, 4], [3, 4]).unwrap();
        assert_eq!(rows.iter().map(|r| (r.n, r.m)).collect::<Vec<_>>(), [(3, 3), (3, 4), (4, 3), (4, 4)]);

        let r34 = &rows[1];
        assert_relative_eq!(r34.rho_closed, 3.0 / 7.0, epsilon = 1e-16);
        assert_relative_eq!(r34.rho_numeric, 3.0 / 7.0, epsilon = 1e-12);
        assert_eq!((r34.robust_closed, r34.robust_numeric), (Robustness::Robust, Robustness::Robust));
        assert!(r34.threshold_pass);

        let r33 = &rows[0];
        assert_eq!(r33.rho_closed, 1.0);
        assert_eq!(r33.robust_closed, Robustness::Boundary);
        assert!(!r33.threshold_pass);

        let r43 = &rows[2];
        assert_relative_eq!(r43.rho_closed, 2.0 / 3.0, epsilon = 1e-16);
        assert_eq!(r43.robust_numeric, Robustness::Robust);
        assert_eq!(r43.n_plus_m, 7);

        assert!(rows.iter().all(|r| r.violations().is_empty()));
    }

    #[test]
    fn sweep_rejects_out_of_regime() {
        assert!(sweep([1], [3]).is_err());
        assert!(sweep([2], [2]).is_err());
    }

    #[test]
    fn violations_are_detected() {
        let mut row = sweep_row(3, 4).unwrap();
        row.rho_numeric += 1e-6;
        assert_eq!(row.violations().len(), 1);
        row.threshold_pass = false;
        assert_eq!(row.violations().len(), 2);
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_sweep_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{}\n", CSV_HEADER.join(",")));

        let mut buf = Vec::new();
        write_sweep_csv(&[sweep_row(3, 4).unwrap()], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[1].starts_with("3,4,1.0370370370370370e0,4.2857142857142855e-1,"), "{}", lines[1]);
        assert!(lines[1].ends_with(",Robust,Robust,7,true"));
    }

    #[test]
    fn conjecture_plane_quintic() {
        let rep = conjecture_check(2, 5, &ConjectureOptions::new(0, 0)).unwrap();
        assert!(!rep.heuristic && !rep.continuum);
        assert_eq!(rep.verdict, ConjectureVerdict::Consistent);
        assert_eq!(rep.robust_pairs.len(), 3);
        for p in &rep.robust_pairs {
            assert_relative_eq!(p.rho, 0.8, epsilon = 1e-10);
            assert!(p.frame_angle < 1e-10);
        }
        assert_eq!(rep.robust_not_local_max, 0);
    }

    #[test]
    fn conjecture_plane_cubic_is_vacuous() {
        let rep = conjecture_check(2, 3, &ConjectureOptions::new(0, 0)).unwrap();
        assert_eq!(rep.verdict, ConjectureVerdict::Consistent);
        assert!(rep.robust_pairs.is_empty());
        assert_eq!(rep.found_pairs, 3);
        assert_eq!(rep.local_max_not_robust, 3);
    }

    #[test]
    fn conjecture_plane_quartic_continuum() {
        let rep = conjecture_check(2, 4, &ConjectureOptions::new(0, 0)).unwrap();
        assert!(rep.continuum);
        assert!(rep.robust_pairs.is_empty());
        assert_eq!(rep.frames_found, 3);
        assert_eq!(rep.frame_closed_form, Robustness::Boundary);
        assert_eq!(rep.verdict, ConjectureVerdict::Consistent);
    }
}
