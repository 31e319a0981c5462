//! JSON file formats for tensors, frames, eigenpair lists and stability
//! reports.
//!
//! Floating-point numbers are always written with 17 significant digits
//! (`1.2345678901234567e0`), which round-trips every `f64` exactly.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::eigensolve::{kkt_residual, Eigenpair, Source};
use crate::error::{Error, Result};
use crate::frames::Frame;
use crate::stability::{Robustness, StabilityReport, Stationarity};
use crate::tensor::{Repr, SymmetricTensor, Term};

/// Compact JSON with every float in `{:.16e}` form.
#[derive(Debug, Default, Clone, Copy)]
pub struct Sig17Formatter;

impl serde_json::ser::Formatter for Sig17Formatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

pub fn to_writer<W: Write, T: Serialize + ?Sized>(writer: W, value: &T) -> Result<()> {
    let mut ser = serde_json::Serializer::with_formatter(writer, Sig17Formatter);
    value.serialize(&mut ser)?;
    Ok(())
}

pub fn to_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    to_writer(&mut buf, value)?;
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    to_writer(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Formats a float the way every report in this crate does.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReprKind {
    Dense,
    Factored,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermFile {
    pub weight: f64,
    pub vector: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorFile {
    pub order: usize,
    pub dim: usize,
    pub repr: ReprKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<TermFile>>,
}

impl From<&SymmetricTensor> for TensorFile {
    fn from(t: &SymmetricTensor) -> Self {
        match t.repr() {
            Repr::Dense(e) => TensorFile {
                order: t.order(),
                dim: t.dim(),
                repr: ReprKind::Dense,
                entries: Some(e.clone()),
                terms: None,
            },
            Repr::Factored(terms) => TensorFile {
                order: t.order(),
                dim: t.dim(),
                repr: ReprKind::Factored,
                entries: None,
                terms: Some(
                    terms
                        .iter()
                        .map(|t| TermFile { weight: t.weight, vector: t.vector.iter().copied().collect() })
                        .collect(),
                ),
            },
        }
    }
}

impl TensorFile {
    pub fn into_tensor(self, cap: usize) -> Result<SymmetricTensor> {
        let t = match self.repr {
            ReprKind::Dense => {
                let entries = self
                    .entries
                    .ok_or_else(|| Error::InputDomain("dense tensor file needs \"entries\"".into()))?;
                SymmetricTensor::dense_capped(entries, self.dim, self.order, cap)?
            }
            ReprKind::Factored => {
                let terms = self
                    .terms
                    .ok_or_else(|| Error::InputDomain("factored tensor file needs \"terms\"".into()))?
                    .into_iter()
                    .map(|t| Term::new(t.weight, DVector::from_vec(t.vector)))
                    .collect();
                SymmetricTensor::factored(terms, self.order)?
            }
        };
        if t.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: t.dim() });
        }
        Ok(t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameFile {
    pub dim: usize,
    pub count: usize,
    /// One inner array per frame vector.
    pub vectors: Vec<Vec<f64>>,
}

impl From<&Frame> for FrameFile {
    fn from(f: &Frame) -> Self {
        FrameFile {
            dim: f.dim(),
            count: f.count(),
            vectors: f.columns().map(|c| c.iter().copied().collect()).collect(),
        }
    }
}

impl FrameFile {
    pub fn into_frame(self) -> Result<Frame> {
        if self.vectors.len() != self.count {
            return Err(Error::DimensionMismatch { expected: self.count, got: self.vectors.len() });
        }
        if let Some(bad) = self.vectors.iter().find(|v| v.len() != self.dim) {
            return Err(Error::DimensionMismatch { expected: self.dim, got: bad.len() });
        }
        let flat: Vec<f64> = self.vectors.into_iter().flatten().collect();
        Frame::from_columns(DMatrix::from_vec(self.dim, self.count, flat))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairFile {
    pub lambda: f64,
    pub v: Vec<f64>,
    pub residual: f64,
    pub source: Source,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basin_count: Option<usize>,
}

impl From<&Eigenpair> for PairFile {
    fn from(p: &Eigenpair) -> Self {
        PairFile {
            lambda: p.lambda,
            v: p.v.iter().copied().collect(),
            residual: p.kkt_residual,
            source: p.source,
            basin_count: None,
        }
    }
}

impl PairFile {
    /// Rebuilds the pair against `s`, recomputing the residual rather than
    /// trusting the stored one.
    pub fn into_pair(self, s: &SymmetricTensor) -> Result<Eigenpair> {
        if self.v.len() != s.dim() {
            return Err(Error::DimensionMismatch { expected: s.dim(), got: self.v.len() });
        }
        let v = DVector::from_vec(self.v);
        let kkt_residual = kkt_residual(s, &v, self.lambda)?;
        Ok(Eigenpair { lambda: self.lambda, v, kkt_residual, iterations: 0, source: self.source })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairListFile {
    pub tensor: TensorFile,
    pub pairs: Vec<PairFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub pair: PairFile,
    pub k_spectrum: Vec<f64>,
    pub j_spectrum: Option<Vec<f64>>,
    pub rho: Option<f64>,
    pub stationarity: Stationarity,
    pub robust: Robustness,
}

impl From<&StabilityReport> for ReportFile {
    fn from(r: &StabilityReport) -> Self {
        ReportFile {
            pair: PairFile::from(&r.pair),
            k_spectrum: r.k_spectrum.clone(),
            j_spectrum: r.j_spectrum.clone(),
            rho: r.rho,
            stationarity: r.stationarity,
            robust: r.robust,
        }
    }
}
