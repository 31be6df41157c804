//! Command implementations behind the `dualsvd` binary.

mod check;
mod decompose;
pub mod format;

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::Error;
use crate::laguerre::{classify_transform, LaguerreForm, LaguerreTransform};
use crate::linalg::{DualMatrix, Structure};
use format::MatrixFile;

pub use check::cmd_check;
pub use decompose::cmd_decompose;

/// Which decomposition `decompose` runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Kind {
    TSvd,
    StarSvd,
    TSpectral,
    StarSpectral,
    TPolar,
    Pinv,
}

impl Kind {
    pub const ALL: [Kind; 6] =
        [Kind::TSvd, Kind::StarSvd, Kind::TSpectral, Kind::StarSpectral, Kind::TPolar, Kind::Pinv];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::TSvd => "t-svd",
            Kind::StarSvd => "star-svd",
            Kind::TSpectral => "t-spectral",
            Kind::StarSpectral => "star-spectral",
            Kind::TPolar => "t-polar",
            Kind::Pinv => "pinv",
        }
    }

    pub fn parse(s: &str) -> Option<Kind> {
        Kind::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub tol: f64,
    pub cluster_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { tol: 1e-8, cluster_tol: 1e-8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Failure {
    Parse,
    Precondition,
    Verification,
}

/// A failed command: the exit status and the diagnostic line.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub failure: Failure,
    pub message: String,
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        CliError { failure: Failure::Parse, message: message.into() }
    }

    pub fn precondition(message: impl Into<String>) -> Self {
        CliError { failure: Failure::Precondition, message: message.into() }
    }

    pub fn verification(message: impl Into<String>) -> Self {
        CliError { failure: Failure::Verification, message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self.failure {
            Failure::Parse => 2,
            Failure::Precondition => 3,
            Failure::Verification => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.failure {
            Failure::Parse => "parse error",
            Failure::Precondition => "precondition failed",
            Failure::Verification => "verification failed",
        };
        write!(f, "{what}: {}", self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NotOrthonormal { .. } | Error::PenroseViolation { .. } => CliError::verification(e.to_string()),
            _ => CliError::precondition(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::parse(e.to_string())
    }
}

pub(crate) fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))
}

pub(crate) fn read_matrix(path: &Path) -> Result<DualMatrix, CliError> {
    let file: MatrixFile = read_json(path)?;
    file.to_matrix().map_err(|e| CliError::parse(format!("{}: {e}", path.display())))
}

pub(crate) fn read_square(path: &Path) -> Result<DualMatrix, CliError> {
    let m = read_matrix(path)?;
    m.ensure_square()?;
    Ok(m)
}

pub(crate) fn structure_name(s: Structure) -> &'static str {
    match s {
        Structure::Symmetric => "symmetric",
        Structure::Hermitian => "hermitian",
        Structure::TOrthogonal => "t_orthogonal",
        Structure::Unitary => "unitary",
    }
}

fn list(xs: &[f64]) -> String {
    let items: Vec<String> = xs.iter().map(f64::to_string).collect();
    format!("[{}]", items.join(","))
}

/// Prints `form=1` with `sigma=[σ₁,σ₂]`, or `form=2` with `sigma` and
/// `sigma_prime`, followed by the reconstruction residual.
pub fn cmd_classify(input: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let m = read_matrix(input)?;
    let t = LaguerreTransform::new(m)?;
    let c = classify_transform(&t)?;
    match &c.form {
        LaguerreForm::Form1 { sigma, .. } => writeln!(out, "form=1\nsigma={}", list(sigma))?,
        LaguerreForm::Form2 { sigma, sigma_prime, .. } => {
            writeln!(out, "form=2\nsigma={sigma}\nsigma_prime={sigma_prime}")?
        }
    }
    writeln!(out, "residual={:e}", c.residual)?;
    Ok(())
}
