use std::collections::BTreeMap;
use std::path::Path;

use super::format::{BlockSummary, MatrixFile, ResultDocument};
use super::{read_square, structure_name, CliError, Kind, Tolerances};
use crate::linalg::{DualMatrix, Flavor, Structure};
use crate::spectral::{self, Eigenvalues, SpectralOptions};
use crate::svd::{self, penrose_residuals, Pseudoinverse, SigmaBlock, SvdOptions};

struct Builder {
    factors: BTreeMap<String, MatrixFile>,
    residuals: BTreeMap<String, f64>,
}

impl Builder {
    fn new() -> Self {
        Builder { factors: BTreeMap::new(), residuals: BTreeMap::new() }
    }

    fn factor(&mut self, name: &str, m: &DualMatrix) {
        self.factors.insert(name.to_owned(), MatrixFile::from_matrix(m));
    }

    fn structure(&mut self, name: &str, m: &DualMatrix, kind: Structure) -> Result<(), CliError> {
        let r = m.structure_residual(kind)?;
        self.residuals.insert(format!("{name}.{}", structure_name(kind)), r);
        Ok(())
    }

    fn reconstruction(&mut self, m: &DualMatrix, approx: &DualMatrix) {
        self.residuals.insert("reconstruction".into(), approx.max_abs_diff(m) / m.norm().max(1.0));
    }

    fn finish(self, kind: Kind, outcome: &str, summary: Option<BlockSummary>) -> ResultDocument {
        ResultDocument {
            kind: kind.as_str().into(),
            outcome: outcome.into(),
            factors: self.factors,
            summary,
            residuals: self.residuals,
        }
    }
}

fn svd_summary(blocks: &[SigmaBlock]) -> BlockSummary {
    let mut s = BlockSummary::default();
    for b in blocks {
        let (sigma, sigma_prime) = b.parameters();
        s.sigma.push(sigma);
        s.sigma_prime.push(sigma_prime);
        s.block_sizes.push(b.size());
    }
    s
}

fn spectral_summary(e: &Eigenvalues) -> BlockSummary {
    let mut s = BlockSummary::default();
    match e {
        Eigenvalues::T(diag) => {
            for d in diag {
                s.sigma.push(d.std);
                s.sigma_prime.push(d.inf);
                s.block_sizes.push(1);
            }
        }
        Eigenvalues::Star(blocks) => {
            for b in blocks {
                s.sigma.push(b.sigma);
                s.sigma_prime.push(b.sigma_prime);
                s.block_sizes.push(b.size);
            }
        }
    }
    s
}

/// Runs one decomposition of the matrix in `input`.
pub fn cmd_decompose(input: &Path, kind: Kind, tol: &Tolerances) -> Result<ResultDocument, CliError> {
    let m = read_square(input)?;
    let svd_opts = SvdOptions { split_tol: tol.tol, cluster_tol: tol.cluster_tol };
    let spectral_opts = SpectralOptions { tol: tol.tol, cluster_tol: tol.cluster_tol };
    let mut doc = Builder::new();

    let document = match kind {
        Kind::TSvd | Kind::StarSvd => {
            let flavor = if kind == Kind::TSvd { Flavor::T } else { Flavor::Star };
            let s = svd::svd_with(&m, flavor, &svd_opts)?;
            doc.factor("u", &s.u);
            doc.factor("sigma", &s.sigma);
            doc.factor("v", &s.v);
            doc.reconstruction(&m, &s.reconstruct());
            doc.structure("u", &s.u, flavor.isometry())?;
            doc.structure("v", &s.v, flavor.isometry())?;
            doc.finish(kind, "ok", Some(svd_summary(&s.blocks)))
        }
        Kind::TSpectral | Kind::StarSpectral => {
            let (d, flavor) = if kind == Kind::TSpectral {
                (spectral::t_spectral_with(&m, &spectral_opts)?, Flavor::T)
            } else {
                (spectral::star_spectral_with(&m, &spectral_opts)?, Flavor::Star)
            };
            doc.factor("v", &d.v);
            doc.factor("sigma", &d.sigma());
            doc.reconstruction(&m, &d.reconstruct());
            doc.structure("v", &d.v, flavor.isometry())?;
            doc.finish(kind, "ok", Some(spectral_summary(&d.eigenvalues)))
        }
        Kind::TPolar => {
            let p = svd::t_polar_with(&m, &svd_opts)?;
            doc.factor("u", &p.u);
            doc.factor("p", &p.p);
            doc.reconstruction(&m, &(&p.u * &p.p));
            doc.structure("u", &p.u, Structure::TOrthogonal)?;
            doc.structure("p", &p.p, Structure::Symmetric)?;
            doc.finish(kind, "ok", None)
        }
        Kind::Pinv => match svd::pinv_t_with(&m, &svd_opts)? {
            Pseudoinverse::Exists(x) => {
                for (i, r) in penrose_residuals(&m, &x)?.into_iter().enumerate() {
                    doc.residuals.insert(format!("penrose_{}", i + 1), r);
                }
                doc.factor("x", &x);
                doc.finish(kind, "ok", None)
            }
            Pseudoinverse::NonExistent => doc.finish(kind, "nonexistent", None),
        },
    };
    Ok(document)
}
