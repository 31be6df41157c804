use std::io::Write;
use std::path::Path;

use nalgebra::DMatrix;

use super::format::{BlockSummary, ResultDocument};
use super::{read_json, read_square, structure_name, CliError, Kind};
use crate::linalg::{DualMatrix, Flavor, Structure};
use crate::svd::penrose_residuals;

/// Residuals collected in order; the first failing one names the error.
struct Report {
    tol: f64,
    entries: Vec<(String, f64, bool)>,
}

impl Report {
    /// Passes when `value ≤ tol`.
    fn bound(&mut self, name: impl Into<String>, value: f64) {
        let ok = value <= self.tol;
        self.entries.push((name.into(), value, ok));
    }

    fn structure(&mut self, name: &str, m: &DualMatrix, kind: Structure) -> Result<(), CliError> {
        let r = m.structure_residual(kind)?;
        self.bound(format!("{name}.{}", structure_name(kind)), r);
        Ok(())
    }
}

fn factor(doc: &ResultDocument, name: &str, n: usize) -> Result<DualMatrix, CliError> {
    let file = doc.factors.get(name).ok_or_else(|| CliError::parse(format!("result has no factor `{name}`")))?;
    let m = file.to_matrix().map_err(|e| CliError::parse(format!("factor `{name}`: {e}")))?;
    if m.shape() != (n, n) {
        return Err(CliError::precondition(format!(
            "factor `{name}` is {}×{}, input is {n}×{n}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m)
}

fn summary(doc: &ResultDocument) -> Result<&BlockSummary, CliError> {
    let s = doc.summary.as_ref().ok_or_else(|| CliError::parse("result has no summary"))?;
    if s.sigma.len() != s.block_sizes.len() || s.sigma_prime.len() != s.block_sizes.len() {
        return Err(CliError::parse("summary lists have different lengths"));
    }
    Ok(s)
}

fn relative(m: &DualMatrix, approx: &DualMatrix) -> f64 {
    approx.max_abs_diff(m) / m.norm().max(1.0)
}

/// Blocks of `sigma` laid out by `sizes`: `None` when the sizes do not tile it.
fn block_starts(sizes: &[usize], n: usize) -> Option<Vec<usize>> {
    let mut starts = Vec::with_capacity(sizes.len());
    let mut at = 0;
    for &s in sizes {
        if s != 1 && s != 2 {
            return None;
        }
        starts.push(at);
        at += s;
    }
    (at == n).then_some(starts)
}

/// How far `sigma` is from its block-diagonal shape: entries outside the
/// blocks, malformed `2×2` blocks, and `1×1` blocks with the wrong kind of
/// entry. `scalar_defect` scores a `1×1` entry `(std, inf)`.
fn block_form_defect(sigma: &DualMatrix, sizes: &[usize], scale: f64, scalar_defect: fn(f64, f64) -> f64) -> f64 {
    let n = sigma.nrows();
    let Some(starts) = block_starts(sizes, n) else {
        return f64::INFINITY;
    };
    let mut owner = vec![0; n];
    for (b, (&start, &size)) in starts.iter().zip(sizes).enumerate() {
        owner[start..start + size].fill(b);
    }
    let mut defect = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            if owner[i] != owner[j] {
                defect = defect.max(sigma.get(i, j).max_abs());
            }
        }
    }
    for (&start, &size) in starts.iter().zip(sizes) {
        let d = |i: usize, j: usize| sigma.get(start + i, start + j);
        if size == 1 {
            defect = defect.max(scalar_defect(d(0, 0).std, d(0, 0).inf));
        } else {
            let sigma_prime = d(1, 0).inf;
            defect = defect
                .max((d(0, 0).std - d(1, 1).std).abs())
                .max(d(0, 0).inf.abs())
                .max(d(1, 1).inf.abs())
                .max(d(0, 1).std.abs())
                .max(d(1, 0).std.abs())
                .max((d(0, 1).inf + sigma_prime).abs());
            if sigma_prime.abs() <= scale * 1e-8 {
                defect = f64::INFINITY;
            }
        }
    }
    defect / scale
}

/// Largest mismatch between the blocks of `sigma` and the summary values.
fn summary_defect(sigma: &DualMatrix, s: &BlockSummary, scale: f64) -> f64 {
    let Some(starts) = block_starts(&s.block_sizes, sigma.nrows()) else {
        return f64::INFINITY;
    };
    let mut defect = 0.0_f64;
    for (b, &start) in starts.iter().enumerate() {
        let (std, inf) = if s.block_sizes[b] == 1 {
            let d = sigma.get(start, start);
            (d.std, d.inf)
        } else {
            (sigma.get(start, start).std, sigma.get(start + 1, start).inf)
        };
        defect = defect.max((std - s.sigma[b]).abs()).max((inf - s.sigma_prime[b]).abs());
    }
    defect / scale
}

/// Appreciable blocks first by σ descending, then infinitesimal blocks by
/// `|σ′|` descending, then zeros; σ itself nonnegative.
fn order_defect(s: &BlockSummary, scale: f64, tol: f64) -> f64 {
    let cut = tol * scale;
    let keyed: Vec<(u8, f64)> = s
        .sigma
        .iter()
        .zip(&s.sigma_prime)
        .map(|(&sigma, &sigma_prime)| {
            if sigma.abs() > cut {
                (0, sigma)
            } else if sigma_prime.abs() > cut {
                (1, sigma_prime.abs())
            } else {
                (2, 0.0)
            }
        })
        .collect();
    let mut defect = s.sigma.iter().map(|&x| (-x).max(0.0)).fold(0.0, f64::max);
    for w in keyed.windows(2) {
        let ((g0, k0), (g1, k1)) = (w[0], w[1]);
        if g1 < g0 {
            return f64::INFINITY;
        }
        if g0 == g1 {
            defect = defect.max(k1 - k0);
        }
    }
    defect / scale
}

fn check_svd(r: &mut Report, m: &DualMatrix, doc: &ResultDocument, flavor: Flavor) -> Result<(), CliError> {
    let n = m.nrows();
    let (u, sigma, v) = (factor(doc, "u", n)?, factor(doc, "sigma", n)?, factor(doc, "v", n)?);
    let s = summary(doc)?;
    let scale = m.norm().max(1.0);
    r.bound("reconstruction", relative(m, &(&(&u * &sigma) * &flavor.adjoint(&v))));
    r.structure("u", &u, flavor.isometry())?;
    r.structure("v", &v, flavor.isometry())?;
    match flavor {
        Flavor::T => r.bound("sigma.diagonal", block_form_defect(&sigma, &s.block_sizes, scale, |_, _| 0.0)),
        Flavor::Star => r.bound(
            "sigma.block_form",
            block_form_defect(&sigma, &s.block_sizes, scale, |std, inf| std.abs().min(inf.abs())),
        ),
    }
    r.bound("sigma.order", order_defect(s, scale, r.tol));
    r.bound("summary", summary_defect(&sigma, s, scale));
    Ok(())
}

fn check_spectral(r: &mut Report, m: &DualMatrix, doc: &ResultDocument, flavor: Flavor) -> Result<(), CliError> {
    let n = m.nrows();
    let (v, sigma) = (factor(doc, "v", n)?, factor(doc, "sigma", n)?);
    let s = summary(doc)?;
    let scale = m.norm().max(1.0);
    r.bound("reconstruction", relative(m, &(&(&v * &sigma) * &flavor.adjoint(&v))));
    r.structure("v", &v, flavor.isometry())?;
    match flavor {
        Flavor::T => r.bound("sigma.diagonal", block_form_defect(&sigma, &s.block_sizes, scale, |_, _| 0.0)),
        Flavor::Star => {
            r.bound("sigma.block_form", block_form_defect(&sigma, &s.block_sizes, scale, |_, inf| inf.abs()))
        }
    }
    r.bound("summary", summary_defect(&sigma, s, scale));
    Ok(())
}

/// `‖(I − AA⁺) B (I − A⁺A)‖`: a dual matrix `A + εB` has a pseudoinverse
/// exactly when this vanishes.
fn nonexistence_witness(m: &DualMatrix, tol: f64) -> Result<f64, CliError> {
    let scale = m.norm().max(1.0);
    let (a, b) = (m.std(), m.inf());
    let a_pinv = a
        .clone()
        .pseudo_inverse(tol * scale)
        .map_err(|e| CliError::precondition(format!("real pseudoinverse: {e}")))?;
    let n = a.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let w = (&id - a * &a_pinv) * b * (&id - &a_pinv * a);
    Ok(w.amax() / scale)
}

/// Re-verifies a result document against its input, printing one
/// `name=value ok|FAIL` line per invariant.
pub fn cmd_check(input: &Path, result: &Path, tol: f64, out: &mut dyn Write) -> Result<(), CliError> {
    let m = read_square(input)?;
    let doc: ResultDocument = read_json(result)?;
    let kind = Kind::parse(&doc.kind).ok_or_else(|| CliError::parse(format!("unknown kind `{}`", doc.kind)))?;
    let n = m.nrows();
    let mut r = Report { tol, entries: Vec::new() };

    match (kind, doc.outcome.as_str()) {
        (Kind::TSvd, "ok") => check_svd(&mut r, &m, &doc, Flavor::T)?,
        (Kind::StarSvd, "ok") => check_svd(&mut r, &m, &doc, Flavor::Star)?,
        (Kind::TSpectral, "ok") => check_spectral(&mut r, &m, &doc, Flavor::T)?,
        (Kind::StarSpectral, "ok") => check_spectral(&mut r, &m, &doc, Flavor::Star)?,
        (Kind::TPolar, "ok") => {
            let (u, p) = (factor(&doc, "u", n)?, factor(&doc, "p", n)?);
            r.bound("reconstruction", relative(&m, &(&u * &p)));
            r.structure("u", &u, Structure::TOrthogonal)?;
            r.structure("p", &p, Structure::Symmetric)?;
        }
        (Kind::Pinv, "ok") => {
            let x = factor(&doc, "x", n)?;
            for (i, res) in penrose_residuals(&m, &x)?.into_iter().enumerate() {
                r.bound(format!("penrose_{}", i + 1), res);
            }
        }
        (Kind::Pinv, "nonexistent") => {
            let w = nonexistence_witness(&m, tol)?;
            r.entries.push(("nonexistence".into(), w, w > tol));
        }
        (_, outcome) => return Err(CliError::parse(format!("outcome `{outcome}` is not valid for {kind}"))),
    }

    for (name, value, ok) in &r.entries {
        writeln!(out, "{name}={value:e} {}", if *ok { "ok" } else { "FAIL" })?;
    }
    match r.entries.iter().find(|e| !e.2) {
        Some((name, value, _)) => Err(CliError::verification(format!("{name} = {value:e}"))),
        None => Ok(()),
    }
}
