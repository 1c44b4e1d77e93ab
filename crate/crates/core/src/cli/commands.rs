//! The work behind each subcommand. Every command returns a [`Report`] and
//! an exit code; file output happens here, printing happens in the caller.

use std::fs;
use std::path::Path;

use crate::chordal::{is_chordal, Chordality, CliqueTree};
use crate::completion::{complete_recursive, complete_via_local_inverse, verify_completion, Completion, PartialMatrix};
use crate::error::{Error, Result};
use crate::factor::{dual_direction_check, factor_inverse, FactorSet};
use crate::localinv::local_inverse;
use crate::matcore::DenseMatrix;
use crate::report::Check;
use crate::symbol::{complete_symbol, reciprocal_residual, SymbolOptions};

use super::format::{read_dense, read_partial, write_dense, write_square};
use super::report::{one_based, Report};
use super::{EXIT_OK, EXIT_VERIFY};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum RouteArg {
    Recursive,
    Localinv,
    Both,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn load_partial(path: &Path) -> Result<PartialMatrix> {
    read_partial(&read(path)?)
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn tree_details(r: &mut Report, ct: &CliqueTree) {
    r.detail("cliques", one_based(ct.cliques()));
    let separators: Vec<Vec<usize>> = ct.separators().map(|s| s.to_vec()).collect();
    r.detail("separators", one_based(&separators));
    let tree_edges: Vec<[usize; 2]> = ct.edges().iter().map(|e| [e.a + 1, e.b + 1]).collect();
    r.detail("tree_edges", tree_edges);
    r.detail("c_b", ct.clique_count());
    r.detail("c_o", ct.separator_count());
    r.detail("c", ct.block_count());
    r.detail("d", ct.block_sizes());
    r.detail("m", ct.total_size());
}

fn verdict_code(r: &mut Report) -> i32 {
    r.conclude();
    if r.passed() {
        EXIT_OK
    } else {
        EXIT_VERIFY
    }
}

/// Chordality, certificate and clique tree. A non-chordal pattern is a
/// verdict, not an error.
pub fn analyze(input: &Path) -> Result<(Report, i32)> {
    let m0 = load_partial(input)?;
    let p = m0.pattern();
    let mut r = Report::new("analyze", input.display().to_string());
    r.detail("n", p.n());
    r.detail("edges", p.edge_count());
    r.detail("bandwidth", p.band_width());
    match is_chordal(p) {
        Chordality::Chordal(peo) => {
            r.detail("chordal", true);
            r.detail("peo", peo.as_slice().iter().map(|v| v + 1).collect::<Vec<_>>());
            match CliqueTree::from_pattern(p) {
                Ok(ct) => tree_details(&mut r, &ct),
                Err(Error::Disconnected { components }) => r.detail("disconnected_components", components),
                Err(e) => return Err(e),
            }
            r.verdict = "chordal".into();
        }
        Chordality::NotChordal(cycle) => {
            r.detail("chordal", false);
            r.detail("chordless_cycle", cycle.iter().map(|v| v + 1).collect::<Vec<_>>());
            r.verdict = "not-chordal".into();
        }
    }
    Ok((r, EXIT_OK))
}

pub fn complete(input: &Path, output: &Path, route: RouteArg, tol: f64) -> Result<(Report, i32)> {
    let m0 = load_partial(input)?;
    let ct = CliqueTree::from_pattern(m0.pattern())?;
    let mut r = Report::new("complete", input.display().to_string());
    let c = match route {
        RouteArg::Recursive => complete_recursive(&m0, &ct)?,
        RouteArg::Localinv => complete_via_local_inverse(&m0, &ct)?,
        RouteArg::Both => {
            let a = complete_recursive(&m0, &ct)?;
            let b = complete_via_local_inverse(&m0, &ct)?;
            let scale = a.matrix.max_abs();
            r.checks.push(Check::at_most(
                "routes agree (relative)",
                a.matrix.max_abs_diff(&b.matrix) / scale,
                tol,
            ));
            r.checks.push(Check::at_most(
                "local-inverse route agrees on pattern",
                b.pattern_residual,
                tol,
            ));
            a
        }
    };
    r.detail("route", format!("{route:?}").to_lowercase());
    r.detail(
        "filled",
        c.filled.iter().map(|&(i, j)| [i + 1, j + 1]).collect::<Vec<_>>(),
    );
    r.detail("output", output.display().to_string());
    write(output, &write_square(&c.matrix))?;
    let code = verdict_code(&mut r);
    Ok((r, code))
}

pub fn localinv(input: &Path, output: &Path, tol: f64) -> Result<(Report, i32)> {
    let m0 = load_partial(input)?;
    let ct = CliqueTree::from_pattern(m0.pattern())?;
    let inv = local_inverse(&m0, &ct)?;
    let m = complete_recursive(&m0, &ct)?.matrix;
    let mut r = Report::new("localinv", input.display().to_string());
    r.detail("terms", ct.block_count());
    r.detail("output", output.display().to_string());
    let eye = DenseMatrix::identity(m.rows());
    r.checks
        .push(Check::at_most("M*Minv = I", (&m * &inv).max_abs_diff(&eye), tol));
    let nonzero_off = m0
        .pattern()
        .unspecified_positions()
        .iter()
        .filter(|&&(i, j)| inv[(i, j)] != 0.0)
        .count();
    r.checks.push(Check::at_most(
        "nonzero entries off the pattern",
        nonzero_off as f64,
        0.0,
    ));
    write(output, &write_square(&inv))?;
    let code = verdict_code(&mut r);
    Ok((r, code))
}

pub fn factor(input: &Path, out_dir: &Path, tol: f64) -> Result<(Report, i32)> {
    let m0 = load_partial(input)?;
    let ct = CliqueTree::from_pattern(m0.pattern())?;
    let m = complete_recursive(&m0, &ct)?.matrix;
    let fs = FactorSet::build(&m, &ct)?;
    let local = factor_inverse(&m0, &ct)?.inverse();
    let mut r = Report::new("factor", input.display().to_string());
    tree_details(&mut r, &ct);
    r.checks = fs.checks(tol);
    r.checks.push(Check::at_most(
        "A^T*C^-1*A = local inverse (bitwise)",
        local.max_abs_diff(&local_inverse(&m0, &ct)?),
        0.0,
    ));
    fs::create_dir_all(out_dir).map_err(|e| Error::Io(format!("{}: {e}", out_dir.display())))?;
    for (name, mat) in [("A", &fs.a), ("C", &fs.c), ("F", &fs.f), ("G", &fs.g)] {
        write(&out_dir.join(format!("{name}.txt")), &write_dense(mat))?;
    }
    r.detail("output_dir", out_dir.display().to_string());
    let code = verdict_code(&mut r);
    Ok((r, code))
}

/// Parses a comma-separated band `a_{−p},…,a_p`.
pub fn parse_band(band: &str) -> Result<Vec<f64>> {
    band.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("bad band coefficient '{}'", s.trim())))
        })
        .collect()
}

pub fn symbol(band: &str, truncation: usize, grid: usize, tol: f64) -> Result<(Report, i32)> {
    let a_band = parse_band(band)?;
    let opts = SymbolOptions {
        truncation,
        grid,
        ..SymbolOptions::default()
    };
    let sc = complete_symbol(&a_band, &opts)?;
    let mut r = Report::new("symbol", band.to_string());
    r.detail("p", sc.p);
    r.detail("K", truncation);
    r.detail("grid", grid);
    r.detail("b", &sc.b);
    r.detail("a_ext", &sc.a_ext);
    r.detail("iterations", sc.iterations);
    r.detail("truncation_error", sc.truncation_error());

    let mut table = format!("{:>4}  {:>24}  {:>24}\n", "k", "a_k", "b_k");
    for k in 0..=sc.truncation() {
        let b = if k <= sc.p {
            format!("{:>24.16e}", sc.b[k])
        } else {
            format!("{:>24}", 0)
        };
        table.push_str(&format!("{k:>4}  {:>24.16e}  {b}\n", sc.coefficient(k as i64)));
    }
    r.table = Some(table);

    let scale = sc.a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    r.checks.push(Check::at_most(
        "band matched by 1/q (relative)",
        sc.residual / scale,
        tol,
    ));
    // s is truncated at K, so q*s misses 1 by about 2·max|q|·Σ_{k>K}|a_k|.
    let q_max: f64 = sc.b[0].abs() + 2.0 * sc.b[1..].iter().map(|v| v.abs()).sum::<f64>();
    let truncation = 2.0 * q_max * sc.discarded_tail();
    r.detail("discarded_tail", sc.discarded_tail());
    r.checks.push(Check::at_most(
        "q*s = 1 on the grid",
        reciprocal_residual(&sc),
        tol + truncation,
    ));
    let code = verdict_code(&mut r);
    Ok((r, code))
}

/// Full verification of the completion of `input`, or of a completion read
/// from `supplied`. With `all`, also cross-checks the routes, the factor
/// identities and, where the inverse is also banded, the dual direction.
pub fn verify(input: &Path, supplied: Option<&Path>, all: bool, tol: f64) -> Result<(Report, i32)> {
    let m0 = load_partial(input)?;
    let mut r = Report::new("verify", input.display().to_string());
    let ct = match CliqueTree::from_pattern(m0.pattern()) {
        Ok(ct) => ct,
        Err(Error::NotChordal { cycle }) => {
            r.detail("chordless_cycle", cycle.iter().map(|v| v + 1).collect::<Vec<_>>());
            r.verdict = "not-chordal".into();
            return Ok((r, super::EXIT_NUMERIC));
        }
        Err(e) => return Err(e),
    };
    let c = match supplied {
        Some(path) => Completion::supplied(&m0, read_dense(&read(path)?)?)?,
        None => complete_recursive(&m0, &ct)?,
    };
    r.detail("n", m0.n());
    r.detail("route", c.route.as_str());
    r.detail("filled", c.filled.len());
    let cr = verify_completion(&c, tol)?;
    r.detail("logdet", cr.logdet);
    r.checks = cr.checks;
    r.skipped = cr.skipped;

    if all {
        let eye = DenseMatrix::identity(m0.n());
        let inv = local_inverse(&m0, &ct)?;
        r.checks.push(Check::at_most(
            "local inverse * M = I",
            (&inv * &c.matrix).max_abs_diff(&eye),
            tol,
        ));
        if supplied.is_none() {
            let other = complete_via_local_inverse(&m0, &ct)?;
            let scale = c.matrix.max_abs();
            r.checks.push(Check::at_most(
                "routes agree (relative)",
                c.matrix.max_abs_diff(&other.matrix) / scale,
                tol,
            ));
        }
        let fs = FactorSet::build(&c.matrix, &ct)?;
        r.checks.extend(fs.checks(tol));
        match dual_direction_check(&c.matrix, &ct, tol) {
            Ok(dual) => {
                r.detail("d_minus_ct", dual.d_minus_ct);
                r.checks.extend(dual.checks);
            }
            Err(Error::PatternViolation { entries }) => r.skipped.push(format!(
                "dual direction: {} entries of M or M^-1 lie off the pattern",
                entries.len()
            )),
            Err(e) => return Err(e),
        }
    }
    let code = verdict_code(&mut r);
    Ok((r, code))
}
