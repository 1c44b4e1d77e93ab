//! Maximum-determinant completion of partial matrices with chordal pattern.
//!
//! Two independent routes produce the same matrix: filling the clique tree
//! outward from its root with `M_iS · M_SS⁻¹ · M_Sj`, or inverting the local
//! inverse assembled from the specified blocks.

use std::collections::BTreeMap;

use crate::chordal::{CliqueTree, SparsityPattern};
use crate::error::{Error, Result};
use crate::localinv::local_inverse;
use crate::matcore::{invert, ldu_factor, logdet, numerical_rank, DenseMatrix};
use crate::report::Check;

/// Relative singular-value cutoff for the fill-rank check.
pub const RANK_TOL: f64 = 1e-9;

/// Numeric entries on a sparsity pattern. Unspecified positions are absent,
/// not zero. Both orientations of every pattern edge are stored, so values
/// need not be symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialMatrix {
    pattern: SparsityPattern,
    diag: Vec<f64>,
    offdiag: BTreeMap<(usize, usize), f64>,
}

impl PartialMatrix {
    /// Builds a partial matrix from `(i, j, value)` triples; the pattern is
    /// read off the off-diagonal positions. Every diagonal entry and both
    /// orientations of each off-diagonal position must be present exactly once.
    pub fn from_entries(n: usize, entries: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimensions("0x0".into()));
        }
        let mut diag = vec![None; n];
        let mut offdiag = BTreeMap::new();
        for (i, j, v) in entries {
            for idx in [i, j] {
                if idx >= n {
                    return Err(Error::IndexOutOfRange { index: idx, n });
                }
            }
            if !v.is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
            let duplicate = if i == j {
                diag[i].replace(v).is_some()
            } else {
                offdiag.insert((i, j), v).is_some()
            };
            if duplicate {
                return Err(Error::InvalidArgument(format!("entry ({i}, {j}) given twice")));
            }
        }
        let diag = diag
            .iter()
            .enumerate()
            .map(|(i, d)| d.ok_or(Error::Unspecified(i, i)))
            .collect::<Result<Vec<_>>>()?;
        if let Some(&(i, j)) = offdiag.keys().find(|&&(i, j)| !offdiag.contains_key(&(j, i))) {
            return Err(Error::Unspecified(j, i));
        }
        let pattern = SparsityPattern::from_edges(n, offdiag.keys().copied())?;
        Ok(Self { pattern, diag, offdiag })
    }

    /// The entries of `m` on `pattern` (plus the diagonal).
    pub fn restrict(m: &DenseMatrix, pattern: &SparsityPattern) -> Result<Self> {
        let n = pattern.n();
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: (n, n),
                got: (m.rows(), m.cols()),
            });
        }
        let mut offdiag = BTreeMap::new();
        for (i, j) in pattern.edges() {
            offdiag.insert((i, j), m[(i, j)]);
            offdiag.insert((j, i), m[(j, i)]);
        }
        Ok(Self {
            pattern: pattern.clone(),
            diag: m.diagonal(),
            offdiag,
        })
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn pattern(&self) -> &SparsityPattern {
        &self.pattern
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        if i == j {
            self.diag.get(i).copied()
        } else {
            self.offdiag.get(&(i, j)).copied()
        }
    }

    /// Fully specified principal block on `nodes`.
    pub fn block(&self, nodes: &[usize]) -> Result<DenseMatrix> {
        let d = nodes.len();
        let mut data = Vec::with_capacity(d * d);
        for &i in nodes {
            for &j in nodes {
                data.push(self.get(i, j).ok_or(Error::Unspecified(i, j))?);
            }
        }
        DenseMatrix::new(d, d, data)
    }

    /// All specified entries in row-major order.
    pub fn entries(&self) -> Vec<(usize, usize, f64)> {
        let mut out: Vec<(usize, usize, f64)> = self
            .offdiag
            .iter()
            .map(|(&(i, j), &v)| (i, j, v))
            .chain(self.diag.iter().enumerate().map(|(i, &v)| (i, i, v)))
            .collect();
        out.sort_by_key(|&(i, j, _)| (i, j));
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.offdiag
            .iter()
            .all(|(&(i, j), v)| self.offdiag.get(&(j, i)) == Some(v))
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().iter().fold(0.0, |m, e| m.max(e.2.abs()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Recursive,
    LocalInverse,
    /// Handed in from outside, e.g. read from a file.
    Supplied,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::Recursive => "recursive",
            Route::LocalInverse => "localinv",
            Route::Supplied => "supplied",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Completion {
    pub matrix: DenseMatrix,
    pub pattern: SparsityPattern,
    /// Unspecified positions, row-major.
    pub filled: Vec<(usize, usize)>,
    pub route: Route,
    /// Largest deviation from the partial matrix on specified positions
    /// before those entries were restored (zero for the recursive route).
    pub pattern_residual: f64,
}

impl Completion {
    /// Wraps an externally produced completion, measuring its agreement with `m0`.
    pub fn supplied(m0: &PartialMatrix, matrix: DenseMatrix) -> Result<Self> {
        let residual = pattern_deviation(m0, &matrix)?;
        Ok(Self {
            filled: m0.pattern().unspecified_positions(),
            pattern: m0.pattern().clone(),
            matrix,
            route: Route::Supplied,
            pattern_residual: residual,
        })
    }
}

fn pattern_deviation(m0: &PartialMatrix, m: &DenseMatrix) -> Result<f64> {
    if m.rows() != m0.n() || m.cols() != m0.n() {
        return Err(Error::DimensionMismatch {
            expected: (m0.n(), m0.n()),
            got: (m.rows(), m.cols()),
        });
    }
    Ok(m0
        .entries()
        .iter()
        .fold(0.0, |acc, &(i, j, v)| acc.max((m[(i, j)] - v).abs())))
}

fn check_size(m0: &PartialMatrix, ct: &CliqueTree) -> Result<()> {
    if m0.n() != ct.n() {
        return Err(Error::DimensionMismatch {
            expected: (ct.n(), ct.n()),
            got: (m0.n(), m0.n()),
        });
    }
    Ok(())
}

/// Fills the clique tree root-first. When clique `K` joins through separator
/// `S`, every already-determined node `i ∉ S` and new node `j ∈ K∖S` get
/// `M_ij = M_iS M_SS⁻¹ M_Sj` and `M_ji = M_jS M_SS⁻¹ M_Si`.
pub fn complete_recursive(m0: &PartialMatrix, ct: &CliqueTree) -> Result<Completion> {
    check_size(m0, ct)?;
    let n = m0.n();
    let mut m = DenseMatrix::zeros(n, n);
    for (i, j, v) in m0.entries() {
        m[(i, j)] = v;
    }
    let mut known = vec![false; n];
    for (k, parent) in ct.traversal() {
        let clique = &ct.cliques()[k];
        if let Some(e) = parent {
            let sep = &ct.edges()[e].separator;
            let fresh: Vec<usize> = clique.iter().copied().filter(|&v| !known[v]).collect();
            let old: Vec<usize> = (0..n).filter(|&v| known[v] && sep.binary_search(&v).is_err()).collect();
            if !fresh.is_empty() && !old.is_empty() {
                let x = invert(&m.principal(sep)).map_err(|_| Error::SingularSeparator { nodes: sep.clone() })?;
                let upper = &(&m.submatrix(&old, sep) * &x) * &m.submatrix(sep, &fresh);
                let lower = &(&m.submatrix(&fresh, sep) * &x) * &m.submatrix(sep, &old);
                for (a, &i) in old.iter().enumerate() {
                    for (b, &j) in fresh.iter().enumerate() {
                        m[(i, j)] = upper[(a, b)];
                        m[(j, i)] = lower[(b, a)];
                    }
                }
            }
        }
        for &v in clique {
            known[v] = true;
        }
    }
    Ok(Completion {
        matrix: m,
        pattern: m0.pattern().clone(),
        filled: m0.pattern().unspecified_positions(),
        route: Route::Recursive,
        pattern_residual: 0.0,
    })
}

/// Inverts the local inverse. Specified entries are then restored exactly;
/// the deviation they had is kept in `pattern_residual`.
pub fn complete_via_local_inverse(m0: &PartialMatrix, ct: &CliqueTree) -> Result<Completion> {
    check_size(m0, ct)?;
    let inv = local_inverse(m0, ct)?;
    let mut m = invert(&inv)?;
    let residual = pattern_deviation(m0, &m)?;
    for (i, j, v) in m0.entries() {
        m[(i, j)] = v;
    }
    Ok(Completion {
        matrix: m,
        pattern: m0.pattern().clone(),
        filled: m0.pattern().unspecified_positions(),
        route: Route::LocalInverse,
        pattern_residual: residual,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompletionReport {
    pub checks: Vec<Check>,
    /// Checks that did not apply, as `name: reason`.
    pub skipped: Vec<String>,
    /// `log det M`, when `M` is symmetric positive definite.
    pub logdet: Option<f64>,
}

impl CompletionReport {
    pub fn passed(&self) -> bool {
        crate::report::all_pass(&self.checks)
    }
}

/// True when all unpivoted pivots of a symmetric matrix are positive.
pub fn is_spd(m: &DenseMatrix) -> bool {
    m.is_symmetric(1e-12 * m.max_abs()) && ldu_factor(m).is_ok_and(|f| f.pivots().iter().all(|&p| p > 0.0))
}

/// Probe steps `±1e-2` and `±5e-2`, scaled by the largest entry of `m`.
pub fn default_probe_steps(m: &DenseMatrix) -> Vec<f64> {
    let s = m.max_abs();
    [-5e-2, -1e-2, 1e-2, 5e-2].iter().map(|f| f * s).collect()
}

/// `log det` of `M + step·(E_ij + E_ji)` for each step. A step that leaves
/// the positive-definite cone yields its own error without aborting the rest.
pub fn perturbation_probe(c: &Completion, (i, j): (usize, usize), steps: &[f64]) -> Result<Vec<Result<f64>>> {
    let n = c.matrix.rows();
    if i >= n || j >= n || i == j || c.pattern.has_edge(i, j) {
        return Err(Error::InvalidArgument(format!("({i}, {j}) is not a filled position")));
    }
    if !c.matrix.is_symmetric(1e-12 * c.matrix.max_abs()) {
        return Err(Error::InvalidArgument(
            "perturbation probe needs a symmetric matrix".into(),
        ));
    }
    Ok(steps
        .iter()
        .map(|&h| {
            let mut p = c.matrix.clone();
            p[(i, j)] += h;
            p[(j, i)] += h;
            logdet(&p)
        })
        .collect())
}

/// Checks the fill at `(i, j)` against the block rank condition: with block 1
/// = `{i}`, block 3 = `{j}` and block 2 the indices between, adding the
/// filled column (row, below the diagonal) must not raise the rank.
fn fill_raises_rank(m: &DenseMatrix, i: usize, j: usize) -> bool {
    let span = |a: usize, b: usize| (a..=b).collect::<Vec<_>>();
    let (full, reduced) = if i < j {
        let rows = span(i, j - 1);
        (
            m.submatrix(&rows, &span(i + 1, j)),
            m.submatrix(&rows, &span(i + 1, j - 1)),
        )
    } else {
        let cols = span(j, i - 1);
        (
            m.submatrix(&span(j + 1, i), &cols),
            m.submatrix(&span(j + 1, i - 1), &cols),
        )
    };
    numerical_rank(&full, RANK_TOL) > numerical_rank(&reduced, RANK_TOL)
}

/// Verifies a completion: zeros of the inverse off the pattern, agreement on
/// the pattern, the fill rank condition for band patterns, and for symmetric
/// positive definite matrices, that each fill is a stationary maximum of
/// `log det`.
pub fn verify_completion(c: &Completion, tol: f64) -> Result<CompletionReport> {
    let m = &c.matrix;
    let inv = invert(m)?;
    let mut checks = Vec::new();
    let mut skipped = Vec::new();

    let off = c
        .filled
        .iter()
        .fold(0.0, |acc: f64, &(i, j)| acc.max(inv[(i, j)].abs()));
    checks.push(Check::below("inverse_zero_off_pattern", off, tol));
    checks.push(Check::at_most("pattern_agreement", c.pattern_residual, tol));

    match c.pattern.band_width() {
        Some(_) if !c.filled.is_empty() => {
            let raised = c.filled.iter().filter(|&&(i, j)| fill_raises_rank(m, i, j)).count();
            checks.push(Check::at_most("fill_rank_minimal", raised as f64, 0.0));
        }
        Some(_) => skipped.push("fill_rank_minimal: no filled positions".into()),
        None => skipped.push("fill_rank_minimal: pattern is not a band".into()),
    }

    let mut ld = None;
    if !is_spd(m) {
        skipped.push("logdet_maximal: matrix is not symmetric positive definite".into());
        skipped.push("logdet_stationary: matrix is not symmetric positive definite".into());
    } else {
        let f0 = logdet(m)?;
        ld = Some(f0);
        let upper: Vec<(usize, usize)> = c.filled.iter().copied().filter(|&(i, j)| i < j).collect();
        if upper.is_empty() {
            skipped.push("logdet_maximal: no filled positions".into());
            skipped.push("logdet_stationary: no filled positions".into());
        } else {
            let steps = default_probe_steps(m);
            let mut rise = f64::NEG_INFINITY;
            for &pos in &upper {
                // leaving the PD cone counts as a decrease
                for v in perturbation_probe(c, pos, &steps)?.into_iter().flatten() {
                    rise = rise.max(v - f0);
                }
            }
            checks.push(Check::below("logdet_maximal", rise, 0.0));

            let h = 1e-6 * m.max_abs();
            let mut slope_err = 0.0f64;
            for &(i, j) in &upper {
                let vals = perturbation_probe(c, (i, j), &[h, -h])?;
                let (Ok(fp), Ok(fm)) = (&vals[0], &vals[1]) else {
                    return Err(Error::NonPositiveDeterminant);
                };
                let slope = (fp - fm) / (2.0 * h);
                slope_err = slope_err.max((slope - 2.0 * inv[(i, j)]).abs());
            }
            checks.push(Check::below("logdet_stationary", slope_err, 1e-6 * inv.max_abs()));
        }
    }

    Ok(CompletionReport {
        checks,
        skipped,
        logdet: ld,
    })
}
