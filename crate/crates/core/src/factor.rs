//! The `AᵀCA` restatement of the local inverse formula.
//!
//! `A` (m × n, one 1 per row) maps node space to clique space: each clique and
//! each separator gets one row per member node. `C` is block diagonal with the
//! clique blocks of `M` and the negated separator blocks. Then
//! `M⁻¹ = AᵀC⁻¹A`, and with `G = C⁻¹AM`, `M = GᵀCG`.

use crate::chordal::{BlockKind, CliqueTree, SparsityPattern};
use crate::completion::PartialMatrix;
use crate::error::{BlockId, Error, Result};
use crate::matcore::{invert, numerical_rank, DenseMatrix};
use crate::report::Check;

/// The `m × n` incidence matrix: block rows in clique-tree block order
/// (cliques, then separators), ascending node index inside each block.
pub fn build_a(ct: &CliqueTree) -> DenseMatrix {
    let mut a = DenseMatrix::zeros(ct.total_size(), ct.n());
    let mut row = 0;
    for block in ct.blocks() {
        for &v in block.nodes {
            a[(row, v)] = 1.0;
            row += 1;
        }
    }
    a
}

fn check_square(m: &DenseMatrix, n: usize) -> Result<()> {
    if m.rows() != n || m.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: (n, n),
            got: (m.rows(), m.cols()),
        });
    }
    Ok(())
}

/// Block diagonal assembly of per-block matrices, in block order.
fn block_diagonal(
    ct: &CliqueTree,
    mut f: impl FnMut(BlockKind, usize, &[usize]) -> Result<DenseMatrix>,
) -> Result<DenseMatrix> {
    let m = ct.total_size();
    let mut out = DenseMatrix::zeros(m, m);
    let mut offset = 0;
    for block in ct.blocks() {
        let b = f(block.kind, block.index, block.nodes)?;
        let d = block.nodes.len();
        for r in 0..d {
            for c in 0..d {
                out[(offset + r, offset + c)] = b[(r, c)];
            }
        }
        offset += d;
    }
    Ok(out)
}

fn signed(kind: BlockKind, block: DenseMatrix) -> DenseMatrix {
    match kind {
        BlockKind::Clique => block,
        BlockKind::Separator => -&block,
    }
}

/// `C`: principal blocks of `m` on each clique, negated blocks on each separator.
pub fn build_c(m: &DenseMatrix, ct: &CliqueTree) -> Result<DenseMatrix> {
    check_square(m, ct.n())?;
    block_diagonal(ct, |kind, _, nodes| Ok(signed(kind, m.principal(nodes))))
}

/// `C⁻¹` computed one block at a time.
fn block_inverse(ct: &CliqueTree, block: impl Fn(&[usize]) -> Result<DenseMatrix>) -> Result<DenseMatrix> {
    block_diagonal(ct, |kind, index, nodes| {
        let id = match kind {
            BlockKind::Clique => BlockId::Clique(index),
            BlockKind::Separator => BlockId::Separator(index),
        };
        invert(&signed(kind, block(nodes)?)).map_err(|_| Error::SingularBlock {
            block: id,
            nodes: nodes.to_vec(),
        })
    })
}

/// `A`, `C` and a blockwise `C⁻¹` built from the specified blocks of `M0`.
#[derive(Debug, Clone, PartialEq)]
pub struct InverseFactorization {
    pub a: DenseMatrix,
    pub c: DenseMatrix,
    pub c_inv: DenseMatrix,
}

impl InverseFactorization {
    /// `AᵀC⁻¹A`. The products visit blocks in the same order as the local
    /// inverse assembly, so the two agree bit for bit.
    pub fn inverse(&self) -> DenseMatrix {
        &(&self.a.transpose() * &self.c_inv) * &self.a
    }
}

pub fn factor_inverse(m0: &PartialMatrix, ct: &CliqueTree) -> Result<InverseFactorization> {
    if m0.n() != ct.n() {
        return Err(Error::DimensionMismatch {
            expected: (ct.n(), ct.n()),
            got: (m0.n(), m0.n()),
        });
    }
    let c = block_diagonal(ct, |kind, _, nodes| Ok(signed(kind, m0.block(nodes)?)))?;
    let c_inv = block_inverse(ct, |nodes| m0.block(nodes))?;
    Ok(InverseFactorization {
        a: build_a(ct),
        c,
        c_inv,
    })
}

/// The pseudoinverse `(AᵀA)⁻¹Aᵀ`. `AᵀA` is diagonal (node multiplicities),
/// so this is exact: row `v` averages the rows of `A` that carry node `v`.
pub fn build_f(a: &DenseMatrix) -> Result<DenseMatrix> {
    let ata = &a.transpose() * a;
    let inv = invert(&ata)?;
    Ok(&inv * &a.transpose())
}

/// `G = C⁻¹AM`.
pub fn build_g(c: &DenseMatrix, a: &DenseMatrix, m: &DenseMatrix) -> Result<DenseMatrix> {
    let am = a.matmul(m)?;
    invert(c)?.matmul(&am)
}

/// All four factors for a complete matrix `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorSet {
    pub m: DenseMatrix,
    pub a: DenseMatrix,
    pub c: DenseMatrix,
    pub c_inv: DenseMatrix,
    pub f: DenseMatrix,
    pub g: DenseMatrix,
}

impl FactorSet {
    pub fn build(m: &DenseMatrix, ct: &CliqueTree) -> Result<Self> {
        check_square(m, ct.n())?;
        let a = build_a(ct);
        let c = build_c(m, ct)?;
        let c_inv = block_inverse(ct, |nodes| Ok(m.principal(nodes)))?;
        let f = build_f(&a)?;
        let g = c_inv.matmul(&a.matmul(m)?)?;
        Ok(Self {
            m: m.clone(),
            a,
            c,
            c_inv,
            f,
            g,
        })
    }

    /// Residuals of every identity of the framework. Identities that
    /// reproduce `M` are measured relative to `‖M‖_max`; the rest are absolute.
    pub fn checks(&self, tol: f64) -> Vec<Check> {
        let n = self.a.cols();
        let eye = DenseMatrix::identity(n);
        let at = self.a.transpose();
        let scale = self.m.max_abs().max(f64::MIN_POSITIVE);
        let gt = self.g.transpose();
        let af = &self.a * &self.f;
        let ata_inv = invert(&(&at * &self.a)).expect("AᵀA is a positive diagonal");
        let local = &(&at * &self.c_inv) * &self.a;
        let c_inv_a = &self.c_inv * &self.a;
        let mut joined = DenseMatrix::zeros(c_inv_a.rows(), 2 * n);
        for r in 0..c_inv_a.rows() {
            for c in 0..n {
                joined[(r, c)] = c_inv_a[(r, c)];
                joined[(r, n + c)] = self.g[(r, c)];
            }
        }
        let extra_rank = numerical_rank(&joined, 1e-9).saturating_sub(n);

        vec![
            Check::at_most("F*A = I", (&self.f * &self.a).max_abs_diff(&eye), tol),
            Check::at_most("G^T*A = I", (&gt * &self.a).max_abs_diff(&eye), tol),
            Check::at_most("A^T*G = I", (&at * &self.g).max_abs_diff(&eye), tol),
            Check::at_most("A^T*C^-1*A*M = I", (&local * &self.m).max_abs_diff(&eye), tol),
            Check::at_most(
                "G^T*C*G = M (relative)",
                (&(&gt * &self.c) * &self.g).max_abs_diff(&self.m) / scale,
                tol,
            ),
            Check::at_most(
                "F*C*G = M (relative)",
                (&(&self.f * &self.c) * &self.g).max_abs_diff(&self.m) / scale,
                tol,
            ),
            Check::at_most("F*G = (A^T*A)^-1", (&self.f * &self.g).max_abs_diff(&ata_inv), tol),
            Check::at_most("(A*F)^2 = A*F", (&af * &af).max_abs_diff(&af), tol),
            Check::at_most("(A*F)^T = A*F", af.transpose().max_abs_diff(&af), tol),
            Check::at_most("rank [C^-1*A | G] - n", extra_rank as f64, 0.0),
        ]
    }
}

/// Result of testing the local inverse formula in both directions.
#[derive(Debug, Clone, PartialEq)]
pub struct DualReport {
    pub c: DenseMatrix,
    /// Built from `M⁻¹` exactly as `C` is built from `M`.
    pub d: DenseMatrix,
    pub checks: Vec<Check>,
    /// `‖D − Cᵀ‖_max`; informative only, since `D = Cᵀ` is not true in general.
    pub d_minus_ct: f64,
}

impl DualReport {
    pub fn passed(&self) -> bool {
        crate::report::all_pass(&self.checks)
    }
}

/// The pattern spanned by the cliques of `ct`.
pub fn tree_pattern(ct: &CliqueTree) -> SparsityPattern {
    let mut p = SparsityPattern::new(ct.n());
    for clique in ct.cliques() {
        for (a, &i) in clique.iter().enumerate() {
            for &j in &clique[a + 1..] {
                p.add_edge(i, j).expect("clique nodes are in range and distinct");
            }
        }
    }
    p
}

/// Entries of `m` off `pattern` whose magnitude exceeds `1e-10·‖m‖_max`.
fn off_pattern_entries(m: &DenseMatrix, pattern: &SparsityPattern) -> Vec<(usize, usize, f64)> {
    let cutoff = 1e-10 * m.max_abs();
    pattern
        .unspecified_positions()
        .into_iter()
        .filter(|&(i, j)| m[(i, j)].abs() > cutoff)
        .map(|(i, j)| (i, j, m[(i, j)]))
        .collect()
}

/// Checks `AᵀC⁻¹A = M⁻¹`, `AᵀCA = M`, `AᵀD⁻¹A = M` and `AᵀDA = M⁻¹`, where
/// `D` is built from `M⁻¹`. Both `M` and `M⁻¹` must vanish off the pattern.
pub fn dual_direction_check(m: &DenseMatrix, ct: &CliqueTree, tol: f64) -> Result<DualReport> {
    check_square(m, ct.n())?;
    let m_inv = invert(m)?;
    let pattern = tree_pattern(ct);
    let mut violations = off_pattern_entries(m, &pattern);
    violations.extend(off_pattern_entries(&m_inv, &pattern));
    if !violations.is_empty() {
        return Err(Error::PatternViolation { entries: violations });
    }

    let a = build_a(ct);
    let at = a.transpose();
    let c = build_c(m, ct)?;
    let d = build_c(&m_inv, ct)?;
    let c_inv = block_inverse(ct, |nodes| Ok(m.principal(nodes)))?;
    let d_inv = block_inverse(ct, |nodes| Ok(m_inv.principal(nodes)))?;
    let sandwich = |x: &DenseMatrix| &(&at * x) * &a;

    let checks = vec![
        Check::below("A^T*C^-1*A = M^-1", sandwich(&c_inv).max_abs_diff(&m_inv), tol),
        Check::below("A^T*C*A = M", sandwich(&c).max_abs_diff(m), tol),
        Check::below("A^T*D^-1*A = M", sandwich(&d_inv).max_abs_diff(m), tol),
        Check::below("A^T*D*A = M^-1", sandwich(&d).max_abs_diff(&m_inv), tol),
    ];
    let d_minus_ct = d.max_abs_diff(&c.transpose());
    Ok(DualReport {
        c,
        d,
        checks,
        d_minus_ct,
    })
}
