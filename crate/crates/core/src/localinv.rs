//! The local inverse formula.
//!
//! For a partial matrix on a chordal pattern, the inverse of its
//! maximum-determinant completion is the sum of the inverses of the clique
//! blocks minus the inverses of the separator blocks, each embedded at its
//! global indices. Only blocks of the partial matrix are read.

use crate::chordal::{BlockKind, CliqueTree};
use crate::completion::PartialMatrix;
use crate::error::{BlockId, Error, Result};
use crate::matcore::{invert, DenseMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub indices: Vec<usize>,
    pub sign: Sign,
    pub block: DenseMatrix,
}

/// Signed blocks waiting to be embedded into an `n × n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockAssembly {
    pub n: usize,
    pub terms: Vec<Term>,
}

impl BlockAssembly {
    pub fn new(n: usize) -> Self {
        Self { n, terms: Vec::new() }
    }

    pub fn push(&mut self, indices: Vec<usize>, sign: Sign, block: DenseMatrix) {
        self.terms.push(Term { indices, sign, block });
    }
}

/// Entrywise sum of the signed, embedded blocks, in term order. Positions no
/// term touches stay exactly `0.0`.
pub fn assemble(ba: &BlockAssembly) -> Result<DenseMatrix> {
    if ba.n == 0 {
        return Err(Error::InvalidDimensions("0x0".into()));
    }
    let mut out = DenseMatrix::zeros(ba.n, ba.n);
    for t in &ba.terms {
        if let Some(&bad) = t.indices.iter().find(|&&i| i >= ba.n) {
            return Err(Error::IndexOutOfRange { index: bad, n: ba.n });
        }
        let d = t.indices.len();
        if t.block.rows() != d || t.block.cols() != d {
            return Err(Error::DimensionMismatch {
                expected: (d, d),
                got: (t.block.rows(), t.block.cols()),
            });
        }
        for (a, &i) in t.indices.iter().enumerate() {
            for (b, &j) in t.indices.iter().enumerate() {
                match t.sign {
                    Sign::Plus => out[(i, j)] += t.block[(a, b)],
                    Sign::Minus => out[(i, j)] -= t.block[(a, b)],
                }
            }
        }
    }
    Ok(out)
}

/// Inverted clique and separator blocks of `m0`, cliques first.
pub fn block_assembly(m0: &PartialMatrix, ct: &CliqueTree) -> Result<BlockAssembly> {
    check_size(m0, ct)?;
    block_assembly_with(m0, ct, invert)
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

fn block_assembly_with(
    m0: &PartialMatrix,
    ct: &CliqueTree,
    inverse: impl Fn(&DenseMatrix) -> Result<DenseMatrix>,
) -> Result<BlockAssembly> {
    let mut ba = BlockAssembly::new(m0.n());
    for block in ct.blocks() {
        let (id, sign) = match block.kind {
            BlockKind::Clique => (BlockId::Clique(block.index), Sign::Plus),
            BlockKind::Separator => (BlockId::Separator(block.index), Sign::Minus),
        };
        let singular = || Error::SingularBlock {
            block: id.clone(),
            nodes: block.nodes.to_vec(),
        };
        let sub = m0.block(block.nodes)?;
        let inv = inverse(&sub).map_err(|e| match e {
            Error::Singular | Error::SingularPivot(_) => singular(),
            other => other,
        })?;
        ba.push(block.nodes.to_vec(), sign, inv);
    }
    Ok(ba)
}

/// `Σ embed(C_k⁻¹) − Σ embed(S_k⁻¹)` over the clique tree of `m0`'s pattern.
pub fn local_inverse(m0: &PartialMatrix, ct: &CliqueTree) -> Result<DenseMatrix> {
    assemble(&block_assembly(m0, ct)?)
}

/// Local inverse of a unit upper triangular partial matrix. Block inverses
/// come from back substitution, so they are exact in the scalar case.
pub fn local_inverse_triangular(u0: &PartialMatrix, ct: &CliqueTree) -> Result<DenseMatrix> {
    check_size(u0, ct)?;
    for i in 0..u0.n() {
        if u0.get(i, i) != Some(1.0) {
            return Err(Error::NotUnitTriangular);
        }
    }
    let below_nonzero = u0
        .pattern()
        .edges()
        .into_iter()
        .any(|(i, j)| u0.get(j, i).is_some_and(|v| v != 0.0));
    if below_nonzero {
        return Err(Error::NotUnitTriangular);
    }
    assemble(&block_assembly_with(u0, ct, |b| Ok(unit_upper_inverse(b)))?)
}

fn unit_upper_inverse(u: &DenseMatrix) -> DenseMatrix {
    let n = u.rows();
    let mut inv = DenseMatrix::identity(n);
    for j in 0..n {
        for i in (0..j).rev() {
            let mut acc = 0.0;
            for k in i + 1..=j {
                acc -= u[(i, k)] * inv[(k, j)];
            }
            inv[(i, j)] = acc;
        }
    }
    inv
}
