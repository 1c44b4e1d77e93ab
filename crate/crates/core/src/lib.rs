//! Maximum-determinant completion and local inverses of matrices with chordal
//! sparsity patterns.
//!
//! A partial matrix specifies entries on a chordal pattern. Its unique
//! maximum-determinant completion has an inverse that vanishes off the
//! pattern, and that inverse can be assembled from the specified blocks alone:
//! the sum of inverted clique blocks minus the sum of inverted separator
//! blocks. The modules build up to that result:
//!
//! - [`matcore`]: dense matrices, LDU, inversion, log-determinants, rank.
//! - [`chordal`]: patterns, chordality, maximal cliques, clique trees.
//! - [`completion`]: the completion itself, by two independent routes, and
//!   its verification.
//! - [`localinv`]: the local inverse formula.
//! - [`factor`]: the `AᵀCA` matrix form of that formula, and its use in both
//!   directions for banded matrices with banded inverses.
//! - [`symbol`]: the doubly infinite Toeplitz analogue via Fourier symbols.
//! - [`cli`]: file formats and the commands behind the `chordinv` binary.

pub mod chordal;
pub mod cli;
pub mod completion;
pub mod error;
pub mod factor;
pub mod fixtures;
pub mod localinv;
pub mod matcore;
pub mod report;
pub mod symbol;

pub use chordal::{band_pattern, staircase_pattern, CliqueTree, SparsityPattern};
pub use completion::{complete_recursive, complete_via_local_inverse, verify_completion, Completion, PartialMatrix};
pub use error::{Error, Result};
pub use localinv::local_inverse;
pub use matcore::DenseMatrix;
