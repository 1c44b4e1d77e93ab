//! Small matrices with known answers, shared by tests, examples and the CLI
//! fixture files.

use crate::chordal::{band_pattern, SparsityPattern};
use crate::completion::PartialMatrix;
use crate::matcore::{invert, DenseMatrix};

/// `(1/4)[3 2 ?; 2 4 2; ? 2 3]`.
pub fn tridiagonal_3x3() -> PartialMatrix {
    PartialMatrix::restrict(&tridiagonal_3x3_completed(), &band_pattern(3, 1).unwrap()).unwrap()
}

/// `(1/4)[3 2 1; 2 4 2; 1 2 3]`, whose inverse is `[2 −1 0; −1 2 −1; 0 −1 2]`.
pub fn tridiagonal_3x3_completed() -> DenseMatrix {
    DenseMatrix::from_rows(&[&[3.0, 2.0, 1.0], &[2.0, 4.0, 2.0], &[1.0, 2.0, 3.0]]).scale(0.25)
}

/// Tridiagonal 4×4 Toeplitz part with 2 on the diagonal and −1 beside it.
pub fn toeplitz_4x4() -> PartialMatrix {
    tridiagonal_toeplitz(4, 2.0, -1.0)
}

/// Tridiagonal `n × n` Toeplitz part with `diag` and `off` on the band.
pub fn tridiagonal_toeplitz(n: usize, diag: f64, off: f64) -> PartialMatrix {
    let entries = (0..n).flat_map(|i| {
        let mut row = vec![(i, i, diag)];
        if i + 1 < n {
            row.push((i, i + 1, off));
            row.push((i + 1, i, off));
        }
        row
    });
    PartialMatrix::from_entries(n, entries).unwrap()
}

/// Unit upper triangular tridiagonal part `[1 u ?; 0 1 v; ? 0 1]`.
pub fn unit_upper_3x3(u: f64, v: f64) -> PartialMatrix {
    let m = DenseMatrix::from_rows(&[&[1.0, u, 0.0], &[0.0, 1.0, v], &[0.0, 0.0, 1.0]]);
    PartialMatrix::restrict(&m, &band_pattern(3, 1).unwrap()).unwrap()
}

/// A symmetric positive definite 6×6 matrix restricted to bandwidth 2:
/// `0.6^|i−j| + 0.2·i·δ_ij`.
pub fn pentadiagonal_6x6() -> PartialMatrix {
    let mut m = DenseMatrix::zeros(6, 6);
    for i in 0..6 {
        for j in 0..6 {
            m[(i, j)] = 0.6f64.powi(i.abs_diff(j) as i32);
        }
        m[(i, i)] += 0.2 * i as f64;
    }
    PartialMatrix::restrict(&m, &band_pattern(6, 2).unwrap()).unwrap()
}

fn wavelet_s() -> f64 {
    3f64.sqrt()
}

/// The two singular 2×2 filter blocks of the Daubechies wavelet matrix.
pub fn daubechies_blocks() -> (DenseMatrix, DenseMatrix) {
    let s = wavelet_s();
    (
        DenseMatrix::from_rows(&[&[1.0 + s, 3.0 + s], &[-1.0 + s, 3.0 - s]]),
        DenseMatrix::from_rows(&[&[3.0 - s, 1.0 - s], &[-3.0 - s, 1.0 + s]]),
    )
}

/// The orthogonal 6×6 Daubechies wavelet matrix, built from `s = √3`: a
/// normalized top row, the filter blocks `B₁ B₂` shifted twice, and a
/// normalized bottom row, all scaled by `1/√32`.
pub fn daubechies() -> DenseMatrix {
    let s = wavelet_s();
    let r32 = 32f64.sqrt();
    let (b1, b2) = daubechies_blocks();
    let mut raw = DenseMatrix::zeros(6, 6);

    let t = [-(3.0 + s), 1.0 + s];
    let bottom = [1.0 + s, 3.0 + s];
    let tn = t.iter().map(|x| x * x).sum::<f64>().sqrt();
    let bn = bottom.iter().map(|x| x * x).sum::<f64>().sqrt();
    for k in 0..2 {
        raw[(0, k)] = r32 * t[k] / tn;
        raw[(5, 4 + k)] = r32 * bottom[k] / bn;
    }
    for (row0, col0) in [(1, 0), (3, 2)] {
        for r in 0..2 {
            for c in 0..2 {
                raw[(row0 + r, col0 + c)] = b1[(r, c)];
                raw[(row0 + r, col0 + 2 + c)] = b2[(r, c)];
            }
        }
    }
    raw.scale(1.0 / r32)
}

/// The wavelet matrix as printed to four decimals.
pub fn daubechies_printed() -> DenseMatrix {
    DenseMatrix::from_rows(&[
        &[-0.8660, 0.5000, 0.0, 0.0, 0.0, 0.0],
        &[0.4830, 0.8365, 0.2241, -0.1294, 0.0, 0.0],
        &[0.1294, 0.2241, -0.8365, 0.4830, 0.0, 0.0],
        &[0.0, 0.0, 0.4830, 0.8365, 0.2241, -0.1294],
        &[0.0, 0.0, 0.1294, 0.2241, -0.8365, 0.4830],
        &[0.0, 0.0, 0.0, 0.0, 0.5000, 0.8660],
    ])
}

/// The 4-cycle `0–1–2–3–0`.
pub fn cycle4_pattern() -> SparsityPattern {
    SparsityPattern::from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap()
}

/// A positive definite matrix whose inverse `2.2·I − adj(C₄)` is supported on
/// the 4-cycle. Summing edge-block inverses minus node inverses does not
/// reproduce that inverse, because the cycle has no clique tree.
pub fn cycle4_matrix() -> DenseMatrix {
    let mut k = DenseMatrix::identity(4).scale(2.2);
    for (i, j) in cycle4_pattern().edges() {
        k[(i, j)] = -1.0;
        k[(j, i)] = -1.0;
    }
    invert(&k).unwrap()
}

/// `‖M·M̂⁻¹ − I‖_max` where `M̂⁻¹` is the naive local formula on the 4-cycle
/// fixture (computed once, independently, to this value).
pub const CYCLE4_NAIVE_RESIDUAL: f64 = 0.2017312206572773;
