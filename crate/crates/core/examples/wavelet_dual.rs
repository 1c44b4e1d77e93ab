//! A Daubechies wavelet matrix is orthogonal with a banded inverse, so the
//! factorization can be built from either side.
//!
//! Run with `cargo run --example wavelet_dual`.

use chordal_inverse::factor::dual_direction_check;
use chordal_inverse::matcore::invert;
use chordal_inverse::{band_pattern, fixtures, CliqueTree};

fn main() {
    let w = fixtures::daubechies();
    let wi = invert(&w).unwrap();
    println!("|W^-1 - W^T|_max = {:.1e}", wi.max_abs_diff(&w.transpose()));

    let ct = CliqueTree::from_pattern(&band_pattern(6, 2).unwrap()).unwrap();
    let dual = dual_direction_check(&w, &ct, 1e-10).unwrap();
    for check in &dual.checks {
        println!("  {check}");
    }
    println!("|D - C^T|_max = {:.1e}", dual.d_minus_ct);
}
