//! Complete a banded Toeplitz symbol: extend the coefficients so that the
//! reciprocal of the symbol is again banded.
//!
//! Run with `cargo run --example toeplitz_symbol -- -1 2.5 -1`.

use chordal_inverse::symbol::{complete_symbol, finite_section_check, reciprocal_residual, SymbolOptions};

fn main() {
    let band: Vec<f64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("numeric coefficient"))
        .collect();
    let band = if band.is_empty() { vec![-1.0, 2.0, -1.0] } else { band };

    let sc = complete_symbol(&band, &SymbolOptions::default()).unwrap();
    println!(
        "band {band:?}: {} Newton steps, residual {:.1e}",
        sc.iterations, sc.residual
    );
    for k in 0..=8 {
        println!(
            "  a_{k:<2} = {:>22.15e}   (1/a)_{k:<2} = {:>22.15e}",
            sc.coefficient(k),
            sc.inverse_coefficient(k)
        );
    }
    println!("truncation error |a_K| = {:.1e}", sc.truncation_error());
    println!("|a * (1/a) - 1| on the grid = {:.1e}", reciprocal_residual(&sc));

    let fs = finite_section_check(&sc, 257).unwrap();
    println!(
        "257x257 section: middle row of the inverse deviates from b by {:.1e}",
        fs.deviation
    );
}
