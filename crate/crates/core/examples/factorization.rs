//! The block factorization of the inverse, M^-1 = A^T C^-1 A, and the
//! companion matrices F and G with their identities.
//!
//! Run with `cargo run --example factorization`.

use chordal_inverse::factor::FactorSet;
use chordal_inverse::{fixtures, CliqueTree, DenseMatrix};

fn show(label: &str, m: &DenseMatrix) {
    println!("{label} ({}x{}):", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|v| format!("{v:8.4}")).collect();
        println!("  [{}]", row.join(" "));
    }
}

fn main() {
    let m = fixtures::tridiagonal_3x3_completed();
    let ct = CliqueTree::from_pattern(&chordal_inverse::band_pattern(3, 1).unwrap()).unwrap();
    let fs = FactorSet::build(&m, &ct).unwrap();
    show("A (selects each block's indices)", &fs.a);
    show("C (clique blocks, negated separator blocks)", &fs.c);
    show("F = (A^T A)^-1 A^T", &fs.f);
    show("G = C^-1 A M", &fs.g);
    for check in fs.checks(1e-12) {
        println!("  {check}");
    }
}
