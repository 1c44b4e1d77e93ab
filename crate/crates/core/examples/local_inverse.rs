//! The inverse of the completion, assembled directly from the specified
//! blocks: clique block inverses added, separator block inverses subtracted.
//!
//! Run with `cargo run --example local_inverse`.

use chordal_inverse::completion::complete_recursive;
use chordal_inverse::localinv::{block_assembly, local_inverse, Sign};
use chordal_inverse::matcore::DenseMatrix;
use chordal_inverse::{fixtures, CliqueTree};

fn main() {
    let m0 = fixtures::pentadiagonal_6x6();
    let ct = CliqueTree::from_pattern(m0.pattern()).unwrap();

    for term in &block_assembly(&m0, &ct).unwrap().terms {
        let sign = if term.sign == Sign::Plus { '+' } else { '-' };
        println!("{sign} inverse of block {:?}", term.indices);
    }

    let li = local_inverse(&m0, &ct).unwrap();
    println!("local inverse:");
    for i in 0..li.rows() {
        let row: Vec<String> = li
            .row(i)
            .iter()
            .map(|&v| {
                if v == 0.0 {
                    format!("{:>9}", "0")
                } else {
                    format!("{v:9.5}")
                }
            })
            .collect();
        println!("  [{}]", row.join(" "));
    }

    let m = complete_recursive(&m0, &ct).unwrap().matrix;
    let residual = li.matmul(&m).unwrap().max_abs_diff(&DenseMatrix::identity(m.rows()));
    println!("|local inverse * completion - I|_max = {residual:.1e}");
}
