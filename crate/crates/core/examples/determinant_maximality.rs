//! The completion maximizes the determinant: nudging any filled entry (and
//! its mirror) lowers log det, and the slope there is zero.
//!
//! Run with `cargo run --example determinant_maximality`.

use chordal_inverse::completion::{complete_recursive, default_probe_steps, perturbation_probe};
use chordal_inverse::matcore::logdet;
use chordal_inverse::{fixtures, CliqueTree};

fn main() {
    let m0 = fixtures::pentadiagonal_6x6();
    let ct = CliqueTree::from_pattern(m0.pattern()).unwrap();
    let c = complete_recursive(&m0, &ct).unwrap();
    let base = logdet(&c.matrix).unwrap();
    println!("log det of the completion = {base:.12}");

    let steps = default_probe_steps(&c.matrix);
    for &(i, j) in c.filled.iter().filter(|&&(i, j)| i < j) {
        let values = perturbation_probe(&c, (i, j), &steps).unwrap();
        let deltas: Vec<String> = values
            .iter()
            .map(|v| match v {
                Ok(v) => format!("{:+.3e}", v - base),
                Err(_) => "indefinite".to_string(),
            })
            .collect();
        println!("  ({}, {}): {}", i + 1, j + 1, deltas.join("  "));
    }
}
