//! Decide chordality of a few sparsity patterns and print their clique trees.
//!
//! Run with `cargo run --example analyze_pattern`.

use chordal_inverse::chordal::{is_chordal, mcs_ordering, zero_fill_check, Chordality, CliqueTree, FillCheck};
use chordal_inverse::{band_pattern, staircase_pattern, SparsityPattern};

fn describe(name: &str, p: &SparsityPattern) {
    println!("{name} (n = {}, {} edges)", p.n(), p.edge_count());
    match is_chordal(p) {
        Chordality::Chordal(peo) => {
            println!("  chordal; perfect elimination ordering {:?}", peo.as_slice());
            let ct = CliqueTree::from_pattern(p).expect("connected chordal pattern");
            println!("  cliques {:?}", ct.cliques());
            for e in ct.edges() {
                println!("  tree edge {} - {} separator {:?}", e.a, e.b, e.separator);
            }
            println!(
                "  blocks: {} cliques + {} separators, total size m = {}",
                ct.clique_count(),
                ct.separator_count(),
                ct.total_size()
            );
        }
        Chordality::NotChordal(cycle) => {
            println!("  not chordal; chordless cycle {cycle:?}");
            let order = mcs_ordering(p).reversed();
            if let Ok(FillCheck::Fill(fill)) = zero_fill_check(p, &order) {
                println!("  eliminating in {:?} fills {fill:?}", order.as_slice());
            }
        }
    }
}

fn main() {
    describe("tridiagonal", &band_pattern(5, 1).unwrap());
    describe("pentadiagonal", &band_pattern(6, 2).unwrap());
    describe("staircase", &staircase_pattern(&[0..3, 1..5, 4..7]).unwrap());
    describe(
        "star",
        &SparsityPattern::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap(),
    );
    describe(
        "4-cycle",
        &SparsityPattern::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap(),
    );
}
