mod common;

use chordal_inverse::chordal::{
    is_chordal, is_chordless_cycle, maximal_cliques, mcs_ordering, zero_fill_check, Chordality, CliqueTree,
    EliminationOrdering, FillCheck, SparsityPattern,
};
use proptest::prelude::*;
use rand::Rng;

/// Brute force: a graph is chordal iff simplicial vertices can be removed
/// one at a time until nothing is left.
fn chordal_by_elimination(p: &SparsityPattern) -> bool {
    let n = p.n();
    let mut alive = vec![true; n];
    for _ in 0..n {
        let simplicial = (0..n).find(|&v| {
            alive[v] && {
                let nb: Vec<usize> = p.neighbors(v).iter().copied().filter(|&u| alive[u]).collect();
                p.is_clique(&nb)
            }
        });
        match simplicial {
            Some(v) => alive[v] = false,
            None => return false,
        }
    }
    true
}

fn random_graph(seed: u64, n: usize, density: f64) -> SparsityPattern {
    let mut rng = common::rng(seed);
    let mut p = SparsityPattern::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                p.add_edge(i, j).unwrap();
            }
        }
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn chordality_verdict_matches_brute_force(seed in any::<u64>(), n in 1usize..9, density in 0.2f64..0.8) {
        let p = random_graph(seed, n, density);
        match is_chordal(&p) {
            Chordality::Chordal(peo) => {
                prop_assert!(chordal_by_elimination(&p));
                prop_assert_eq!(zero_fill_check(&p, &peo).unwrap(), FillCheck::NoFill);
            }
            Chordality::NotChordal(cycle) => {
                prop_assert!(!chordal_by_elimination(&p));
                prop_assert!(cycle.len() >= 4);
                prop_assert!(is_chordless_cycle(&p, &cycle));
            }
        }
    }

    #[test]
    fn generated_chordal_graphs_have_valid_clique_trees(seed in any::<u64>(), n in 2usize..13) {
        let p = common::random_chordal(&mut common::rng(seed), n);
        let Chordality::Chordal(peo) = is_chordal(&p) else {
            return Err(TestCaseError::fail("generator produced a non-chordal graph"));
        };
        let cliques = maximal_cliques(&p, &peo).unwrap();
        for (a, ca) in cliques.iter().enumerate() {
            prop_assert!(p.is_clique(ca));
            for (b, cb) in cliques.iter().enumerate() {
                prop_assert!(a == b || !ca.iter().all(|v| cb.contains(v)), "clique {:?} inside {:?}", ca, cb);
            }
        }
        for (i, j) in p.edges() {
            prop_assert!(cliques.iter().any(|c| c.contains(&i) && c.contains(&j)));
        }
        let ct = CliqueTree::from_pattern(&p).unwrap();
        prop_assert!(ct.has_running_intersection());
        prop_assert_eq!(ct.separator_count() + 1, ct.clique_count());
        prop_assert_eq!(ct.block_count(), ct.clique_count() + ct.separator_count());
        prop_assert_eq!(ct.total_size(), ct.block_sizes().iter().sum::<usize>());
        if ct.separator_count() > 0 {
            prop_assert!(ct.total_size() > n);
        } else {
            prop_assert_eq!(ct.total_size(), n);
        }
        // the ordering found by maximum cardinality search, reversed, eliminates without fill
        prop_assert!(zero_fill_check(&p, &mcs_ordering(&p).reversed()).unwrap().is_ok());
    }

    #[test]
    fn staircases_are_chordal_chains(seed in any::<u64>(), n in 4usize..13) {
        let p = common::random_staircase(&mut common::rng(seed), n);
        let ct = CliqueTree::from_pattern(&p).unwrap();
        for e in ct.edges() {
            prop_assert!(!e.separator.is_empty());
        }
    }

    #[test]
    fn long_cycles_are_certified(n in 4usize..12) {
        let edges = (0..n).map(|i| (i, (i + 1) % n));
        let p = SparsityPattern::from_edges(n, edges).unwrap();
        match is_chordal(&p) {
            Chordality::NotChordal(cycle) => {
                prop_assert_eq!(cycle.len(), n);
                prop_assert!(is_chordless_cycle(&p, &cycle));
            }
            Chordality::Chordal(_) => prop_assert!(false, "cycle accepted"),
        }
    }
}

#[test]
fn natural_order_on_a_band_has_no_fill() {
    let p = chordal_inverse::band_pattern(8, 3).unwrap();
    assert!(zero_fill_check(&p, &EliminationOrdering::natural(8)).unwrap().is_ok());
}

#[test]
fn star_shares_a_separator_set_across_edges() {
    let p = SparsityPattern::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
    let ct = CliqueTree::from_pattern(&p).unwrap();
    let seps: Vec<&[usize]> = ct.separators().collect();
    assert_eq!(seps, vec![&[0][..], &[0][..]]);
}
