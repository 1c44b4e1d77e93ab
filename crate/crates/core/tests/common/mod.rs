//! Random SPD partial matrices on chordal patterns, shared by the suites.

#![allow(dead_code)]

use chordal_inverse::chordal::{band_pattern, staircase_pattern, SparsityPattern};
use chordal_inverse::{DenseMatrix, PartialMatrix};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub label: String,
    pub m0: PartialMatrix,
}

/// `BBᵀ + I/2` with `B` uniform in `[−1, 1]`: comfortably positive definite.
pub fn random_spd(rng: &mut TestRng, n: usize) -> DenseMatrix {
    let mut b = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            b[(i, j)] = rng.gen_range(-1.0..1.0);
        }
    }
    let mut m = &b * &b.transpose();
    for i in 0..n {
        m[(i, i)] += 0.5;
    }
    m
}

pub fn random_staircase(rng: &mut TestRng, n: usize) -> SparsityPattern {
    let mut blocks = Vec::new();
    let mut start = 0;
    let mut prev_end = 0;
    loop {
        let end = (start + rng.gen_range(2..=4)).max(prev_end + 1).min(n);
        prev_end = end;
        blocks.push(start..end);
        if end == n {
            break;
        }
        // next block overlaps this one by at least one index
        start = rng.gen_range(start + 1..end);
    }
    staircase_pattern(&blocks).unwrap()
}

/// Connected chordal graph grown by adding simplicial vertices: each new
/// vertex joins a random subset of a clique around a random existing vertex.
/// Labels are shuffled at the end.
pub fn random_chordal(rng: &mut TestRng, n: usize) -> SparsityPattern {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 1..n {
        let u = rng.gen_range(0..v);
        let mut clique = vec![u];
        let mut candidates = adj[u].clone();
        candidates.shuffle(rng);
        for c in candidates {
            if clique.iter().all(|&x| adj[x].contains(&c)) {
                clique.push(c);
            }
        }
        let keep = rng.gen_range(1..=clique.len());
        clique.shuffle(rng);
        for &x in &clique[..keep] {
            adj[v].push(x);
            adj[x].push(v);
        }
    }
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(rng);
    let edges = (0..n).flat_map(|v| {
        adj[v]
            .iter()
            .filter(move |&&w| w > v)
            .map(move |&w| (v, w))
            .collect::<Vec<_>>()
    });
    SparsityPattern::from_edges(n, edges.map(|(a, b)| (labels[a], labels[b]))).unwrap()
}

/// The instance families of the property suites: bands of width 1–3,
/// staircases and random chordal graphs, all with `n ≤ 12`.
pub fn instances(seed: u64, count_per_family: usize) -> Vec<Instance> {
    let mut rng = rng(seed);
    let mut out = Vec::new();
    for k in 0..count_per_family {
        let w = 1 + k % 3;
        let n = rng.gen_range(w + 2..=12);
        let p = band_pattern(n, w).unwrap();
        let m = random_spd(&mut rng, n);
        out.push(Instance {
            label: format!("band n={n} w={w} #{k}"),
            m0: PartialMatrix::restrict(&m, &p).unwrap(),
        });
    }
    for k in 0..count_per_family {
        let n = rng.gen_range(4..=12);
        let p = random_staircase(&mut rng, n);
        let m = random_spd(&mut rng, n);
        out.push(Instance {
            label: format!("staircase n={n} #{k}"),
            m0: PartialMatrix::restrict(&m, &p).unwrap(),
        });
    }
    for k in 0..count_per_family {
        let n = rng.gen_range(2..=12);
        let p = random_chordal(&mut rng, n);
        let m = random_spd(&mut rng, n);
        out.push(Instance {
            label: format!("chordal n={n} #{k}"),
            m0: PartialMatrix::restrict(&m, &p).unwrap(),
        });
    }
    out
}
