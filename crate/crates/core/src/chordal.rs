//! Sparsity-pattern graphs: chordality, elimination orderings, maximal
//! cliques and clique trees.
//!
//! A pattern is the undirected graph of specified off-diagonal positions;
//! diagonal positions are always specified and never stored as edges.

use std::collections::{BTreeSet, VecDeque};
use std::ops::Range;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsityPattern {
    adj: Vec<BTreeSet<usize>>,
}

impl SparsityPattern {
    /// Pattern on `n` nodes with no off-diagonal positions.
    pub fn new(n: usize) -> Self {
        Self {
            adj: vec![BTreeSet::new(); n],
        }
    }

    /// Builds a pattern from unordered pairs. Diagonal pairs are ignored and
    /// duplicates collapse.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut p = Self::new(n);
        for (i, j) in edges {
            p.add_edge(i, j)?;
        }
        Ok(p)
    }

    pub fn complete(n: usize) -> Self {
        let mut p = Self::new(n);
        for i in 0..n {
            for j in i + 1..n {
                p.adj[i].insert(j);
                p.adj[j].insert(i);
            }
        }
        p
    }

    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<()> {
        let n = self.n();
        for v in [i, j] {
            if v >= n {
                return Err(Error::IndexOutOfRange { index: v, n });
            }
        }
        if i != j {
            self.adj[i].insert(j);
            self.adj[j].insert(i);
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && self.adj.get(i).is_some_and(|s| s.contains(&j))
    }

    /// True for diagonal positions and pattern edges.
    pub fn is_specified(&self, i: usize, j: usize) -> bool {
        (i == j && i < self.n()) || self.has_edge(i, j)
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adj[v]
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.range(i + 1..).map(move |&j| (i, j)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    /// Positions `(i, j)`, `i != j`, that are not specified, in row-major order.
    pub fn unspecified_positions(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && !self.has_edge(i, j))
            .collect()
    }

    pub fn is_clique(&self, nodes: &[usize]) -> bool {
        nodes
            .iter()
            .enumerate()
            .all(|(a, &u)| nodes[a + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    /// Connected components, each sorted, ordered by smallest node.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Half-bandwidth `w` if the pattern is exactly the band `|i - j| <= w`.
    pub fn band_width(&self) -> Option<usize> {
        let w = self.edges().iter().map(|&(i, j)| j - i).max().unwrap_or(0);
        let expected: usize = (1..=w).map(|d| self.n().saturating_sub(d)).sum();
        (expected == self.edge_count()).then_some(w)
    }
}

/// Band pattern `|i - j| <= w`.
pub fn band_pattern(n: usize, w: usize) -> Result<SparsityPattern> {
    if n == 0 || w >= n {
        return Err(Error::InvalidArgument(format!("half-bandwidth {w} needs w < n = {n}")));
    }
    let edges = (0..n).flat_map(|i| (i + 1..n.min(i + w + 1)).map(move |j| (i, j)));
    SparsityPattern::from_edges(n, edges)
}

/// Union of fully specified diagonal blocks on the given index ranges.
///
/// Ranges must start at 0, be ascending, and each must overlap the next; the
/// last range's end is the matrix size.
pub fn staircase_pattern(blocks: &[Range<usize>]) -> Result<SparsityPattern> {
    let first = blocks
        .first()
        .ok_or_else(|| Error::InvalidArgument("no staircase blocks".into()))?;
    if first.start != 0 {
        return Err(Error::InvalidArgument("staircase must start at 0".into()));
    }
    for (k, pair) in blocks.windows(2).enumerate() {
        let (a, b) = (&pair[0], &pair[1]);
        if b.start <= a.start || b.end <= a.end {
            return Err(Error::InvalidArgument(format!(
                "staircase blocks {k} and {} are not ascending",
                k + 1
            )));
        }
        if b.start >= a.end {
            return Err(Error::NonOverlapping(k, k + 1));
        }
    }
    if blocks.iter().any(|r| r.is_empty()) {
        return Err(Error::InvalidArgument("empty staircase block".into()));
    }
    let n = blocks.last().map(|r| r.end).unwrap_or(0);
    let mut p = SparsityPattern::new(n);
    for r in blocks {
        for i in r.clone() {
            for j in i + 1..r.end {
                p.add_edge(i, j)?;
            }
        }
    }
    Ok(p)
}

/// A permutation of the nodes, read as "eliminate `order[0]` first".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationOrdering {
    order: Vec<usize>,
}

impl EliminationOrdering {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &v in &order {
            if v >= n || seen[v] {
                return Err(Error::InvalidOrdering(n));
            }
            seen[v] = true;
        }
        Ok(Self { order })
    }

    pub fn natural(n: usize) -> Self {
        Self {
            order: (0..n).collect(),
        }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn reversed(&self) -> Self {
        Self {
            order: self.order.iter().rev().copied().collect(),
        }
    }

    /// `position()[v]` is the step at which `v` is eliminated.
    pub fn position(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (k, &v) in self.order.iter().enumerate() {
            pos[v] = k;
        }
        pos
    }
}

/// Maximum cardinality search, ties broken by lowest node index.
///
/// Returns the visit order; on a chordal pattern its reverse is a perfect
/// elimination ordering.
pub fn mcs_ordering(p: &SparsityPattern) -> EliminationOrdering {
    let n = p.n();
    let mut weight = vec![0usize; n];
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&u| !visited[u])
            .fold(None, |best: Option<usize>, u| match best {
                Some(b) if weight[b] >= weight[u] => Some(b),
                _ => Some(u),
            })
            .expect("unvisited node");
        visited[v] = true;
        order.push(v);
        for &w in p.neighbors(v) {
            if !visited[w] {
                weight[w] += 1;
            }
        }
    }
    EliminationOrdering { order }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FillCheck {
    NoFill,
    /// Fill positions `(i, j)`, `i < j`, sorted.
    Fill(Vec<(usize, usize)>),
}

impl FillCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, FillCheck::NoFill)
    }
}

/// Symbolic elimination of `p` in order `e`, collecting every created fill edge.
pub fn zero_fill_check(p: &SparsityPattern, e: &EliminationOrdering) -> Result<FillCheck> {
    if e.len() != p.n() {
        return Err(Error::InvalidOrdering(p.n()));
    }
    let mut adj = p.adj.clone();
    let mut eliminated = vec![false; p.n()];
    let mut fill = BTreeSet::new();
    for &v in e.as_slice() {
        eliminated[v] = true;
        let remaining: Vec<usize> = adj[v].iter().copied().filter(|&w| !eliminated[w]).collect();
        for (a, &x) in remaining.iter().enumerate() {
            for &y in &remaining[a + 1..] {
                if adj[x].insert(y) {
                    adj[y].insert(x);
                    fill.insert((x.min(y), x.max(y)));
                }
            }
        }
    }
    Ok(if fill.is_empty() {
        FillCheck::NoFill
    } else {
        FillCheck::Fill(fill.into_iter().collect())
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Chordality {
    /// Certified by a perfect elimination ordering.
    Chordal(EliminationOrdering),
    /// A chordless cycle of length at least four, in traversal order.
    NotChordal(Vec<usize>),
}

pub fn is_chordal(p: &SparsityPattern) -> Chordality {
    let peo = mcs_ordering(p).reversed();
    if zero_fill_check(p, &peo).map(|f| f.is_ok()).unwrap_or(false) {
        return Chordality::Chordal(peo);
    }
    let cycle = find_chordless_cycle(p).expect("non-chordal pattern has a chordless cycle");
    Chordality::NotChordal(cycle)
}

/// Searches every node `v` and non-adjacent neighbor pair `x, y` for a shortest
/// `x`-`y` path avoiding `v` and the rest of its neighborhood. Such a path
/// closes an induced cycle through `v`.
fn find_chordless_cycle(p: &SparsityPattern) -> Option<Vec<usize>> {
    let n = p.n();
    for v in 0..n {
        let nbrs: Vec<usize> = p.neighbors(v).iter().copied().collect();
        for (a, &x) in nbrs.iter().enumerate() {
            for &y in &nbrs[a + 1..] {
                if p.has_edge(x, y) {
                    continue;
                }
                let mut blocked = vec![false; n];
                blocked[v] = true;
                for &w in &nbrs {
                    if w != x && w != y {
                        blocked[w] = true;
                    }
                }
                if let Some(path) = shortest_path(p, x, y, &blocked) {
                    let mut cycle = vec![v];
                    cycle.extend(path);
                    return Some(canonical_cycle(cycle));
                }
            }
        }
    }
    None
}

fn shortest_path(p: &SparsityPattern, from: usize, to: usize, blocked: &[bool]) -> Option<Vec<usize>> {
    let mut prev = vec![usize::MAX; p.n()];
    prev[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            let mut path = vec![to];
            let mut cur = to;
            while cur != from {
                cur = prev[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for &w in p.neighbors(u) {
            if !blocked[w] && prev[w] == usize::MAX {
                prev[w] = u;
                queue.push_back(w);
            }
        }
    }
    None
}

/// Rotates a cycle to start at its smallest node and walk toward the smaller
/// of that node's two cycle neighbors.
fn canonical_cycle(mut cycle: Vec<usize>) -> Vec<usize> {
    let k = cycle.len();
    let start = (0..k).min_by_key(|&i| cycle[i]).unwrap_or(0);
    cycle.rotate_left(start);
    if cycle[k - 1] < cycle[1] {
        cycle[1..].reverse();
    }
    cycle
}

/// True when `cycle` is a cycle of `p` with no chords.
pub fn is_chordless_cycle(p: &SparsityPattern, cycle: &[usize]) -> bool {
    let k = cycle.len();
    if k < 4 || cycle.iter().collect::<BTreeSet<_>>().len() != k {
        return false;
    }
    (0..k).all(|a| {
        (a + 1..k).all(|b| {
            let consecutive = b == a + 1 || (a == 0 && b == k - 1);
            p.has_edge(cycle[a], cycle[b]) == consecutive
        })
    })
}

/// Maximal cliques of a chordal pattern, each sorted, listed in
/// lexicographic order.
pub fn maximal_cliques(p: &SparsityPattern, peo: &EliminationOrdering) -> Result<Vec<Vec<usize>>> {
    if !zero_fill_check(p, peo)?.is_ok() {
        let cycle = find_chordless_cycle(p).unwrap_or_default();
        return Err(Error::NotChordal { cycle });
    }
    let pos = peo.position();
    let mut candidates: Vec<Vec<usize>> = peo
        .as_slice()
        .iter()
        .map(|&v| {
            let mut c: Vec<usize> = std::iter::once(v)
                .chain(p.neighbors(v).iter().copied().filter(|&w| pos[w] > pos[v]))
                .collect();
            c.sort_unstable();
            c
        })
        .collect();
    candidates.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    for c in candidates {
        let contained = cliques.iter().any(|k| c.iter().all(|v| k.binary_search(v).is_ok()));
        if !contained {
            cliques.push(c);
        }
    }
    cliques.sort();
    Ok(cliques)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeEdge {
    /// Clique indices, `a < b`.
    pub a: usize,
    pub b: usize,
    /// `cliques[a] ∩ cliques[b]`, sorted.
    pub separator: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    Clique,
    Separator,
}

/// One diagonal block of the clique tree's block layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Block<'a> {
    pub kind: BlockKind,
    /// Index into `cliques` or `edges`.
    pub index: usize,
    pub nodes: &'a [usize],
}

/// Clique tree of a connected chordal pattern.
///
/// Blocks are laid out cliques first (in clique order), then one separator per
/// tree edge (in edge order). Repeated separator node sets are kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueTree {
    n: usize,
    cliques: Vec<Vec<usize>>,
    edges: Vec<TreeEdge>,
}

impl CliqueTree {
    /// Chordality test, maximal cliques and tree in one step.
    pub fn from_pattern(p: &SparsityPattern) -> Result<Self> {
        match is_chordal(p) {
            Chordality::Chordal(peo) => {
                let cliques = maximal_cliques(p, &peo)?;
                clique_tree(p, cliques)
            }
            Chordality::NotChordal(cycle) => Err(Error::NotChordal { cycle }),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cliques(&self) -> &[Vec<usize>] {
        &self.cliques
    }

    pub fn edges(&self) -> &[TreeEdge] {
        &self.edges
    }

    pub fn separators(&self) -> impl Iterator<Item = &[usize]> {
        self.edges.iter().map(|e| e.separator.as_slice())
    }

    pub fn clique_count(&self) -> usize {
        self.cliques.len()
    }

    pub fn separator_count(&self) -> usize {
        self.edges.len()
    }

    pub fn block_count(&self) -> usize {
        self.clique_count() + self.separator_count()
    }

    pub fn blocks(&self) -> impl Iterator<Item = Block<'_>> {
        let cliques = self.cliques.iter().enumerate().map(|(index, c)| Block {
            kind: BlockKind::Clique,
            index,
            nodes: c,
        });
        let seps = self.edges.iter().enumerate().map(|(index, e)| Block {
            kind: BlockKind::Separator,
            index,
            nodes: &e.separator,
        });
        cliques.chain(seps)
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks().map(|b| b.nodes.len()).collect()
    }

    /// Total block size `Σ d_k`.
    pub fn total_size(&self) -> usize {
        self.block_sizes().iter().sum()
    }

    /// Neighbor lists of the tree on clique indices.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.cliques.len()];
        for e in &self.edges {
            adj[e.a].push(e.b);
            adj[e.b].push(e.a);
        }
        adj.iter_mut().for_each(|v| v.sort_unstable());
        adj
    }

    /// True when, for every node, the cliques containing it form a subtree.
    pub fn has_running_intersection(&self) -> bool {
        let adj = self.adjacency();
        (0..self.n).all(|v| {
            let holders: Vec<usize> = (0..self.cliques.len())
                .filter(|&k| self.cliques[k].binary_search(&v).is_ok())
                .collect();
            let Some(&start) = holders.first() else {
                return false;
            };
            let mut seen = vec![false; self.cliques.len()];
            seen[start] = true;
            let mut stack = vec![start];
            let mut reached = 1;
            while let Some(k) = stack.pop() {
                for &j in &adj[k] {
                    if !seen[j] && self.cliques[j].binary_search(&v).is_ok() {
                        seen[j] = true;
                        reached += 1;
                        stack.push(j);
                    }
                }
            }
            reached == holders.len()
        })
    }

    /// Root-first traversal: `(clique, parent edge)` pairs, root first with no
    /// edge. The root is the largest clique, ties going to the lower index.
    pub fn traversal(&self) -> Vec<(usize, Option<usize>)> {
        let root = (0..self.cliques.len()).fold(0, |best, k| {
            if self.cliques[k].len() > self.cliques[best].len() {
                k
            } else {
                best
            }
        });
        let mut incident = vec![Vec::new(); self.cliques.len()];
        for (idx, e) in self.edges.iter().enumerate() {
            incident[e.a].push((e.b, idx));
            incident[e.b].push((e.a, idx));
        }
        incident.iter_mut().for_each(|v| v.sort_unstable());
        let mut seen = vec![false; self.cliques.len()];
        seen[root] = true;
        let mut out = vec![(root, None)];
        let mut queue = VecDeque::from([root]);
        while let Some(k) = queue.pop_front() {
            for &(j, idx) in &incident[k] {
                if !seen[j] {
                    seen[j] = true;
                    out.push((j, Some(idx)));
                    queue.push_back(j);
                }
            }
        }
        out
    }
}

/// Maximum-weight spanning tree of the clique intersection graph (weight =
/// intersection size), built with Kruskal's algorithm. Ties are broken by
/// clique index pair, so the tree is deterministic.
pub fn clique_tree(p: &SparsityPattern, mut cliques: Vec<Vec<usize>>) -> Result<CliqueTree> {
    let components = p.components().len();
    if components > 1 {
        return Err(Error::Disconnected { components });
    }
    if cliques.is_empty() {
        return Err(Error::InvalidArgument("no cliques".into()));
    }
    cliques.iter_mut().for_each(|c| {
        c.sort_unstable();
        c.dedup();
    });
    cliques.sort();
    for c in &cliques {
        if let Some(&v) = c.iter().find(|&&v| v >= p.n()) {
            return Err(Error::IndexOutOfRange { index: v, n: p.n() });
        }
        if !p.is_clique(c) {
            return Err(Error::InvalidArgument(format!("{c:?} is not a clique of the pattern")));
        }
    }
    let covered = p.edges().into_iter().all(|(i, j)| {
        cliques
            .iter()
            .any(|c| c.binary_search(&i).is_ok() && c.binary_search(&j).is_ok())
    }) && (0..p.n()).all(|v| cliques.iter().any(|c| c.binary_search(&v).is_ok()));
    if !covered {
        return Err(Error::InvalidArgument("cliques do not cover the pattern".into()));
    }

    let mut candidates = Vec::new();
    for a in 0..cliques.len() {
        for b in a + 1..cliques.len() {
            let sep: Vec<usize> = cliques[a]
                .iter()
                .copied()
                .filter(|v| cliques[b].binary_search(v).is_ok())
                .collect();
            if !sep.is_empty() {
                candidates.push(TreeEdge { a, b, separator: sep });
            }
        }
    }
    candidates.sort_by(|x, y| {
        y.separator
            .len()
            .cmp(&x.separator.len())
            .then((x.a, x.b).cmp(&(y.a, y.b)))
    });

    let mut parent: Vec<usize> = (0..cliques.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut edges = Vec::new();
    for e in candidates {
        let (ra, rb) = (find(&mut parent, e.a), find(&mut parent, e.b));
        if ra != rb {
            parent[ra] = rb;
            edges.push(e);
        }
    }
    edges.sort_by_key(|e| (e.a, e.b));

    let tree = CliqueTree {
        n: p.n(),
        cliques,
        edges,
    };
    if tree.edges.len() + 1 != tree.cliques.len() || !tree.has_running_intersection() {
        let cycle = find_chordless_cycle(p).unwrap_or_default();
        return Err(Error::NotChordal { cycle });
    }
    Ok(tree)
}
