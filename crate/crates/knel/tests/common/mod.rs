//! Shared helpers for the integration suites: the acceptance
//! configurations, seeded random structure generation, and the
//! independent oracles (brute-force embedding scan, plain backtracking
//! coloring) that the implementations are checked against.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use rand::Rng;

use knel::enumerate::{enumerate_levels, Catalog, DEFAULT_VERTEX_CAP};
use knel::invariants::GraphReduct;
use knel::structures::{AmalgamStructure, InterlaceType};

/// The arity/interlace configurations the acceptance suite sweeps.
pub fn configs() -> Vec<InterlaceType> {
    ["01", "10", "0101", "0110", "1010"]
        .iter()
        .map(|s| InterlaceType::parse(s).unwrap())
        .collect()
}

pub fn catalogs(pattern: &str, levels: usize) -> Vec<Catalog> {
    let e = InterlaceType::parse(pattern).unwrap();
    let run = enumerate_levels(&e, levels, DEFAULT_VERTEX_CAP);
    assert!(run.truncated_at.is_none(), "probe scale must fit the default cap");
    run.catalogs
}

/// A valid random structure: marked vertices drawn independently, each
/// with a random marker tuple below it, edges drawn between marked
/// pairs. Valid by construction but usually not a class member.
pub fn random_structure<R: Rng>(
    rng: &mut R,
    arity: usize,
    max_vertices: usize,
    edge_prob: f64,
) -> AmalgamStructure {
    let m = rng.gen_range(0..=max_vertices);
    let mut marked = BTreeSet::new();
    let mut markers = BTreeMap::new();
    for u in arity.saturating_sub(1)..m {
        if !rng.gen_bool(0.6) {
            continue;
        }
        let mut below = BTreeSet::new();
        while below.len() < arity - 1 {
            below.insert(rng.gen_range(0..u));
        }
        let mut tuple: Vec<usize> = below.into_iter().collect();
        tuple.push(u);
        marked.insert(u);
        markers.insert(u, tuple);
    }
    let mut edges = BTreeSet::new();
    let marked_list: Vec<usize> = marked.iter().copied().collect();
    for i in 0..marked_list.len() {
        for j in i + 1..marked_list.len() {
            if rng.gen_bool(edge_prob) {
                edges.insert((marked_list[i], marked_list[j]));
            }
        }
    }
    let s = AmalgamStructure::from_parts(arity, m, marked, edges, markers);
    assert!(s.validate().is_empty());
    s
}

/// Independent clause-by-clause check that `map` is a weak embedding of
/// `a` into `b`.
pub fn is_weak_embedding(a: &AmalgamStructure, b: &AmalgamStructure, map: &[usize]) -> bool {
    if map.len() != a.vertex_count() {
        return false;
    }
    if !map.windows(2).all(|w| w[0] < w[1]) {
        return false;
    }
    if map.iter().any(|&q| q >= b.vertex_count()) {
        return false;
    }
    for &u in a.marked() {
        if !b.is_marked(map[u]) {
            return false;
        }
        let expect: Vec<usize> = a.markers(u).unwrap().iter().map(|&p| map[p]).collect();
        if b.markers(map[u]).unwrap() != expect.as_slice() {
            return false;
        }
    }
    a.edges().iter().all(|&(p, q)| b.has_edge(map[p], map[q]))
}

/// Unpruned exhaustive scan over all strictly increasing injections.
pub fn brute_force_weak_embed(a: &AmalgamStructure, b: &AmalgamStructure) -> Option<Vec<usize>> {
    (0..b.vertex_count())
        .combinations(a.vertex_count())
        .find(|map| is_weak_embedding(a, b, map))
}

/// Exhaustive k-coloring search in natural vertex order, trying k = 1
/// upward; independent of the branch-and-bound path.
pub fn oracle_chromatic(g: &GraphReduct) -> usize {
    if g.vertex_count == 0 {
        return 0;
    }
    if g.edges.is_empty() {
        return 1;
    }
    let adj = g.adjacency();
    for k in 1..=g.vertex_count {
        let mut colors = vec![usize::MAX; g.vertex_count];
        if try_color(0, k, 0, &mut colors, &adj) {
            return k;
        }
    }
    g.vertex_count
}

fn try_color(v: usize, k: usize, used: usize, colors: &mut Vec<usize>, adj: &[Vec<usize>]) -> bool {
    if v == colors.len() {
        return true;
    }
    // a fresh color beyond the first unused one is symmetric
    let limit = k.min(used + 1);
    for c in 0..limit {
        if adj[v].iter().any(|&w| colors[w] == c) {
            continue;
        }
        colors[v] = c;
        if try_color(v + 1, k, used.max(c + 1), colors, adj) {
            return true;
        }
        colors[v] = usize::MAX;
    }
    false
}

/// Smallest `k` with `2^k >= m`.
pub fn ceil_log2(m: usize) -> usize {
    let mut k = 0;
    while (1usize << k) < m {
        k += 1;
    }
    k
}
