//! Graph reducts and exact invariants: chromatic number by branch and
//! bound (greedy clique lower bound, DSATUR upper bound), girth and odd
//! girth by breadth-first search, bipartiteness, the marker
//! homomorphism check, and DOT export.

use std::collections::VecDeque;
use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::amalgam::interlaces;
use crate::error::Error;
use crate::structures::{AmalgamStructure, InterlaceType};

/// A plain simple graph on vertices `0..vertex_count`, edges stored as
/// ascending pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphReduct {
    pub vertex_count: usize,
    pub edges: BTreeSet<(usize, usize)>,
}

impl GraphReduct {
    pub fn new<I: IntoIterator<Item = (usize, usize)>>(vertex_count: usize, edges: I) -> Self {
        let edges: BTreeSet<(usize, usize)> = edges
            .into_iter()
            .map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
            .collect();
        for &(a, b) in &edges {
            assert!(a != b, "loops are not allowed");
            assert!(b < vertex_count, "edge endpoint out of range");
        }
        GraphReduct { vertex_count, edges }
    }

    pub fn complete(k: usize) -> Self {
        let mut edges = BTreeSet::new();
        for a in 0..k {
            for b in a + 1..k {
                edges.insert((a, b));
            }
        }
        GraphReduct { vertex_count: k, edges }
    }

    pub fn cycle(k: usize) -> Self {
        assert!(k >= 3);
        GraphReduct::new(k, (0..k).map(|i| (i, (i + 1) % k)))
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let pair = if a <= b { (a, b) } else { (b, a) };
        self.edges.contains(&pair)
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }
}

/// The plain graph carried by a structure: the marked vertices in
/// order, relabeled from 0, with the structure's edges. Isolated marked
/// vertices are kept.
pub fn reduct(h: &AmalgamStructure) -> GraphReduct {
    let rank: std::collections::BTreeMap<usize, usize> =
        h.marked().iter().enumerate().map(|(i, &u)| (u, i)).collect();
    GraphReduct {
        vertex_count: h.marked().len(),
        edges: h.edges().iter().map(|&(a, b)| (rank[&a], rank[&b])).collect(),
    }
}

fn greedy_clique(adj: &[Vec<usize>], matrix: &[Vec<bool>]) -> Vec<usize> {
    let n = adj.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(adj[v].len()));
    let mut best: Vec<usize> = Vec::new();
    for &start in &order {
        if adj[start].len() + 1 <= best.len() {
            break; // degrees only shrink from here
        }
        let mut clique = vec![start];
        for &v in &order {
            if v != start && clique.iter().all(|&u| matrix[u][v]) {
                clique.push(v);
            }
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best
}

fn dsatur_upper(adj: &[Vec<usize>]) -> usize {
    let n = adj.len();
    let mut color: Vec<Option<usize>> = vec![None; n];
    let mut used_colors = 0usize;
    for _ in 0..n {
        // most saturated uncolored vertex, ties by degree then index
        let mut pick = None;
        let mut pick_sat = 0usize;
        for v in 0..n {
            if color[v].is_some() {
                continue;
            }
            let sat = neighbor_colors(v, adj, &color).count_ones() as usize;
            match pick {
                None => {
                    pick = Some(v);
                    pick_sat = sat;
                }
                Some(p) => {
                    if sat > pick_sat || (sat == pick_sat && adj[v].len() > adj[p].len()) {
                        pick = Some(v);
                        pick_sat = sat;
                    }
                }
            }
        }
        let v = pick.expect("an uncolored vertex remains");
        let mut taken = vec![false; used_colors + 1];
        for &w in &adj[v] {
            if let Some(c) = color[w] {
                if c < taken.len() {
                    taken[c] = true;
                }
            }
        }
        let c = (0..).find(|&c| c >= taken.len() || !taken[c]).unwrap();
        color[v] = Some(c);
        used_colors = used_colors.max(c + 1);
    }
    used_colors
}

// Saturation as a bitmask over the first 128 colors; enough for every
// graph this crate generates, and only used to rank candidates.
fn neighbor_colors(v: usize, adj: &[Vec<usize>], color: &[Option<usize>]) -> u128 {
    let mut mask = 0u128;
    for &w in &adj[v] {
        if let Some(c) = color[w] {
            if c < 128 {
                mask |= 1 << c;
            }
        }
    }
    mask
}

fn k_colorable(adj: &[Vec<usize>], k: usize, clique: &[usize]) -> bool {
    let n = adj.len();
    if clique.len() > k {
        return false;
    }
    let mut color: Vec<Option<usize>> = vec![None; n];
    for (c, &v) in clique.iter().enumerate() {
        color[v] = Some(c);
    }
    let mut colored = clique.len();
    let max_used = clique.len().saturating_sub(1);
    extend_coloring(adj, k, &mut color, &mut colored, max_used)
}

fn extend_coloring(
    adj: &[Vec<usize>],
    k: usize,
    color: &mut Vec<Option<usize>>,
    colored: &mut usize,
    max_used: usize,
) -> bool {
    let n = adj.len();
    if *colored == n {
        return true;
    }
    // DSATUR branching: the most constrained vertex first
    let mut pick = None;
    let mut pick_sat = 0usize;
    for v in 0..n {
        if color[v].is_some() {
            continue;
        }
        let sat = neighbor_colors(v, adj, color).count_ones() as usize;
        match pick {
            None => {
                pick = Some(v);
                pick_sat = sat;
            }
            Some(p) => {
                if sat > pick_sat || (sat == pick_sat && adj[v].len() > adj[p].len()) {
                    pick = Some(v);
                    pick_sat = sat;
                }
            }
        }
    }
    let v = pick.expect("an uncolored vertex remains");
    // a fresh color beyond max_used+1 is symmetric to max_used+1
    let limit = k.min(max_used + 2);
    let mut taken = vec![false; limit];
    for &w in &adj[v] {
        if let Some(c) = color[w] {
            if c < limit {
                taken[c] = true;
            }
        }
    }
    for c in 0..limit {
        if taken[c] {
            continue;
        }
        color[v] = Some(c);
        *colored += 1;
        if extend_coloring(adj, k, color, colored, max_used.max(c)) {
            return true;
        }
        color[v] = None;
        *colored -= 1;
    }
    false
}

/// Exact chromatic number. 0 for the empty graph, 1 for edgeless
/// nonempty graphs; otherwise branch and bound between a greedy clique
/// lower bound and a DSATUR upper bound.
pub fn chromatic_number(g: &GraphReduct) -> usize {
    if g.vertex_count == 0 {
        return 0;
    }
    if g.edges.is_empty() {
        return 1;
    }
    let adj = g.adjacency();
    let mut matrix = vec![vec![false; g.vertex_count]; g.vertex_count];
    for &(a, b) in &g.edges {
        matrix[a][b] = true;
        matrix[b][a] = true;
    }
    let clique = greedy_clique(&adj, &matrix);
    let upper = dsatur_upper(&adj);
    debug_assert!(clique.len() <= upper);
    if clique.len() == upper {
        return upper;
    }
    for k in clique.len()..upper {
        if k_colorable(&adj, k, &clique) {
            return k;
        }
    }
    upper
}

/// Length of a shortest cycle, or `None` for forests.
pub fn girth(g: &GraphReduct) -> Option<usize> {
    let adj = g.adjacency();
    let n = g.vertex_count;
    let mut best: Option<usize> = None;
    for root in 0..n {
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    // a closed walk through the root; the shortest such
                    // over all roots is the girth
                    let candidate = dist[u] + dist[w] + 1;
                    if best.map_or(true, |b| candidate < b) {
                        best = Some(candidate);
                    }
                }
            }
        }
    }
    best
}

/// Length of a shortest odd cycle, or `None` for bipartite graphs.
/// Runs a breadth-first search on the parity double cover from every
/// vertex: the distance from `(v, even)` to `(v, odd)` is the shortest
/// odd closed walk through `v`, and the minimum over `v` is attained by
/// a cycle.
pub fn odd_girth(g: &GraphReduct) -> Option<usize> {
    let adj = g.adjacency();
    let n = g.vertex_count;
    let mut best: Option<usize> = None;
    for root in 0..n {
        let mut dist = vec![[usize::MAX; 2]; n];
        dist[root][0] = 0;
        let mut queue = VecDeque::from([(root, 0usize)]);
        while let Some((u, parity)) = queue.pop_front() {
            for &w in &adj[u] {
                let flipped = 1 - parity;
                if dist[w][flipped] == usize::MAX {
                    dist[w][flipped] = dist[u][parity] + 1;
                    queue.push_back((w, flipped));
                }
            }
        }
        if dist[root][1] != usize::MAX && best.map_or(true, |b| dist[root][1] < b) {
            best = Some(dist[root][1]);
        }
    }
    best
}

/// Two-colorability by breadth-first search.
pub fn is_bipartite(g: &GraphReduct) -> bool {
    let adj = g.adjacency();
    let n = g.vertex_count;
    let mut side = vec![None; n];
    for root in 0..n {
        if side[root].is_some() {
            continue;
        }
        side[root] = Some(false);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                match side[w] {
                    None => {
                        side[w] = Some(!side[u].unwrap());
                        queue.push_back(w);
                    }
                    Some(s) => {
                        if s == side[u].unwrap() {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// Outcome of the marker homomorphism check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MarkerCheck {
    Ok,
    /// An edge whose endpoint tuples interlace in neither orientation.
    Failing { edge: (usize, usize) },
}

/// Checks that for every edge the endpoint marker tuples interlace by
/// `e` in exactly one orientation; equivalently, mapping each marked
/// vertex to its tuple is a graph homomorphism from the reduct into the
/// interlace graph on the structure's positions.
pub fn marker_hom_check(h: &AmalgamStructure, e: &InterlaceType) -> Result<MarkerCheck, Error> {
    if h.arity() != e.arity() {
        return Err(Error::ArityMismatch { left: h.arity(), right: e.arity() });
    }
    for &(a, b) in h.edges() {
        let s = h.marker_tuple(a)?;
        let t = h.marker_tuple(b)?;
        let forward = interlaces(&s, &t, e)?;
        let backward = interlaces(&t, &s, e)?;
        if !(forward ^ backward) {
            return Ok(MarkerCheck::Failing { edge: (a, b) });
        }
    }
    Ok(MarkerCheck::Ok)
}

/// One line of an invariant summary table.
#[derive(Debug, Clone, Serialize)]
pub struct InvariantRecord {
    pub level: usize,
    pub index: usize,
    pub chi: usize,
    pub odd_girth: Option<usize>,
}

impl InvariantRecord {
    pub fn to_record(&self) -> String {
        serde_json::to_string(self).expect("record serialize")
    }
}

/// DOT rendering of a plain graph with caller-supplied vertex labels.
pub fn graph_dot(g: &GraphReduct, name: &str, labels: &[String]) -> String {
    assert_eq!(labels.len(), g.vertex_count);
    let mut out = String::new();
    let _ = writeln!(out, "graph {name} {{");
    let _ = writeln!(out, "  node [shape=circle];");
    for (i, label) in labels.iter().enumerate() {
        let _ = writeln!(out, "  v{i} [label=\"{label}\"];");
    }
    for &(a, b) in &g.edges {
        let _ = writeln!(out, "  v{a} -- v{b};");
    }
    out.push_str("}\n");
    out
}

/// DOT rendering of a structure's reduct, vertices labeled by their
/// position and marker tuple.
pub fn reduct_dot(h: &AmalgamStructure, name: &str) -> String {
    let labels: Vec<String> = h
        .marked()
        .iter()
        .map(|&u| {
            let tuple = h.marker_tuple(u).expect("marked vertices carry tuples");
            format!("{u} {tuple}")
        })
        .collect();
    graph_dot(&reduct(h), name, &labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::base_structure;

    #[test]
    fn reduct_of_base_is_an_isolated_vertex() {
        let g = reduct(&base_structure(2).unwrap());
        assert_eq!(g.vertex_count, 1);
        assert!(g.edges.is_empty());
        assert_eq!(chromatic_number(&g), 1);
    }

    #[test]
    fn chromatic_small_forced_values() {
        assert_eq!(chromatic_number(&GraphReduct::new(0, [])), 0);
        assert_eq!(chromatic_number(&GraphReduct::new(3, [])), 1);
        assert_eq!(chromatic_number(&GraphReduct::complete(2)), 2);
        assert_eq!(chromatic_number(&GraphReduct::complete(3)), 3);
        assert_eq!(chromatic_number(&GraphReduct::complete(6)), 6);
        assert_eq!(chromatic_number(&GraphReduct::cycle(5)), 3);
        assert_eq!(chromatic_number(&GraphReduct::cycle(6)), 2);
        // Petersen graph
        let petersen = GraphReduct::new(
            10,
            [
                (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
                (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
                (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
            ],
        );
        assert_eq!(chromatic_number(&petersen), 3);
    }

    #[test]
    fn girth_and_bipartiteness() {
        let k3 = GraphReduct::complete(3);
        assert_eq!(girth(&k3), Some(3));
        assert_eq!(odd_girth(&k3), Some(3));
        assert!(!is_bipartite(&k3));

        let edge = GraphReduct::new(2, [(0, 1)]);
        assert_eq!(girth(&edge), None);
        assert_eq!(odd_girth(&edge), None);
        assert!(is_bipartite(&edge));

        let c5 = GraphReduct::cycle(5);
        assert_eq!(girth(&c5), Some(5));
        assert_eq!(odd_girth(&c5), Some(5));
        assert!(!is_bipartite(&c5));

        let c6 = GraphReduct::cycle(6);
        assert_eq!(girth(&c6), Some(6));
        assert_eq!(odd_girth(&c6), None);
        assert!(is_bipartite(&c6));
    }

    #[test]
    fn marker_check_examples() {
        let e = InterlaceType::parse("0101").unwrap();

        // no edges: vacuously fine
        assert_eq!(
            marker_hom_check(&base_structure(2).unwrap(), &e).unwrap(),
            MarkerCheck::Ok
        );

        // interlacing tuples (0,2),(1,3)
        let good = AmalgamStructure::from_parts(
            2,
            4,
            [2, 3],
            [(2, 3)],
            [(2, vec![0, 2]), (3, vec![1, 3])],
        )
        .checked()
        .unwrap();
        assert_eq!(marker_hom_check(&good, &e).unwrap(), MarkerCheck::Ok);

        // side-by-side tuples (0,1),(2,3) fail in both orientations
        let bad = AmalgamStructure::from_parts(
            2,
            4,
            [1, 3],
            [(1, 3)],
            [(1, vec![0, 1]), (3, vec![2, 3])],
        )
        .checked()
        .unwrap();
        assert_eq!(
            marker_hom_check(&bad, &e).unwrap(),
            MarkerCheck::Failing { edge: (1, 3) }
        );

        let short = InterlaceType::parse("01").unwrap();
        assert!(marker_hom_check(&good, &short).is_err());
    }

    #[test]
    fn dot_output_shape() {
        let triangle = AmalgamStructure::from_parts(
            1,
            3,
            [0, 1, 2],
            [(0, 1), (0, 2), (1, 2)],
            [(0, vec![0]), (1, vec![1]), (2, vec![2])],
        )
        .checked()
        .unwrap();
        let dot = reduct_dot(&triangle, "t");
        assert!(dot.starts_with("graph t {"));
        assert!(dot.contains("v0 [label=\"0 (0)\"];"));
        assert!(dot.contains("v1 -- v2;"));
    }
}
