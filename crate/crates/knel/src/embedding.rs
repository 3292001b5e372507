//! Weak containment between structures and bounded membership in the
//! class hierarchy.
//!
//! A weak embedding is a strictly increasing injection of positions
//! that sends marked vertices to marked vertices with componentwise
//! matching marker tuples and sends edges to edges; non-edges need not
//! be reflected and unmarked vertices may land on marked ones.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::amalgam::interlaces;
use crate::enumerate::{catalog_interlace, Catalog};
use crate::error::Error;
use crate::invariants::GraphReduct;
use crate::structures::AmalgamStructure;

/// A witness for weak containment: `map()[i]` is the image of position
/// `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Embedding {
    map: Vec<usize>,
}

impl Embedding {
    pub fn new(map: Vec<usize>) -> Self {
        Embedding { map }
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn image_of(&self, p: usize) -> usize {
        self.map[p]
    }

    /// Serializes as `{"map":[...]}`.
    pub fn to_record(&self) -> String {
        serde_json::to_string(&serde_json::json!({ "map": self.map })).expect("witness serialize")
    }

    /// Rechecks every clause against the two structures and reports the
    /// first failure, if any.
    pub fn verify(&self, a: &AmalgamStructure, b: &AmalgamStructure) -> Result<(), String> {
        if self.map.len() != a.vertex_count() {
            return Err(format!("map has {} entries, domain has {}", self.map.len(), a.vertex_count()));
        }
        if !self.map.windows(2).all(|w| w[0] < w[1]) {
            return Err("map is not strictly increasing".into());
        }
        if self.map.iter().any(|&q| q >= b.vertex_count()) {
            return Err("map leaves the codomain".into());
        }
        for &u in a.marked() {
            let v = self.map[u];
            if !b.is_marked(v) {
                return Err(format!("marked vertex {u} lands on unmarked {v}"));
            }
            let expect: Vec<usize> = a.markers(u).unwrap().iter().map(|&p| self.map[p]).collect();
            if b.markers(v).unwrap() != expect.as_slice() {
                return Err(format!("marker tuples do not commute at vertex {u}"));
            }
        }
        for &(p, q) in a.edges() {
            if !b.has_edge(self.map[p], self.map[q]) {
                return Err(format!("edge {{{p},{q}}} is not preserved"));
            }
        }
        Ok(())
    }

    /// Composition with another witness: `self` embeds A into B,
    /// `next` embeds B into C, the result embeds A into C.
    pub fn then(&self, next: &Embedding) -> Embedding {
        Embedding { map: self.map.iter().map(|&q| next.map[q]).collect() }
    }
}

struct Searcher<'a> {
    a: &'a AmalgamStructure,
    b: &'a AmalgamStructure,
    marked: Vec<usize>,
    assigned: BTreeMap<usize, usize>,
}

impl<'a> Searcher<'a> {
    /// Adds `p -> q` if consistent with order and prior assignments;
    /// records fresh pairs on the trail for backtracking.
    fn try_assign(&mut self, p: usize, q: usize, trail: &mut Vec<usize>) -> bool {
        if let Some(&q0) = self.assigned.get(&p) {
            return q0 == q;
        }
        if let Some((_, &qp)) = self.assigned.range(..p).next_back() {
            if qp >= q {
                return false;
            }
        }
        if let Some((_, &qs)) = self.assigned.range(p + 1..).next() {
            if qs <= q {
                return false;
            }
        }
        self.assigned.insert(p, q);
        trail.push(p);
        true
    }

    fn solve(&mut self, i: usize) -> Option<Vec<usize>> {
        if i == self.marked.len() {
            return self.fill();
        }
        let u = self.marked[i];
        let hu: Vec<usize> = self.a.markers(u).unwrap().to_vec();
        let candidates: Vec<usize> = self.b.marked().iter().copied().collect();
        for v in candidates {
            let mut trail = Vec::new();
            let hv = self.b.markers(v).unwrap();
            let mut ok = true;
            for (k, &pa) in hu.iter().enumerate() {
                if !self.try_assign(pa, hv[k], &mut trail) {
                    ok = false;
                    break;
                }
            }
            if ok {
                for &w in &self.marked[..i] {
                    if self.a.has_edge(w, u) && !self.b.has_edge(self.assigned[&w], v) {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                if let Some(found) = self.solve(i + 1) {
                    return Some(found);
                }
            }
            for p in trail {
                self.assigned.remove(&p);
            }
        }
        None
    }

    /// Slots the unconstrained positions into the gaps left between the
    /// forced assignments; gap counting is exact because unassigned
    /// positions carry no constraint beyond order.
    fn fill(&self) -> Option<Vec<usize>> {
        let (am, bm) = (self.a.vertex_count(), self.b.vertex_count());
        let pairs: Vec<(usize, usize)> = self.assigned.iter().map(|(&p, &q)| (p, q)).collect();
        let mut map = vec![usize::MAX; am];
        if pairs.is_empty() {
            if am > bm {
                return None;
            }
            return Some((0..am).collect());
        }
        let (first_p, first_q) = pairs[0];
        if first_p > first_q {
            return None;
        }
        for p in 0..first_p {
            map[p] = p; // packed left of the first forced image
        }
        for w in pairs.windows(2) {
            let ((pa, qa), (pb, qb)) = (w[0], w[1]);
            if pb - pa > qb - qa {
                return None;
            }
            for (off, p) in (pa..pb).enumerate() {
                map[p] = qa + off;
            }
        }
        let (last_p, last_q) = *pairs.last().unwrap();
        if am - last_p > bm - last_q {
            return None;
        }
        for (off, p) in (last_p..am).enumerate() {
            map[p] = last_q + off;
        }
        Some(map)
    }
}

/// Searches for a weak embedding of `a` into `b`; exhaustive over
/// strictly increasing injections, pruned by matching marked vertices
/// (whose tuples force their markers' images) before counting the
/// remaining positions into the gaps.
pub fn weak_embed(a: &AmalgamStructure, b: &AmalgamStructure) -> Result<Option<Embedding>, Error> {
    if a.arity() != b.arity() {
        return Err(Error::ArityMismatch { left: a.arity(), right: b.arity() });
    }
    if a.vertex_count() > b.vertex_count() {
        return Ok(None);
    }
    let mut searcher = Searcher {
        a,
        b,
        marked: a.marked().iter().copied().collect(),
        assigned: BTreeMap::new(),
    };
    Ok(searcher.solve(0).map(Embedding::new))
}

/// Plain graph-level containment: an injective vertex map carrying
/// edges to edges, with no order requirement.
pub fn subgraph_embed(ga: &GraphReduct, gb: &GraphReduct) -> Option<Vec<usize>> {
    if ga.vertex_count > gb.vertex_count {
        return None;
    }
    let adj_a = ga.adjacency();
    let deg_b: Vec<usize> = gb.adjacency().iter().map(|ns| ns.len()).collect();
    let mut map = vec![usize::MAX; ga.vertex_count];
    let mut used = vec![false; gb.vertex_count];
    fn go(
        v: usize,
        ga: &GraphReduct,
        gb: &GraphReduct,
        adj_a: &[Vec<usize>],
        deg_b: &[usize],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if v == ga.vertex_count {
            return true;
        }
        'candidates: for w in 0..gb.vertex_count {
            if used[w] || deg_b[w] < adj_a[v].len() {
                continue;
            }
            for &x in &adj_a[v] {
                if x < v && !gb.has_edge(map[x], w) {
                    continue 'candidates;
                }
            }
            map[v] = w;
            used[w] = true;
            if go(v + 1, ga, gb, adj_a, deg_b, map, used) {
                return true;
            }
            used[w] = false;
        }
        false
    }
    if go(0, ga, gb, &adj_a, &deg_b, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

/// Verdict of a bounded membership query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    /// Least catalog level hosting the structure, the member index at
    /// that level, and a witness.
    Yes { level: usize, member: usize, witness: Embedding },
    /// Some edge's endpoint tuples interlace in neither orientation, so
    /// no member of any level can host the structure.
    RefutedByMarkers { edge: (usize, usize) },
    /// Neither hosted within the supplied levels nor refuted.
    Unknown { max_level: usize },
}

/// Scans the supplied catalogs for a host of `a`. Membership in the
/// full class is semidecidable from finitely many levels, so the only
/// negative verdict is the sound marker refutation; exhaustion of the
/// catalogs without a host reports `Unknown`.
pub fn class_membership(a: &AmalgamStructure, catalogs: &[Catalog]) -> Result<Membership, Error> {
    let interlace = catalog_interlace(catalogs)?;
    if interlace.arity() != a.arity() {
        return Err(Error::ArityMismatch { left: a.arity(), right: interlace.arity() });
    }
    for &(u, v) in a.edges() {
        let s = a.marker_tuple(u)?;
        let t = a.marker_tuple(v)?;
        if !interlaces(&s, &t, interlace)? && !interlaces(&t, &s, interlace)? {
            return Ok(Membership::RefutedByMarkers { edge: (u, v) });
        }
    }
    for catalog in catalogs {
        for (index, member) in catalog.members().enumerate() {
            if let Some(witness) = weak_embed(a, member)? {
                return Ok(Membership::Yes { level: catalog.level(), member: index, witness });
            }
        }
    }
    Ok(Membership::Unknown {
        max_level: catalogs.iter().map(|c| c.level()).max().unwrap_or(0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amalgam::one_edge_amalgam;
    use crate::enumerate::enumerate_levels;
    use crate::enumerate::DEFAULT_VERTEX_CAP;
    use crate::structures::{base_structure, InterlaceType};

    fn e(s: &str) -> InterlaceType {
        InterlaceType::parse(s).unwrap()
    }

    #[test]
    fn copy_map_is_a_witness() {
        let h = base_structure(2).unwrap();
        let big = one_edge_amalgam(&h, 1, &e("0101")).unwrap();
        let w = weak_embed(&h, &big).unwrap().expect("the copy embeds");
        assert_eq!(w.map(), &[0, 2]);
        w.verify(&h, &big).unwrap();
    }

    #[test]
    fn identity_on_equal_structures() {
        let h = one_edge_amalgam(&base_structure(2).unwrap(), 1, &e("0101")).unwrap();
        let w = weak_embed(&h, &h).unwrap().expect("identity embeds");
        assert_eq!(w.map(), &[0, 1, 2, 3]);
    }

    #[test]
    fn edge_does_not_embed_into_independent_points() {
        let edge = AmalgamStructure::from_parts(
            1,
            2,
            [0, 1],
            [(0, 1)],
            [(0, vec![0]), (1, vec![1])],
        )
        .checked()
        .unwrap();
        let points = AmalgamStructure::from_parts(
            1,
            2,
            [0, 1],
            [],
            [(0, vec![0]), (1, vec![1])],
        )
        .checked()
        .unwrap();
        assert!(weak_embed(&edge, &points).unwrap().is_none());
        assert!(weak_embed(&points, &edge).unwrap().is_some());
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        let a = base_structure(1).unwrap();
        let b = base_structure(2).unwrap();
        assert!(matches!(weak_embed(&a, &b), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn subgraph_embed_examples() {
        let k3 = GraphReduct::complete(3);
        assert!(subgraph_embed(&k3, &k3).is_some());
        let c4 = GraphReduct::cycle(4);
        assert!(subgraph_embed(&c4, &k3).is_none());
        let empty = GraphReduct::new(0, []);
        assert_eq!(subgraph_embed(&empty, &k3), Some(vec![]));
    }

    #[test]
    fn membership_examples() {
        let run = enumerate_levels(&e("0101"), 1, DEFAULT_VERTEX_CAP);

        // the base structure is the level-0 member
        let base = base_structure(2).unwrap();
        match class_membership(&base, &run.catalogs).unwrap() {
            Membership::Yes { level, witness, .. } => {
                assert_eq!(level, 0);
                assert_eq!(witness.map(), &[0, 1]);
            }
            other => panic!("expected Yes, got {other:?}"),
        }

        // side-by-side tuples can never interlace by 0101
        let refuted = AmalgamStructure::from_parts(
            2,
            4,
            [1, 3],
            [(1, 3)],
            [(1, vec![0, 1]), (3, vec![2, 3])],
        )
        .checked()
        .unwrap();
        assert_eq!(
            class_membership(&refuted, &run.catalogs).unwrap(),
            Membership::RefutedByMarkers { edge: (1, 3) }
        );

        // the interlaced single edge is the level-1 one-edge member
        let hosted = AmalgamStructure::from_parts(
            2,
            4,
            [2, 3],
            [(2, 3)],
            [(2, vec![0, 2]), (3, vec![1, 3])],
        )
        .checked()
        .unwrap();
        match class_membership(&hosted, &run.catalogs).unwrap() {
            Membership::Yes { level, .. } => assert_eq!(level, 1),
            other => panic!("expected Yes at level 1, got {other:?}"),
        }
    }

    #[test]
    fn unknown_when_catalogs_are_shallow() {
        // a path of three marked vertices needs level 2, so a depth-1
        // scan reports Unknown rather than No
        let run = enumerate_levels(&e("01"), 1, DEFAULT_VERTEX_CAP);
        let path = AmalgamStructure::from_parts(
            1,
            3,
            [0, 1, 2],
            [(0, 1), (1, 2)],
            [(0, vec![0]), (1, vec![1]), (2, vec![2])],
        )
        .checked()
        .unwrap();
        assert_eq!(
            class_membership(&path, &run.catalogs).unwrap(),
            Membership::Unknown { max_level: 1 }
        );
    }

    #[test]
    fn witness_record_shape() {
        let w = Embedding::new(vec![0, 2, 5]);
        assert_eq!(w.to_record(), r#"{"map":[0,2,5]}"#);
    }
}
