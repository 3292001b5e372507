//! Graphs on strictly increasing tuples over a finite ground set: the
//! interlace graph joins two tuples when they interlace (in either
//! orientation) by a fixed type, and the classical shift graph joins
//! tuples overlapping in all but their outermost entries.

use itertools::Itertools;

use crate::amalgam::interlaces;
use crate::error::Error;
use crate::invariants::{graph_dot, GraphReduct};
use crate::structures::{InterlaceType, MarkerTuple};

/// A simple graph whose vertices are all strictly increasing
/// `arity`-tuples over `0..ground`, numbered in lexicographic order.
#[derive(Debug, Clone)]
pub struct TupleGraph {
    pub ground: usize,
    pub arity: usize,
    pub tuples: Vec<MarkerTuple>,
    pub graph: GraphReduct,
}

impl TupleGraph {
    pub fn dot(&self, name: &str) -> String {
        let labels: Vec<String> = self.tuples.iter().map(|t| t.to_string()).collect();
        graph_dot(&self.graph, name, &labels)
    }
}

fn all_tuples(ground: usize, arity: usize) -> Result<Vec<MarkerTuple>, Error> {
    if arity == 0 {
        return Err(Error::ZeroArity);
    }
    if ground < arity {
        return Err(Error::GroundTooSmall { ground, arity });
    }
    Ok((0..ground)
        .combinations(arity)
        .map(|c| MarkerTuple::new(c).expect("combinations are strictly increasing"))
        .collect())
}

/// The interlace graph: tuples `s`, `t` are joined when they interlace
/// by `e` in one orientation or the other.
pub fn interlace_graph(ground: usize, arity: usize, e: &InterlaceType) -> Result<TupleGraph, Error> {
    if e.arity() != arity {
        return Err(Error::ArityMismatch { left: arity, right: e.arity() });
    }
    let tuples = all_tuples(ground, arity)?;
    let mut edges = Vec::new();
    for i in 0..tuples.len() {
        for j in i + 1..tuples.len() {
            if interlaces(&tuples[i], &tuples[j], e)? || interlaces(&tuples[j], &tuples[i], e)? {
                edges.push((i, j));
            }
        }
    }
    let graph = GraphReduct::new(tuples.len(), edges);
    Ok(TupleGraph { ground, arity, tuples, graph })
}

/// The shift graph: `(x_1,...,x_n)` is joined to `(x_2,...,x_n,y)`
/// whenever `x_n < y`.
pub fn shift_graph(ground: usize, arity: usize) -> Result<TupleGraph, Error> {
    let tuples = all_tuples(ground, arity)?;
    let shifted = |s: &[usize], t: &[usize]| s[1..] == t[..s.len() - 1] && t[s.len() - 1] > s[s.len() - 1];
    let mut edges = Vec::new();
    for i in 0..tuples.len() {
        for j in i + 1..tuples.len() {
            let (s, t) = (tuples[i].values(), tuples[j].values());
            if shifted(s, t) || shifted(t, s) {
                edges.push((i, j));
            }
        }
    }
    let graph = GraphReduct::new(tuples.len(), edges);
    Ok(TupleGraph { ground, arity, tuples, graph })
}
