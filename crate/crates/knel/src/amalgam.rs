//! The interlacing predicate and the two amalgamation operations that
//! generate the level hierarchy: the edgeless amalgamation glues two
//! copies of a structure over the part below a chosen vertex, the
//! one-edge amalgamation shuffles the two copies' marker blocks
//! according to an interlace type and joins the two copies of the
//! chosen marked vertex by a single new edge.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::Error;
use crate::structures::{AmalgamStructure, InterlaceType, MarkerTuple};

/// Whether tuples `s` and `t` interlace by `e`: all `2n` values must be
/// pairwise distinct and, in their merged ascending order, the values
/// of `s` must sit exactly at the zero positions of `e` (so `t` sits at
/// the one positions). Any repeated value makes the answer `false`.
pub fn interlaces(s: &MarkerTuple, t: &MarkerTuple, e: &InterlaceType) -> Result<bool, Error> {
    let n = e.arity();
    if s.len() != n {
        return Err(Error::TupleLengthMismatch { expected: n, found: s.len() });
    }
    if t.len() != n {
        return Err(Error::TupleLengthMismatch { expected: n, found: t.len() });
    }
    let mut merged: Vec<(usize, bool)> = s
        .values()
        .iter()
        .map(|&v| (v, false))
        .chain(t.values().iter().map(|&v| (v, true)))
        .collect();
    merged.sort_unstable();
    if merged.windows(2).any(|w| w[0].0 == w[1].0) {
        return Ok(false);
    }
    Ok(merged
        .iter()
        .enumerate()
        .all(|(idx, &(_, from_t))| from_t == (e.bit(idx + 1) == 1)))
}

/// How an amalgamation lays out its output: a shared prefix of input
/// positions kept once, followed by interleaved blocks carrying copy 0
/// and copy 1 of the input tail. The two copy maps are order-preserving
/// injections of the whole input whose images cover the output.
#[derive(Debug, Clone)]
pub struct BlockDecomposition {
    input_len: usize,
    shared_len: usize,
    /// Half-open intervals partitioning `[shared_len, input_len)`.
    blocks: Vec<(usize, usize)>,
    /// Output block order: `(copy, input block index)` per output slot.
    assignment: Vec<(usize, usize)>,
    /// Output start position of each output slot.
    offsets: Vec<usize>,
    /// `slot[copy][block]` = output slot carrying that copy of the block.
    slot: [Vec<usize>; 2],
    output_len: usize,
}

impl BlockDecomposition {
    /// Layout of the edgeless amalgamation over vertex `x`: the prefix
    /// below `x` is shared, and the tail from `x` on appears twice,
    /// copy 0 first.
    pub fn edgeless(h: &AmalgamStructure, x: usize) -> Result<Self, Error> {
        let m = h.vertex_count();
        if x >= m {
            return Err(Error::VertexOutOfRange(x));
        }
        Self::build(m, x, vec![(x, m)], vec![(0, 0), (1, 0)])
    }

    /// Layout of the one-edge amalgamation over marked vertex `x`: the
    /// prefix below the first marker of `x` is shared; the tail splits
    /// into one block per marker, and the `2n` output slots carry copy
    /// 0's blocks at the zero positions of `e` and copy 1's blocks at
    /// the one positions.
    pub fn one_edge(h: &AmalgamStructure, x: usize, e: &InterlaceType) -> Result<Self, Error> {
        if e.arity() != h.arity() {
            return Err(Error::ArityMismatch { left: h.arity(), right: e.arity() });
        }
        if !h.is_marked(x) {
            return Err(Error::UnmarkedVertex(x));
        }
        let m = h.vertex_count();
        let q = h.markers(x).expect("marked vertices carry markers");
        let n = q.len();
        let mut blocks = Vec::with_capacity(n);
        for i in 0..n {
            let end = if i + 1 < n { q[i + 1] } else { m };
            blocks.push((q[i], end));
        }
        let mut assignment = vec![(0usize, 0usize); 2 * n];
        for (i, &a) in e.zero_positions().iter().enumerate() {
            assignment[a - 1] = (0, i);
        }
        for (i, &b) in e.one_positions().iter().enumerate() {
            assignment[b - 1] = (1, i);
        }
        Self::build(m, q[0], blocks, assignment)
    }

    fn build(
        input_len: usize,
        shared_len: usize,
        blocks: Vec<(usize, usize)>,
        assignment: Vec<(usize, usize)>,
    ) -> Result<Self, Error> {
        let mut offsets = Vec::with_capacity(assignment.len());
        let mut cursor = shared_len;
        let mut slot = [vec![0; blocks.len()], vec![0; blocks.len()]];
        for (out_idx, &(copy, block)) in assignment.iter().enumerate() {
            offsets.push(cursor);
            cursor += blocks[block].1 - blocks[block].0;
            slot[copy][block] = out_idx;
        }
        Ok(BlockDecomposition {
            input_len,
            shared_len,
            blocks,
            assignment,
            offsets,
            slot,
            output_len: cursor,
        })
    }

    pub fn input_len(&self) -> usize {
        self.input_len
    }

    /// Size of the shared prefix.
    pub fn shared_len(&self) -> usize {
        self.shared_len
    }

    pub fn output_len(&self) -> usize {
        self.output_len
    }

    /// Output blocks as `(copy, input block interval)` in output order.
    pub fn output_blocks(&self) -> impl Iterator<Item = (usize, (usize, usize))> + '_ {
        self.assignment.iter().map(|&(copy, block)| (copy, self.blocks[block]))
    }

    /// The copy map `c_copy`: identity on the shared prefix, block
    /// translation on the tail.
    pub fn map(&self, copy: usize, pos: usize) -> usize {
        assert!(copy < 2, "copy index is 0 or 1");
        assert!(pos < self.input_len, "position outside the input structure");
        if pos < self.shared_len {
            return pos;
        }
        let block = self
            .blocks
            .partition_point(|&(start, _)| start <= pos)
            .checked_sub(1)
            .expect("tail positions lie in some block");
        self.offsets[self.slot[copy][block]] + (pos - self.blocks[block].0)
    }

    /// Output positions covered by the shared prefix together with copy
    /// `copy` of the tail, in ascending order. Restricting the output
    /// to this set recovers the input structure.
    pub fn copy_positions(&self, copy: usize) -> BTreeSet<usize> {
        (0..self.input_len).map(|p| self.map(copy, p)).collect()
    }
}

fn assemble(
    h: &AmalgamStructure,
    dec: &BlockDecomposition,
    new_edge_at: Option<usize>,
) -> AmalgamStructure {
    let mut marked = BTreeSet::new();
    let mut edges = BTreeSet::new();
    let mut markers = BTreeMap::new();
    for copy in 0..2 {
        for &u in h.marked() {
            let image = dec.map(copy, u);
            marked.insert(image);
            let tuple = h.markers(u).expect("marked vertices carry markers");
            markers.insert(image, tuple.iter().map(|&p| dec.map(copy, p)).collect::<Vec<_>>());
        }
        for &(a, b) in h.edges() {
            edges.insert(ordered(dec.map(copy, a), dec.map(copy, b)));
        }
    }
    if let Some(x) = new_edge_at {
        edges.insert(ordered(dec.map(0, x), dec.map(1, x)));
    }
    AmalgamStructure::from_parts(h.arity(), dec.output_len(), marked, edges, markers)
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// The edgeless amalgamation of `h` with itself over vertex `x`. Both
/// restrictions of the output to the shared prefix plus one tail copy
/// equal `h`; no edge joins the two tail copies.
pub fn edgeless_amalgam(h: &AmalgamStructure, x: usize) -> Result<AmalgamStructure, Error> {
    let dec = BlockDecomposition::edgeless(h, x)?;
    Ok(assemble(h, &dec, None))
}

/// The one-edge amalgamation of `h` with itself over marked vertex `x`
/// with interlace type `e`. The only edge beyond the two copies of the
/// input edges joins the two copies of `x`, whose marker tuples
/// interlace by `e` with copy 0 at the zero positions.
pub fn one_edge_amalgam(
    h: &AmalgamStructure,
    x: usize,
    e: &InterlaceType,
) -> Result<AmalgamStructure, Error> {
    let dec = BlockDecomposition::one_edge(h, x, e)?;
    Ok(assemble(h, &dec, Some(x)))
}
