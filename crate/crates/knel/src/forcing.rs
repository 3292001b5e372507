//! Finite conditions over a class: validation of the hereditary clause
//! against bounded catalogs, the extension order, delta-system
//! amalgamation of two order-isomorphic conditions over a shared
//! prefix, and seeded random growth of conditions.

use std::collections::BTreeSet;

use itertools::Itertools;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::amalgam::{edgeless_amalgam, interlaces};
use crate::embedding::weak_embed;
use crate::enumerate::{catalog_interlace, Catalog};
use crate::error::Error;
use crate::invariants::{marker_hom_check, MarkerCheck};
use crate::structures::{base_structure, empty_structure, AmalgamStructure, InterlaceType};

/// Conditions grown by [`sample_chain`] stop doubling once they reach
/// this many vertices; fresh blocks and edges may still be added.
const CHAIN_DOUBLING_CAP: usize = 128;

/// A structure tagged with the interlace type whose class it
/// approximates. Construction checks the structural invariants; the
/// hereditary clause is checked separately by [`is_condition`] because
/// it is relative to a catalog depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condition {
    structure: AmalgamStructure,
    interlace: InterlaceType,
}

impl Condition {
    pub fn new(structure: AmalgamStructure, interlace: InterlaceType) -> Result<Self, Error> {
        if structure.arity() != interlace.arity() {
            return Err(Error::ArityMismatch {
                left: structure.arity(),
                right: interlace.arity(),
            });
        }
        let structure = structure.checked()?;
        Ok(Condition { structure, interlace })
    }

    /// The empty condition.
    pub fn empty(interlace: &InterlaceType) -> Self {
        Condition {
            structure: empty_structure(interlace.arity()).expect("positive arity"),
            interlace: interlace.clone(),
        }
    }

    pub fn structure(&self) -> &AmalgamStructure {
        &self.structure
    }

    pub fn interlace(&self) -> &InterlaceType {
        &self.interlace
    }

    /// Two-line serialization: a header `{"n":..,"e":".."}` followed by
    /// the structure record.
    pub fn to_lines(&self) -> String {
        format!(
            "{{\"n\":{},\"e\":\"{}\"}}\n{}\n",
            self.interlace.arity(),
            self.interlace,
            self.structure.to_record()
        )
    }

    pub fn from_lines(text: &str) -> Result<Self, Error> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Format("missing condition header".into()))?;
        let header: serde_json::Value = serde_json::from_str(header)?;
        let e = header
            .get("e")
            .and_then(|v| v.as_str())
            .ok_or_else(|| Error::Format("condition header lacks \"e\"".into()))?;
        let interlace = InterlaceType::parse(e)?;
        if let Some(n) = header.get("n").and_then(|v| v.as_u64()) {
            if n as usize != interlace.arity() {
                return Err(Error::Format("condition header n inconsistent with e".into()));
            }
        }
        let record = lines.next().ok_or_else(|| Error::Format("missing condition record".into()))?;
        let structure = AmalgamStructure::from_record(record)?;
        Condition::new(structure, interlace)
    }
}

/// Verdict of the hereditary check, always relative to the supplied
/// catalog depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConditionVerdict {
    /// Every checked subset embeds into some catalog member.
    Valid,
    /// The induced substructure on `witness` is refuted by markers and
    /// can never embed, whatever the depth.
    Invalid { witness: Vec<usize> },
    /// Some subset neither embeds within the supplied levels nor is
    /// refuted.
    Unknown { max_level: usize },
}

impl ConditionVerdict {
    /// Exit-code mapping used by the command line front end.
    pub fn exit_code(&self) -> u8 {
        match self {
            ConditionVerdict::Valid => 0,
            ConditionVerdict::Invalid { .. } => 1,
            ConditionVerdict::Unknown { .. } => 2,
        }
    }
}

fn check_coherence(q: &Condition, catalogs: &[Catalog]) -> Result<(), Error> {
    let interlace = catalog_interlace(catalogs)?;
    if interlace != q.interlace() {
        return Err(Error::InterlaceMismatch {
            left: q.interlace().to_string(),
            right: interlace.to_string(),
        });
    }
    Ok(())
}

/// Checks the hereditary clause of `q` against the supplied catalogs.
///
/// A marker-refuted edge yields `Invalid` with the edge's marker
/// positions as witness subset. Otherwise every subset of size
/// `min(max_subset, |V|)` must embed into some catalog member; smaller
/// subsets are covered because induced substructures of an embeddable
/// substructure embed through it. A subset that fails to embed within
/// the supplied levels yields `Unknown`, never a negative answer.
pub fn is_condition(
    q: &Condition,
    catalogs: &[Catalog],
    max_subset: usize,
) -> Result<ConditionVerdict, Error> {
    check_coherence(q, catalogs)?;
    let s = q.structure();
    if let MarkerCheck::Failing { edge: (u, v) } = marker_hom_check(s, q.interlace())? {
        let witness: BTreeSet<usize> = s
            .markers(u)
            .into_iter()
            .flatten()
            .chain(s.markers(v).into_iter().flatten())
            .copied()
            .collect();
        return Ok(ConditionVerdict::Invalid { witness: witness.into_iter().collect() });
    }
    let m = s.vertex_count();
    let size = max_subset.min(m);
    let max_level = catalogs.iter().map(|c| c.level()).max().unwrap_or(0);
    let mut checked: BTreeSet<AmalgamStructure> = BTreeSet::new();
    for subset in (0..m).combinations(size) {
        let sub = s.induced_substructure(&subset.into_iter().collect());
        if !checked.insert(sub.clone()) {
            continue;
        }
        let hosted = catalogs.iter().any(|catalog| {
            catalog
                .members()
                .any(|member| matches!(weak_embed(&sub, member), Ok(Some(_))))
        });
        if !hosted {
            return Ok(ConditionVerdict::Unknown { max_level });
        }
    }
    Ok(ConditionVerdict::Valid)
}

/// Evaluates the extension order: `stronger` extends `weaker` under the
/// order-preserving identification `ident` (position `i` of `weaker`
/// sits at `ident[i]` in `stronger`) exactly when marked vertices,
/// edges, and marker maps restrict correctly: the weaker condition's
/// marked set is the intersection of the stronger one's with its
/// vertices, its edges are all the stronger one's edges inside it, and
/// marker tuples are preserved.
pub fn extends(stronger: &Condition, weaker: &Condition, ident: &[usize]) -> Result<bool, Error> {
    if stronger.interlace() != weaker.interlace() {
        return Err(Error::InterlaceMismatch {
            left: stronger.interlace().to_string(),
            right: weaker.interlace().to_string(),
        });
    }
    let (sq, wq) = (stronger.structure(), weaker.structure());
    if ident.len() != wq.vertex_count() {
        return Err(Error::MisalignedIdentification(format!(
            "identification covers {} positions, the weaker condition has {}",
            ident.len(),
            wq.vertex_count()
        )));
    }
    if !ident.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::MisalignedIdentification("identification is not increasing".into()));
    }
    if ident.iter().any(|&p| p >= sq.vertex_count()) {
        return Err(Error::MisalignedIdentification(
            "identification leaves the stronger condition".into(),
        ));
    }
    // U = U' ∩ V
    for p in 0..wq.vertex_count() {
        if wq.is_marked(p) != sq.is_marked(ident[p]) {
            return Ok(false);
        }
    }
    // X = X' ∩ [V]^2
    for p in 0..wq.vertex_count() {
        for q in p + 1..wq.vertex_count() {
            if wq.has_edge(p, q) != sq.has_edge(ident[p], ident[q]) {
                return Ok(false);
            }
        }
    }
    // h' extends h
    for &u in wq.marked() {
        let expect: Vec<usize> = wq.markers(u).unwrap().iter().map(|&p| ident[p]).collect();
        if sq.markers(ident[u]) != Some(expect.as_slice()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The two identifications under which a delta amalgamation over
/// `shared_prefix` extends its inputs: copy 0 keeps its positions, copy
/// 1 keeps the prefix and shifts its tail past copy 0's.
pub fn delta_identifications(len: usize, shared_prefix: usize) -> (Vec<usize>, Vec<usize>) {
    let tail = len - shared_prefix;
    let copy0 = (0..len).collect();
    let copy1 = (0..len).map(|p| if p < shared_prefix { p } else { p + tail }).collect();
    (copy0, copy1)
}

/// Glues two order-isomorphic conditions over their shared prefix of
/// the given length: the union keeps the prefix once and lays the two
/// tails side by side, so the result is shaped like an edgeless
/// amalgamation and extends both inputs.
///
/// Because conditions carry canonical position labels, the required
/// order identification between the inputs is the identity, so the
/// inputs must be equal as records.
pub fn delta_amalgamate(
    q0: &Condition,
    q1: &Condition,
    shared_prefix: usize,
) -> Result<Condition, Error> {
    if q0.interlace() != q1.interlace() {
        return Err(Error::InterlaceMismatch {
            left: q0.interlace().to_string(),
            right: q1.interlace().to_string(),
        });
    }
    if q0.structure() != q1.structure() {
        return Err(Error::NotDeltaShaped(
            "the order identification of the inputs is not a structure isomorphism".into(),
        ));
    }
    let m = q0.structure().vertex_count();
    if shared_prefix > m {
        return Err(Error::NotDeltaShaped(format!(
            "shared prefix {shared_prefix} exceeds the condition size {m}"
        )));
    }
    let structure = if shared_prefix == m {
        q0.structure().clone()
    } else {
        edgeless_amalgam(q0.structure(), shared_prefix)?
    };
    Ok(Condition { structure, interlace: q0.interlace().clone() })
}

/// What a chain step did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainMove {
    /// Appended a fresh base block after all existing vertices.
    FreshBlock,
    /// Replaced the condition by its delta amalgamation with itself
    /// over the given shared prefix.
    Doubled { shared_prefix: usize },
    /// Added one marker-compatible edge between marked vertices.
    AddedEdge { endpoints: (usize, usize) },
}

/// Result of a sampled chain of admissible extensions.
#[derive(Debug, Clone)]
pub struct ChainOutcome {
    pub condition: Condition,
    pub moves: Vec<ChainMove>,
}

fn append_base_block(s: &AmalgamStructure) -> AmalgamStructure {
    let n = s.arity();
    let m = s.vertex_count();
    let base = base_structure(n).expect("positive arity");
    let marked = s.marked().iter().copied().chain(base.marked().iter().map(|&u| u + m));
    let edges = s.edges().iter().copied();
    let markers = s
        .marked()
        .iter()
        .map(|&u| (u, s.markers(u).unwrap().to_vec()))
        .chain(base.marked().iter().map(|&u| {
            (u + m, base.markers(u).unwrap().iter().map(|&p| p + m).collect())
        }));
    AmalgamStructure::from_parts(n, m + n, marked, edges, markers)
}

/// Grows a condition from the empty one by `steps` random admissible
/// extensions: appending a fresh base block, doubling over a random
/// shared prefix, or adding one edge whose endpoint tuples interlace.
/// Deterministic in `seed`; an edge is only added when the grown
/// condition stays clear of `Invalid` under [`is_condition`].
pub fn sample_chain(
    interlace: &InterlaceType,
    steps: usize,
    seed: u64,
    catalogs: &[Catalog],
) -> Result<ChainOutcome, Error> {
    let reference = Condition::empty(interlace);
    check_coherence(&reference, catalogs)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = reference;
    let mut moves = Vec::new();
    for _ in 0..steps {
        let s = current.structure();
        let m = s.vertex_count();

        let mut edge_candidates: Vec<(usize, usize)> = Vec::new();
        for (&u, &v) in s.marked().iter().tuple_combinations() {
            if s.has_edge(u, v) {
                continue;
            }
            let su = s.marker_tuple(u)?;
            let tv = s.marker_tuple(v)?;
            if interlaces(&su, &tv, interlace)? || interlaces(&tv, &su, interlace)? {
                edge_candidates.push((u, v));
            }
        }

        let mut kinds = vec![0u8]; // fresh block is always admissible
        if m > 0 && m <= CHAIN_DOUBLING_CAP {
            kinds.push(1);
        }
        if !edge_candidates.is_empty() {
            kinds.push(2);
        }
        let kind = kinds[rng.gen_range(0..kinds.len())];
        match kind {
            0 => {
                current = Condition::new(append_base_block(s), interlace.clone())?;
                moves.push(ChainMove::FreshBlock);
            }
            1 => {
                let shared_prefix = rng.gen_range(0..m);
                current = delta_amalgamate(&current, &current, shared_prefix)?;
                moves.push(ChainMove::Doubled { shared_prefix });
            }
            _ => {
                let (u, v) = edge_candidates[rng.gen_range(0..edge_candidates.len())];
                let grown = AmalgamStructure::from_parts(
                    s.arity(),
                    m,
                    s.marked().iter().copied(),
                    s.edges().iter().copied().chain([(u, v)]),
                    s.marked().iter().map(|&w| (w, s.markers(w).unwrap().to_vec())),
                );
                let candidate = Condition::new(grown, interlace.clone())?;
                match is_condition(&candidate, catalogs, 0)? {
                    ConditionVerdict::Invalid { .. } => continue,
                    _ => {
                        current = candidate;
                        moves.push(ChainMove::AddedEdge { endpoints: (u, v) });
                    }
                }
            }
        }
    }
    Ok(ChainOutcome { condition: current, moves })
}
