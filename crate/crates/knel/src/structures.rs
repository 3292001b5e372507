//! The ordered-structure data model: interlace types, marker tuples,
//! structures with distinguished vertices, validation, induced
//! substructures, and the line-record serialization.
//!
//! A structure consists of `m` vertices carrying the linear order of
//! their labels `0..m-1` (canonical position labeling), a set `U` of
//! marked vertices, a simple graph `X` on `U`, and for every `u ∈ U` a
//! strictly increasing marker tuple `h(u) = (h_1(u), ..., h_n(u))`
//! whose last entry is `u` itself. Mathematical write-ups index the
//! order from 1; every position in this crate is 0-based.
//!
//! Because the order is linear and labels are canonical, two structures
//! are order-isomorphic exactly when they are equal, so `==` doubles as
//! the isomorphism test.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// A balanced 0/1 pattern of length `2n` prescribing how two `n`-tuples
/// alternate in their merged order: the zero positions belong to the
/// first tuple, the one positions to the second.
///
/// Positions of the pattern are 1-based in documentation and accessors,
/// matching the usual mathematical convention for these patterns.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InterlaceType {
    bits: Vec<bool>, // false = 0, true = 1
}

impl InterlaceType {
    /// Parses a bitstring such as `"0101"`. The string must have even
    /// length with exactly as many zeros as ones, and be nonempty.
    pub fn parse(s: &str) -> Result<Self, Error> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => return Err(Error::BadPatternChar(other)),
            }
        }
        if bits.is_empty() {
            return Err(Error::ZeroArity);
        }
        if bits.len() % 2 != 0 {
            return Err(Error::OddPattern(bits.len()));
        }
        let zeros = bits.iter().filter(|b| !**b).count();
        if zeros * 2 != bits.len() {
            return Err(Error::UnbalancedPattern);
        }
        Ok(InterlaceType { bits })
    }

    /// The arity `n`; the pattern has length `2n`.
    pub fn arity(&self) -> usize {
        self.bits.len() / 2
    }

    /// Pattern length `2n`.
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        false // parse rejects empty patterns
    }

    /// Bit at 1-based position `i` (1 ≤ i ≤ 2n), as 0 or 1.
    pub fn bit(&self, i: usize) -> u8 {
        assert!((1..=self.bits.len()).contains(&i), "pattern position out of range");
        u8::from(self.bits[i - 1])
    }

    /// The increasing enumeration of the zero positions (1-based).
    pub fn zero_positions(&self) -> Vec<usize> {
        (1..=self.bits.len()).filter(|&i| !self.bits[i - 1]).collect()
    }

    /// The increasing enumeration of the one positions (1-based).
    pub fn one_positions(&self) -> Vec<usize> {
        (1..=self.bits.len()).filter(|&i| self.bits[i - 1]).collect()
    }

    /// The pattern with every bit flipped; swapping the roles of the
    /// two tuples in an interlacing corresponds to complementing.
    pub fn complement(&self) -> Self {
        InterlaceType { bits: self.bits.iter().map(|b| !b).collect() }
    }
}

impl fmt::Display for InterlaceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            f.write_str(if *b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for InterlaceType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        InterlaceType::parse(s)
    }
}

/// A strictly increasing tuple of positions. When produced from a
/// structure it is the marker tuple of a marked vertex and its last
/// entry is that vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkerTuple(Vec<usize>);

impl MarkerTuple {
    pub fn new(values: Vec<usize>) -> Result<Self, Error> {
        if values.is_empty() {
            return Err(Error::ZeroArity);
        }
        if !values.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::TupleNotIncreasing);
        }
        Ok(MarkerTuple(values))
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The last entry; for a tuple read off a structure this is the
    /// marked vertex the tuple belongs to.
    pub fn last(&self) -> usize {
        *self.0.last().expect("tuples are nonempty")
    }
}

impl fmt::Display for MarkerTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// A finite ordered structure in canonical position labeling.
///
/// Fields follow the conventional letters in the serialized form: `U`
/// is the marked vertex set, `X` the edge set on `U`, and `h` the
/// marker map. Values are immutable once built; all operations on them
/// are pure functions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AmalgamStructure {
    arity: usize,
    vertex_count: usize,
    marked: BTreeSet<usize>,
    edges: BTreeSet<(usize, usize)>,
    markers: BTreeMap<usize, Vec<usize>>,
}

/// A single violated structure invariant, naming the offending vertex
/// or edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    ZeroArity,
    VertexOutOfRange { vertex: usize },
    MissingMarkers { vertex: usize },
    DanglingMarkers { vertex: usize },
    MarkerCount { vertex: usize, expected: usize, found: usize },
    MarkersNotIncreasing { vertex: usize },
    MarkerLast { vertex: usize },
    MarkerOutOfRange { vertex: usize },
    LoopEdge { vertex: usize },
    EdgeOutsideMarked { edge: (usize, usize) },
    EdgeOutOfRange { edge: (usize, usize) },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZeroArity => write!(f, "arity must be positive"),
            Violation::VertexOutOfRange { vertex } => {
                write!(f, "marked vertex {vertex} is not a position of the structure")
            }
            Violation::MissingMarkers { vertex } => {
                write!(f, "marked vertex {vertex} has no marker tuple")
            }
            Violation::DanglingMarkers { vertex } => {
                write!(f, "marker tuple given for unmarked vertex {vertex}")
            }
            Violation::MarkerCount { vertex, expected, found } => {
                write!(f, "vertex {vertex} has {found} markers, expected {expected}")
            }
            Violation::MarkersNotIncreasing { vertex } => {
                write!(f, "h_1(x) < ... < h_n(x) fails at vertex {vertex}")
            }
            Violation::MarkerLast { vertex } => {
                write!(f, "h_n(x) = x fails at vertex {vertex}")
            }
            Violation::MarkerOutOfRange { vertex } => {
                write!(f, "vertex {vertex} has a marker outside the structure")
            }
            Violation::LoopEdge { vertex } => write!(f, "loop edge at vertex {vertex}"),
            Violation::EdgeOutsideMarked { edge } => {
                write!(f, "edge {{{},{}}} touches a vertex outside U", edge.0, edge.1)
            }
            Violation::EdgeOutOfRange { edge } => {
                write!(f, "edge {{{},{}}} is not inside the structure", edge.0, edge.1)
            }
        }
    }
}

fn ordered_pair(a: usize, b: usize) -> (usize, usize) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl AmalgamStructure {
    /// Assembles a candidate record without checking any invariant;
    /// pair order inside edges is normalized. Use [`validate`] or
    /// [`checked`] before treating the result as a structure.
    ///
    /// [`validate`]: AmalgamStructure::validate
    /// [`checked`]: AmalgamStructure::checked
    pub fn from_parts<U, X, H>(arity: usize, vertex_count: usize, marked: U, edges: X, markers: H) -> Self
    where
        U: IntoIterator<Item = usize>,
        X: IntoIterator<Item = (usize, usize)>,
        H: IntoIterator<Item = (usize, Vec<usize>)>,
    {
        AmalgamStructure {
            arity,
            vertex_count,
            marked: marked.into_iter().collect(),
            edges: edges.into_iter().map(|(a, b)| ordered_pair(a, b)).collect(),
            markers: markers.into_iter().collect(),
        }
    }

    /// Checks every invariant and reports each violation; an empty list
    /// means the record is a valid structure.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.arity == 0 {
            out.push(Violation::ZeroArity);
        }
        for &u in &self.marked {
            if u >= self.vertex_count {
                out.push(Violation::VertexOutOfRange { vertex: u });
            }
            match self.markers.get(&u) {
                None => out.push(Violation::MissingMarkers { vertex: u }),
                Some(h) => {
                    if h.len() != self.arity {
                        out.push(Violation::MarkerCount {
                            vertex: u,
                            expected: self.arity,
                            found: h.len(),
                        });
                    }
                    if !h.windows(2).all(|w| w[0] < w[1]) {
                        out.push(Violation::MarkersNotIncreasing { vertex: u });
                    }
                    if h.last() != Some(&u) {
                        out.push(Violation::MarkerLast { vertex: u });
                    }
                    if h.iter().any(|&p| p >= self.vertex_count) {
                        out.push(Violation::MarkerOutOfRange { vertex: u });
                    }
                }
            }
        }
        for u in self.markers.keys() {
            if !self.marked.contains(u) {
                out.push(Violation::DanglingMarkers { vertex: *u });
            }
        }
        for &(a, b) in &self.edges {
            if a == b {
                out.push(Violation::LoopEdge { vertex: a });
                continue;
            }
            if a >= self.vertex_count || b >= self.vertex_count {
                out.push(Violation::EdgeOutOfRange { edge: (a, b) });
                continue;
            }
            if !self.marked.contains(&a) || !self.marked.contains(&b) {
                out.push(Violation::EdgeOutsideMarked { edge: (a, b) });
            }
        }
        out
    }

    /// Validates and returns the structure, or an error listing every
    /// violation.
    pub fn checked(self) -> Result<Self, Error> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(self)
        } else {
            let msg = violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ");
            Err(Error::InvalidStructure(msg))
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of vertices; positions are `0..vertex_count()`.
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// The marked vertex set `U`.
    pub fn marked(&self) -> &BTreeSet<usize> {
        &self.marked
    }

    /// The edge set `X`, each pair stored ascending.
    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn is_marked(&self, v: usize) -> bool {
        self.marked.contains(&v)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&ordered_pair(a, b))
    }

    /// Raw marker slice of a marked vertex, if any.
    pub fn markers(&self, u: usize) -> Option<&[usize]> {
        self.markers.get(&u).map(|v| v.as_slice())
    }

    /// The marker tuple `(h_1(u), ..., h_n(u))` of a marked vertex.
    /// Strictly increasing with last entry `u`.
    pub fn marker_tuple(&self, u: usize) -> Result<MarkerTuple, Error> {
        match self.markers.get(&u) {
            Some(h) if self.marked.contains(&u) => MarkerTuple::new(h.clone()),
            _ => Err(Error::UnmarkedVertex(u)),
        }
    }

    /// The induced substructure on `subset`, relabeled to canonical
    /// positions `0..subset.len()` preserving order.
    ///
    /// A marked vertex stays marked only when its whole marker tuple
    /// survives in `subset`; edges are kept only between vertices that
    /// stay marked. This closure rule keeps every retained marked
    /// vertex fully typed.
    pub fn induced_substructure(&self, subset: &BTreeSet<usize>) -> AmalgamStructure {
        for &v in subset {
            assert!(v < self.vertex_count, "subset must consist of positions of the structure");
        }
        let rank: BTreeMap<usize, usize> =
            subset.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let surviving: BTreeSet<usize> = self
            .marked
            .iter()
            .copied()
            .filter(|u| {
                subset.contains(u)
                    && self.markers[u].iter().all(|p| subset.contains(p))
            })
            .collect();
        let marked: BTreeSet<usize> = surviving.iter().map(|u| rank[u]).collect();
        let markers: BTreeMap<usize, Vec<usize>> = surviving
            .iter()
            .map(|u| (rank[u], self.markers[u].iter().map(|p| rank[p]).collect()))
            .collect();
        let edges: BTreeSet<(usize, usize)> = self
            .edges
            .iter()
            .filter(|(a, b)| surviving.contains(a) && surviving.contains(b))
            .map(|&(a, b)| (rank[&a], rank[&b]))
            .collect();
        AmalgamStructure {
            arity: self.arity,
            vertex_count: subset.len(),
            marked,
            edges,
            markers,
        }
    }

    /// One-line JSON record; field order and key order are fixed so
    /// files built from records are diff-stable.
    pub fn to_record(&self) -> String {
        serde_json::to_string(&record::StructureRecord::from(self))
            .expect("record serialization cannot fail")
    }

    /// Parses and validates a one-line JSON record.
    pub fn from_record(line: &str) -> Result<Self, Error> {
        let rec: record::StructureRecord = serde_json::from_str(line)?;
        AmalgamStructure::from_parts(
            rec.n,
            rec.m,
            rec.u,
            rec.x,
            rec.h.0,
        )
        .checked()
    }
}

/// The canonical one-point structure of the given arity: `n` vertices,
/// the last one marked with tuple `(0, 1, ..., n-1)`, no edges. This is
/// the single level-0 member of every class of that arity.
pub fn base_structure(arity: usize) -> Result<AmalgamStructure, Error> {
    if arity == 0 {
        return Err(Error::ZeroArity);
    }
    let top = arity - 1;
    Ok(AmalgamStructure::from_parts(
        arity,
        arity,
        [top],
        [],
        [(top, (0..arity).collect())],
    ))
}

/// The empty structure (no vertices) of the given arity. Valid, and the
/// identity for cataloging purposes.
pub fn empty_structure(arity: usize) -> Result<AmalgamStructure, Error> {
    if arity == 0 {
        return Err(Error::ZeroArity);
    }
    Ok(AmalgamStructure::from_parts(arity, 0, [], [], []))
}

mod record {
    use std::collections::BTreeMap;

    use serde::de::Error as _;
    use serde::ser::SerializeMap;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::AmalgamStructure;

    /// Wire form of a structure: `{"n":..,"m":..,"U":[..],"X":[[a,b],..],"h":{"u":[..],..}}`
    /// with edge pairs ascending and marker keys in ascending numeric order.
    #[derive(Serialize, Deserialize)]
    pub(super) struct StructureRecord {
        pub n: usize,
        pub m: usize,
        #[serde(rename = "U")]
        pub u: Vec<usize>,
        #[serde(rename = "X")]
        pub x: Vec<(usize, usize)>,
        pub h: MarkerMap,
    }

    pub(super) struct MarkerMap(pub Vec<(usize, Vec<usize>)>);

    impl Serialize for MarkerMap {
        fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
            let mut map = serializer.serialize_map(Some(self.0.len()))?;
            for (k, v) in &self.0 {
                map.serialize_entry(&k.to_string(), v)?;
            }
            map.end()
        }
    }

    impl<'de> Deserialize<'de> for MarkerMap {
        fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
            let raw = BTreeMap::<String, Vec<usize>>::deserialize(deserializer)?;
            let mut entries = Vec::with_capacity(raw.len());
            for (k, v) in raw {
                let key = k
                    .parse::<usize>()
                    .map_err(|_| D::Error::custom(format!("non-numeric marker key {k:?}")))?;
                entries.push((key, v));
            }
            entries.sort_by_key(|e| e.0);
            Ok(MarkerMap(entries))
        }
    }

    impl From<&AmalgamStructure> for StructureRecord {
        fn from(s: &AmalgamStructure) -> Self {
            StructureRecord {
                n: s.arity,
                m: s.vertex_count,
                u: s.marked.iter().copied().collect(),
                x: s.edges.iter().copied().collect(),
                h: MarkerMap(s.markers.iter().map(|(k, v)| (*k, v.clone())).collect()),
            }
        }
    }
}
