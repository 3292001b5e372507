//! Level-by-level generation of the class hierarchy: level 0 holds the
//! base structure, and each next level collects every edgeless and
//! one-edge amalgamation of the previous level's members, deduplicated
//! by canonical equality. Catalogs are immutable once built and two
//! runs with the same parameters produce identical catalogs.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::amalgam::{edgeless_amalgam, one_edge_amalgam};
use crate::error::Error;
use crate::structures::{base_structure, AmalgamStructure, InterlaceType};

/// Default bound on the total vertex count of a single level. Member
/// sizes roughly double per level, so desk scale is five or six levels
/// for small arities.
pub const DEFAULT_VERTEX_CAP: usize = 100_000;

/// Which amalgamation produced a member.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpTag {
    Edgeless,
    OneEdge,
}

impl fmt::Display for OpTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OpTag::Edgeless => "+",
            OpTag::OneEdge => "*",
        })
    }
}

/// How a member arose: index of its parent in the previous level, the
/// operation, and the chosen vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Provenance {
    pub parent: usize,
    pub op: OpTag,
    pub x: usize,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{} of #{}", self.op, self.x, self.parent)
    }
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub structure: AmalgamStructure,
    /// First derivation found in generation order; absent for level 0
    /// and for catalogs read back from files.
    pub provenance: Option<Provenance>,
}

/// All pairwise distinct members of one level, in ascending canonical
/// order.
#[derive(Debug, Clone)]
pub struct Catalog {
    interlace: InterlaceType,
    level: usize,
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    /// The level-0 catalog: exactly the base structure.
    pub fn initial(interlace: InterlaceType) -> Self {
        let base = base_structure(interlace.arity()).expect("parsed interlace types have positive arity");
        Catalog {
            interlace,
            level: 0,
            entries: vec![CatalogEntry { structure: base, provenance: None }],
        }
    }

    pub fn from_members(
        interlace: InterlaceType,
        level: usize,
        members: Vec<AmalgamStructure>,
    ) -> Self {
        Catalog {
            interlace,
            level,
            entries: members
                .into_iter()
                .map(|structure| CatalogEntry { structure, provenance: None })
                .collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.interlace.arity()
    }

    pub fn interlace(&self) -> &InterlaceType {
        &self.interlace
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn members(&self) -> impl Iterator<Item = &AmalgamStructure> {
        self.entries.iter().map(|e| &e.structure)
    }

    pub fn get(&self, index: usize) -> Option<&AmalgamStructure> {
        self.entries.get(index).map(|e| &e.structure)
    }

    /// All amalgamations of all members, deduplicated. An empty catalog
    /// yields an empty catalog.
    pub fn next_level(&self) -> Catalog {
        self.next_level_capped(usize::MAX)
            .expect("uncapped generation cannot be truncated")
    }

    /// Like [`next_level`](Catalog::next_level) but gives up once the
    /// total vertex count of the distinct children would exceed
    /// `vertex_cap`, returning `None`.
    pub fn next_level_capped(&self, vertex_cap: usize) -> Option<Catalog> {
        let mut seen: BTreeMap<AmalgamStructure, Provenance> = BTreeMap::new();
        let mut total_vertices = 0usize;
        let mut push = |child: AmalgamStructure, prov: Provenance, total: &mut usize| -> bool {
            match seen.entry(child) {
                Entry::Occupied(_) => true,
                Entry::Vacant(slot) => {
                    *total += slot.key().vertex_count();
                    if *total > vertex_cap {
                        return false;
                    }
                    slot.insert(prov);
                    true
                }
            }
        };
        for (parent, entry) in self.entries.iter().enumerate() {
            let h = &entry.structure;
            for x in 0..h.vertex_count() {
                let child = edgeless_amalgam(h, x).expect("x ranges over vertices");
                if !push(child, Provenance { parent, op: OpTag::Edgeless, x }, &mut total_vertices) {
                    return None;
                }
            }
            for &x in h.marked() {
                let child = one_edge_amalgam(h, x, &self.interlace)
                    .expect("x ranges over marked vertices of a member");
                if !push(child, Provenance { parent, op: OpTag::OneEdge, x }, &mut total_vertices) {
                    return None;
                }
            }
        }
        Some(Catalog {
            interlace: self.interlace.clone(),
            level: self.level + 1,
            entries: seen
                .into_iter()
                .map(|(structure, prov)| CatalogEntry { structure, provenance: Some(prov) })
                .collect(),
        })
    }

    /// Size summary of this catalog.
    pub fn stats(&self) -> CatalogStats {
        let mut stats = CatalogStats {
            level: self.level,
            count: self.entries.len(),
            min_vertices: 0,
            max_vertices: 0,
            min_marked: 0,
            max_marked: 0,
            min_edges: 0,
            max_edges: 0,
            edge_bound: edge_bound(self.level),
        };
        for (i, s) in self.members().enumerate() {
            let (v, u, x) = (s.vertex_count(), s.marked().len(), s.edges().len());
            if i == 0 {
                stats.min_vertices = v;
                stats.max_vertices = v;
                stats.min_marked = u;
                stats.max_marked = u;
                stats.min_edges = x;
                stats.max_edges = x;
            } else {
                stats.min_vertices = stats.min_vertices.min(v);
                stats.max_vertices = stats.max_vertices.max(v);
                stats.min_marked = stats.min_marked.min(u);
                stats.max_marked = stats.max_marked.max(u);
                stats.min_edges = stats.min_edges.min(x);
                stats.max_edges = stats.max_edges.max(x);
            }
        }
        stats
    }
}

/// `2^level - 1`, the exact upper bound for the edge count of a member
/// at that level (saturating).
pub fn edge_bound(level: usize) -> u64 {
    if level >= u64::BITS as usize {
        u64::MAX
    } else {
        (1u64 << level) - 1
    }
}

/// Per-level size summary: member count, vertex/marked/edge ranges, and
/// the level's edge bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogStats {
    pub level: usize,
    pub count: usize,
    pub min_vertices: usize,
    pub max_vertices: usize,
    pub min_marked: usize,
    pub max_marked: usize,
    pub min_edges: usize,
    pub max_edges: usize,
    pub edge_bound: u64,
}

impl CatalogStats {
    pub fn to_record(&self) -> String {
        serde_json::to_string(self).expect("stats serialize")
    }
}

/// Catalogs for levels `0..=last`, possibly cut short by the vertex cap.
#[derive(Debug, Clone)]
pub struct Enumeration {
    pub catalogs: Vec<Catalog>,
    /// Level that could not be completed under the cap, if any.
    pub truncated_at: Option<usize>,
}

impl Enumeration {
    pub fn last_level(&self) -> usize {
        self.catalogs.last().map(|c| c.level()).unwrap_or(0)
    }
}

/// Generates catalogs for levels `0..=max_level`, stopping early when a
/// level's total vertex count would exceed `vertex_cap`. A pure
/// function of its arguments: two runs produce identical catalogs.
pub fn enumerate_levels(
    interlace: &InterlaceType,
    max_level: usize,
    vertex_cap: usize,
) -> Enumeration {
    let mut catalogs = vec![Catalog::initial(interlace.clone())];
    for t in 0..max_level {
        match catalogs[t].next_level_capped(vertex_cap) {
            Some(next) => catalogs.push(next),
            None => return Enumeration { catalogs, truncated_at: Some(t + 1) },
        }
    }
    Enumeration { catalogs, truncated_at: None }
}

#[derive(Serialize, Deserialize)]
struct Header {
    n: usize,
    e: String,
    level: usize,
    count: usize,
}

/// Writes catalogs in the line-oriented `.knel` format: per catalog one
/// header line `{"n":..,"e":"..","level":..,"count":..}` followed by
/// one structure record per member. Output is byte-stable.
pub fn write_catalogs<W: Write>(mut w: W, catalogs: &[Catalog]) -> io::Result<()> {
    for c in catalogs {
        let header = Header {
            n: c.arity(),
            e: c.interlace().to_string(),
            level: c.level(),
            count: c.len(),
        };
        writeln!(w, "{}", serde_json::to_string(&header).expect("header serialize"))?;
        for member in c.members() {
            writeln!(w, "{}", member.to_record())?;
        }
    }
    Ok(())
}

/// Reads catalogs from the `.knel` format, validating every member.
/// Provenance is not part of the format, so entries come back without it.
pub fn read_catalogs<R: BufRead>(r: R) -> Result<Vec<Catalog>, Error> {
    let mut catalogs = Vec::new();
    let mut lines = r.lines();
    while let Some(line) = lines.next() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let header: Header = serde_json::from_str(&line)
            .map_err(|e| Error::Format(format!("bad header line: {e}")))?;
        let interlace = InterlaceType::parse(&header.e)?;
        if interlace.arity() != header.n {
            return Err(Error::Format(format!(
                "header n={} inconsistent with e={}",
                header.n, header.e
            )));
        }
        let mut members = Vec::with_capacity(header.count);
        for i in 0..header.count {
            let line = lines
                .next()
                .ok_or_else(|| Error::Format(format!("level {}: expected {} records, found {i}", header.level, header.count)))??;
            let s = AmalgamStructure::from_record(&line)?;
            if s.arity() != header.n {
                return Err(Error::Format(format!(
                    "level {}: member {} has arity {}, header says {}",
                    header.level,
                    i,
                    s.arity(),
                    header.n
                )));
            }
            members.push(s);
        }
        catalogs.push(Catalog::from_members(interlace, header.level, members));
    }
    Ok(catalogs)
}

pub fn write_catalog_file<P: AsRef<Path>>(path: P, catalogs: &[Catalog]) -> io::Result<()> {
    let file = File::create(path)?;
    write_catalogs(BufWriter::new(file), catalogs)
}

pub fn read_catalog_file<P: AsRef<Path>>(path: P) -> Result<Vec<Catalog>, Error> {
    let file = File::open(path)?;
    read_catalogs(BufReader::new(file))
}

/// Checks that all catalogs share one interlace type and returns it.
pub fn catalog_interlace(catalogs: &[Catalog]) -> Result<&InterlaceType, Error> {
    let first = catalogs.first().ok_or(Error::NoCatalogs)?;
    for c in catalogs {
        if c.interlace() != first.interlace() {
            return Err(Error::CatalogMismatch(format!(
                "mixed interlace types {} and {}",
                first.interlace(),
                c.interlace()
            )));
        }
    }
    Ok(first.interlace())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::reduct;

    fn e(s: &str) -> InterlaceType {
        InterlaceType::parse(s).unwrap()
    }

    #[test]
    fn level_one_for_arity_one() {
        // base has one vertex and one marked vertex, so one edgeless and
        // one one-edge child, and they differ
        let c0 = Catalog::initial(e("01"));
        let c1 = c0.next_level();
        assert_eq!(c1.level(), 1);
        assert_eq!(c1.len(), 2);
        let edge_members: Vec<_> = c1.members().filter(|m| m.edges().len() == 1).collect();
        assert_eq!(edge_members.len(), 1);
    }

    #[test]
    fn level_one_for_arity_two() {
        // two edgeless choices and one one-edge choice, all distinct
        let c1 = Catalog::initial(e("0101")).next_level();
        assert_eq!(c1.len(), 3);
        for entry in c1.entries() {
            assert!(entry.provenance.is_some());
            assert!(entry.structure.validate().is_empty());
        }
    }

    #[test]
    fn empty_catalog_stays_empty() {
        let c = Catalog::from_members(e("01"), 3, vec![]);
        let next = c.next_level();
        assert_eq!(next.level(), 4);
        assert!(next.is_empty());
        assert_eq!(next.stats().count, 0);
    }

    #[test]
    fn triangle_member_appears_at_level_two() {
        let run = enumerate_levels(&e("01"), 2, DEFAULT_VERTEX_CAP);
        assert!(run.truncated_at.is_none());
        let level2 = &run.catalogs[2];
        let triangle = level2.members().any(|m| {
            let g = reduct(m);
            g.vertex_count == 3 && g.edges.len() == 3
        });
        assert!(triangle, "level 2 should contain a member whose reduct is a triangle");
    }

    #[test]
    fn single_level_run() {
        let run = enumerate_levels(&e("01"), 0, DEFAULT_VERTEX_CAP);
        assert_eq!(run.catalogs.len(), 1);
        assert_eq!(run.catalogs[0].len(), 1);
        assert_eq!(
            run.catalogs[0].get(0).unwrap(),
            &base_structure(1).unwrap()
        );
    }

    #[test]
    fn stats_examples() {
        let s = Catalog::initial(e("0101")).stats();
        assert_eq!((s.count, s.min_vertices, s.max_edges), (1, 2, 0));
        assert_eq!(s.edge_bound, 0);

        let s = Catalog::initial(e("01")).next_level().stats();
        assert_eq!(s.count, 2);
        assert_eq!(s.max_edges, 1);
        assert_eq!(s.edge_bound, 1);
    }

    #[test]
    fn tiny_cap_truncates() {
        let run = enumerate_levels(&e("01"), 3, 2);
        assert_eq!(run.truncated_at, Some(1));
        assert_eq!(run.catalogs.len(), 1);
    }

    #[test]
    fn file_round_trip() {
        let run = enumerate_levels(&e("0101"), 2, DEFAULT_VERTEX_CAP);
        let mut buf = Vec::new();
        write_catalogs(&mut buf, &run.catalogs).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(r#"{"n":2,"e":"0101","level":0,"count":1}"#));

        let back = read_catalogs(buf.as_slice()).unwrap();
        assert_eq!(back.len(), run.catalogs.len());
        for (a, b) in back.iter().zip(&run.catalogs) {
            assert_eq!(a.level(), b.level());
            assert!(a.members().eq(b.members()));
        }

        let mut again = Vec::new();
        write_catalogs(&mut again, &back).unwrap();
        assert_eq!(buf, again, "re-serialization is byte-identical");
    }
}
