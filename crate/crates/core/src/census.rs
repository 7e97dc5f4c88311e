//! Incrementally maintained census of every clique of the growing graph.
//!
//! Growth only ever glues a new simplex onto an existing clique, so every
//! clique created by a step is a subset of the new simplex that contains at
//! least one fresh vertex. The census therefore updates in time proportional
//! to `2^n` per step instead of re-enumerating the graph.
//!
//! Alongside each clique the census keeps its number of defect edges and the
//! summed defect degree of its vertices (its *defect incidence*). Those two
//! numbers decide whether the clique is a docking site for a pure face, for a
//! face carrying the defect edge, or for neither.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::graph::{BondType, LabeledGraph, VertexId};

pub type CliqueId = usize;

/// How a network face is matched against a face of the arriving simplex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompatibilityMode {
    /// Pure faces must not touch any defect edge; a defect face must hold
    /// exactly one defect edge whose endpoints carry no other defect edge.
    #[default]
    Contamination,
    /// Only the edge-type pattern has to agree.
    StrictTypeMatch,
}

impl CompatibilityMode {
    /// Site kind of a clique with `defect_edges` defect edges and summed
    /// vertex defect degree `incidence`.
    pub fn classify(self, defect_edges: usize, incidence: u32) -> Option<SiteKind> {
        match self {
            CompatibilityMode::Contamination => match (defect_edges, incidence) {
                (_, 0) => Some(SiteKind::Pure),
                (1, 2) => Some(SiteKind::Defect),
                _ => None,
            },
            CompatibilityMode::StrictTypeMatch => match defect_edges {
                0 => Some(SiteKind::Pure),
                1 => Some(SiteKind::Defect),
                _ => None,
            },
        }
    }
}

impl fmt::Display for CompatibilityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CompatibilityMode::Contamination => "contamination",
            CompatibilityMode::StrictTypeMatch => "strict",
        })
    }
}

impl FromStr for CompatibilityMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "contamination" => Ok(CompatibilityMode::Contamination),
            "strict" | "strict-type-match" => Ok(CompatibilityMode::StrictTypeMatch),
            other => Err(format!(
                "unknown compatibility mode `{other}` (expected contamination or strict)"
            )),
        }
    }
}

/// Which kind of arriving face a network face can receive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SiteKind {
    Pure,
    Defect,
}

#[derive(Debug, Clone)]
struct CliqueRecord {
    vertices: Box<[VertexId]>,
    defect_edges: u16,
    defect_incidence: u32,
    slot: Option<(SiteKind, usize)>,
}

/// Every complete subgraph of at most `max_size` vertices, deduplicated and
/// stored as a sorted vertex set, plus per-level docking-site lists.
#[derive(Debug, Clone)]
pub struct CliqueCensus {
    mode: CompatibilityMode,
    max_size: usize,
    cliques: Vec<CliqueRecord>,
    by_vertex: Vec<Vec<CliqueId>>,
    vertex_defects: Vec<u32>,
    // indexed by clique size; [1] counts vertices
    size_counts: Vec<usize>,
    // indexed by face order q = size - 1
    pure_sites: Vec<Vec<CliqueId>>,
    defect_sites: Vec<Vec<CliqueId>>,
}

impl CliqueCensus {
    pub fn new(mode: CompatibilityMode, max_size: usize) -> Self {
        let max_size = max_size.max(1);
        CliqueCensus {
            mode,
            max_size,
            cliques: Vec::new(),
            by_vertex: Vec::new(),
            vertex_defects: Vec::new(),
            size_counts: vec![0; max_size + 1],
            pure_sites: vec![Vec::new(); max_size],
            defect_sites: vec![Vec::new(); max_size],
        }
    }

    /// Census of `graph` enumerated from scratch.
    pub fn from_graph(graph: &LabeledGraph, mode: CompatibilityMode, max_size: usize) -> Self {
        let mut census = CliqueCensus::new(mode, max_size);
        census.add_vertices(graph);
        let mut clique = Vec::with_capacity(census.max_size);
        for v in 0..graph.node_count() as VertexId {
            let higher: Vec<VertexId> = graph
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&w| w > v)
                .collect();
            clique.push(v);
            census.extend_from(graph, &mut clique, &higher);
            clique.pop();
        }
        census
    }

    fn extend_from(&mut self, graph: &LabeledGraph, clique: &mut Vec<VertexId>, cands: &[VertexId]) {
        for (i, &w) in cands.iter().enumerate() {
            clique.push(w);
            let defects = clique
                .iter()
                .enumerate()
                .flat_map(|(a, &u)| clique[a + 1..].iter().map(move |&x| (u, x)))
                .filter(|&(u, x)| graph.bond(u, x) == Some(BondType::Defect))
                .count();
            self.push_clique(clique.clone().into_boxed_slice(), defects);
            if clique.len() < self.max_size {
                let next = intersect_sorted(&cands[i + 1..], graph.neighbors(w));
                if !next.is_empty() {
                    self.extend_from(graph, clique, &next);
                }
            }
            clique.pop();
        }
    }

    fn add_vertices(&mut self, graph: &LabeledGraph) {
        for v in self.by_vertex.len()..graph.node_count() {
            self.by_vertex.push(Vec::new());
            self.vertex_defects.push(graph.defect_degree(v as VertexId));
            self.size_counts[1] += 1;
        }
    }

    /// Brings the census up to date after `simplex` (global ids, all pairwise
    /// edges already in `graph`) was inserted. Vertices with ids at or above
    /// the census's previous node count are treated as fresh.
    pub fn absorb(&mut self, graph: &LabeledGraph, simplex: &[VertexId]) {
        let first_fresh = self.by_vertex.len() as VertexId;
        self.add_vertices(graph);

        for &v in simplex.iter().filter(|&&v| v < first_fresh) {
            let now = graph.defect_degree(v);
            let before = self.vertex_defects[v as usize];
            if now == before {
                continue;
            }
            self.vertex_defects[v as usize] = now;
            let ids = std::mem::take(&mut self.by_vertex[v as usize]);
            for &id in &ids {
                let rec = &mut self.cliques[id];
                rec.defect_incidence = rec.defect_incidence + now - before;
                self.reclassify(id);
            }
            self.by_vertex[v as usize] = ids;
        }

        let mut verts = simplex.to_vec();
        verts.sort_unstable();
        let n = verts.len();
        assert!(n <= 31, "simplex of {n} vertices exceeds the census mask width");
        let mut fresh_mask = 0u32;
        let mut defect_nbrs = vec![0u32; n];
        for i in 0..n {
            if verts[i] >= first_fresh {
                fresh_mask |= 1 << i;
            }
            for j in i + 1..n {
                if graph.bond(verts[i], verts[j]) == Some(BondType::Defect) {
                    defect_nbrs[i] |= 1 << j;
                    defect_nbrs[j] |= 1 << i;
                }
            }
        }
        for mask in 1u32..(1 << n) {
            let size = mask.count_ones() as usize;
            if mask & fresh_mask == 0 || size < 2 || size > self.max_size {
                continue;
            }
            let members = (0..n).filter(|&i| mask & (1 << i) != 0);
            let twice_defects: u32 = members
                .clone()
                .map(|i| (defect_nbrs[i] & mask).count_ones())
                .sum();
            let vertices: Box<[VertexId]> = members.map(|i| verts[i]).collect();
            self.push_clique(vertices, (twice_defects / 2) as usize);
        }
    }

    fn push_clique(&mut self, vertices: Box<[VertexId]>, defect_edges: usize) {
        let id = self.cliques.len();
        let incidence = vertices
            .iter()
            .map(|&v| self.vertex_defects[v as usize])
            .sum();
        for &v in vertices.iter() {
            self.by_vertex[v as usize].push(id);
        }
        self.size_counts[vertices.len()] += 1;
        self.cliques.push(CliqueRecord {
            vertices,
            defect_edges: defect_edges as u16,
            defect_incidence: incidence,
            slot: None,
        });
        self.reclassify(id);
    }

    fn reclassify(&mut self, id: CliqueId) {
        let rec = &self.cliques[id];
        let level = rec.vertices.len() - 1;
        let wanted = self
            .mode
            .classify(rec.defect_edges as usize, rec.defect_incidence);
        if rec.slot.map(|(kind, _)| kind) == wanted {
            return;
        }
        if let Some((kind, pos)) = rec.slot {
            let list = match kind {
                SiteKind::Pure => &mut self.pure_sites[level],
                SiteKind::Defect => &mut self.defect_sites[level],
            };
            list.swap_remove(pos);
            if let Some(&moved) = list.get(pos) {
                self.cliques[moved].slot = Some((kind, pos));
            }
        }
        let slot = wanted.map(|kind| {
            let list = match kind {
                SiteKind::Pure => &mut self.pure_sites[level],
                SiteKind::Defect => &mut self.defect_sites[level],
            };
            list.push(id);
            (kind, list.len() - 1)
        });
        self.cliques[id].slot = slot;
    }

    pub fn mode(&self) -> CompatibilityMode {
        self.mode
    }

    pub fn max_size(&self) -> usize {
        self.max_size
    }

    pub fn node_count(&self) -> usize {
        self.by_vertex.len()
    }

    /// Number of stored cliques with at least two vertices.
    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty() && self.by_vertex.is_empty()
    }

    /// Clique counts indexed by vertex count; entry 1 is the node count.
    pub fn size_counts(&self) -> &[usize] {
        &self.size_counts
    }

    /// Total number of simplexes and faces, vertices included.
    pub fn simplex_total(&self) -> usize {
        self.size_counts.iter().sum()
    }

    pub fn clique(&self, id: CliqueId) -> &[VertexId] {
        &self.cliques[id].vertices
    }

    pub fn defect_edge_count(&self, id: CliqueId) -> usize {
        self.cliques[id].defect_edges as usize
    }

    /// Cliques of order `level` eligible to receive a pure face.
    pub fn pure_sites(&self, level: usize) -> &[CliqueId] {
        self.pure_sites.get(level).map_or(&[], Vec::as_slice)
    }

    /// Cliques of order `level` eligible to receive a face holding the defect edge.
    pub fn defect_sites(&self, level: usize) -> &[CliqueId] {
        self.defect_sites.get(level).map_or(&[], Vec::as_slice)
    }

    /// Order-independent view used to compare two censuses.
    pub fn snapshot(&self) -> CensusSnapshot {
        let set = |lists: &[Vec<CliqueId>]| -> BTreeSet<Vec<VertexId>> {
            lists
                .iter()
                .flatten()
                .map(|&id| self.cliques[id].vertices.to_vec())
                .collect()
        };
        CensusSnapshot {
            node_count: self.node_count(),
            cliques: self
                .cliques
                .iter()
                .map(|r| (r.vertices.to_vec(), r.defect_edges as usize))
                .collect(),
            pure_sites: set(&self.pure_sites),
            defect_sites: set(&self.defect_sites),
        }
    }
}

/// Canonical content of a [`CliqueCensus`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusSnapshot {
    pub node_count: usize,
    /// Sorted vertex set -> number of defect edges inside it.
    pub cliques: BTreeMap<Vec<VertexId>, usize>,
    pub pure_sites: BTreeSet<Vec<VertexId>>,
    pub defect_sites: BTreeSet<Vec<VertexId>>,
}

pub(crate) fn intersect_sorted(a: &[VertexId], b: &[VertexId]) -> Vec<VertexId> {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}
