//! Simple undirected graph whose edges carry a bond type.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = u32;

/// Kind of bond an edge carries. Assigned once at insertion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BondType {
    Pure,
    Defect,
}

impl BondType {
    /// Numeric code used by the edge-list format.
    pub fn code(self) -> u8 {
        match self {
            BondType::Pure => 0,
            BondType::Defect => 1,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(BondType::Pure),
            1 => Some(BondType::Defect),
            _ => None,
        }
    }

    pub fn is_defect(self) -> bool {
        self == BondType::Defect
    }
}

/// Unordered vertex pair, stored with the smaller id first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(VertexId, VertexId);

impl Edge {
    /// Returns `None` for a self-loop.
    pub fn new(a: VertexId, b: VertexId) -> Option<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(Edge(a, b)),
            std::cmp::Ordering::Greater => Some(Edge(b, a)),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn endpoints(self) -> (VertexId, VertexId) {
        (self.0, self.1)
    }

    pub fn contains(self, v: VertexId) -> bool {
        self.0 == v || self.1 == v
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

/// Simple undirected graph on dense vertex ids `0..node_count` whose edges
/// are tagged [`BondType::Pure`] or [`BondType::Defect`].
///
/// Adjacency lists are kept sorted so neighbourhood intersections are linear
/// merges. Edge iteration is in canonical `(u, v)` order with `u < v`.
#[derive(Debug, Clone, Default)]
pub struct LabeledGraph {
    adjacency: Vec<Vec<VertexId>>,
    bonds: BTreeMap<Edge, BondType>,
    defect_degree: Vec<u32>,
    defect_edges: usize,
}

impl PartialEq for LabeledGraph {
    fn eq(&self, other: &Self) -> bool {
        self.node_count() == other.node_count() && self.bonds == other.bonds
    }
}

impl Eq for LabeledGraph {}

impl LabeledGraph {
    pub fn with_nodes(n: usize) -> Self {
        LabeledGraph {
            adjacency: vec![Vec::new(); n],
            bonds: BTreeMap::new(),
            defect_degree: vec![0; n],
            defect_edges: 0,
        }
    }

    /// Builds a graph from an edge iterator, rejecting loops, parallel edges
    /// and out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId, BondType)>,
    {
        let mut g = LabeledGraph::with_nodes(n);
        for (u, v, bond) in edges {
            g.add_edge(u, v, bond)?;
        }
        Ok(g)
    }

    /// Convenience for tests and fixtures: every edge pure.
    pub fn from_pure_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        Self::from_edges(n, edges.iter().map(|&(u, v)| (u, v, BondType::Pure)))
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.bonds.len()
    }

    pub fn defect_edge_count(&self) -> usize {
        self.defect_edges
    }

    pub fn add_node(&mut self) -> VertexId {
        let id = self.adjacency.len() as VertexId;
        self.adjacency.push(Vec::new());
        self.defect_degree.push(0);
        id
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId, bond: BondType) -> Result<()> {
        let edge = Edge::new(u, v).ok_or(Error::SelfLoop(u))?;
        let n = self.node_count();
        for w in [u, v] {
            if w as usize >= n {
                return Err(Error::VertexOutOfRange { vertex: w, nodes: n });
            }
        }
        if self.bonds.contains_key(&edge) {
            return Err(Error::DuplicateEdge(edge.0, edge.1));
        }
        self.bonds.insert(edge, bond);
        insert_sorted(&mut self.adjacency[u as usize], v);
        insert_sorted(&mut self.adjacency[v as usize], u);
        if bond.is_defect() {
            self.defect_degree[u as usize] += 1;
            self.defect_degree[v as usize] += 1;
            self.defect_edges += 1;
        }
        Ok(())
    }

    pub fn bond(&self, u: VertexId, v: VertexId) -> Option<BondType> {
        Edge::new(u, v).and_then(|e| self.bonds.get(&e).copied())
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.bond(u, v).is_some()
    }

    /// Sorted neighbour list.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v as usize]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v as usize].len()
    }

    /// Number of defect edges incident to `v`.
    pub fn defect_degree(&self, v: VertexId) -> u32 {
        self.defect_degree[v as usize]
    }

    /// Edges in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = (Edge, BondType)> + '_ {
        self.bonds.iter().map(|(&e, &b)| (e, b))
    }

    pub fn defect_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges().filter(|(_, b)| b.is_defect()).map(|(e, _)| e)
    }

    /// True iff every pair of `vertices` is adjacent.
    pub fn is_clique(&self, vertices: &[VertexId]) -> bool {
        vertices.iter().enumerate().all(|(i, &u)| {
            vertices[i + 1..]
                .iter()
                .all(|&v| u != v && self.has_edge(u, v))
        })
    }

    /// Hop distances from `source`; `u32::MAX` marks unreachable vertices.
    pub fn bfs_distances(&self, source: VertexId) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.node_count()];
        let mut queue = VecDeque::new();
        dist[source as usize] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            for &w in self.neighbors(u) {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = du + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Connected components, each sorted, listed in order of their smallest
    /// vertex id.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            stack.push(start as VertexId);
            let mut comp = Vec::new();
            while let Some(u) = stack.pop() {
                comp.push(u);
                for &w in self.neighbors(u) {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        match self.node_count() {
            0 => true,
            _ => self.bfs_distances(0).iter().all(|&d| d != u32::MAX),
        }
    }

    /// Subgraph induced on `vertices`, relabelled densely in the given order.
    pub fn induced_subgraph(&self, vertices: &[VertexId]) -> LabeledGraph {
        let mut index = vec![u32::MAX; self.node_count()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v as usize] = i as VertexId;
        }
        let mut sub = LabeledGraph::with_nodes(vertices.len());
        for (e, bond) in self.edges() {
            let (a, b) = e.endpoints();
            let (ia, ib) = (index[a as usize], index[b as usize]);
            if ia != u32::MAX && ib != u32::MAX {
                sub.add_edge(ia, ib, bond)
                    .expect("induced subgraph of a simple graph is simple");
            }
        }
        sub
    }

    /// Copy keeping only edges for which `keep` returns true; vertex set unchanged.
    pub fn filter_edges<F>(&self, mut keep: F) -> LabeledGraph
    where
        F: FnMut(Edge, BondType) -> bool,
    {
        let mut out = LabeledGraph::with_nodes(self.node_count());
        for (e, bond) in self.edges() {
            if keep(e, bond) {
                let (a, b) = e.endpoints();
                out.add_edge(a, b, bond).expect("subset of a simple graph");
            }
        }
        out
    }
}

fn insert_sorted(list: &mut Vec<VertexId>, v: VertexId) {
    let pos = list.partition_point(|&x| x < v);
    list.insert(pos, v);
}
