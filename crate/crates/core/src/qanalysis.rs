//! Q-analysis of the clique complex.
//!
//! Maximal cliques are the simplexes. Two simplexes are q-connected when they
//! share at least `q + 1` vertices, and q-connectivity extends along chains.
//! Per level `q` this module reports
//!
//! - `Q_q`, the number of q-connected components (first structure vector),
//! - `n_q`, the number of simplexes of order at least `q` (second),
//! - `1 - Q_q / n_q`, the connectivity among them (third),
//!
//! together with `f_q`, the number of distinct `(q+1)`-cliques.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::census::intersect_sorted;
use crate::graph::{LabeledGraph, VertexId};

/// Maximal cliques of a graph, each sorted, listed lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueComplex {
    pub node_count: usize,
    pub cliques: Vec<Vec<VertexId>>,
}

impl CliqueComplex {
    /// Order of the largest simplex (`size - 1`); 0 for an edgeless graph.
    pub fn max_order(&self) -> usize {
        self.cliques
            .iter()
            .map(Vec::len)
            .max()
            .unwrap_or(1)
            .saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }
}

/// Enumerates all maximal cliques (Bron–Kerbosch with Tomita pivoting,
/// outer loop in degeneracy order). Isolated vertices come out as
/// single-vertex cliques.
pub fn maximal_cliques(graph: &LabeledGraph) -> CliqueComplex {
    let order = degeneracy_order(graph);
    let mut position = vec![0usize; graph.node_count()];
    for (i, &v) in order.iter().enumerate() {
        position[v as usize] = i;
    }
    let mut cliques = Vec::new();
    let mut r = Vec::new();
    for &v in &order {
        let (later, earlier): (Vec<VertexId>, Vec<VertexId>) = graph
            .neighbors(v)
            .iter()
            .partition(|&&w| position[w as usize] > position[v as usize]);
        r.push(v);
        expand(graph, &mut r, later, earlier, &mut cliques);
        r.pop();
    }
    for c in &mut cliques {
        c.sort_unstable();
    }
    cliques.sort_unstable();
    CliqueComplex {
        node_count: graph.node_count(),
        cliques,
    }
}

fn expand(
    graph: &LabeledGraph,
    r: &mut Vec<VertexId>,
    mut p: Vec<VertexId>,
    mut x: Vec<VertexId>,
    out: &mut Vec<Vec<VertexId>>,
) {
    if p.is_empty() {
        if x.is_empty() {
            out.push(r.clone());
        }
        return;
    }
    let pivot = p
        .iter()
        .chain(&x)
        .copied()
        .max_by_key(|&u| intersect_count(&p, graph.neighbors(u)))
        .expect("p is non-empty");
    let branch: Vec<VertexId> = p
        .iter()
        .copied()
        .filter(|v| graph.neighbors(pivot).binary_search(v).is_err())
        .collect();
    for v in branch {
        let nv = graph.neighbors(v);
        r.push(v);
        expand(graph, r, intersect_sorted(&p, nv), intersect_sorted(&x, nv), out);
        r.pop();
        let i = p.binary_search(&v).expect("branch vertex in p");
        p.remove(i);
        let j = x.partition_point(|&w| w < v);
        x.insert(j, v);
    }
}

fn intersect_count(a: &[VertexId], b: &[VertexId]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Repeatedly removes a minimum-degree vertex (bucket queue).
fn degeneracy_order(graph: &LabeledGraph) -> Vec<VertexId> {
    let n = graph.node_count();
    let mut degree: Vec<usize> = (0..n).map(|v| graph.degree(v as VertexId)).collect();
    let max_deg = degree.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<Vec<VertexId>> = vec![Vec::new(); max_deg + 1];
    for v in 0..n {
        buckets[degree[v]].push(v as VertexId);
    }
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut d = 0;
    while order.len() < n {
        d = d.min(max_deg);
        while buckets[d].is_empty() {
            d += 1;
        }
        let v = buckets[d].pop().expect("non-empty bucket");
        // stale entries: degree changed since insertion
        if removed[v as usize] || degree[v as usize] != d {
            continue;
        }
        removed[v as usize] = true;
        order.push(v);
        for &w in graph.neighbors(v) {
            let w = w as usize;
            if !removed[w] {
                degree[w] -= 1;
                buckets[degree[w]].push(w as VertexId);
            }
        }
        d = d.saturating_sub(1);
    }
    order
}

/// Clique-by-vertex membership matrix, stored sparsely in both directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    rows: Vec<Vec<VertexId>>,
    columns: Vec<Vec<usize>>,
}

pub fn incidence_matrix(complex: &CliqueComplex) -> IncidenceMatrix {
    let mut columns = vec![Vec::new(); complex.node_count];
    for (i, c) in complex.cliques.iter().enumerate() {
        for &v in c {
            columns[v as usize].push(i);
        }
    }
    IncidenceMatrix {
        rows: complex.cliques.clone(),
        columns,
    }
}

impl IncidenceMatrix {
    pub fn shape(&self) -> (usize, usize) {
        (self.rows.len(), self.columns.len())
    }

    pub fn get(&self, clique: usize, vertex: VertexId) -> u8 {
        u8::from(self.rows[clique].binary_search(&vertex).is_ok())
    }

    pub fn row_sums(&self) -> Vec<usize> {
        self.rows.iter().map(Vec::len).collect()
    }

    pub fn column_sums(&self) -> Vec<usize> {
        self.columns.iter().map(Vec::len).collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        let (m, n) = self.shape();
        let mut dense = vec![vec![0u8; n]; m];
        for (i, row) in self.rows.iter().enumerate() {
            for &v in row {
                dense[i][v as usize] = 1;
            }
        }
        dense
    }

    /// Non-zero off-diagonal entries of `Λ Λᵀ` with `i < j`: the number of
    /// vertices two cliques share.
    pub fn shared_vertices(&self) -> HashMap<(usize, usize), usize> {
        let mut shared = HashMap::new();
        for col in &self.columns {
            for (a, &i) in col.iter().enumerate() {
                for &j in &col[a + 1..] {
                    *shared.entry((i.min(j), i.max(j))).or_insert(0) += 1;
                }
            }
        }
        shared
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureVectors {
    /// `Q_q`: q-connected components among simplexes of order >= q.
    pub fsv: Vec<usize>,
    /// `n_q`: simplexes of order >= q.
    pub ssv: Vec<usize>,
    /// `1 - Q_q / n_q`, or 0 where `n_q = 0`.
    pub tsv: Vec<f64>,
    /// Smallest `q >= 1` at which the third structure vector vanishes;
    /// `max_order + 1` when it never does.
    pub q_star: usize,
    /// Third structure vector at `q_star - 1`.
    pub tsv_before_q_star: f64,
}

impl StructureVectors {
    pub fn max_order(&self) -> usize {
        self.fsv.len() - 1
    }
}

pub fn structure_vectors(complex: &CliqueComplex) -> StructureVectors {
    let max_order = complex.max_order();
    let sizes: Vec<usize> = complex.cliques.iter().map(Vec::len).collect();
    let mut links: Vec<((usize, usize), usize)> =
        incidence_matrix(complex).shared_vertices().into_iter().collect();
    links.sort_unstable();

    let mut fsv = Vec::with_capacity(max_order + 1);
    let mut ssv = Vec::with_capacity(max_order + 1);
    for q in 0..=max_order {
        let mut uf = UnionFind::new(sizes.len());
        let members = sizes.iter().filter(|&&s| s > q).count();
        let mut components = members;
        for &((i, j), shared) in &links {
            if shared > q && uf.union(i, j) {
                components -= 1;
            }
        }
        fsv.push(components);
        ssv.push(members);
    }
    let tsv: Vec<f64> = fsv
        .iter()
        .zip(&ssv)
        .map(|(&big_q, &n)| if n == 0 { 0.0 } else { 1.0 - big_q as f64 / n as f64 })
        .collect();
    let q_star = (1..=max_order)
        .find(|&q| ssv[q] > 0 && fsv[q] == ssv[q])
        .unwrap_or(max_order + 1);
    StructureVectors {
        tsv_before_q_star: tsv[q_star - 1],
        fsv,
        ssv,
        tsv,
        q_star,
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// `f_q` for `q = 0..=max_order`: distinct complete subgraphs on `q + 1` vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FVector(pub Vec<usize>);

/// Counts every clique of the graph by size, enumerating each vertex set once
/// by extending only with higher-numbered common neighbours.
pub fn f_vector(graph: &LabeledGraph, complex: &CliqueComplex) -> FVector {
    let max_size = complex.max_order() + 1;
    let mut counts = vec![0usize; max_size];
    counts[0] = graph.node_count();
    fn extend(graph: &LabeledGraph, depth: usize, cands: &[VertexId], counts: &mut [usize]) {
        for (i, &w) in cands.iter().enumerate() {
            counts[depth] += 1;
            if depth + 1 < counts.len() {
                let next = intersect_sorted(&cands[i + 1..], graph.neighbors(w));
                if !next.is_empty() {
                    extend(graph, depth + 1, &next, counts);
                }
            }
        }
    }
    for v in 0..graph.node_count() as VertexId {
        let nbrs = graph.neighbors(v);
        let higher = &nbrs[nbrs.partition_point(|&w| w <= v)..];
        if max_size > 1 {
            extend(graph, 1, higher, &mut counts);
        }
    }
    FVector(counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_triangles() -> LabeledGraph {
        LabeledGraph::from_pure_edges(4, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn clique(n: u32) -> LabeledGraph {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        LabeledGraph::from_pure_edges(n as usize, &edges).unwrap()
    }

    #[test]
    fn triangle_complex() {
        let c = maximal_cliques(&clique(3));
        assert_eq!(c.cliques, vec![vec![0, 1, 2]]);
        let inc = incidence_matrix(&c);
        assert_eq!(inc.to_dense(), vec![vec![1, 1, 1]]);
        assert_eq!(f_vector(&clique(3), &c), FVector(vec![3, 3, 1]));
    }

    #[test]
    fn two_triangles_complex() {
        let g = two_triangles();
        let c = maximal_cliques(&g);
        assert_eq!(c.cliques, vec![vec![0, 1, 2], vec![1, 2, 3]]);
        let inc = incidence_matrix(&c);
        assert_eq!(inc.shape(), (2, 4));
        assert_eq!(inc.row_sums(), vec![3, 3]);
        assert_eq!(inc.column_sums(), vec![1, 2, 2, 1]);
        assert_eq!(inc.get(0, 3), 0);
        assert_eq!(inc.get(1, 3), 1);
        let sv = structure_vectors(&c);
        assert_eq!(sv.fsv, vec![1, 1, 2]);
        assert_eq!(sv.ssv, vec![2, 2, 2]);
        assert_eq!(sv.tsv, vec![0.5, 0.5, 0.0]);
        assert_eq!(sv.q_star, 2);
        assert_eq!(sv.tsv_before_q_star, 0.5);
        assert_eq!(f_vector(&g, &c), FVector(vec![4, 5, 2]));
    }

    #[test]
    fn gram_diagonal_is_clique_size() {
        let g = LabeledGraph::from_pure_edges(
            6,
            &[(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)],
        )
        .unwrap();
        let c = maximal_cliques(&g);
        let dense = incidence_matrix(&c).to_dense();
        for (i, row) in dense.iter().enumerate() {
            let diag: u32 = row.iter().map(|&x| u32::from(x) * u32::from(x)).sum();
            assert_eq!(diag as usize, c.cliques[i].len());
        }
    }

    #[test]
    fn single_clique_vectors() {
        for n in 2..=8u32 {
            let g = clique(n);
            let c = maximal_cliques(&g);
            let sv = structure_vectors(&c);
            assert_eq!(sv.fsv, vec![1; n as usize]);
            assert_eq!(sv.ssv, vec![1; n as usize]);
            assert!(sv.tsv.iter().all(|&t| t == 0.0));
            assert_eq!(sv.q_star, 1);
            let f = f_vector(&g, &c);
            for q in 0..n as usize {
                assert_eq!(f.0[q], binom(n as usize, q + 1));
            }
        }
    }

    #[test]
    fn tetrahedron_f_vector() {
        let g = clique(4);
        assert_eq!(f_vector(&g, &maximal_cliques(&g)), FVector(vec![4, 6, 4, 1]));
    }

    #[test]
    fn isolated_vertices_are_simplexes() {
        let g = LabeledGraph::from_pure_edges(4, &[(0, 1)]).unwrap();
        let c = maximal_cliques(&g);
        assert_eq!(c.cliques, vec![vec![0, 1], vec![2], vec![3]]);
        let sv = structure_vectors(&c);
        assert_eq!(sv.fsv[0], 3);
        assert_eq!(sv.ssv, vec![3, 1]);
    }

    #[test]
    fn edgeless_and_empty_graphs() {
        let c = maximal_cliques(&LabeledGraph::with_nodes(0));
        assert!(c.is_empty());
        let sv = structure_vectors(&c);
        assert_eq!(sv.fsv, vec![0]);
        assert_eq!(sv.q_star, 1);
    }

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }
}
