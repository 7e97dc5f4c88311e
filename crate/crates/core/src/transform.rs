//! Post-growth edits: removing the defect bonds, removing the same number of
//! random bonds, and extracting the largest component.
//!
//! Removals never delete vertices, so `N` stays comparable between variants.

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{LabeledGraph, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemovalReport {
    pub edges_removed: usize,
    /// How many of the removed edges were defect bonds.
    pub defect_edges_removed: usize,
    pub components: usize,
    pub largest_component: usize,
}

impl RemovalReport {
    fn new(result: &LabeledGraph, edges_removed: usize, defect_edges_removed: usize) -> Self {
        let sizes: Vec<usize> = result.components().iter().map(Vec::len).collect();
        RemovalReport {
            edges_removed,
            defect_edges_removed,
            components: sizes.len(),
            largest_component: sizes.into_iter().max().unwrap_or(0),
        }
    }
}

/// Keeps exactly the pure edges.
pub fn remove_defect_edges(graph: &LabeledGraph) -> (LabeledGraph, RemovalReport) {
    let out = graph.filter_edges(|_, bond| !bond.is_defect());
    let removed = graph.defect_edge_count();
    let report = RemovalReport::new(&out, removed, removed);
    (out, report)
}

/// Deletes `count` edges chosen uniformly without replacement.
pub fn remove_random_edges<R: Rng + ?Sized>(
    graph: &LabeledGraph,
    count: usize,
    rng: &mut R,
) -> Result<(LabeledGraph, RemovalReport)> {
    let total = graph.edge_count();
    if count > total {
        return Err(Error::TooManyEdges {
            requested: count,
            available: total,
        });
    }
    let mut doomed = vec![false; total];
    for i in index::sample(rng, total, count) {
        doomed[i] = true;
    }
    let mut defects = 0;
    let mut i = 0;
    let out = graph.filter_edges(|_, bond| {
        let drop = doomed[i];
        i += 1;
        if drop && bond.is_defect() {
            defects += 1;
        }
        !drop
    });
    let report = RemovalReport::new(&out, count, defects);
    Ok((out, report))
}

/// The largest connected component as an induced subgraph.
#[derive(Debug, Clone)]
pub struct LargestComponent {
    pub graph: LabeledGraph,
    /// Original ids of the component's vertices, ascending; the new id of
    /// `vertices[i]` is `i`.
    pub vertices: Vec<VertexId>,
    /// Sizes of all components in order of their smallest vertex id.
    pub sizes: Vec<usize>,
}

/// Ties between equally large components go to the one holding the smallest
/// vertex id.
pub fn largest_component(graph: &LabeledGraph) -> LargestComponent {
    let comps = graph.components();
    let sizes: Vec<usize> = comps.iter().map(Vec::len).collect();
    // components are ordered by minimum vertex, so the first maximum wins ties
    let best = sizes
        .iter()
        .enumerate()
        .fold(None, |best: Option<(usize, usize)>, (i, &s)| match best {
            Some((_, bs)) if bs >= s => best,
            _ => Some((i, s)),
        })
        .map(|(i, _)| i);
    let vertices = best.map(|i| comps[i].clone()).unwrap_or_default();
    LargestComponent {
        graph: graph.induced_subgraph(&vertices),
        vertices,
        sizes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::BondType;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn defect_clique(n: u32) -> LabeledGraph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                let bond = if (u, v) == (0, 1) { BondType::Defect } else { BondType::Pure };
                edges.push((u, v, bond));
            }
        }
        LabeledGraph::from_edges(n as usize, edges).unwrap()
    }

    #[test]
    fn defect_removal_keeps_pure_edges() {
        let g = defect_clique(4);
        let (out, report) = remove_defect_edges(&g);
        assert_eq!(out.node_count(), 4);
        assert_eq!(out.edge_count(), 5);
        assert_eq!(out.defect_edge_count(), 0);
        assert!(!out.has_edge(0, 1));
        assert_eq!(report.edges_removed, 1);
        assert_eq!(report.components, 1);
        // idempotent
        let (again, r2) = remove_defect_edges(&out);
        assert_eq!(again, out);
        assert_eq!(r2.edges_removed, 0);
    }

    #[test]
    fn random_removal_bounds() {
        let g = defect_clique(5);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (same, r) = remove_random_edges(&g, 0, &mut rng).unwrap();
        assert_eq!(same, g);
        assert_eq!(r.edges_removed, 0);
        let (empty, r) = remove_random_edges(&g, 10, &mut rng).unwrap();
        assert_eq!(empty.edge_count(), 0);
        assert_eq!(empty.node_count(), 5);
        assert_eq!(r.components, 5);
        assert_eq!(r.defect_edges_removed, 1);
        assert!(matches!(
            remove_random_edges(&g, 11, &mut rng),
            Err(Error::TooManyEdges { requested: 11, available: 10 })
        ));
    }

    #[test]
    fn random_removal_preserves_types_of_survivors() {
        let g = defect_clique(6);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (out, report) = remove_random_edges(&g, 7, &mut rng).unwrap();
        assert_eq!(out.edge_count(), 8);
        for (e, bond) in out.edges() {
            let (a, b) = e.endpoints();
            assert_eq!(g.bond(a, b), Some(bond));
        }
        assert_eq!(report.defect_edges_removed, 1 - out.defect_edge_count());
    }

    #[test]
    fn largest_component_tie_rule() {
        let g = LabeledGraph::from_pure_edges(6, &[(3, 4), (4, 5), (3, 5), (0, 1), (1, 2), (0, 2)])
            .unwrap();
        let lc = largest_component(&g);
        assert_eq!(lc.vertices, vec![0, 1, 2]);
        assert_eq!(lc.sizes, vec![3, 3]);
        assert_eq!(lc.graph.edge_count(), 3);
    }

    #[test]
    fn largest_component_of_connected_graph() {
        let g = defect_clique(5);
        let lc = largest_component(&g);
        assert_eq!(lc.sizes, vec![5]);
        assert_eq!(lc.graph, g);
    }
}
