//! Louvain modularity optimisation (resolution 1).
//!
//! Local moving in a seeded random vertex order, then aggregation of
//! communities into super-vertices, repeated until a level makes no move.
//! The reported modularity is always recomputed on the input graph.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::LabeledGraph;

#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    /// Community label per vertex, labels dense from 0.
    pub membership: Vec<usize>,
    pub modularity: f64,
}

impl Partition {
    pub fn community_count(&self) -> usize {
        self.membership.iter().max().map_or(0, |&m| m + 1)
    }
}

/// Newman–Girvan modularity of `membership` on `graph`.
pub fn modularity_of(graph: &LabeledGraph, membership: &[usize]) -> f64 {
    let m = graph.edge_count() as f64;
    if m == 0.0 {
        return 0.0;
    }
    let k = membership.iter().max().map_or(0, |&x| x + 1);
    let mut internal = vec![0.0; k];
    let mut degree = vec![0.0; k];
    for (e, _) in graph.edges() {
        let (u, v) = e.endpoints();
        if membership[u as usize] == membership[v as usize] {
            internal[membership[u as usize]] += 1.0;
        }
    }
    for (v, &c) in membership.iter().enumerate() {
        degree[c] += graph.degree(v as u32) as f64;
    }
    internal
        .iter()
        .zip(&degree)
        .map(|(l, d)| l / m - (d / (2.0 * m)).powi(2))
        .sum()
}

/// Weighted graph used across aggregation levels.
struct Level {
    adjacency: Vec<Vec<(usize, f64)>>,
    self_loops: Vec<f64>,
}

impl Level {
    fn from_graph(graph: &LabeledGraph) -> Self {
        Level {
            adjacency: (0..graph.node_count())
                .map(|v| graph.neighbors(v as u32).iter().map(|&w| (w as usize, 1.0)).collect())
                .collect(),
            self_loops: vec![0.0; graph.node_count()],
        }
    }

    fn len(&self) -> usize {
        self.adjacency.len()
    }

    fn strength(&self, v: usize) -> f64 {
        self.adjacency[v].iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * self.self_loops[v]
    }

    /// One round of local moves; returns the community of each vertex and
    /// whether anything moved.
    fn local_moves<R: Rng>(&self, rng: &mut R) -> (Vec<usize>, bool) {
        let n = self.len();
        let strength: Vec<f64> = (0..n).map(|v| self.strength(v)).collect();
        let two_m: f64 = strength.iter().sum();
        let mut community: Vec<usize> = (0..n).collect();
        let mut total = strength.clone();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);

        let mut link = vec![0.0f64; n];
        let mut touched: Vec<usize> = Vec::new();
        let mut any_move = false;
        loop {
            let mut moved = false;
            for &v in &order {
                let own = community[v];
                for &(w, weight) in &self.adjacency[v] {
                    let c = community[w];
                    if link[c] == 0.0 {
                        touched.push(c);
                    }
                    link[c] += weight;
                }
                total[own] -= strength[v];
                let gain = |c: usize, link: &[f64]| link[c] - total[c] * strength[v] / two_m;
                let mut best = own;
                let mut best_gain = gain(own, &link);
                for &c in &touched {
                    let g = gain(c, &link);
                    if g > best_gain + 1e-12 {
                        best = c;
                        best_gain = g;
                    }
                }
                total[best] += strength[v];
                if best != own {
                    community[v] = best;
                    moved = true;
                }
                for &c in &touched {
                    link[c] = 0.0;
                }
                touched.clear();
            }
            if !moved {
                break;
            }
            any_move = true;
        }
        (relabel(&community), any_move)
    }

    fn aggregate(&self, community: &[usize]) -> Level {
        let k = community.iter().max().map_or(0, |&c| c + 1);
        let mut weights: Vec<std::collections::BTreeMap<usize, f64>> = vec![Default::default(); k];
        let mut self_loops = vec![0.0; k];
        for v in 0..self.len() {
            let cv = community[v];
            self_loops[cv] += self.self_loops[v];
            for &(w, weight) in &self.adjacency[v] {
                let cw = community[w];
                if cv == cw {
                    // each internal edge is seen from both ends
                    self_loops[cv] += weight / 2.0;
                } else {
                    *weights[cv].entry(cw).or_insert(0.0) += weight;
                }
            }
        }
        Level {
            adjacency: weights.into_iter().map(|m| m.into_iter().collect()).collect(),
            self_loops,
        }
    }
}

fn relabel(community: &[usize]) -> Vec<usize> {
    let mut map = vec![usize::MAX; community.len()];
    let mut next = 0;
    community
        .iter()
        .map(|&c| {
            if map[c] == usize::MAX {
                map[c] = next;
                next += 1;
            }
            map[c]
        })
        .collect()
}

/// One Louvain run with vertex orders drawn from `seed`.
pub fn louvain(graph: &LabeledGraph, seed: u64) -> Partition {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut membership: Vec<usize> = (0..graph.node_count()).collect();
    let mut level = Level::from_graph(graph);
    loop {
        let (community, moved) = level.local_moves(&mut rng);
        if !moved {
            break;
        }
        for m in membership.iter_mut() {
            *m = community[*m];
        }
        level = level.aggregate(&community);
    }
    let membership = relabel(&membership);
    Partition {
        modularity: modularity_of(graph, &membership),
        membership,
    }
}

/// Best partition over `restarts` Louvain runs. Restart `i` is seeded from
/// `seed` and `i` alone, so adding restarts never lowers the result.
pub fn best_modularity(graph: &LabeledGraph, restarts: usize, seed: u64) -> Result<Partition> {
    if graph.edge_count() == 0 {
        return Err(Error::NoEdges("modularity"));
    }
    let mut best: Option<Partition> = None;
    for i in 0..restarts.max(1) {
        let p = louvain(graph, restart_seed(seed, i as u64));
        if best.as_ref().is_none_or(|b| p.modularity > b.modularity) {
            best = Some(p);
        }
    }
    Ok(best.expect("at least one restart"))
}

fn restart_seed(seed: u64, i: u64) -> u64 {
    // splitmix64 finaliser
    let mut z = seed.wrapping_add(i.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
