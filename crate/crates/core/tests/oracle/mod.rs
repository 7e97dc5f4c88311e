//! Slow reference implementations shared by the integration tests and the
//! acceptance suite. Nothing here calls into the library's algorithms; only
//! the graph container is used.

#![allow(dead_code)]

use std::collections::BTreeSet;

use simplex_assembly::{LabeledGraph, VertexId};

/// Every clique (vertex set of size >= 1), by include/exclude backtracking
/// over vertices in id order with pairwise edge checks.
pub fn all_cliques(g: &LabeledGraph) -> BTreeSet<Vec<VertexId>> {
    fn walk(g: &LabeledGraph, next: VertexId, current: &mut Vec<VertexId>, out: &mut BTreeSet<Vec<VertexId>>) {
        if next as usize == g.node_count() {
            if !current.is_empty() {
                out.insert(current.clone());
            }
            return;
        }
        walk(g, next + 1, current, out);
        if current.iter().all(|&u| g.has_edge(u, next)) {
            current.push(next);
            walk(g, next + 1, current, out);
            current.pop();
        }
    }
    let mut out = BTreeSet::new();
    walk(g, 0, &mut Vec::new(), &mut out);
    out
}

/// Cliques that no outside vertex extends.
pub fn maximal_cliques(g: &LabeledGraph) -> BTreeSet<Vec<VertexId>> {
    all_cliques(g)
        .into_iter()
        .filter(|c| {
            (0..g.node_count() as VertexId)
                .filter(|w| !c.contains(w))
                .all(|w| !c.iter().all(|&u| g.has_edge(u, w)))
        })
        .collect()
}

/// `(Q, n, TSV, q*)` straight from the definitions: at level q keep the
/// maximal cliques with more than q vertices, join two when they share
/// more than q vertices, count components by depth-first search.
pub fn structure_vectors(maximal: &BTreeSet<Vec<VertexId>>) -> (Vec<usize>, Vec<usize>, Vec<f64>, usize) {
    let cliques: Vec<&Vec<VertexId>> = maximal.iter().collect();
    let max_order = cliques.iter().map(|c| c.len() - 1).max().unwrap_or(0);
    let shared = |a: &[VertexId], b: &[VertexId]| a.iter().filter(|v| b.contains(v)).count();
    let mut fsv = Vec::new();
    let mut ssv = Vec::new();
    for q in 0..=max_order {
        let members: Vec<usize> = (0..cliques.len()).filter(|&i| cliques[i].len() > q).collect();
        let mut seen = vec![false; cliques.len()];
        let mut components = 0;
        for &start in &members {
            if seen[start] {
                continue;
            }
            components += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(i) = stack.pop() {
                for &j in &members {
                    if !seen[j] && shared(cliques[i], cliques[j]) > q {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        fsv.push(components);
        ssv.push(members.len());
    }
    let tsv: Vec<f64> = fsv
        .iter()
        .zip(&ssv)
        .map(|(&c, &n)| if n == 0 { 0.0 } else { 1.0 - c as f64 / n as f64 })
        .collect();
    let q_star = (1..=max_order)
        .find(|&q| ssv[q] > 0 && tsv[q] == 0.0)
        .unwrap_or(max_order + 1);
    (fsv, ssv, tsv, q_star)
}

/// Number of distinct cliques per size, index `q` holding `(q+1)`-cliques.
pub fn f_vector(g: &LabeledGraph) -> Vec<usize> {
    let cliques = all_cliques(g);
    let max = cliques.iter().map(Vec::len).max().unwrap_or(1);
    let mut f = vec![0; max];
    for c in &cliques {
        f[c.len() - 1] += 1;
    }
    f
}

/// Floyd–Warshall hop distances; `u32::MAX` for unreachable pairs.
pub fn floyd_warshall(g: &LabeledGraph) -> Vec<Vec<u32>> {
    let n = g.node_count();
    let inf = u32::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for (e, _) in g.edges() {
        let (u, v) = e.endpoints();
        d[u as usize][v as usize] = 1;
        d[v as usize][u as usize] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Twice the four-point delta of one quadruple: largest pair sum minus the
/// middle one.
pub fn twice_delta(d: &[Vec<u32>], [a, b, c, e]: [usize; 4]) -> u32 {
    let mut s = [d[a][b] + d[c][e], d[a][c] + d[b][e], d[a][e] + d[b][c]];
    s.sort_unstable();
    s[2] - s[1]
}

/// Exhaustive `2 * delta(G)` of a connected graph.
pub fn twice_hyperbolicity(g: &LabeledGraph) -> u32 {
    let d = floyd_warshall(g);
    let n = g.node_count();
    let mut best = 0;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for e in c + 1..n {
                    best = best.max(twice_delta(&d, [a, b, c, e]));
                }
            }
        }
    }
    best
}

/// `delta(C_n)`: `floor(n/4) - 1/2` when `n = 1 mod 4`, else `floor(n/4)`.
pub fn cycle_delta(n: usize) -> f64 {
    let base = (n / 4) as f64;
    if n % 4 == 1 {
        base - 0.5
    } else {
        base
    }
}

pub fn cycle(n: usize) -> LabeledGraph {
    let edges: Vec<(VertexId, VertexId)> = (0..n as VertexId).map(|i| (i, (i + 1) % n as VertexId)).collect();
    LabeledGraph::from_pure_edges(n, &edges).unwrap()
}

/// A single `n`-clique with the defect bond on vertices 0 and 1.
pub fn defect_clique(n: usize) -> LabeledGraph {
    use simplex_assembly::BondType;
    let mut edges = Vec::new();
    for u in 0..n as VertexId {
        for v in u + 1..n as VertexId {
            let bond = if (u, v) == (0, 1) { BondType::Defect } else { BondType::Pure };
            edges.push((u, v, bond));
        }
    }
    LabeledGraph::from_edges(n, edges).unwrap()
}
