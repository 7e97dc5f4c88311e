//! Shortest-path geometry: all-pairs hop distances, the distance
//! distribution and Gromov four-point hyperbolicity.
//!
//! For a quadruple `{A, B, C, D}` the three pairing sums are ordered
//! `S <= M <= L`; the quadruple's hyperbolicity is `(L - M) / 2`, and it never
//! exceeds `d_min`, the smaller of the two distances in the `S` pairing.
//! All deltas are half-integers, so they are carried as `2 * delta` in `u32`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{LabeledGraph, VertexId};

/// Hop distances of a connected graph, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<u16>,
    diameter: u32,
}

/// Unweighted BFS from every source. Fails on a disconnected graph; take the
/// largest component first.
pub fn distance_matrix(graph: &LabeledGraph) -> Result<DistanceMatrix> {
    let n = graph.node_count();
    let mut data = vec![u16::MAX; n * n];
    if n > 0 {
        data.par_chunks_mut(n)
            .enumerate()
            .try_for_each(|(s, row)| bfs_row(graph, s as VertexId, row))?;
    }
    let diameter = data.iter().copied().max().unwrap_or(0) as u32;
    Ok(DistanceMatrix { n, data, diameter })
}

fn bfs_row(graph: &LabeledGraph, source: VertexId, row: &mut [u16]) -> Result<()> {
    let mut frontier = vec![source];
    let mut next = Vec::new();
    row[source as usize] = 0;
    let mut seen = 1;
    let mut depth: u16 = 0;
    while !frontier.is_empty() {
        depth += 1;
        for &u in &frontier {
            for &w in graph.neighbors(u) {
                if row[w as usize] == u16::MAX {
                    row[w as usize] = depth;
                    next.push(w);
                }
            }
        }
        seen += next.len();
        std::mem::swap(&mut frontier, &mut next);
        next.clear();
    }
    if seen == row.len() {
        Ok(())
    } else {
        Err(Error::Disconnected)
    }
}

impl DistanceMatrix {
    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn diameter(&self) -> u32 {
        self.diameter
    }

    pub fn get(&self, u: VertexId, v: VertexId) -> u32 {
        self.data[u as usize * self.n + v as usize] as u32
    }

    pub fn row(&self, u: VertexId) -> &[u16] {
        &self.data[u as usize * self.n..(u as usize + 1) * self.n]
    }
}

/// Result of evaluating one quadruple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FourPoint {
    pub twice_delta: u32,
    pub d_min: u32,
}

impl FourPoint {
    pub fn delta(&self) -> f64 {
        self.twice_delta as f64 / 2.0
    }
}

pub fn four_point_delta(dm: &DistanceMatrix, quad: [VertexId; 4]) -> Result<FourPoint> {
    for i in 0..4 {
        if quad[i] as usize >= dm.n {
            return Err(Error::VertexOutOfRange {
                vertex: quad[i],
                nodes: dm.n,
            });
        }
        if quad[i + 1..].contains(&quad[i]) {
            return Err(Error::RepeatedVertices(quad));
        }
    }
    let [a, b, c, d] = quad;
    Ok(evaluate(
        dm.get(a, b),
        dm.get(c, d),
        dm.get(a, c),
        dm.get(b, d),
        dm.get(a, d),
        dm.get(b, c),
    ))
}

/// Pairings are (ab, cd), (ac, bd), (ad, bc).
#[inline(always)]
fn evaluate(ab: u32, cd: u32, ac: u32, bd: u32, ad: u32, bc: u32) -> FourPoint {
    let s1 = ab + cd;
    let s2 = ac + bd;
    let s3 = ad + bc;
    let large = s1.max(s2).max(s3);
    let small = s1.min(s2).min(s3);
    let middle = s1 + s2 + s3 - large - small;
    let d_min = if s1 == small {
        ab.min(cd)
    } else if s2 == small {
        ac.min(bd)
    } else {
        ad.min(bc)
    };
    FourPoint {
        twice_delta: large - middle,
        d_min,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum HyperbolicityMode {
    /// Every quadruple; refused above `threshold` vertices.
    Exhaustive { threshold: usize },
    /// `count` uniformly drawn quadruples of distinct vertices.
    Sampled { count: u64, seed: u64 },
}

/// Exhaustive below a size threshold, sampled above it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperbolicitySettings {
    pub exhaustive_threshold: usize,
    pub samples: u64,
    pub seed: u64,
}

impl Default for HyperbolicitySettings {
    fn default() -> Self {
        HyperbolicitySettings {
            exhaustive_threshold: 250,
            samples: 10_000_000,
            seed: 0,
        }
    }
}

impl HyperbolicitySettings {
    pub fn mode_for(&self, nodes: usize) -> HyperbolicityMode {
        if nodes <= self.exhaustive_threshold {
            HyperbolicityMode::Exhaustive {
                threshold: self.exhaustive_threshold,
            }
        } else {
            HyperbolicityMode::Sampled {
                count: self.samples,
                seed: self.seed,
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicityProfile {
    pub mode: HyperbolicityMode,
    pub quadruples: u64,
    /// Largest `2 * delta` seen per `d_min`; `None` where no quadruple had that `d_min`.
    pub twice_delta_by_dmin: Vec<Option<u32>>,
    /// Largest `2 * delta` overall.
    pub twice_delta: u32,
    pub distances: DistanceDistribution,
}

impl HyperbolicityProfile {
    /// `delta(G)`.
    pub fn delta(&self) -> f64 {
        self.twice_delta as f64 / 2.0
    }

    /// `(d_min, delta_max)` points.
    pub fn delta_by_dmin(&self) -> Vec<(u32, f64)> {
        self.twice_delta_by_dmin
            .iter()
            .enumerate()
            .filter_map(|(d, t)| t.map(|t| (d as u32, t as f64 / 2.0)))
            .collect()
    }
}

const SAMPLE_CHUNK: u64 = 1 << 16;

pub fn hyperbolicity_profile(dm: &DistanceMatrix, mode: HyperbolicityMode) -> Result<HyperbolicityProfile> {
    let n = dm.n;
    if n < 4 {
        return Err(Error::TooFewVertices { nodes: n });
    }
    let width = dm.diameter as usize + 1;
    let (bins, quadruples) = match mode {
        HyperbolicityMode::Exhaustive { threshold } => {
            if n > threshold {
                return Err(Error::ExhaustiveTooLarge {
                    nodes: n,
                    threshold,
                });
            }
            let bins = (0..n - 3)
                .into_par_iter()
                .map(|a| exhaustive_from(dm, a, width))
                .reduce(|| vec![-1; width], merge_bins);
            let n = n as u64;
            (bins, n * (n - 1) * (n - 2) * (n - 3) / 24)
        }
        HyperbolicityMode::Sampled { count, seed } => {
            let chunks = count.div_ceil(SAMPLE_CHUNK);
            let bins = (0..chunks)
                .into_par_iter()
                .map(|chunk| {
                    let todo = SAMPLE_CHUNK.min(count - chunk * SAMPLE_CHUNK);
                    sample_chunk(dm, seed, chunk, todo, width)
                })
                .reduce(|| vec![-1; width], merge_bins);
            (bins, count)
        }
    };
    let twice_delta_by_dmin: Vec<Option<u32>> = bins
        .iter()
        .map(|&b| (b >= 0).then_some(b as u32))
        .collect();
    let twice_delta = twice_delta_by_dmin.iter().flatten().copied().max().unwrap_or(0);
    Ok(HyperbolicityProfile {
        mode,
        quadruples,
        twice_delta_by_dmin,
        twice_delta,
        distances: distance_distribution(dm),
    })
}

fn merge_bins(mut a: Vec<i32>, b: Vec<i32>) -> Vec<i32> {
    for (x, y) in a.iter_mut().zip(b) {
        *x = (*x).max(y);
    }
    a
}

fn exhaustive_from(dm: &DistanceMatrix, a: usize, width: usize) -> Vec<i32> {
    let n = dm.n;
    let mut bins = vec![-1i32; width];
    let ra = dm.row(a as VertexId);
    for b in a + 1..n {
        let rb = dm.row(b as VertexId);
        let ab = ra[b] as u32;
        for c in b + 1..n {
            let rc = dm.row(c as VertexId);
            let (ac, bc) = (ra[c] as u32, rb[c] as u32);
            for d in c + 1..n {
                let fp = evaluate(ab, rc[d] as u32, ac, rb[d] as u32, ra[d] as u32, bc);
                let slot = &mut bins[fp.d_min as usize];
                if fp.twice_delta as i32 > *slot {
                    *slot = fp.twice_delta as i32;
                }
            }
        }
    }
    bins
}

fn sample_chunk(dm: &DistanceMatrix, seed: u64, chunk: u64, count: u64, width: usize) -> Vec<i32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    let n = dm.n as VertexId;
    let mut bins = vec![-1i32; width];
    for _ in 0..count {
        let quad = loop {
            let q = [
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                rng.gen_range(0..n),
            ];
            if q[0] != q[1] && q[0] != q[2] && q[0] != q[3] && q[1] != q[2] && q[1] != q[3] && q[2] != q[3] {
                break q;
            }
        };
        let [a, b, c, d] = quad;
        let fp = evaluate(
            dm.get(a, b),
            dm.get(c, d),
            dm.get(a, c),
            dm.get(b, d),
            dm.get(a, d),
            dm.get(b, c),
        );
        let slot = &mut bins[fp.d_min as usize];
        *slot = (*slot).max(fp.twice_delta as i32);
    }
    bins
}

/// Histogram of hop distances over unordered vertex pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceDistribution {
    /// `counts[d]` pairs at distance `d`; `counts[0]` is always 0.
    pub counts: Vec<u64>,
}

impl DistanceDistribution {
    pub fn pairs(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `P(d)` indexed by `d`.
    pub fn probabilities(&self) -> Vec<f64> {
        let total = self.pairs();
        self.counts
            .iter()
            .map(|&c| if total == 0 { 0.0 } else { c as f64 / total as f64 })
            .collect()
    }

    /// Most frequent distance (smallest on ties).
    pub fn mode(&self) -> Option<usize> {
        let best = *self.counts.iter().max()?;
        (best > 0).then(|| self.counts.iter().position(|&c| c == best).expect("max exists"))
    }

    pub fn mean(&self) -> f64 {
        let total = self.pairs();
        if total == 0 {
            return 0.0;
        }
        let weighted: u64 = self.counts.iter().enumerate().map(|(d, &c)| d as u64 * c).sum();
        weighted as f64 / total as f64
    }
}

pub fn distance_distribution(dm: &DistanceMatrix) -> DistanceDistribution {
    let mut counts = vec![0u64; dm.diameter as usize + 1];
    for u in 0..dm.n {
        for &d in &dm.row(u as VertexId)[u + 1..] {
            counts[d as usize] += 1;
        }
    }
    DistanceDistribution { counts }
}

/// Hyperbolicity of every component with at least four vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentHyperbolicity {
    /// `(component size, profile)` for components of four or more vertices,
    /// in order of their smallest vertex id.
    pub components: Vec<(usize, HyperbolicityProfile)>,
    /// Maximum `2 * delta` over all components.
    pub twice_delta: u32,
}

impl ComponentHyperbolicity {
    pub fn delta(&self) -> f64 {
        self.twice_delta as f64 / 2.0
    }
}

/// Per-component hyperbolicity, each component handled exhaustively or by
/// sampling according to its own size.
pub fn hyperbolicity_by_component(
    graph: &LabeledGraph,
    settings: &HyperbolicitySettings,
) -> Result<ComponentHyperbolicity> {
    let mut components = Vec::new();
    for comp in graph.components() {
        if comp.len() < 4 {
            continue;
        }
        let sub = graph.induced_subgraph(&comp);
        let dm = distance_matrix(&sub)?;
        let profile = hyperbolicity_profile(&dm, settings.mode_for(comp.len()))?;
        components.push((comp.len(), profile));
    }
    let twice_delta = components
        .iter()
        .map(|(_, p)| p.twice_delta)
        .max()
        .unwrap_or(0);
    Ok(ComponentHyperbolicity {
        components,
        twice_delta,
    })
}
