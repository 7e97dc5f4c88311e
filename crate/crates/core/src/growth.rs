//! Stochastic aggregation of simplexes.
//!
//! Each step draws a simplex size from a truncated power law, optionally marks
//! one of its edges as a defect, counts the compatible docking sites at every
//! face order, picks the order with the affinity-tilted probability
//!
//! ```text
//! p(q) = c_q exp(-nu (q_max - q)) / sum_q' c_q' exp(-nu (q_max - q'))
//! ```
//!
//! and glues the simplex onto a uniformly chosen eligible site, adding the
//! `q_max - q` vertices that are not shared.
//!
//! Randomness comes from a single ChaCha8 stream seeded with
//! `GrowthConfig::seed`; the same configuration always grows the same graph.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::census::{CliqueCensus, CliqueId, CompatibilityMode, SiteKind};
use crate::error::{Error, Result};
use crate::graph::{BondType, Edge, LabeledGraph, VertexId};
use crate::simplex::{face_subsets, PlacedSimplex, SimplexSpec, MAX_SIMPLEX_SIZE};

/// Parameters of one growth run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthConfig {
    /// Growth stops once the graph has at least this many vertices.
    pub target_nodes: usize,
    /// Chemical affinity `nu`.
    pub affinity: f64,
    /// Probability that an arriving simplex carries a defect edge.
    pub defect_probability: f64,
    /// Exponent `alpha` of the size distribution `p_n ~ n^-alpha`.
    pub size_exponent: f64,
    pub min_size: usize,
    pub max_size: usize,
    pub seed: u64,
    pub mode: CompatibilityMode,
}

impl Default for GrowthConfig {
    fn default() -> Self {
        GrowthConfig {
            target_nodes: 1000,
            affinity: 0.0,
            defect_probability: 0.0,
            size_exponent: 2.0,
            min_size: 2,
            max_size: 10,
            seed: 0,
            mode: CompatibilityMode::Contamination,
        }
    }
}

impl GrowthConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !self.affinity.is_finite() {
            return bad(format!("affinity must be finite, got {}", self.affinity));
        }
        if !self.size_exponent.is_finite() {
            return bad(format!("size exponent must be finite, got {}", self.size_exponent));
        }
        if !(0.0..=1.0).contains(&self.defect_probability) {
            return bad(format!(
                "defect probability must lie in [0, 1], got {}",
                self.defect_probability
            ));
        }
        if self.min_size < 2 || self.min_size > self.max_size {
            return bad(format!(
                "size range [{}, {}] must satisfy 2 <= n_min <= n_max",
                self.min_size, self.max_size
            ));
        }
        if self.max_size > MAX_SIMPLEX_SIZE {
            return bad(format!(
                "n_max = {} exceeds the supported maximum {MAX_SIMPLEX_SIZE}",
                self.max_size
            ));
        }
        if self.target_nodes < self.min_size {
            return bad(format!(
                "target size {} is below n_min = {}",
                self.target_nodes, self.min_size
            ));
        }
        Ok(())
    }
}

/// Truncated power law `p_n = n^-alpha / sum_m m^-alpha` on `[min, max]`.
#[derive(Debug, Clone)]
pub struct SizeDistribution {
    min_size: usize,
    probabilities: Vec<f64>,
}

impl SizeDistribution {
    pub fn power_law(exponent: f64, min_size: usize, max_size: usize) -> Result<Self> {
        if min_size < 2 || min_size > max_size {
            return Err(Error::InvalidConfig(format!(
                "size range [{min_size}, {max_size}] must satisfy 2 <= n_min <= n_max"
            )));
        }
        let weights: Vec<f64> = (min_size..=max_size)
            .map(|n| (n as f64).powf(-exponent))
            .collect();
        let total: f64 = weights.iter().sum();
        Ok(SizeDistribution {
            min_size,
            probabilities: weights.into_iter().map(|w| w / total).collect(),
        })
    }

    pub fn min_size(&self) -> usize {
        self.min_size
    }

    pub fn max_size(&self) -> usize {
        self.min_size + self.probabilities.len() - 1
    }

    /// Probabilities for `n = min..=max`.
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn probability(&self, n: usize) -> f64 {
        n.checked_sub(self.min_size)
            .and_then(|i| self.probabilities.get(i))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for (i, p) in self.probabilities.iter().enumerate() {
            acc += p;
            if u < acc {
                return self.min_size + i;
            }
        }
        self.max_size()
    }
}

/// One draw from the size distribution.
pub fn sample_size<R: Rng + ?Sized>(
    exponent: f64,
    min_size: usize,
    max_size: usize,
    rng: &mut R,
) -> Result<usize> {
    Ok(SizeDistribution::power_law(exponent, min_size, max_size)?.sample(rng))
}

/// Draws an `n`-simplex that with probability `p` carries one defect edge
/// chosen uniformly among its `C(n, 2)` edges.
pub fn make_spec<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<SimplexSpec> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidConfig(format!(
            "defect probability must lie in [0, 1], got {p}"
        )));
    }
    if !rng.gen_bool(p) {
        return SimplexSpec::pure(n);
    }
    let mut k = rng.gen_range(0..n * (n - 1) / 2);
    for a in 0..n {
        let row = n - 1 - a;
        if k < row {
            return SimplexSpec::with_defect(n, a, a + 1 + k);
        }
        k -= row;
    }
    unreachable!("edge index within C(n, 2)")
}

/// A network location an arriving face can dock onto.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DockingSite {
    Vertex(VertexId),
    Face { id: CliqueId, kind: SiteKind },
}

/// Eligible docking sites, per face order, for one arriving simplex.
#[derive(Debug, Clone)]
pub struct DockingCensus<'a> {
    census: &'a CliqueCensus,
    counts: Vec<usize>,
    accepts_defect: bool,
}

impl<'a> DockingCensus<'a> {
    /// Level 0 offers every vertex. Level `q >= 1` offers the network
    /// `(q+1)`-cliques able to receive a pure face, plus, when the simplex
    /// carries a defect, those able to receive the face holding it.
    pub fn new(census: &'a CliqueCensus, spec: &SimplexSpec) -> Self {
        let accepts_defect = spec.has_defect();
        let counts = (0..spec.order())
            .map(|q| match q {
                0 => census.node_count(),
                _ => {
                    census.pure_sites(q).len()
                        + if accepts_defect { census.defect_sites(q).len() } else { 0 }
                }
            })
            .collect();
        DockingCensus {
            census,
            counts,
            accepts_defect,
        }
    }

    /// `c_q` for `q = 0..q_max`.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// The `index`-th eligible site at `level`: pure sites first, then defect sites.
    pub fn site(&self, level: usize, index: usize) -> DockingSite {
        assert!(index < self.counts[level], "site index out of range");
        if level == 0 {
            return DockingSite::Vertex(index as VertexId);
        }
        let pure = self.census.pure_sites(level);
        match pure.get(index) {
            Some(&id) => DockingSite::Face {
                id,
                kind: SiteKind::Pure,
            },
            None => DockingSite::Face {
                id: self.census.defect_sites(level)[index - pure.len()],
                kind: SiteKind::Defect,
            },
        }
    }

    /// Vertex sets of the eligible sites at `level`.
    pub fn site_vertices(&self, level: usize) -> Vec<Vec<VertexId>> {
        (0..self.counts[level])
            .map(|i| self.vertices_of(self.site(level, i)))
            .collect()
    }

    pub fn vertices_of(&self, site: DockingSite) -> Vec<VertexId> {
        match site {
            DockingSite::Vertex(v) => vec![v],
            DockingSite::Face { id, .. } => self.census.clique(id).to_vec(),
        }
    }

    pub fn accepts_defect(&self) -> bool {
        self.accepts_defect
    }
}

/// Normalised probability of docking along each face order.
#[derive(Debug, Clone, PartialEq)]
pub struct AttachmentDistribution {
    probabilities: Vec<f64>,
}

/// Evaluates the affinity-tilted attachment probability over `q = 0..order`.
///
/// Works in log space so that large `|nu|` neither overflows nor underflows
/// the normalisation.
///
/// # Panics
/// If `counts.len() != order` or every count is zero.
pub fn attachment_distribution(counts: &[usize], affinity: f64, order: usize) -> AttachmentDistribution {
    assert_eq!(counts.len(), order, "one docking count per face order");
    let log_weights: Vec<Option<f64>> = counts
        .iter()
        .enumerate()
        .map(|(q, &c)| (c > 0).then(|| (c as f64).ln() - affinity * (order - q) as f64))
        .collect();
    let top = log_weights
        .iter()
        .flatten()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    assert!(top.is_finite(), "no docking site at any level");
    let weights: Vec<f64> = log_weights
        .iter()
        .map(|w| w.map_or(0.0, |w| (w - top).exp()))
        .collect();
    let total: f64 = weights.iter().sum();
    AttachmentDistribution {
        probabilities: weights.into_iter().map(|w| w / total).collect(),
    }
}

impl AttachmentDistribution {
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn mean_level(&self) -> f64 {
        self.probabilities
            .iter()
            .enumerate()
            .map(|(q, p)| q as f64 * p)
            .sum()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        let mut last = 0;
        for (q, &p) in self.probabilities.iter().enumerate() {
            if p > 0.0 {
                acc += p;
                last = q;
                if u < acc {
                    return q;
                }
            }
        }
        last
    }
}

/// One row of the growth log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventRecord {
    pub t: usize,
    /// Size `n` of the arriving simplex.
    pub size: usize,
    /// Order of the shared face; `None` for the seed simplex.
    pub shared_order: Option<usize>,
    /// Vertices added, `n_a = q_max - q` (all `n` for the seed).
    pub added_nodes: usize,
    pub nodes: usize,
    pub edges: usize,
    /// Simplexes placed so far.
    pub simplexes: usize,
    /// All simplexes and faces of the clique complex, vertices included.
    pub faces_total: usize,
}

/// A growing assembly: graph, clique census, placement history and the
/// random stream driving it.
#[derive(Debug, Clone)]
pub struct AssemblyState {
    config: GrowthConfig,
    sizes: SizeDistribution,
    graph: LabeledGraph,
    census: CliqueCensus,
    placed: Vec<PlacedSimplex>,
    events: Vec<EventRecord>,
    rng: ChaCha8Rng,
}

impl AssemblyState {
    /// Seeds the assembly with one simplex drawn from the same size and
    /// defect distributions as later arrivals.
    pub fn new(config: GrowthConfig) -> Result<Self> {
        config.validate()?;
        let mut state = Self::empty(config)?;
        let n = state.sizes.sample(&mut state.rng);
        let spec = make_spec(n, state.config.defect_probability, &mut state.rng)?;
        let vertices: Vec<VertexId> = (0..n).map(|_| state.graph.add_node()).collect();
        for i in 0..n {
            for j in i + 1..n {
                state
                    .graph
                    .add_edge(vertices[i], vertices[j], spec.bond(i, j))?;
            }
        }
        state.census.absorb(&state.graph, &vertices);
        state.record(&spec, vertices, None, n);
        Ok(state)
    }

    /// Continues growth from an existing graph, with an empty history.
    pub fn from_graph(config: GrowthConfig, graph: LabeledGraph) -> Result<Self> {
        config.validate()?;
        let mut state = Self::empty(config)?;
        state.census = CliqueCensus::from_graph(&graph, state.config.mode, state.config.max_size);
        state.graph = graph;
        Ok(state)
    }

    fn empty(config: GrowthConfig) -> Result<Self> {
        Ok(AssemblyState {
            sizes: SizeDistribution::power_law(
                config.size_exponent,
                config.min_size,
                config.max_size,
            )?,
            graph: LabeledGraph::default(),
            census: CliqueCensus::new(config.mode, config.max_size),
            placed: Vec::new(),
            events: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            config,
        })
    }

    pub fn config(&self) -> &GrowthConfig {
        &self.config
    }

    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    pub fn census(&self) -> &CliqueCensus {
        &self.census
    }

    pub fn placed(&self) -> &[PlacedSimplex] {
        &self.placed
    }

    pub fn events(&self) -> &[EventRecord] {
        &self.events
    }

    pub fn into_graph(self) -> LabeledGraph {
        self.graph
    }

    pub fn docking_sites(&self, spec: &SimplexSpec) -> DockingCensus<'_> {
        DockingCensus::new(&self.census, spec)
    }

    /// Draws the next simplex from the configured distributions and attaches it.
    pub fn step(&mut self) -> Result<&EventRecord> {
        let n = self.sizes.sample(&mut self.rng);
        let spec = make_spec(n, self.config.defect_probability, &mut self.rng)?;
        self.attach_step(&spec)
    }

    /// Attaches `spec`: samples the face order, a uniformly chosen eligible
    /// site at that order and a uniformly chosen compatible face of the
    /// simplex, then inserts the unshared vertices and their edges.
    pub fn attach_step(&mut self, spec: &SimplexSpec) -> Result<&EventRecord> {
        if spec.size() > self.config.max_size {
            return Err(Error::InvalidSimplex(format!(
                "size {} exceeds the configured n_max = {}",
                spec.size(),
                self.config.max_size
            )));
        }
        if self.graph.node_count() == 0 {
            return Err(Error::InvalidConfig("cannot dock onto an empty assembly".into()));
        }
        let docking = DockingCensus::new(&self.census, spec);
        let level = attachment_distribution(docking.counts(), self.config.affinity, spec.order())
            .sample(&mut self.rng);
        let site = docking.site(level, self.rng.gen_range(0..docking.counts()[level]));
        let site_vertices = docking.vertices_of(site);
        let kind = match site {
            DockingSite::Vertex(_) => None,
            DockingSite::Face { kind, .. } => Some(kind),
        };

        let faces: Vec<_> = face_subsets(spec, level)?
            .into_iter()
            .filter(|f| match kind {
                None => true,
                Some(SiteKind::Pure) => !f.contains_defect,
                Some(SiteKind::Defect) => f.contains_defect,
            })
            .collect();
        let face = faces
            .choose(&mut self.rng)
            .expect("every eligible site has a compatible face")
            .vertices
            .clone();

        let n = spec.size();
        let mut global = vec![VertexId::MAX; n];
        let mut targets = site_vertices;
        let mut locals = face.clone();
        if kind == Some(SiteKind::Defect) {
            let (a, b) = spec.defect_edge().expect("defect site implies a defect spec");
            let (mut x, mut y) = self.site_defect_edge(&targets);
            if self.rng.gen_bool(0.5) {
                std::mem::swap(&mut x, &mut y);
            }
            global[a] = x;
            global[b] = y;
            targets.retain(|&v| v != x && v != y);
            locals.retain(|&l| l != a && l != b);
        }
        targets.shuffle(&mut self.rng);
        for (&l, &v) in locals.iter().zip(&targets) {
            global[l] = v;
        }
        for slot in global.iter_mut().filter(|g| **g == VertexId::MAX) {
            *slot = self.graph.add_node();
        }
        for i in 0..n {
            for j in i + 1..n {
                if !(face.contains(&i) && face.contains(&j)) {
                    self.graph.add_edge(global[i], global[j], spec.bond(i, j))?;
                }
            }
        }
        debug_assert!(self.graph.is_clique(&global));
        self.census.absorb(&self.graph, &global);
        Ok(self.record(spec, global, Some(level), n - face.len()))
    }

    fn site_defect_edge(&self, face: &[VertexId]) -> (VertexId, VertexId) {
        for (i, &u) in face.iter().enumerate() {
            for &v in &face[i + 1..] {
                if self.graph.bond(u, v) == Some(BondType::Defect) {
                    return (u, v);
                }
            }
        }
        unreachable!("defect site without a defect edge")
    }

    fn record(
        &mut self,
        spec: &SimplexSpec,
        vertices: Vec<VertexId>,
        shared_order: Option<usize>,
        added_nodes: usize,
    ) -> &EventRecord {
        let t = self.placed.len();
        let defect_edge = spec
            .defect_edge()
            .and_then(|(a, b)| Edge::new(vertices[a], vertices[b]));
        self.placed.push(PlacedSimplex {
            vertices,
            defect_edge,
            step: t,
            shared_order,
        });
        self.events.push(EventRecord {
            t,
            size: spec.size(),
            shared_order,
            added_nodes,
            nodes: self.graph.node_count(),
            edges: self.graph.edge_count(),
            simplexes: self.placed.len(),
            faces_total: self.census.simplex_total(),
        });
        self.events.last().expect("just pushed")
    }

    /// True iff the incremental census equals a from-scratch enumeration.
    pub fn verify_census(&self) -> bool {
        let scratch = CliqueCensus::from_graph(&self.graph, self.config.mode, self.config.max_size);
        scratch.snapshot() == self.census.snapshot()
    }
}

/// Grows an assembly until it has at least `config.target_nodes` vertices.
pub fn grow(config: &GrowthConfig) -> Result<AssemblyState> {
    let mut state = AssemblyState::new(config.clone())?;
    while state.graph.node_count() < config.target_nodes {
        state.step()?;
    }
    Ok(state)
}
