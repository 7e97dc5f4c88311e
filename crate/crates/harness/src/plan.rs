//! Parameter sweeps. A plan is cells x seeds x variants; every `(cell, seed)`
//! pair is one job that grows the graphs it needs once and derives all
//! requested variants from them, so `defect`, `defect-removed` and `rand-c`
//! always share the same underlying defect run.
//!
//! Layout under the output directory:
//!
//! ```text
//! nu5_p0.7/seed-3/defect-removed/{graph.edges,run.json,qtop.csv,hyp.csv,pd.csv,metrics.csv,summary.json}
//! aggregate.csv
//! failures.csv        (only when some run failed)
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use simplex_assembly::geometry::{ComponentHyperbolicity, HyperbolicityProfile};
use simplex_assembly::growth::{grow, AssemblyState, EventRecord, GrowthConfig};
use simplex_assembly::io::{config_header, write_edge_list, RunSidecar};
use simplex_assembly::metrics::{MetricsRow, RowMeta, Variant};
use simplex_assembly::transform::{remove_defect_edges, remove_random_edges, RemovalReport};
use simplex_assembly::LabeledGraph;

use crate::analysis::{analyze_graph, AnalysisSettings, GraphAnalysis};
use crate::outputs::{distance_csv, event_series_report, hyperbolicity_csv, qtop_csv};

/// ChaCha stream used for the random-removal comparator, so it never
/// shares draws with growth (stream 0).
const RAND_C_STREAM: u64 = 0x7261_6e64_2d63;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub affinity: f64,
    pub defect_probability: f64,
}

impl Cell {
    pub fn new(affinity: f64, defect_probability: f64) -> Self {
        Cell {
            affinity,
            defect_probability,
        }
    }

    /// Directory name, e.g. `nu-5_p0.7`.
    pub fn label(&self) -> String {
        format!("nu{}_p{}", self.affinity, self.defect_probability)
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    /// Node target, size law and mode; affinity, defect probability and
    /// seed are taken from the cell and seed lists.
    pub template: GrowthConfig,
    pub cells: Vec<Cell>,
    pub seeds: Vec<u64>,
    pub variants: Vec<Variant>,
    pub analysis: AnalysisSettings,
    /// Where to write run directories; `None` keeps everything in memory.
    pub out_dir: Option<PathBuf>,
    /// Worker threads; 0 lets rayon decide.
    pub jobs: usize,
    /// Keep per-step event logs of grown variants in the records.
    pub keep_events: bool,
}

impl ExperimentPlan {
    pub fn new(template: GrowthConfig, cells: Vec<Cell>, seeds: Vec<u64>) -> Self {
        ExperimentPlan {
            template,
            cells,
            seeds,
            variants: Variant::ALL.to_vec(),
            analysis: AnalysisSettings::default(),
            out_dir: None,
            jobs: 0,
            keep_events: false,
        }
    }

    pub fn run_count(&self) -> usize {
        self.cells.len() * self.seeds.len() * self.variants.len()
    }

    fn config_for(&self, cell: Cell, seed: u64, p: f64) -> GrowthConfig {
        GrowthConfig {
            affinity: cell.affinity,
            defect_probability: p,
            seed,
            ..self.template.clone()
        }
    }
}

/// Everything an aggregate or figure needs from one run; also written as
/// `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub variant: Variant,
    pub affinity: f64,
    pub defect_probability: f64,
    pub seed: u64,
    pub nodes: usize,
    pub edges: usize,
    pub defect_edges: usize,
    pub removal: Option<RemovalReport>,
    pub metrics: Option<MetricsRow>,
    pub qtop: Option<QtopSummary>,
    pub hyperbolicity: Option<HypSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QtopSummary {
    pub fsv: Vec<usize>,
    pub ssv: Vec<usize>,
    pub tsv: Vec<f64>,
    pub f_vector: Vec<usize>,
    pub q_star: usize,
    pub tsv_before_q_star: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypSummary {
    /// Maximum over components.
    pub delta: f64,
    /// Largest-component `(d_min, delta_max)` profile.
    pub delta_by_dmin: Vec<(u32, f64)>,
    /// Largest-component `P(d)`, index `d`.
    pub distance_probabilities: Vec<f64>,
    pub quadruples: u64,
    pub components: usize,
}

#[derive(Debug, Clone)]
pub struct RunRecord {
    pub cell: Cell,
    pub seed: u64,
    pub summary: RunSummary,
    pub dir: Option<PathBuf>,
    pub events: Option<Vec<EventRecord>>,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunFailure {
    pub cell: Cell,
    pub seed: u64,
    pub variant: Option<Variant>,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct PlanOutcome {
    /// In plan order: cell, then seed, then variant.
    pub records: Vec<RunRecord>,
    pub failures: Vec<RunFailure>,
}

impl PlanOutcome {
    pub fn summaries(&self) -> Vec<RunSummary> {
        self.records.iter().map(|r| r.summary.clone()).collect()
    }
}

/// Runs every job, isolating failures: a failed run is recorded and the
/// sweep continues. Errors only when the output directory is unusable or
/// the thread pool cannot be built.
pub fn run_plan(plan: &ExperimentPlan) -> Result<PlanOutcome> {
    plan.template.validate()?;
    if let Some(dir) = &plan.out_dir {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    let jobs: Vec<(Cell, u64)> = plan
        .cells
        .iter()
        .flat_map(|&c| plan.seeds.iter().map(move |&s| (c, s)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.jobs)
        .build()
        .context("cannot build worker pool")?;
    let results: Vec<Vec<std::result::Result<RunRecord, RunFailure>>> =
        pool.install(|| jobs.par_iter().map(|&(c, s)| run_job(plan, c, s)).collect());

    let mut outcome = PlanOutcome::default();
    for r in results.into_iter().flatten() {
        match r {
            Ok(rec) => outcome.records.push(rec),
            Err(f) => outcome.failures.push(f),
        }
    }
    if let Some(dir) = &plan.out_dir {
        fs::write(dir.join("aggregate.csv"), aggregate_csv(&outcome.summaries()))?;
        if !outcome.failures.is_empty() {
            fs::write(dir.join("failures.csv"), failures_csv(&outcome.failures))?;
        }
    }
    Ok(outcome)
}

fn run_job(plan: &ExperimentPlan, cell: Cell, seed: u64) -> Vec<std::result::Result<RunRecord, RunFailure>> {
    let fail = |variant: Option<Variant>, e: &dyn std::fmt::Display| RunFailure {
        cell,
        seed,
        variant,
        message: e.to_string(),
    };
    let wants = |v: Variant| plan.variants.contains(&v);
    let needs_defect_run = wants(Variant::Defect) || wants(Variant::DefectRemoved) || wants(Variant::RandC);

    let grown = |p: f64| -> Result<(AssemblyState, f64)> {
        let t = Instant::now();
        let state = grow(&plan.config_for(cell, seed, p))?;
        Ok((state, t.elapsed().as_secs_f64()))
    };
    let mut out = Vec::new();
    let base = if wants(Variant::Base) {
        match grown(0.0) {
            Ok(s) => Some(s),
            Err(e) => {
                out.push(Err(fail(Some(Variant::Base), &e)));
                None
            }
        }
    } else {
        None
    };
    let defect = if needs_defect_run {
        match grown(cell.defect_probability) {
            Ok(s) => Some(s),
            Err(e) => {
                for v in [Variant::Defect, Variant::DefectRemoved, Variant::RandC] {
                    if wants(v) {
                        out.push(Err(fail(Some(v), &e)));
                    }
                }
                None
            }
        }
    } else {
        None
    };

    for &variant in &plan.variants {
        let source = match variant {
            Variant::Base => &base,
            _ => &defect,
        };
        let Some((state, grow_secs)) = source else {
            continue;
        };
        let result = run_variant(plan, cell, seed, variant, state, *grow_secs);
        out.push(result.map_err(|e| fail(Some(variant), &format!("{e:#}"))));
    }
    out
}

fn run_variant(
    plan: &ExperimentPlan,
    cell: Cell,
    seed: u64,
    variant: Variant,
    state: &AssemblyState,
    grow_secs: f64,
) -> Result<RunRecord> {
    let t = Instant::now();
    let source = state.graph();
    let (graph, removal): (std::borrow::Cow<LabeledGraph>, Option<RemovalReport>) = match variant {
        Variant::Base | Variant::Defect => (std::borrow::Cow::Borrowed(source), None),
        Variant::DefectRemoved => {
            let (g, r) = remove_defect_edges(source);
            (std::borrow::Cow::Owned(g), Some(r))
        }
        Variant::RandC => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(RAND_C_STREAM);
            let (g, r) = remove_random_edges(source, source.defect_edge_count(), &mut rng)?;
            (std::borrow::Cow::Owned(g), Some(r))
        }
    };
    let graph: &LabeledGraph = &graph;
    let meta = RowMeta {
        variant,
        affinity: cell.affinity,
        defect_probability: state.config().defect_probability,
        seed,
        modularity_restarts: plan.analysis.modularity_restarts,
    };
    let analysis = analyze_graph(graph, &plan.analysis, seed, meta)?;
    let summary = summarize(graph, variant, meta, removal, &analysis);

    let dir = match &plan.out_dir {
        Some(root) => {
            let dir = root
                .join(cell.label())
                .join(format!("seed-{seed}"))
                .join(variant.to_string());
            write_run_dir(&dir, graph, state, variant, removal, &analysis, &summary)?;
            Some(dir)
        }
        None => None,
    };
    let grown = matches!(variant, Variant::Base | Variant::Defect);
    Ok(RunRecord {
        cell,
        seed,
        summary,
        dir,
        events: (plan.keep_events && grown).then(|| state.events().to_vec()),
        seconds: grow_secs + t.elapsed().as_secs_f64(),
    })
}

/// The profile of the largest component (first one on ties).
pub fn largest_profile(h: &ComponentHyperbolicity) -> Option<&HyperbolicityProfile> {
    let best = h.components.iter().map(|(s, _)| *s).max()?;
    h.components.iter().find(|(s, _)| *s == best).map(|(_, p)| p)
}

fn summarize(
    graph: &LabeledGraph,
    variant: Variant,
    meta: RowMeta,
    removal: Option<RemovalReport>,
    analysis: &GraphAnalysis,
) -> RunSummary {
    RunSummary {
        variant,
        affinity: meta.affinity,
        defect_probability: meta.defect_probability,
        seed: meta.seed,
        nodes: graph.node_count(),
        edges: graph.edge_count(),
        defect_edges: graph.defect_edge_count(),
        removal,
        metrics: analysis.metrics.clone(),
        qtop: analysis.qtop.as_ref().map(|(sv, f)| QtopSummary {
            fsv: sv.fsv.clone(),
            ssv: sv.ssv.clone(),
            tsv: sv.tsv.clone(),
            f_vector: f.0.clone(),
            q_star: sv.q_star,
            tsv_before_q_star: sv.tsv_before_q_star,
        }),
        hyperbolicity: analysis.hyperbolicity.as_ref().map(|h| {
            let lp = largest_profile(h);
            HypSummary {
                delta: h.delta(),
                delta_by_dmin: lp.map(|p| p.delta_by_dmin()).unwrap_or_default(),
                distance_probabilities: lp.map(|p| p.distances.probabilities()).unwrap_or_default(),
                quadruples: h.components.iter().map(|(_, p)| p.quadruples).sum(),
                components: h.components.len(),
            }
        }),
    }
}

#[derive(Serialize)]
struct TransformSidecar<'a> {
    variant: Variant,
    source: &'a GrowthConfig,
    nodes: usize,
    edges: usize,
    defect_edges: usize,
    removal: RemovalReport,
}

fn write_run_dir(
    dir: &Path,
    graph: &LabeledGraph,
    state: &AssemblyState,
    variant: Variant,
    removal: Option<RemovalReport>,
    analysis: &GraphAnalysis,
    summary: &RunSummary,
) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let mut header = config_header(state.config());
    header.push(("variant".into(), variant.to_string()));
    fs::write(dir.join("graph.edges"), write_edge_list(graph, &header))?;
    let run_json = match removal {
        None => {
            fs::write(dir.join("events.csv"), event_series_report(state.events()))?;
            RunSidecar::from_state(state).to_json()?
        }
        Some(removal) => serde_json::to_string_pretty(&TransformSidecar {
            variant,
            source: state.config(),
            nodes: graph.node_count(),
            edges: graph.edge_count(),
            defect_edges: graph.defect_edge_count(),
            removal,
        })?,
    };
    fs::write(dir.join("run.json"), run_json)?;
    if let Some((sv, f)) = &analysis.qtop {
        fs::write(dir.join("qtop.csv"), qtop_csv(sv, f))?;
    }
    if let Some(h) = &analysis.hyperbolicity {
        if let Some(p) = largest_profile(h) {
            let mut text = hyperbolicity_csv(p);
            writeln!(text, "# delta_max_over_components={} components={}", h.delta(), h.components.len())?;
            fs::write(dir.join("hyp.csv"), text)?;
            fs::write(dir.join("pd.csv"), distance_csv(&p.distances))?;
        }
    }
    if let Some(m) = &analysis.metrics {
        fs::write(dir.join("metrics.csv"), format!("{}\n{}\n", MetricsRow::CSV_HEADER, m.csv_line()))?;
    }
    fs::write(dir.join("summary.json"), serde_json::to_string_pretty(summary)?)?;
    Ok(())
}

fn failures_csv(failures: &[RunFailure]) -> String {
    let mut out = String::from("nu,p,seed,variant,message\n");
    for f in failures {
        let v = f.variant.map(|v| v.to_string()).unwrap_or_default();
        let msg = f.message.replace(['\n', ','], " ");
        writeln!(out, "{},{},{},{},{}", f.cell.affinity, f.cell.defect_probability, f.seed, v, msg).unwrap();
    }
    out
}

/// Sample mean and standard deviation (n - 1 denominator; 0 for one value).
pub fn mean_std(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return Some((mean, 0.0));
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Some((mean, var.sqrt()))
}

type Column = (&'static str, fn(&RunSummary) -> Option<f64>);

const AGGREGATE_COLUMNS: [Column; 11] = [
    ("c", |s| s.metrics.as_ref().map(|m| m.concentration)),
    ("k", |s| s.metrics.as_ref().map(|m| m.mean_degree)),
    ("l", |s| s.metrics.as_ref().map(|m| m.path_length)),
    ("cc", |s| s.metrics.as_ref().map(|m| m.clustering)),
    ("cc_nonleaf", |s| s.metrics.as_ref().map(|m| m.clustering_nonleaf)),
    ("mod", |s| s.metrics.as_ref().map(|m| m.modularity)),
    ("D", |s| s.metrics.as_ref().map(|m| m.diameter as f64)),
    ("components", |s| s.metrics.as_ref().map(|m| m.components as f64)),
    ("delta", |s| s.hyperbolicity.as_ref().map(|h| h.delta)),
    ("q_star", |s| s.qtop.as_ref().map(|q| q.q_star as f64)),
    ("tsv_before", |s| s.qtop.as_ref().map(|q| q.tsv_before_q_star)),
];

/// Groups of summaries sharing `(nu, p, variant)`, ordered by `nu`
/// descending, then `p`, then variant.
pub fn group_summaries(summaries: &[RunSummary]) -> Vec<((f64, f64, Variant), Vec<&RunSummary>)> {
    let mut sorted: Vec<&RunSummary> = summaries.iter().collect();
    sorted.sort_by(|a, b| {
        b.affinity
            .total_cmp(&a.affinity)
            .then(a.defect_probability.total_cmp(&b.defect_probability))
            .then(a.variant.cmp(&b.variant))
            .then(a.seed.cmp(&b.seed))
    });
    let mut groups: Vec<((f64, f64, Variant), Vec<&RunSummary>)> = Vec::new();
    for s in sorted {
        let key = (s.affinity, s.defect_probability, s.variant);
        match groups.last_mut() {
            Some((k, members)) if *k == key => members.push(s),
            _ => groups.push((key, vec![s])),
        }
    }
    groups
}

/// Ensemble means and standard deviations per `(nu, p, variant)`. Depends
/// only on the set of summaries, not on their order.
pub fn aggregate_csv(summaries: &[RunSummary]) -> String {
    let mut out = String::from("nu,p,variant,runs");
    for (name, _) in AGGREGATE_COLUMNS {
        write!(out, ",{name}_mean,{name}_std").unwrap();
    }
    out.push('\n');
    for ((nu, p, variant), members) in group_summaries(summaries) {
        write!(out, "{nu},{p},{variant},{}", members.len()).unwrap();
        for (_, get) in AGGREGATE_COLUMNS {
            let values: Vec<f64> = members.iter().filter_map(|s| get(s)).collect();
            match mean_std(&values) {
                Some((m, sd)) => write!(out, ",{m:.6},{sd:.6}").unwrap(),
                None => out.push_str(",,"),
            }
        }
        out.push('\n');
    }
    out
}

/// Reads every `summary.json` below `root`.
pub fn load_summaries(root: &Path) -> Result<Vec<RunSummary>> {
    let mut found = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in fs::read_dir(&dir).with_context(|| format!("cannot read {}", dir.display()))? {
            let path = entry?.path();
            if path.is_dir() {
                stack.push(path);
            } else if path.file_name().is_some_and(|n| n == "summary.json") {
                let text = fs::read_to_string(&path)?;
                found.push(
                    serde_json::from_str(&text).with_context(|| format!("bad summary {}", path.display()))?,
                );
            }
        }
    }
    Ok(found)
}
