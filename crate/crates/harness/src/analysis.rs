use serde::{Deserialize, Serialize};
use simplex_assembly::geometry::{
    distance_matrix, hyperbolicity_by_component, ComponentHyperbolicity, HyperbolicitySettings,
};
use simplex_assembly::metrics::{metrics_row, MetricsRow, RowMeta};
use simplex_assembly::qanalysis::{f_vector, maximal_cliques, structure_vectors, FVector, StructureVectors};
use simplex_assembly::transform::largest_component;
use simplex_assembly::{LabeledGraph, Result};

/// Which analyses to run on a graph, and their knobs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisSettings {
    pub qtop: bool,
    pub hyperbolicity: Option<HyperbolicitySettings>,
    pub metrics: bool,
    pub modularity_restarts: usize,
}

impl Default for AnalysisSettings {
    fn default() -> Self {
        AnalysisSettings {
            qtop: true,
            hyperbolicity: Some(HyperbolicitySettings::default()),
            metrics: true,
            modularity_restarts: 5,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct GraphAnalysis {
    pub qtop: Option<(StructureVectors, FVector)>,
    pub hyperbolicity: Option<ComponentHyperbolicity>,
    pub metrics: Option<MetricsRow>,
}

pub fn qtop(graph: &LabeledGraph) -> (StructureVectors, FVector) {
    let complex = maximal_cliques(graph);
    (structure_vectors(&complex), f_vector(graph, &complex))
}

/// Runs the selected analyses. `seed` drives quadruple sampling and the
/// modularity restarts.
pub fn analyze_graph(
    graph: &LabeledGraph,
    settings: &AnalysisSettings,
    seed: u64,
    meta: RowMeta,
) -> Result<GraphAnalysis> {
    let mut out = GraphAnalysis::default();
    if settings.qtop {
        out.qtop = Some(qtop(graph));
    }
    if let Some(h) = &settings.hyperbolicity {
        let h = HyperbolicitySettings { seed, ..*h };
        out.hyperbolicity = Some(hyperbolicity_by_component(graph, &h)?);
    }
    if settings.metrics {
        let lc = largest_component(graph);
        let dm = distance_matrix(&lc.graph)?;
        let meta = RowMeta {
            modularity_restarts: settings.modularity_restarts,
            ..meta
        };
        out.metrics = Some(metrics_row(graph, &lc, &dm, meta)?);
    }
    Ok(out)
}
