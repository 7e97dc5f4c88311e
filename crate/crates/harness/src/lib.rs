//! Experiment orchestration for `simplex-assembly`: analysis of single
//! graphs, parameter sweeps over paired run variants, figure and table
//! presets, and the on-disk layout they produce.

pub mod analysis;
pub mod config;
pub mod outputs;
pub mod plan;
pub mod report;

pub use analysis::{analyze_graph, AnalysisSettings, GraphAnalysis};
pub use plan::{run_plan, Cell, ExperimentPlan, PlanOutcome, RunRecord, RunSummary};
