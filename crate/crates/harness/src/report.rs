//! Presets that regenerate the reference tables and figure data sets.

use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{Context, Result};
use simplex_assembly::geometry::HyperbolicitySettings;
use simplex_assembly::growth::GrowthConfig;
use simplex_assembly::metrics::Variant;

use crate::analysis::AnalysisSettings;
use crate::plan::{group_summaries, mean_std, run_plan, Cell, ExperimentPlan, PlanOutcome, RunSummary};

pub const AFFINITIES: [f64; 3] = [5.0, 0.0, -5.0];
pub const TABLE_DEFECT_PROBABILITY: f64 = 0.7;
pub const FIGURE_DEFECT_PROBABILITIES: [f64; 2] = [0.5, 0.7];
pub const METRICS_NODES: usize = 5000;
pub const TOPOLOGY_NODES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Table1,
    Fig1,
    Fig2,
    Fig4,
    Fig5,
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Preset::Table1 => "table1",
            Preset::Fig1 => "fig1",
            Preset::Fig2 => "fig2",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
        })
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [Preset::Table1, Preset::Fig1, Preset::Fig2, Preset::Fig4, Preset::Fig5]
            .into_iter()
            .find(|p| p.to_string() == s)
            .ok_or_else(|| format!("unknown preset `{s}`"))
    }
}

#[derive(Debug, Clone)]
pub struct ReportSettings {
    pub out_dir: PathBuf,
    pub seeds: Vec<u64>,
    /// Overrides every node target of the preset.
    pub nodes: Option<usize>,
    /// Size law and compatibility mode.
    pub template: GrowthConfig,
    pub hyperbolicity: HyperbolicitySettings,
    pub modularity_restarts: usize,
    pub jobs: usize,
}

impl ReportSettings {
    pub fn new(out_dir: impl Into<PathBuf>, seeds: usize) -> Self {
        ReportSettings {
            out_dir: out_dir.into(),
            seeds: (0..seeds as u64).collect(),
            nodes: None,
            template: GrowthConfig::default(),
            hyperbolicity: HyperbolicitySettings::default(),
            modularity_restarts: 5,
            jobs: 0,
        }
    }

    fn plan(&self, nodes: usize, cells: Vec<Cell>, variants: Vec<Variant>, analysis: AnalysisSettings, sub: &str) -> ExperimentPlan {
        let template = GrowthConfig {
            target_nodes: self.nodes.unwrap_or(nodes),
            ..self.template.clone()
        };
        ExperimentPlan {
            variants,
            analysis,
            out_dir: Some(self.out_dir.join(sub)),
            jobs: self.jobs,
            ..ExperimentPlan::new(template, cells, self.seeds.clone())
        }
    }

    fn analysis(&self, qtop: bool, hyperbolicity: bool, metrics: bool) -> AnalysisSettings {
        AnalysisSettings {
            qtop,
            hyperbolicity: hyperbolicity.then_some(self.hyperbolicity),
            metrics,
            modularity_restarts: self.modularity_restarts,
        }
    }
}

/// Files written and runs that failed.
#[derive(Debug, Clone, Default)]
pub struct PresetOutput {
    pub files: Vec<PathBuf>,
    pub failures: usize,
}

pub fn run_preset(preset: Preset, settings: &ReportSettings) -> Result<PresetOutput> {
    fs::create_dir_all(&settings.out_dir)
        .with_context(|| format!("cannot create {}", settings.out_dir.display()))?;
    match preset {
        Preset::Table1 => table1(settings).map(|t| t.output),
        Preset::Fig1 => fig1(settings),
        Preset::Fig2 => series_figure(settings, SeriesFigure::FVector),
        Preset::Fig4 => series_figure(settings, SeriesFigure::StructureVectors),
        Preset::Fig5 => series_figure(settings, SeriesFigure::Distances),
    }
}

fn write(dir: &Path, name: &str, text: &str, out: &mut PresetOutput) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;
    out.files.push(path);
    Ok(())
}

/// Row label in the reference table layout.
pub fn row_label(variant: Variant, p: f64) -> String {
    match variant {
        Variant::Base => "0.0".into(),
        Variant::Defect => format!("{p}"),
        Variant::DefectRemoved => format!("{p}-db"),
        Variant::RandC => "rand-c".into(),
    }
}

type Stat = Option<(f64, f64)>;

#[derive(Debug, Clone, PartialEq)]
pub struct Table1Row {
    pub affinity: f64,
    pub variant: Variant,
    pub label: String,
    pub runs: usize,
    pub concentration: Stat,
    pub mean_degree: Stat,
    pub path_length: Stat,
    pub clustering: Stat,
    pub clustering_nonleaf: Stat,
    pub modularity: Stat,
    pub diameter: Stat,
    pub delta: Stat,
    pub q_star: Stat,
    pub tsv_before_q_star: Stat,
}

#[derive(Debug, Clone)]
pub struct Table1 {
    pub rows: Vec<Table1Row>,
    pub single_seed: Vec<Table1Row>,
    pub output: PresetOutput,
}

fn stat(values: impl Iterator<Item = f64>) -> Stat {
    mean_std(&values.collect::<Vec<_>>())
}

/// Combines metric runs (large graphs) with topology runs (smaller graphs)
/// of the same cells into table1 rows.
pub fn table1_rows(metrics: &[RunSummary], topology: &[RunSummary]) -> Vec<Table1Row> {
    let topo_groups = group_summaries(topology);
    group_summaries(metrics)
        .into_iter()
        .map(|((nu, p, variant), members)| {
            let topo: Vec<&RunSummary> = topo_groups
                .iter()
                .find(|(k, _)| *k == (nu, p, variant))
                .map(|(_, m)| m.clone())
                .unwrap_or_default();
            let m = || members.iter().filter_map(|s| s.metrics.as_ref());
            let q = || topo.iter().filter_map(|s| s.qtop.as_ref());
            let label_p = members
                .iter()
                .map(|s| s.defect_probability)
                .fold(0.0, f64::max);
            Table1Row {
                affinity: nu,
                variant,
                label: row_label(variant, label_p),
                runs: members.len(),
                concentration: stat(m().map(|r| r.concentration)),
                mean_degree: stat(m().map(|r| r.mean_degree)),
                path_length: stat(m().map(|r| r.path_length)),
                clustering: stat(m().map(|r| r.clustering)),
                clustering_nonleaf: stat(m().map(|r| r.clustering_nonleaf)),
                modularity: stat(m().map(|r| r.modularity)),
                diameter: stat(m().map(|r| r.diameter as f64)),
                delta: stat(topo.iter().filter_map(|s| s.hyperbolicity.as_ref()).map(|h| h.delta)),
                q_star: stat(q().map(|r| r.q_star as f64)),
                tsv_before_q_star: stat(q().map(|r| r.tsv_before_q_star)),
            }
        })
        .collect()
}

pub const TABLE1_HEADER: &str = "nu,p,runs,c,k,l,cc,mod,D,delta_max,q_star,tsv_before_q_star,cc_nonleaf";

pub fn table1_csv(rows: &[Table1Row], with_std: bool) -> String {
    let mut out = String::from(TABLE1_HEADER);
    if with_std {
        out.push_str(",c_std,k_std,l_std,cc_std,mod_std,D_std,delta_max_std,q_star_std,tsv_before_q_star_std,cc_nonleaf_std");
    }
    out.push('\n');
    let fmt = |s: Stat, std: bool| match s {
        Some((m, sd)) => format!("{:.6}", if std { sd } else { m }),
        None => String::new(),
    };
    for r in rows {
        let stats = [
            r.concentration,
            r.mean_degree,
            r.path_length,
            r.clustering,
            r.modularity,
            r.diameter,
            r.delta,
            r.q_star,
            r.tsv_before_q_star,
            r.clustering_nonleaf,
        ];
        write!(out, "{},{},{}", r.affinity, r.label, r.runs).unwrap();
        for s in stats {
            write!(out, ",{}", fmt(s, false)).unwrap();
        }
        if with_std {
            for s in stats {
                write!(out, ",{}", fmt(s, true)).unwrap();
            }
        }
        out.push('\n');
    }
    out
}

fn table_cells() -> Vec<Cell> {
    AFFINITIES
        .iter()
        .map(|&nu| Cell::new(nu, TABLE_DEFECT_PROBABILITY))
        .collect()
}

/// The table1 preset: metrics at 5000 nodes, hyperbolicity and Q-analysis at 1000.
pub fn table1(settings: &ReportSettings) -> Result<Table1> {
    let variants = Variant::ALL.to_vec();
    let metrics_plan = settings.plan(
        METRICS_NODES,
        table_cells(),
        variants.clone(),
        settings.analysis(false, false, true),
        "table1/metrics",
    );
    let topo_plan = settings.plan(
        TOPOLOGY_NODES,
        table_cells(),
        variants,
        settings.analysis(true, true, false),
        "table1/topology",
    );
    let metrics = run_plan(&metrics_plan)?;
    let topology = run_plan(&topo_plan)?;
    let rows = table1_rows(&metrics.summaries(), &topology.summaries());
    let first = settings.seeds.first().copied();
    let only_first = |o: &PlanOutcome| -> Vec<RunSummary> {
        o.summaries().into_iter().filter(|s| Some(s.seed) == first).collect()
    };
    let single_seed = table1_rows(&only_first(&metrics), &only_first(&topology));

    let mut output = PresetOutput {
        files: Vec::new(),
        failures: metrics.failures.len() + topology.failures.len(),
    };
    write(&settings.out_dir, "table1.csv", &table1_csv(&rows, true), &mut output)?;
    write(&settings.out_dir, "table1_single.csv", &table1_csv(&single_seed, false), &mut output)?;
    Ok(Table1 {
        rows,
        single_seed,
        output,
    })
}

/// Per-step growth series for every affinity with and without defects.
pub fn fig1(settings: &ReportSettings) -> Result<PresetOutput> {
    let cells = AFFINITIES
        .iter()
        .flat_map(|&nu| [Cell::new(nu, 0.0), Cell::new(nu, TABLE_DEFECT_PROBABILITY)])
        .collect();
    let mut plan = settings.plan(
        TOPOLOGY_NODES,
        cells,
        vec![Variant::Defect],
        settings.analysis(false, false, false),
        "fig1",
    );
    plan.keep_events = true;
    let outcome = run_plan(&plan)?;
    let mut text = String::from("nu,p,seed,t,n,q,n_a,nodes,edges,simplexes,faces\n");
    for r in &outcome.records {
        for e in r.events.as_deref().unwrap_or_default() {
            let q = e.shared_order.map(|q| q.to_string()).unwrap_or_default();
            writeln!(
                text,
                "{},{},{},{},{},{},{},{},{},{},{}",
                r.cell.affinity,
                r.cell.defect_probability,
                r.seed,
                e.t,
                e.size,
                q,
                e.added_nodes,
                e.nodes,
                e.edges,
                e.simplexes,
                e.faces_total
            )?;
        }
    }
    let mut output = PresetOutput {
        files: Vec::new(),
        failures: outcome.failures.len(),
    };
    write(&settings.out_dir, "fig1.csv", &text, &mut output)?;
    Ok(output)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SeriesFigure {
    FVector,
    StructureVectors,
    Distances,
}

/// Series label used in the figure presets: `p0`, `p0.5`, `p0.7-db`, ...
pub fn series_label(s: &RunSummary) -> String {
    match s.variant {
        Variant::Base => "p0".into(),
        Variant::DefectRemoved => format!("p{}-db", s.defect_probability),
        _ => format!("p{}", s.defect_probability),
    }
}

/// Pure, defect and defect-removed networks at every affinity.
fn series_runs(settings: &ReportSettings, analysis: AnalysisSettings, sub: &str) -> Result<(Vec<RunSummary>, usize)> {
    let pure = settings.plan(
        TOPOLOGY_NODES,
        AFFINITIES.iter().map(|&nu| Cell::new(nu, 0.0)).collect(),
        vec![Variant::Base],
        analysis.clone(),
        &format!("{sub}/pure"),
    );
    let defect = settings.plan(
        TOPOLOGY_NODES,
        AFFINITIES
            .iter()
            .flat_map(|&nu| FIGURE_DEFECT_PROBABILITIES.map(|p| Cell::new(nu, p)))
            .collect(),
        vec![Variant::Defect, Variant::DefectRemoved],
        analysis,
        &format!("{sub}/defect"),
    );
    let a = run_plan(&pure)?;
    let b = run_plan(&defect)?;
    let mut all = a.summaries();
    all.extend(b.summaries());
    Ok((all, a.failures.len() + b.failures.len()))
}

/// Element-wise mean and std of ragged vectors; missing entries count as 0.
fn vector_stats(vectors: &[Vec<f64>]) -> Vec<(f64, f64)> {
    let len = vectors.iter().map(Vec::len).max().unwrap_or(0);
    (0..len)
        .map(|i| {
            let column: Vec<f64> = vectors.iter().map(|v| v.get(i).copied().unwrap_or(0.0)).collect();
            mean_std(&column).unwrap_or((0.0, 0.0))
        })
        .collect()
}

fn series_figure(settings: &ReportSettings, kind: SeriesFigure) -> Result<PresetOutput> {
    let (name, analysis) = match kind {
        SeriesFigure::FVector => ("fig2", settings.analysis(true, false, false)),
        SeriesFigure::StructureVectors => ("fig4", settings.analysis(true, false, false)),
        SeriesFigure::Distances => ("fig5", settings.analysis(false, true, false)),
    };
    let (summaries, failures) = series_runs(settings, analysis, name)?;
    let mut output = PresetOutput {
        files: Vec::new(),
        failures,
    };
    let groups = group_summaries(&summaries);
    let as_f64 = |v: &[usize]| v.iter().map(|&x| x as f64).collect::<Vec<_>>();
    match kind {
        SeriesFigure::FVector => {
            let mut text = String::from("nu,series,runs,q,f_q_mean,f_q_std\n");
            for ((nu, _, _), members) in &groups {
                let label = series_label(members[0]);
                let fs: Vec<Vec<f64>> = members.iter().filter_map(|s| s.qtop.as_ref()).map(|q| as_f64(&q.f_vector)).collect();
                for (q, (m, sd)) in vector_stats(&fs).into_iter().enumerate() {
                    writeln!(text, "{nu},{label},{},{q},{m:.4},{sd:.4}", members.len())?;
                }
            }
            write(&settings.out_dir, "fig2.csv", &text, &mut output)?;
        }
        SeriesFigure::StructureVectors => {
            let mut text = String::from("nu,series,runs,q,fsv_mean,fsv_std,ssv_mean,ssv_std,tsv_mean,tsv_std\n");
            for ((nu, _, _), members) in &groups {
                let label = series_label(members[0]);
                let qs: Vec<_> = members.iter().filter_map(|s| s.qtop.as_ref()).collect();
                let fsv = vector_stats(&qs.iter().map(|q| as_f64(&q.fsv)).collect::<Vec<_>>());
                let ssv = vector_stats(&qs.iter().map(|q| as_f64(&q.ssv)).collect::<Vec<_>>());
                let tsv = vector_stats(&qs.iter().map(|q| q.tsv.clone()).collect::<Vec<_>>());
                for q in 0..fsv.len() {
                    writeln!(
                        text,
                        "{nu},{label},{},{q},{:.4},{:.4},{:.4},{:.4},{:.6},{:.6}",
                        members.len(),
                        fsv[q].0,
                        fsv[q].1,
                        ssv[q].0,
                        ssv[q].1,
                        tsv[q].0,
                        tsv[q].1
                    )?;
                }
            }
            write(&settings.out_dir, "fig4.csv", &text, &mut output)?;
        }
        SeriesFigure::Distances => {
            let mut pd = String::from("nu,series,runs,d,P_mean,P_std\n");
            let mut dd = String::from("nu,series,runs,d_min,delta_max,delta_mean\n");
            for ((nu, _, _), members) in &groups {
                let label = series_label(members[0]);
                let hs: Vec<_> = members.iter().filter_map(|s| s.hyperbolicity.as_ref()).collect();
                let ps = vector_stats(&hs.iter().map(|h| h.distance_probabilities.clone()).collect::<Vec<_>>());
                for (d, (m, sd)) in ps.into_iter().enumerate().skip(1) {
                    writeln!(pd, "{nu},{label},{},{d},{m:.8},{sd:.8}", members.len())?;
                }
                let max_d = hs.iter().flat_map(|h| h.delta_by_dmin.iter().map(|&(d, _)| d)).max().unwrap_or(0);
                for d in 0..=max_d {
                    let vals: Vec<f64> = hs
                        .iter()
                        .filter_map(|h| h.delta_by_dmin.iter().find(|&&(x, _)| x == d).map(|&(_, v)| v))
                        .collect();
                    if vals.is_empty() {
                        continue;
                    }
                    let max = vals.iter().copied().fold(f64::MIN, f64::max);
                    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
                    writeln!(dd, "{nu},{label},{},{d},{max},{mean:.4}", members.len())?;
                }
            }
            write(&settings.out_dir, "fig5_pd.csv", &pd, &mut output)?;
            write(&settings.out_dir, "fig5_delta.csv", &dd, &mut output)?;
        }
    }
    Ok(output)
}
