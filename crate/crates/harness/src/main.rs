use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use simplex_assembly::census::CompatibilityMode;
use simplex_assembly::geometry::{
    distance_matrix, hyperbolicity_by_component, HyperbolicitySettings,
};
use simplex_assembly::growth::grow;
use simplex_assembly::io::{config_header, read_edge_list, write_edge_list, Header, RunSidecar};
use simplex_assembly::metrics::{metrics_row, MetricsRow, RowMeta, Variant};
use simplex_assembly::transform::{largest_component, remove_defect_edges, remove_random_edges, RemovalReport};
use simplex_assembly::LabeledGraph;

use assembly_harness::analysis::qtop;
use assembly_harness::config::{resolve_growth, FileConfig, GrowthOverrides};
use assembly_harness::outputs::{distance_csv, event_series_report, hyperbolicity_csv, qtop_csv};
use assembly_harness::plan::largest_profile;
use assembly_harness::report::{run_preset, Preset, ReportSettings};

/// Grow clique assemblies with defect bonds and analyse them.
#[derive(Parser, Debug)]
#[command(name = "assembly", version)]
struct Cli {
    /// TOML config; command-line flags take precedence over it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Base seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Grow one assembly.
    Grow(GrowArgs),
    /// Derive a new graph from an edge list.
    #[command(subcommand)]
    Transform(TransformCommand),
    /// Analyse an edge list.
    #[command(subcommand)]
    Analyze(AnalyzeCommand),
    /// Regenerate a table or figure data set.
    Report(ReportArgs),
}

#[derive(Args, Debug)]
struct GrowArgs {
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<f64>,
    #[arg(long)]
    p_defect: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    n_min: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    /// contamination or strict.
    #[arg(long)]
    mode: Option<CompatibilityMode>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand, Debug)]
enum TransformCommand {
    /// Delete every defect bond.
    RemoveDefects {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Delete uniformly random bonds.
    RemoveRandom {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, conflicts_with = "match_run", required_unless_present = "match_run")]
        count: Option<usize>,
        /// Remove as many bonds as the run's `defect_edges` field.
        #[arg(long = "match")]
        match_run: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum AnalyzeCommand {
    /// Structure vectors, q* and f-vector.
    Qtop {
        #[arg(long)]
        input: PathBuf,
        /// Write qtop.csv here instead of printing.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Four-point hyperbolicity and distance distribution.
    Hyperbolicity {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        exhaustive_threshold: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Degree, path length, clustering, modularity and diameter.
    Metrics {
        #[arg(long, required = true, num_args = 1..)]
        input: Vec<PathBuf>,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct ReportArgs {
    /// table1, fig1, fig2, fig4 or fig5.
    preset: Preset,
    #[arg(long)]
    out: PathBuf,
    /// Seeds per cell.
    #[arg(long)]
    seeds: Option<usize>,
    /// Override the preset's node targets.
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    mode: Option<CompatibilityMode>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let jobs = cli.jobs.or(file.jobs).unwrap_or(0);
    if jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("cannot configure worker threads")?;
    }
    let seed = cli.seed.or(file.seed);
    let hyp = |samples: Option<u64>, threshold: Option<usize>| {
        let d = HyperbolicitySettings::default();
        HyperbolicitySettings {
            samples: samples.or(file.analysis.samples).unwrap_or(d.samples),
            exhaustive_threshold: threshold
                .or(file.analysis.exhaustive_threshold)
                .unwrap_or(d.exhaustive_threshold),
            seed: seed.unwrap_or(d.seed),
        }
    };
    let restarts = |flag: Option<usize>| flag.or(file.analysis.restarts).unwrap_or(5);

    match cli.command {
        Command::Grow(a) => {
            let flags = GrowthOverrides {
                nodes: a.nodes,
                nu: a.nu,
                p_defect: a.p_defect,
                alpha: a.alpha,
                n_min: a.n_min,
                n_max: a.n_max,
                mode: a.mode,
                seed,
            };
            let config = resolve_growth(&file, &flags)?;
            let state = grow(&config)?;
            fs::create_dir_all(&a.out).with_context(|| format!("cannot create {}", a.out.display()))?;
            write_file(&a.out.join("graph.edges"), &write_edge_list(state.graph(), &config_header(&config)))?;
            write_file(&a.out.join("run.json"), &RunSidecar::from_state(&state).to_json()?)?;
            write_file(&a.out.join("events.csv"), &event_series_report(state.events()))?;
            let g = state.graph();
            println!(
                "grew {} nodes, {} edges ({} defect) in {} steps -> {}",
                g.node_count(),
                g.edge_count(),
                g.defect_edge_count(),
                state.events().len(),
                a.out.display()
            );
        }
        Command::Transform(TransformCommand::RemoveDefects { input, out }) => {
            let (graph, header) = load_graph(&input)?;
            let (result, report) = remove_defect_edges(&graph);
            write_transform(&out, &result, header, "defect-removed", &report)?;
        }
        Command::Transform(TransformCommand::RemoveRandom {
            input,
            count,
            match_run,
            out,
        }) => {
            let (graph, header) = load_graph(&input)?;
            let count = match (count, match_run) {
                (Some(c), _) => c,
                (None, Some(path)) => matched_defect_count(&path)?,
                (None, None) => bail!("either --count or --match is required"),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(0));
            let (result, report) = remove_random_edges(&graph, count, &mut rng)?;
            write_transform(&out, &result, header, "rand-c", &report)?;
        }
        Command::Analyze(AnalyzeCommand::Qtop { input, out }) => {
            let (graph, _) = load_graph(&input)?;
            let (sv, f) = qtop(&graph);
            let text = qtop_csv(&sv, &f);
            emit(out.as_deref(), "qtop.csv", &text)?;
            eprintln!(
                "q*={} TSV(q*-1)={:.6} n_0={}",
                sv.q_star, sv.tsv_before_q_star, sv.ssv[0]
            );
        }
        Command::Analyze(AnalyzeCommand::Hyperbolicity {
            input,
            samples,
            exhaustive_threshold,
            out,
        }) => {
            let (graph, _) = load_graph(&input)?;
            let settings = hyp(samples, exhaustive_threshold);
            let h = hyperbolicity_by_component(&graph, &settings)?;
            let Some(profile) = largest_profile(&h) else {
                bail!("no component with at least four vertices");
            };
            emit(out.as_deref(), "hyp.csv", &hyperbolicity_csv(profile))?;
            emit(out.as_deref(), "pd.csv", &distance_csv(&profile.distances))?;
            if h.components.len() > 1 {
                for (size, p) in &h.components {
                    eprintln!("component of {size} vertices: delta={}", p.delta());
                }
            }
            eprintln!("delta={} over {} component(s)", h.delta(), h.components.len());
        }
        Command::Analyze(AnalyzeCommand::Metrics {
            input,
            restarts: r,
            out,
        }) => {
            let mut text = format!("{}\n", MetricsRow::CSV_HEADER);
            for path in &input {
                let (graph, header) = load_graph(path)?;
                let row = metrics_for(&graph, &header, restarts(r), seed)
                    .with_context(|| format!("in {}", path.display()))?;
                text.push_str(&row.csv_line());
                text.push('\n');
            }
            emit(out.as_deref(), "metrics.csv", &text)?;
        }
        Command::Report(a) => {
            let mut settings = ReportSettings::new(&a.out, a.seeds.or(file.report.seeds).unwrap_or(20));
            if let Some(base) = seed {
                settings.seeds = settings.seeds.iter().map(|s| s + base).collect();
            }
            settings.nodes = a.nodes;
            settings.template = resolve_growth(
                &file,
                &GrowthOverrides {
                    mode: a.mode,
                    ..Default::default()
                },
            )?;
            settings.hyperbolicity = hyp(a.samples, None);
            settings.modularity_restarts = restarts(a.restarts);
            settings.jobs = jobs;
            let output = run_preset(a.preset, &settings)?;
            for f in &output.files {
                println!("wrote {}", f.display());
            }
            if output.failures > 0 {
                bail!("{} run(s) failed; see failures.csv under {}", output.failures, a.out.display());
            }
        }
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

/// Writes `name` into `dir`, or prints to stdout when no directory is given.
fn emit(dir: Option<&Path>, name: &str, text: &str) -> Result<()> {
    match dir {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
            write_file(&dir.join(name), text)
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_graph(path: &Path) -> Result<(LabeledGraph, Header)> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    read_edge_list(&text).with_context(|| format!("in {}", path.display()))
}

fn matched_defect_count(path: &Path) -> Result<usize> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text).with_context(|| format!("in {}", path.display()))?;
    value
        .get("defect_edges")
        .and_then(serde_json::Value::as_u64)
        .map(|c| c as usize)
        .with_context(|| format!("{} has no `defect_edges` count", path.display()))
}

fn write_transform(out: &Path, graph: &LabeledGraph, mut header: Header, variant: &str, report: &RemovalReport) -> Result<()> {
    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
    header.retain(|(k, _)| k != "variant");
    header.push(("variant".into(), variant.into()));
    write_file(&out.join("graph.edges"), &write_edge_list(graph, &header))?;
    write_file(&out.join("run.json"), &serde_json::to_string_pretty(report)?)?;
    println!(
        "removed {} edges ({} defect); {} component(s), largest {}",
        report.edges_removed, report.defect_edges_removed, report.components, report.largest_component
    );
    Ok(())
}

/// Recovers provenance from the edge-list header where present.
fn metrics_for(graph: &LabeledGraph, header: &Header, restarts: usize, seed: Option<u64>) -> Result<MetricsRow> {
    let get = |key: &str| header.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
    let config_field = |name: &str| {
        get("config").and_then(|c| {
            c.split_whitespace()
                .find_map(|kv| kv.strip_prefix(name).and_then(|r| r.strip_prefix('=')))
                .and_then(|v| v.parse::<f64>().ok())
        })
    };
    let variant = get("variant")
        .and_then(|v| v.parse::<Variant>().ok())
        .unwrap_or(Variant::Defect);
    let run_seed = seed
        .or_else(|| get("seed").and_then(|s| s.parse().ok()))
        .unwrap_or(0);
    let lc = largest_component(graph);
    let dm = distance_matrix(&lc.graph)?;
    let meta = RowMeta {
        variant,
        affinity: config_field("nu").unwrap_or(f64::NAN),
        defect_probability: config_field("p").unwrap_or(f64::NAN),
        seed: run_seed,
        modularity_restarts: restarts,
    };
    Ok(metrics_row(graph, &lc, &dm, meta)?)
}
