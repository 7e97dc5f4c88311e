use std::fs;

use assembly_harness::outputs::{event_series_report, qtop_csv};
use assembly_harness::report::{run_preset, table1, Preset, ReportSettings};
use simplex_assembly::geometry::HyperbolicitySettings;
use simplex_assembly::growth::{grow, GrowthConfig};
use simplex_assembly::qanalysis::{f_vector, maximal_cliques, structure_vectors};

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn single_simplex_run_reports_one_row() {
    let state = grow(&GrowthConfig {
        target_nodes: 3,
        min_size: 3,
        max_size: 3,
        ..GrowthConfig::default()
    })
    .unwrap();
    let rows = csv_rows(&event_series_report(state.events()));
    assert_eq!(rows, vec![vec!["0", "3", "", "3", "3", "3", "1", "7"]]);
}

#[test]
fn event_series_accumulates() {
    let state = grow(&GrowthConfig {
        target_nodes: 300,
        affinity: 1.0,
        defect_probability: 0.5,
        seed: 8,
        ..GrowthConfig::default()
    })
    .unwrap();
    let rows = csv_rows(&event_series_report(state.events()));
    assert_eq!(rows.len(), state.events().len());
    let col = |r: &Vec<String>, i: usize| r[i].parse::<usize>().unwrap();
    for w in rows.windows(2) {
        assert_eq!(col(&w[1], 0), col(&w[0], 0) + 1);
        assert!(col(&w[1], 4) > col(&w[0], 4), "nodes strictly increase");
        assert_eq!(col(&w[1], 4), col(&w[0], 4) + col(&w[1], 3));
        assert!(col(&w[1], 5) >= col(&w[0], 5));
        assert_eq!(col(&w[1], 6), col(&w[0], 6) + 1);
    }
    let last = rows.last().unwrap();
    assert_eq!(col(last, 4), state.graph().node_count());
    assert_eq!(col(last, 5), state.graph().edge_count());
}

#[test]
fn qtop_table_lists_every_level() {
    let g = grow(&GrowthConfig {
        target_nodes: 200,
        seed: 2,
        ..GrowthConfig::default()
    })
    .unwrap()
    .into_graph();
    let complex = maximal_cliques(&g);
    let sv = structure_vectors(&complex);
    let text = qtop_csv(&sv, &f_vector(&g, &complex));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), sv.fsv.len());
    assert_eq!(rows[0][1], "1");
    assert_eq!(rows[0][4], g.node_count().to_string());
    assert!(text.contains(&format!("q_star={}", sv.q_star)));
}

fn tiny(dir: &std::path::Path) -> ReportSettings {
    let mut s = ReportSettings::new(dir, 2);
    s.nodes = Some(80);
    s.hyperbolicity = HyperbolicitySettings {
        samples: 2000,
        ..HyperbolicitySettings::default()
    };
    s.modularity_restarts = 1;
    s
}

#[test]
fn table_preset_has_twelve_rows() {
    let dir = tempfile::tempdir().unwrap();
    let t = table1(&tiny(dir.path())).unwrap();
    assert_eq!(t.output.failures, 0);
    assert_eq!(t.rows.len(), 12);
    assert!(t.rows.iter().all(|r| r.runs == 2));
    assert!(t.single_seed.iter().all(|r| r.runs == 1));
    let labels: Vec<&str> = t.rows.iter().take(4).map(|r| r.label.as_str()).collect();
    assert_eq!(labels, ["0.0", "0.7", "0.7-db", "rand-c"]);
    for r in &t.rows {
        assert!(r.mean_degree.is_some() && r.delta.is_some() && r.q_star.is_some());
    }
    let csv = fs::read_to_string(dir.path().join("table1.csv")).unwrap();
    assert_eq!(csv.lines().count(), 13);
    assert!(dir.path().join("table1_single.csv").is_file());
}

#[test]
fn figure_presets_write_their_tables() {
    let dir = tempfile::tempdir().unwrap();
    let mut s = tiny(dir.path());
    s.seeds = vec![0];
    for (preset, files) in [
        (Preset::Fig1, &["fig1.csv"][..]),
        (Preset::Fig2, &["fig2.csv"]),
        (Preset::Fig4, &["fig4.csv"]),
        (Preset::Fig5, &["fig5_pd.csv", "fig5_delta.csv"]),
    ] {
        let out = run_preset(preset, &s).unwrap();
        assert_eq!(out.failures, 0, "{preset}");
        for f in files {
            let text = fs::read_to_string(dir.path().join(f)).unwrap();
            assert!(text.lines().count() > 1, "{f} is empty");
        }
    }
    assert_eq!("fig4".parse::<Preset>().unwrap(), Preset::Fig4);
    assert!("fig3".parse::<Preset>().is_err());
}
