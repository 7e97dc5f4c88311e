mod oracle;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use simplex_assembly::geometry::{
    distance_distribution, distance_matrix, four_point_delta, hyperbolicity_by_component,
    hyperbolicity_profile, HyperbolicityMode, HyperbolicitySettings,
};
use simplex_assembly::growth::{grow, GrowthConfig};
use simplex_assembly::transform::{largest_component, remove_defect_edges};
use simplex_assembly::{LabeledGraph, VertexId};

const EXHAUSTIVE: HyperbolicityMode = HyperbolicityMode::Exhaustive { threshold: 1000 };

#[test]
fn cycles_follow_the_closed_form() {
    for n in 4..=13 {
        let dm = distance_matrix(&oracle::cycle(n)).unwrap();
        let profile = hyperbolicity_profile(&dm, EXHAUSTIVE).unwrap();
        assert_eq!(profile.delta(), oracle::cycle_delta(n), "C_{n}");
        assert_eq!(profile.twice_delta, oracle::twice_hyperbolicity(&oracle::cycle(n)));
    }
    assert_eq!(oracle::cycle_delta(5), 0.5);
}

fn random_connected(n: usize, extra: f64, rng: &mut ChaCha8Rng) -> LabeledGraph {
    let mut edges = Vec::new();
    for v in 1..n as VertexId {
        edges.push((rng.gen_range(0..v), v));
    }
    for u in 0..n as VertexId {
        for v in u + 1..n as VertexId {
            if rng.gen_bool(extra) && !edges.contains(&(u, v)) {
                edges.push((u, v));
            }
        }
    }
    LabeledGraph::from_pure_edges(n, &edges).unwrap()
}

#[test]
fn exhaustive_matches_floyd_warshall_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..40 {
        let n = rng.gen_range(4..=24);
        let g = random_connected(n, rng.gen_range(0.0..0.2), &mut rng);
        let dm = distance_matrix(&g).unwrap();
        let fw = oracle::floyd_warshall(&g);
        for u in 0..n {
            for v in 0..n {
                assert_eq!(dm.get(u as VertexId, v as VertexId), fw[u][v]);
            }
        }
        let profile = hyperbolicity_profile(&dm, EXHAUSTIVE).unwrap();
        assert_eq!(profile.twice_delta, oracle::twice_hyperbolicity(&g));
        let expected_quads = (n * (n - 1) * (n - 2) * (n - 3) / 24) as u64;
        assert_eq!(profile.quadruples, expected_quads);
    }
}

#[test]
fn sampling_never_exceeds_exhaustive() {
    for seed in 0..6 {
        let cfg = GrowthConfig {
            target_nodes: 150,
            affinity: [5.0, 0.0, -5.0][seed as usize % 3],
            defect_probability: 0.7,
            seed,
            ..GrowthConfig::default()
        };
        let (g, _) = remove_defect_edges(grow(&cfg).unwrap().graph());
        let lc = largest_component(&g);
        let dm = distance_matrix(&lc.graph).unwrap();
        let full = hyperbolicity_profile(&dm, EXHAUSTIVE).unwrap();
        let sampled = hyperbolicity_profile(&dm, HyperbolicityMode::Sampled { count: 20_000, seed }).unwrap();
        assert!(sampled.twice_delta <= full.twice_delta);
        for (d, t) in sampled.twice_delta_by_dmin.iter().enumerate() {
            if let Some(t) = t {
                assert!(Some(*t) <= full.twice_delta_by_dmin[d]);
            }
        }
        let again = hyperbolicity_profile(&dm, HyperbolicityMode::Sampled { count: 20_000, seed }).unwrap();
        assert_eq!(sampled, again);
    }
}

#[test]
fn grown_assemblies_are_one_hyperbolic() {
    for seed in 0..4 {
        for nu in [5.0, 0.0, -5.0] {
            let cfg = GrowthConfig {
                target_nodes: 120,
                affinity: nu,
                defect_probability: 0.7,
                seed,
                ..GrowthConfig::default()
            };
            let g = grow(&cfg).unwrap().into_graph();
            let h = hyperbolicity_by_component(&g, &HyperbolicitySettings::default()).unwrap();
            assert!(h.delta() <= 1.0, "seed {seed} nu {nu}: {}", h.delta());
        }
    }
}

#[test]
fn distance_distribution_counts_pairs() {
    let g = oracle::cycle(7);
    let dist = distance_distribution(&distance_matrix(&g).unwrap());
    assert_eq!(dist.pairs(), 21);
    assert_eq!(&dist.counts[1..], &[7, 7, 7]);
    assert!((dist.probabilities().iter().sum::<f64>() - 1.0).abs() < 1e-12);
}

#[test]
fn disconnected_inputs_are_rejected_or_split() {
    let two = LabeledGraph::from_pure_edges(8, &[(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4)]).unwrap();
    assert!(distance_matrix(&two).is_err());
    let h = hyperbolicity_by_component(&two, &HyperbolicitySettings::default()).unwrap();
    assert_eq!(h.components.len(), 2);
    assert_eq!(h.delta(), 1.0);
}

fn grown_graph() -> impl Strategy<Value = LabeledGraph> {
    (0u64..1000, -5.0f64..5.0, 0.0f64..1.0, 20usize..80).prop_map(|(seed, nu, p, n)| {
        let cfg = GrowthConfig {
            target_nodes: n,
            affinity: nu,
            defect_probability: p,
            seed,
            ..GrowthConfig::default()
        };
        let (g, _) = remove_defect_edges(grow(&cfg).unwrap().graph());
        largest_component(&g).graph
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn distances_obey_triangle_inequality(g in grown_graph()) {
        let dm = distance_matrix(&g).unwrap();
        let n = g.node_count() as VertexId;
        for u in 0..n {
            prop_assert_eq!(dm.get(u, u), 0);
            for v in 0..n {
                prop_assert_eq!(dm.get(u, v), dm.get(v, u));
                for w in 0..n {
                    prop_assert!(dm.get(u, w) <= dm.get(u, v) + dm.get(v, w));
                }
            }
        }
    }

    #[test]
    fn delta_is_bounded_by_smallest_distance(g in grown_graph(), picks in proptest::collection::vec(any::<u32>(), 4 * 50)) {
        prop_assume!(g.node_count() >= 4);
        let dm = distance_matrix(&g).unwrap();
        let n = g.node_count() as u32;
        for quad in picks.chunks(4) {
            let q = [quad[0] % n, quad[1] % n, quad[2] % n, quad[3] % n];
            let mut s = q.to_vec();
            s.sort_unstable();
            s.dedup();
            if s.len() < 4 {
                continue;
            }
            let fp = four_point_delta(&dm, q).unwrap();
            prop_assert!(fp.twice_delta <= 2 * fp.d_min);
            let min_pair = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).map(|(i, j)| dm.get(q[i], q[j])).min().unwrap();
            prop_assert!(fp.d_min >= min_pair);
        }
    }
}
