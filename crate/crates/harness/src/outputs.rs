//! CSV renderings of analysis results. All writers are pure functions of
//! their inputs so reruns produce identical bytes.

use std::fmt::Write as _;

use simplex_assembly::geometry::{DistanceDistribution, HyperbolicityMode, HyperbolicityProfile};
use simplex_assembly::growth::EventRecord;
use simplex_assembly::qanalysis::{FVector, StructureVectors};

/// Per-step growth log: `t,n,q,n_a,nodes,edges,simplexes,faces`. The seed
/// simplex has an empty `q`.
pub fn event_series_report(events: &[EventRecord]) -> String {
    let mut out = String::from("t,n,q,n_a,nodes,edges,simplexes,faces\n");
    for e in events {
        let q = e.shared_order.map(|q| q.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            e.t, e.size, q, e.added_nodes, e.nodes, e.edges, e.simplexes, e.faces_total
        )
        .unwrap();
    }
    out
}

pub fn qtop_csv(sv: &StructureVectors, f: &FVector) -> String {
    let mut out = String::from("q,Q_q,n_q,TSV_q,f_q\n");
    for q in 0..sv.fsv.len() {
        writeln!(
            out,
            "{},{},{},{:.6},{}",
            q,
            sv.fsv[q],
            sv.ssv[q],
            sv.tsv[q],
            f.0.get(q).copied().unwrap_or(0)
        )
        .unwrap();
    }
    writeln!(
        out,
        "# q_star={} tsv_before_q_star={:.6} n0={}",
        sv.q_star, sv.tsv_before_q_star, sv.ssv[0]
    )
    .unwrap();
    out
}

pub fn mode_label(mode: &HyperbolicityMode) -> String {
    match mode {
        HyperbolicityMode::Exhaustive { .. } => "exhaustive".into(),
        HyperbolicityMode::Sampled { seed, .. } => format!("sampled(seed={seed})"),
    }
}

/// `(d_min, delta_max)` profile with a summary line.
pub fn hyperbolicity_csv(profile: &HyperbolicityProfile) -> String {
    let mut out = String::from("d_min,delta_max\n");
    for (d, delta) in profile.delta_by_dmin() {
        writeln!(out, "{d},{delta}").unwrap();
    }
    writeln!(
        out,
        "# delta_G={} mode={} count={}",
        profile.delta(),
        mode_label(&profile.mode),
        profile.quadruples
    )
    .unwrap();
    out
}

/// `(d, P(d))` for `d >= 1`.
pub fn distance_csv(dist: &DistanceDistribution) -> String {
    let mut out = String::from("d,P\n");
    for (d, p) in dist.probabilities().iter().enumerate().skip(1) {
        writeln!(out, "{d},{p:.8}").unwrap();
    }
    out
}
