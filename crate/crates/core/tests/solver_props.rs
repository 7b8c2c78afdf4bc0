mod common;

use common::{plus, q};
use proptest::prelude::*;
use vcapflow::generator::{embed_by_coordinates, grid_instance, GridParams};
use vcapflow::netcore::check_feasible;
use vcapflow::oracle::{reference_max_flow, vertex_capacitated_max_flow};
use vcapflow::pushrelabel::RelabelOrder;
use vcapflow::wang::{flow_of_value, Strategy as Policy, WangInstance};
use vcapflow::{solve, Capacity, FlowNetwork, Network, SolveOptions, VertexId};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn value_matches_the_split_oracle(
        w in 2usize..6, h in 2usize..6, k in 2usize..6, cap in 1i64..21, seed in 0u64..100_000,
        fifo in any::<bool>(),
    ) {
        let p = GridParams { width: w, height: h, k: k.min(w * h), max_cap: cap, seed };
        let g: Network = grid_instance(&p).unwrap();
        let strategy = if fifo { Policy::Fifo } else { Policy::Batch };
        let opts = SolveOptions { strategy, checked: true, order: RelabelOrder::Shuffled(seed) };
        let report = solve(&g, &opts).unwrap();
        prop_assert_eq!(&report.value, &vertex_capacitated_max_flow(&g).unwrap());
        prop_assert!(report.flow.is_integral());
        let chk = check_feasible(&g, &report.flow);
        prop_assert!(chk.is_feasible_flow());
        prop_assert_eq!(chk.value, report.value);
    }
}

#[test]
fn uncapacitated_vertices_give_the_plain_maximum() {
    for seed in 0..30 {
        let p = GridParams {
            width: 4,
            height: 4,
            k: 4,
            max_cap: 12,
            seed,
        };
        let g: Network = grid_instance(&p).unwrap();
        let mut open = g.clone();
        for v in g.vertices() {
            open.set_vertex_cap(v, Capacity::Infinite).unwrap();
        }
        let report = solve(&open, &SolveOptions::default()).unwrap();
        assert_eq!(report.value, reference_max_flow(&open, None).unwrap().value);
    }
}

/// s -> a -> v -> b -> t with `v` the only way through.
fn cut_vertex(vcap: i64, arc: i64) -> Network {
    let mut g = FlowNetwork::with_vertices(5);
    g.set_vertex_cap(VertexId(2), Capacity::from_i64(vcap))
        .unwrap();
    for (u, v) in [(0, 1), (1, 2), (2, 3), (3, 4)] {
        let c = if u == 1 { arc } else { 10 };
        g.add_arc_pair(VertexId(u), VertexId(v), Capacity::from_i64(c))
            .unwrap();
    }
    g.add_source(VertexId(0)).unwrap();
    g.add_sink(VertexId(4)).unwrap();
    let coords: Vec<(f64, f64)> = (0..5).map(|i| (i as f64, 0.0)).collect();
    embed_by_coordinates(&mut g, &coords).unwrap();
    g
}

#[test]
fn cut_vertex_caps_the_value() {
    for (vcap, arc) in [(3, 7), (7, 3), (0, 5), (4, 4)] {
        let report = solve(&cut_vertex(vcap, arc), &SolveOptions::default()).unwrap();
        assert_eq!(report.value, q(vcap.min(arc)));
    }
}

#[test]
fn crossing_streams_are_limited_by_the_shared_vertex() {
    assert_eq!(
        solve(&plus(false), &SolveOptions::default()).unwrap().value,
        q(2)
    );
    assert_eq!(
        solve(&plus(true), &SolveOptions::default()).unwrap().value,
        q(4)
    );
}

#[test]
fn flow_of_value_is_exact() {
    let g = cut_vertex(10, 10);
    let w = WangInstance::new(&g, &SolveOptions::default()).unwrap();
    let net = &w.circle.net;
    let opts = SolveOptions::default();
    for lambda in [0, 6, 20] {
        let f = flow_of_value(net, &q(lambda), &opts).unwrap().unwrap();
        assert_eq!(check_feasible(net, &f).value, q(lambda));
    }
    assert!(flow_of_value(net, &q(21), &opts).unwrap().is_none());
}

#[test]
fn gated_runs_stay_below_the_threshold() {
    let opts = SolveOptions::default();
    for seed in 0..40 {
        let p = GridParams {
            width: 5,
            height: 5,
            k: 4,
            max_cap: 16,
            seed,
        };
        let g: Network = grid_instance(&p).unwrap();
        let report = solve(&g, &opts).unwrap();
        let threshold = q(2 * report.k as i64);
        for probe in &report.probes {
            if let Some(last) = probe.vio_history.last() {
                if probe.is_feasible() {
                    assert!(*last <= threshold);
                }
            }
            assert!(probe.counters.improve_iters <= report.improve_budget);
        }
        assert_eq!(report.cleanup_over_budget, 0);
    }
}

#[test]
fn results_are_deterministic() {
    let p = GridParams {
        width: 5,
        height: 4,
        k: 3,
        max_cap: 9,
        seed: 17,
    };
    let g: Network = grid_instance(&p).unwrap();
    let a = solve(&g, &SolveOptions::default()).unwrap();
    let b = solve(&g, &SolveOptions::default()).unwrap();
    assert_eq!(a.flow, b.flow);
    assert_eq!(a.counters, b.counters);
}

#[test]
fn missing_embedding_is_rejected() {
    let mut g = cut_vertex(1, 1);
    g.clear_rotation();
    assert!(solve(&g, &SolveOptions::default()).is_err());
}

