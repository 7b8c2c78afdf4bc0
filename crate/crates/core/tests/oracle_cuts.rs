mod common;

use common::{min_cut_by_enumeration, q, random_digraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vcapflow::netcore::check_feasible;
use vcapflow::oracle::{reference_max_flow, vertex_capacitated_max_flow, vertex_split_reduce};
use vcapflow::{Capacity, FlowNetwork, Network, VertexId};

#[test]
fn augmenting_paths_match_enumerated_cuts() {
    for seed in 0..50 {
        let n = 3 + (seed as usize % 8);
        let g = random_digraph(seed, n, 12);
        let flow = reference_max_flow(&g, None).unwrap();
        assert!(check_feasible(&g, &flow.flow).is_feasible_flow());
        assert_eq!(Some(flow.value), min_cut_by_enumeration(&g), "seed {seed}");
    }
}

#[test]
fn k4_minus_an_edge() {
    // Vertices 0..4, every pair joined except {0, 3}, both directions cap 3.
    let mut g = FlowNetwork::with_vertices(4);
    for (u, v) in [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)] {
        g.add_edge_pair(
            VertexId(u),
            VertexId(v),
            Capacity::from_i64(3),
            Capacity::from_i64(3),
        )
        .unwrap();
    }
    g.add_source(VertexId(0)).unwrap();
    g.add_sink(VertexId(3)).unwrap();
    let value = reference_max_flow(&g, None).unwrap().value;
    assert_eq!(value, q(6));
    assert_eq!(min_cut_by_enumeration(&g), Some(value));

    let mut capped: Network = g.clone();
    capped
        .set_vertex_cap(VertexId(1), Capacity::from_i64(2))
        .unwrap();
    assert_eq!(vertex_capacitated_max_flow(&capped).unwrap(), q(5));
}

#[test]
fn vertex_split_matches_enumerated_cuts() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for seed in 0..40 {
        let n = 3 + (seed as usize % 5);
        let mut g = random_digraph(100 + seed, n, 12);
        for v in 1..n - 1 {
            if rng.gen_bool(0.6) {
                g.set_vertex_cap(VertexId(v), Capacity::from_i64(rng.gen_range(0..10)))
                    .unwrap();
            }
        }
        let (split, _) = vertex_split_reduce(&g).unwrap();
        assert_eq!(
            Some(vertex_capacitated_max_flow(&g).unwrap()),
            min_cut_by_enumeration(&split),
            "seed {seed}"
        );
    }
}

#[test]
fn unbounded_instance_is_reported() {
    let mut g: Network = FlowNetwork::with_vertices(2);
    g.add_arc_pair(VertexId(0), VertexId(1), Capacity::Infinite)
        .unwrap();
    g.add_source(VertexId(0)).unwrap();
    g.add_sink(VertexId(1)).unwrap();
    assert!(reference_max_flow(&g, None).is_err());
    assert_eq!(min_cut_by_enumeration(&g), None);
}
