mod common;

use common::{corpus, q};
use proptest::prelude::*;
use vcapflow::gadgets::{build_g_circle, build_g_times, infeasible_set, lift_flow_to_g_times};
use vcapflow::generator::{grid_instance, GridParams};
use vcapflow::netcore::{
    check_feasible, excesses, residual_capacity, restrict, scale_flow, sum_preflows, violation,
};
use vcapflow::wang::WangInstance;
use vcapflow::{
    parse_instance, write_instance, ArcFunction, ArcId, Capacity, FlowNetwork, Network, Rational,
    SolveOptions, VertexId,
};

fn pair_net(n_pairs: usize) -> Network {
    let mut g = FlowNetwork::with_vertices(2);
    for _ in 0..n_pairs {
        g.add_arc_pair(VertexId(0), VertexId(1), Capacity::from_i64(1))
            .unwrap();
    }
    g
}

fn func(vals: &[i64]) -> ArcFunction<Rational> {
    ArcFunction::from_vec(vals.iter().map(|&v| q(v)).collect()).unwrap()
}

fn arc_values(pairs: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0i64..50, 2 * pairs)
}

proptest! {
    #[test]
    fn sum_keeps_net_flow_and_is_canonical(a in arc_values(4), b in arc_values(4)) {
        let (rho, eta) = (func(&a), func(&b));
        let s = sum_preflows(&rho, &eta);
        for i in 0..8 {
            let e = ArcId(i);
            prop_assert_eq!(s.net_flow(e), rho.net_flow(e) + eta.net_flow(e));
            prop_assert!(s[e] == q(0) || s[e.rev()] == q(0));
        }
        prop_assert_eq!(s, sum_preflows(&eta, &rho));
    }

    #[test]
    fn scaling_composes(a in arc_values(3), x in 0i64..20, y in 1i64..20) {
        let rho = func(&a);
        let c = q(x) / q(y);
        let twice = scale_flow(&c, &scale_flow(&c, &rho));
        prop_assert_eq!(twice, scale_flow(&(c.clone() * c), &rho));
    }

    #[test]
    fn residual_is_capacity_minus_net(cap in 0i64..40, f in 0i64..20, r in 0i64..20) {
        let mut g = pair_net(0);
        let (e, _) = g.add_arc_pair(VertexId(0), VertexId(1), Capacity::from_i64(cap)).unwrap();
        let rho = func(&[f, r]);
        prop_assert_eq!(residual_capacity(&g, &rho, e), Capacity::Finite(q(cap - f + r)));
        prop_assert_eq!(residual_capacity(&g, &rho, e.rev()), Capacity::Finite(q(f - r)));
    }

    #[test]
    fn excess_sums_to_zero(a in arc_values(5)) {
        let g = pair_net(5);
        let total = excesses(&g, &func(&a)).into_iter().fold(q(0), |x, y| x + y);
        prop_assert_eq!(total, q(0));
    }

    #[test]
    fn violation_is_overshoot(cap in 0i64..30, a in arc_values(3)) {
        let mut g = FlowNetwork::new();
        g.add_vertex(Capacity::Infinite);
        g.add_vertex(Capacity::from_i64(cap));
        for _ in 0..3 {
            g.add_arc_pair(VertexId(0), VertexId(1), Capacity::from_i64(1)).unwrap();
        }
        let f = func(&a);
        let inflow: i64 = (0..3).map(|i| a[2 * i]).sum();
        prop_assert_eq!(violation(&g, &f, VertexId(1)), q((inflow - cap).max(0)));
        prop_assert_eq!(violation(&g, &f, VertexId(0)), q(0));
    }

    #[test]
    fn instance_text_round_trips(w in 2usize..6, h in 2usize..6, k in 2usize..5, seed in 0u64..1000) {
        let p = GridParams { width: w, height: h, k: k.min(w * h), max_cap: 9, seed };
        let net: Network = grid_instance(&p).unwrap();
        let text = write_instance(&net);
        let back: Network = parse_instance(&text).unwrap();
        prop_assert_eq!(write_instance(&back), text);
    }
}

/// Same network and embedding without terminal roles.
fn without_terminals(g: &Network) -> Network {
    let mut out = FlowNetwork::new();
    for v in g.vertices() {
        out.add_vertex(g.vertex_cap(v).clone());
    }
    for e in g.arc_ids().filter(|e| e.is_forward()) {
        out.add_edge_pair(
            g.tail(e),
            g.head(e),
            g.cap(e).clone(),
            g.cap(e.rev()).clone(),
        )
        .unwrap();
    }
    out.set_rotation(g.rotation().unwrap().clone()).unwrap();
    out
}

#[test]
fn expanded_vertex_count_is_twice_the_edge_count() {
    for (_, g) in corpus(40) {
        let bare = without_terminals(&g);
        let gc = build_g_circle(&bare, &[]).unwrap();
        assert_eq!(gc.net.num_vertices(), g.num_arcs());
        assert!(gc.net.rotation().is_some());
        let f = ArcFunction::zeros_for(&gc.net);
        assert!(restrict(&f, &gc.map).unwrap().is_zero());
    }
}

#[test]
fn lifted_flow_overfills_exactly_the_bridges() {
    let opts = SolveOptions::default();
    let mut checked = 0;
    for (_, g) in corpus(120) {
        let oracle = vcapflow::oracle::vertex_capacitated_max_flow(&g).unwrap();
        let w = WangInstance::new(&g, &opts).unwrap();
        let st = w.start(&oracle).unwrap().unwrap();
        let f = restrict(&st.f_circle, &w.circle.map).unwrap();
        let x = infeasible_set(&w.base.net, &f);
        if x.is_empty() {
            continue;
        }
        let gt = build_g_times(&w.base.net, &w.circle, &x).unwrap();
        assert_eq!(gt.apices.len(), 2 * x.len() + 2);
        let ft = lift_flow_to_g_times(&st.f_circle, &gt).unwrap();
        let mut over = check_feasible(&gt.net, &ft).arc_violations;
        over.sort();
        let mut expected: Vec<(ArcId, Rational)> = gt
            .bridges
            .iter()
            .map(|b| {
                let pos = x.vertices.iter().position(|&v| v == b.vertex).unwrap();
                (b.arc, x.vio[pos].clone())
            })
            .collect();
        expected.sort();
        assert_eq!(over, expected);
        checked += 1;
    }
    assert!(checked > 0);
}
