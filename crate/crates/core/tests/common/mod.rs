#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vcapflow::generator::{embed_by_coordinates, grid_instance, GridParams};
use vcapflow::{Capacity, FlowNetwork, Network, Rational, Scalar, VertexId};

pub fn q(n: i64) -> Rational {
    Rational::from_i64(n)
}

/// Parameters of corpus instance `i`: grids from 3x3 to 6x6, k from 2 to 5
/// and maximum capacity at most 20.
pub fn corpus_params(i: u64) -> GridParams {
    GridParams {
        width: 3 + (i % 4) as usize,
        height: 3 + ((i / 4) % 4) as usize,
        k: 2 + ((i / 16) % 4) as usize,
        max_cap: 20 - 4 * (i % 5) as i64,
        seed: 1000 + i,
    }
}

pub fn corpus(count: u64) -> impl Iterator<Item = (u64, Network)> {
    (0..count).map(|i| {
        (
            i,
            grid_instance(&corpus_params(i)).expect("corpus parameters are valid"),
        )
    })
}

/// Random digraph with arc capacities only, source 0 and sink n-1.
pub fn random_digraph(seed: u64, n: usize, max_cap: i64) -> Network {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = FlowNetwork::with_vertices(n);
    let m = rng.gen_range(n..=3 * n);
    for _ in 0..m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            g.add_arc_pair(
                VertexId(u),
                VertexId(v),
                Capacity::from_i64(rng.gen_range(1..=max_cap)),
            )
            .unwrap();
        }
    }
    g.add_source(VertexId(0)).unwrap();
    g.add_sink(VertexId(n - 1)).unwrap();
    g
}

/// Minimum cut by enumerating every vertex set that contains all sources
/// and no sink. `None` when every cut is infinite.
pub fn min_cut_by_enumeration<T: Scalar>(g: &FlowNetwork<T>) -> Option<T> {
    let n = g.num_vertices();
    assert!(n <= 16, "enumeration is exponential");
    let free: Vec<usize> = (0..n).filter(|&v| !g.is_terminal(VertexId(v))).collect();
    let mut best: Option<T> = None;
    for mask in 0u32..(1 << free.len()) {
        let mut inside = vec![false; n];
        for &s in g.sources() {
            inside[s.0] = true;
        }
        for (bit, &v) in free.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                inside[v] = true;
            }
        }
        let mut total = Some(T::zero());
        for e in g.arc_ids() {
            if inside[g.tail(e).0] && !inside[g.head(e).0] {
                total = match (total, g.cap(e).finite()) {
                    (Some(t), Some(c)) => Some(t + c.clone()),
                    _ => None,
                };
            }
        }
        if let Some(t) = total {
            if best.as_ref().is_none_or(|b| t < *b) {
                best = Some(t);
            }
        }
    }
    best
}

/// Two streams cross a vertex of capacity 2 side by side: N -> v -> E and
/// S -> v -> W. With `detours`, each stream also gets a unit bypass.
pub fn plus(detours: bool) -> Network {
    let fin = |c: i64| Capacity::from_i64(c);
    let mut g = FlowNetwork::new();
    let v = g.add_vertex(fin(2));
    let [n, e, s, w] = [0; 4].map(|_| g.add_vertex(Capacity::Infinite));
    let mut coords = vec![(0.0, 0.0), (0.0, 2.0), (2.0, 0.0), (0.0, -2.0), (-2.0, 0.0)];
    for (a, b) in [(n, v), (v, e), (s, v), (v, w)] {
        g.add_arc_pair(a, b, fin(5)).unwrap();
    }
    if detours {
        let a = g.add_vertex(Capacity::Infinite);
        let b = g.add_vertex(Capacity::Infinite);
        coords.extend([(1.5, 1.5), (-1.5, -1.5)]);
        for (x, y) in [(n, a), (a, e), (s, b), (b, w)] {
            g.add_arc_pair(x, y, fin(1)).unwrap();
        }
    }
    g.add_source(n).unwrap();
    g.add_source(s).unwrap();
    g.add_sink(e).unwrap();
    g.add_sink(w).unwrap();
    embed_by_coordinates(&mut g, &coords).unwrap();
    g
}
