//! Reference maximum flow: vertex splitting plus shortest augmenting paths.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::netcore::{
    bounded_capacities, flow_in, flow_out, flow_value, ArcFunction, ArcId, Capacity, FlowNetwork,
    VertexId,
};
use crate::scalar::Scalar;

/// Correspondence between a network and its vertex-split reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitMap {
    /// `v -> (v_in, v_out)`.
    pub vertices: Vec<(VertexId, VertexId)>,
    /// Original arc `(u, v)` to split arc `(u_out, v_in)`.
    pub arcs: Vec<ArcId>,
    /// Bridge `(v_in, v_out)` carrying the capacity of `v`.
    pub bridges: Vec<ArcId>,
}

impl SplitMap {
    /// Flow on the original arcs.
    pub fn restrict<T: Scalar>(&self, split_flow: &ArcFunction<T>) -> ArcFunction<T> {
        let mut f = ArcFunction::zeros(self.arcs.len());
        for (i, &e) in self.arcs.iter().enumerate() {
            f.set(ArcId(i), split_flow[e].clone());
        }
        f
    }

    /// Flow on the split network; each bridge carries the flow through its
    /// vertex. `f` must conserve flow off the terminals.
    pub fn lift<T: Scalar>(
        &self,
        g: &FlowNetwork<T>,
        split: &FlowNetwork<T>,
        f: &ArcFunction<T>,
    ) -> ArcFunction<T> {
        let mut out = ArcFunction::zeros_for(split);
        for (i, &e) in self.arcs.iter().enumerate() {
            out.set(e, f[ArcId(i)].clone());
        }
        for v in g.vertices() {
            // Sources sit on v_out and sinks on v_in, so their bridges
            // carry the flow that passes back through them.
            let through = if g.is_sink(v) {
                flow_out(g, f, v)
            } else {
                flow_in(g, f, v)
            };
            out.set(self.bridges[v.0], through);
        }
        out
    }
}

/// Replaces every vertex `v` by `v_in -> v_out` with capacity `c(v)`
/// (infinite vertices included). Sources become `s_out` and sinks `t_in`.
pub fn vertex_split_reduce<T: Scalar>(g: &FlowNetwork<T>) -> Result<(FlowNetwork<T>, SplitMap)> {
    let mut net = FlowNetwork::new();
    let mut vertices = Vec::with_capacity(g.num_vertices());
    for _ in g.vertices() {
        let vin = net.add_vertex(Capacity::Infinite);
        let vout = net.add_vertex(Capacity::Infinite);
        vertices.push((vin, vout));
    }
    let mut bridges = Vec::with_capacity(g.num_vertices());
    for v in g.vertices() {
        let (vin, vout) = vertices[v.0];
        bridges.push(net.add_arc_pair(vin, vout, g.vertex_cap(v).clone())?.0);
    }
    let mut arcs = vec![ArcId(0); g.num_arcs()];
    for e in g.arc_ids() {
        let (u, v) = (g.tail(e), g.head(e));
        arcs[e.0] = net
            .add_arc_pair(vertices[u.0].1, vertices[v.0].0, g.cap(e).clone())?
            .0;
    }
    for &s in g.sources() {
        net.add_source(vertices[s.0].1)?;
    }
    for &t in g.sinks() {
        net.add_sink(vertices[t.0].0)?;
    }
    Ok((
        net,
        SplitMap {
            vertices,
            arcs,
            bridges,
        },
    ))
}

#[derive(Clone, Debug)]
pub struct ReferenceFlow<T> {
    pub flow: ArcFunction<T>,
    pub value: T,
    pub augmentations: usize,
}

/// Shortest-augmenting-path maximum flow from all sources to all sinks,
/// optionally warm-started from a feasible flow. Vertex capacities must
/// all be infinite.
pub fn reference_max_flow<T: Scalar>(
    net: &FlowNetwork<T>,
    warm_start: Option<&ArcFunction<T>>,
) -> Result<ReferenceFlow<T>> {
    if let Some(v) = net.first_finite_vertex_capacity() {
        return Err(Error::FiniteVertexCapacity(v));
    }
    let cap = bounded_capacities(net)?;
    let mut flow: Vec<T> = match warm_start {
        Some(w) => {
            if w.len() != net.num_arcs() {
                return Err(Error::InvalidArgument(
                    "warm start has wrong arc count".into(),
                ));
            }
            w.net_flows()
        }
        None => vec![T::zero(); net.num_arcs()],
    };
    if let Some(e) = net.arc_ids().find(|e| flow[e.0] > cap[e.0]) {
        return Err(Error::InvalidArgument(format!(
            "warm start exceeds capacity on arc {e}"
        )));
    }

    let n = net.num_vertices();
    let mut augmentations = 0;
    let mut pred: Vec<Option<ArcId>> = vec![None; n];
    let mut seen = vec![false; n];
    loop {
        pred.iter_mut().for_each(|p| *p = None);
        seen.iter_mut().for_each(|s| *s = false);
        let mut queue = VecDeque::new();
        for &s in net.sources() {
            seen[s.0] = true;
            queue.push_back(s);
        }
        let mut reached = None;
        'bfs: while let Some(v) = queue.pop_front() {
            for &e in net.out_arcs(v) {
                let w = net.head(e);
                if seen[w.0] || cap[e.0] <= flow[e.0] {
                    continue;
                }
                seen[w.0] = true;
                pred[w.0] = Some(e);
                if net.is_sink(w) {
                    reached = Some(w);
                    break 'bfs;
                }
                queue.push_back(w);
            }
        }
        let Some(t) = reached else { break };
        let mut path = Vec::new();
        let mut v = t;
        while let Some(e) = pred[v.0] {
            path.push(e);
            v = net.tail(e);
        }
        let delta = path
            .iter()
            .map(|e| cap[e.0].clone() - flow[e.0].clone())
            .reduce(|a, b| T::min_of(&a, &b))
            .expect("augmenting path has at least one arc");
        for e in path {
            flow[e.0] += delta.clone();
            flow[e.rev().0] -= delta.clone();
        }
        augmentations += 1;
    }
    let flow = ArcFunction::from_net_flows(&flow);
    let value = flow_value(net, &flow);
    Ok(ReferenceFlow {
        flow,
        value,
        augmentations,
    })
}

/// Maximum flow value of a network with vertex capacities.
pub fn vertex_capacitated_max_flow<T: Scalar>(g: &FlowNetwork<T>) -> Result<T> {
    let (split, _) = vertex_split_reduce(g)?;
    Ok(reference_max_flow(&split, None)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::check_feasible;

    type Net = FlowNetwork<i64>;

    fn fin(c: i64) -> Capacity<i64> {
        Capacity::Finite(c)
    }

    fn diamond() -> Net {
        let mut g = Net::with_vertices(4);
        let (s, a, b, t) = (VertexId(0), VertexId(1), VertexId(2), VertexId(3));
        g.add_arc_pair(s, a, fin(1)).unwrap();
        g.add_arc_pair(s, b, fin(1)).unwrap();
        g.add_arc_pair(a, t, fin(1)).unwrap();
        g.add_arc_pair(b, t, fin(1)).unwrap();
        g.add_source(s).unwrap();
        g.add_sink(t).unwrap();
        g
    }

    #[test]
    fn diamond_unit_value() {
        let r = reference_max_flow(&diamond(), None).unwrap();
        assert_eq!(r.value, 2);
        assert_eq!(r.augmentations, 2);
    }

    #[test]
    fn warm_start_at_maximum_needs_no_augmentation() {
        let g = diamond();
        let first = reference_max_flow(&g, None).unwrap();
        let again = reference_max_flow(&g, Some(&first.flow)).unwrap();
        assert_eq!(again.augmentations, 0);
        assert_eq!(again.value, 2);
    }

    #[test]
    fn split_bottleneck_vertex() {
        let mut g = Net::new();
        let s = g.add_vertex(Capacity::Infinite);
        let v = g.add_vertex(fin(3));
        let t = g.add_vertex(Capacity::Infinite);
        g.add_arc_pair(s, v, fin(9)).unwrap();
        g.add_arc_pair(v, t, fin(9)).unwrap();
        g.add_source(s).unwrap();
        g.add_sink(t).unwrap();
        let (split, map) = vertex_split_reduce(&g).unwrap();
        let r = reference_max_flow(&split, None).unwrap();
        assert_eq!(r.value, 3);
        let f = map.restrict(&r.flow);
        let report = check_feasible(&g, &f);
        assert!(report.is_feasible_flow());
        assert_eq!(report.value, 3);
        assert_eq!(map.lift(&g, &split, &f), r.flow);
    }

    #[test]
    fn infinite_vertices_keep_arc_value() {
        let g = diamond();
        assert_eq!(vertex_capacitated_max_flow(&g).unwrap(), 2);
    }

    #[test]
    fn infinite_path_is_unbounded() {
        let mut g = Net::with_vertices(2);
        g.add_arc_pair(VertexId(0), VertexId(1), Capacity::Infinite)
            .unwrap();
        g.add_source(VertexId(0)).unwrap();
        g.add_sink(VertexId(1)).unwrap();
        assert!(matches!(
            reference_max_flow(&g, None),
            Err(Error::Unbounded(_))
        ));
    }

    #[test]
    fn rejects_vertex_capacities() {
        let mut g = diamond();
        g.add_vertex(fin(1));
        assert!(matches!(
            reference_max_flow(&g, None),
            Err(Error::FiniteVertexCapacity(_))
        ));
    }
}
