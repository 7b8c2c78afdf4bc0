//! Derived networks used by the vertex-capacity solver.
//!
//! * [`build_g_circle`] replaces each capacitated planar vertex of degree
//!   `d` by a cycle of `d` vertices whose edges carry half the vertex
//!   capacity in each direction; original arcs reattach in rotation order.
//! * [`build_g_times`] collapses the cycles of overloaded vertices into an
//!   `x_in -> x_out` bridge carrying the vertex capacity.
//! * [`build_h`] materializes the residual network of the bridged graph
//!   with the bridges reversed, plus a source feeding each `x_in` and a
//!   sink draining each `x_out` by the overload of `x`.

use crate::error::{Error, Result};
use crate::netcore::{
    flow_in, restrict, ArcFunction, ArcId, ArcImage, Capacity, FlowNetwork, GadgetMap, Rotation,
    VertexId,
};
use crate::scalar::{Field, Scalar};

/// The cycle standing in for one vertex of the base network.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    /// `v_0 .. v_{d-1}` in clockwise order.
    pub vertices: Vec<VertexId>,
    /// `edges[i]` runs from `v_i` to `v_{i+1}`.
    pub edges: Vec<ArcId>,
    /// `darts[i]` is the arc out of `v_i` that leaves the cycle.
    pub darts: Vec<ArcId>,
}

#[derive(Clone, Debug)]
pub struct GCircle<T> {
    pub net: FlowNetwork<T>,
    pub map: GadgetMap,
    /// Per base vertex, its cycle when the vertex was expanded.
    pub cycles: Vec<Option<Cycle>>,
}

fn half<T: Field>(c: &Capacity<T>) -> Capacity<T> {
    match c {
        Capacity::Finite(v) => Capacity::Finite(v.clone() / T::from_i64(2)),
        Capacity::Infinite => Capacity::Infinite,
    }
}

/// Expands every embedded non-terminal vertex not listed in `unexpanded`.
/// Vertex capacities of `G°` are all infinite.
pub fn build_g_circle<T: Field>(g: &FlowNetwork<T>, unexpanded: &[VertexId]) -> Result<GCircle<T>> {
    let rot = g.rotation().ok_or_else(|| Error::NotApplicable {
        op: "cycle expansion",
        reason: "network has no rotation system".into(),
    })?;
    let mut keep = vec![false; g.num_vertices()];
    for v in unexpanded {
        keep[v.0] = true;
    }

    let mut net = FlowNetwork::new();
    let mut map = GadgetMap::new(g.num_vertices(), g.num_arcs());
    // Attachment vertex of every dart of g.
    let mut attach = vec![VertexId(usize::MAX); g.num_arcs()];
    let mut expanded_order: Vec<Option<Vec<ArcId>>> = vec![None; g.num_vertices()];
    for v in g.vertices() {
        let order = rot.get(v);
        let expand = order.is_some() && !keep[v.0] && !g.is_terminal(v);
        if expand {
            let order = order.unwrap_or_default();
            if order.len() != g.degree(v) {
                return Err(Error::NotApplicable {
                    op: "cycle expansion",
                    reason: format!("vertex {v} has arcs to unembedded vertices"),
                });
            }
            let count = order.len().max(1);
            let verts: Vec<VertexId> = (0..count)
                .map(|_| net.add_vertex(Capacity::Infinite))
                .collect();
            for (i, &d) in order.iter().enumerate() {
                attach[d.0] = verts[i];
            }
            map.set_vertex_image(v, verts);
            expanded_order[v.0] = Some(order.to_vec());
        } else {
            let w = net.add_vertex(Capacity::Infinite);
            for &d in g.out_arcs(v) {
                attach[d.0] = w;
            }
            map.set_vertex_image(v, vec![w]);
        }
    }
    for e in g.arc_ids().filter(|e| e.is_forward()) {
        let (a, _) = net.add_edge_pair(
            attach[e.0],
            attach[e.rev().0],
            g.cap(e).clone(),
            g.cap(e.rev()).clone(),
        )?;
        map.map_arc(e, a);
        map.map_arc(e.rev(), a.rev());
    }

    let mut cycles = vec![None; g.num_vertices()];
    for v in g.vertices() {
        let Some(order) = &expanded_order[v.0] else {
            continue;
        };
        let verts = map.vertex_image(v).to_vec();
        let d = order.len();
        let c = half(g.vertex_cap(v));
        let mut edges = Vec::new();
        if d >= 2 {
            for i in 0..d {
                edges.push(
                    net.add_edge_pair(verts[i], verts[(i + 1) % d], c.clone(), c.clone())?
                        .0,
                );
            }
        }
        cycles[v.0] = Some(Cycle {
            vertices: verts,
            edges,
            darts: order
                .iter()
                .map(|&a| map.mapped(a).expect("mapped above"))
                .collect(),
        });
    }
    for &s in g.sources() {
        net.add_source(map.vertex_image(s)[0])?;
    }
    for &t in g.sinks() {
        net.add_sink(map.vertex_image(t)[0])?;
    }

    let mut new_rot = Rotation::new(net.num_vertices());
    for v in g.vertices() {
        let Some(order) = rot.get(v) else { continue };
        match &cycles[v.0] {
            Some(cyc) => {
                let d = cyc.vertices.len();
                for i in 0..d {
                    let mut darts = Vec::with_capacity(3);
                    if let Some(&ext) = cyc.darts.get(i) {
                        darts.push(ext);
                    }
                    if cyc.edges.len() == d {
                        darts.push(cyc.edges[i]);
                        darts.push(cyc.edges[(i + d - 1) % d].rev());
                    }
                    new_rot.set(cyc.vertices[i], darts);
                }
            }
            None => {
                let darts = order
                    .iter()
                    .map(|&a| map.mapped(a).expect("mapped above"))
                    .collect();
                new_rot.set(map.vertex_image(v)[0], darts);
            }
        }
    }
    net.set_rotation(new_rot)?;
    map.set_derived_arcs(net.num_arcs());
    Ok(GCircle { net, map, cycles })
}

/// Vertices whose inflow exceeds their capacity, with the overload.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfeasibleSet<T> {
    pub vertices: Vec<VertexId>,
    pub vio: Vec<T>,
}

impl<T: Scalar> InfeasibleSet<T> {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, &T)> {
        self.vertices.iter().copied().zip(&self.vio)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    /// Sum of the overloads.
    pub fn total(&self) -> T {
        self.vio.iter().fold(T::zero(), |a, b| a + b.clone())
    }
}

pub fn infeasible_set<T: Scalar>(g: &FlowNetwork<T>, f: &ArcFunction<T>) -> InfeasibleSet<T> {
    let mut vertices = Vec::new();
    let mut vio = Vec::new();
    for v in g.vertices() {
        let over = g.vertex_cap(v).excess_of(&flow_in(g, f, v));
        if over.is_positive() {
            vertices.push(v);
            vio.push(over);
        }
    }
    InfeasibleSet { vertices, vio }
}

/// The bridge replacing the cycle of an overloaded vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bridge {
    pub vertex: VertexId,
    pub x_in: VertexId,
    pub x_out: VertexId,
    /// The arc `(x_in, x_out)`.
    pub arc: ArcId,
}

#[derive(Clone, Debug)]
pub struct GTimes<T> {
    pub net: FlowNetwork<T>,
    /// `G°` to `G×`; undefined on the cycle edges of overloaded vertices.
    pub map: GadgetMap,
    pub bridges: Vec<Bridge>,
    /// `{s, t} ∪ {x_in, x_out}`.
    pub apices: Vec<VertexId>,
    pub s: VertexId,
    pub t: VertexId,
}

/// Collapses the cycle of every `x` in `X` into a bridge of capacity
/// `c(x)`. Arcs of positive capacity into the cycle now enter `x_in` and
/// arcs out of it leave `x_out`; each gets a fresh zero-capacity reverse.
pub fn build_g_times<T: Scalar>(
    g: &FlowNetwork<T>,
    gc: &GCircle<T>,
    x: &InfeasibleSet<T>,
) -> Result<GTimes<T>> {
    let circ = &gc.net;
    let (s, t) = single_terminals(circ)?;
    // Which collapsed vertex owns each G° vertex.
    let mut owner: Vec<Option<usize>> = vec![None; circ.num_vertices()];
    for (i, (v, _)) in x.iter().enumerate() {
        if v.0 >= g.num_vertices() {
            return Err(Error::UnknownVertex(v));
        }
        let cyc = gc.cycles[v.0]
            .as_ref()
            .ok_or_else(|| Error::NotApplicable {
                op: "bridge construction",
                reason: format!("vertex {v} was not expanded into a cycle"),
            })?;
        for w in &cyc.vertices {
            owner[w.0] = Some(i);
        }
    }

    let mut net = FlowNetwork::new();
    let mut image = vec![None; circ.num_vertices()];
    for v in circ.vertices() {
        if owner[v.0].is_none() {
            image[v.0] = Some(net.add_vertex(Capacity::Infinite));
        }
    }
    let ends: Vec<(VertexId, VertexId)> = x
        .iter()
        .map(|_| {
            (
                net.add_vertex(Capacity::Infinite),
                net.add_vertex(Capacity::Infinite),
            )
        })
        .collect();

    let mut map = GadgetMap::new(circ.num_vertices(), circ.num_arcs());
    for v in circ.vertices() {
        match (image[v.0], owner[v.0]) {
            (Some(w), _) => map.set_vertex_image(v, vec![w]),
            (None, Some(i)) => map.set_vertex_image(v, vec![ends[i].0, ends[i].1]),
            (None, None) => unreachable!(),
        }
    }
    for e in circ.arc_ids().filter(|e| e.is_forward()) {
        let (u, v) = (circ.tail(e), circ.head(e));
        match (owner[u.0], owner[v.0]) {
            (None, None) => {
                let (a, _) = net.add_edge_pair(
                    image[u.0].unwrap(),
                    image[v.0].unwrap(),
                    circ.cap(e).clone(),
                    circ.cap(e.rev()).clone(),
                )?;
                map.map_arc(e, a);
                map.map_arc(e.rev(), a.rev());
            }
            (Some(i), Some(j)) if i == j => {}
            _ => {
                for a in [e, e.rev()] {
                    if !circ.cap(a).is_positive() {
                        map.drop_arc(a);
                        continue;
                    }
                    let tail = match owner[circ.tail(a).0] {
                        Some(i) => ends[i].1,
                        None => image[circ.tail(a).0].unwrap(),
                    };
                    let head = match owner[circ.head(a).0] {
                        Some(i) => ends[i].0,
                        None => image[circ.head(a).0].unwrap(),
                    };
                    let (b, _) = net.add_arc_pair(tail, head, circ.cap(a).clone())?;
                    map.map_arc(a, b);
                }
            }
        }
    }
    let mut bridges = Vec::with_capacity(x.len());
    for (i, (v, _)) in x.iter().enumerate() {
        let (x_in, x_out) = ends[i];
        let (arc, _) = net.add_arc_pair(x_in, x_out, g.vertex_cap(v).clone())?;
        bridges.push(Bridge {
            vertex: v,
            x_in,
            x_out,
            arc,
        });
    }
    let (s, t) = (image[s.0].unwrap(), image[t.0].unwrap());
    net.add_source(s)?;
    net.add_sink(t)?;

    // The part off the apices keeps its embedding.
    if let Some(rot) = circ.rotation() {
        let mut new_rot = Rotation::new(net.num_vertices());
        for v in circ.vertices() {
            let (Some(order), Some(w)) = (rot.get(v), image[v.0]) else {
                continue;
            };
            if w == s || w == t {
                continue;
            }
            let darts = order
                .iter()
                .filter(|&&d| owner[circ.head(d).0].is_none())
                .filter_map(|&d| map.mapped(d))
                .filter(|&d| net.head(d) != s && net.head(d) != t)
                .collect();
            new_rot.set(w, darts);
        }
        net.set_rotation(new_rot)?;
    }
    map.set_derived_arcs(net.num_arcs());
    let mut apices = vec![s, t];
    for &(a, b) in &ends {
        apices.push(a);
        apices.push(b);
    }
    Ok(GTimes {
        net,
        map,
        bridges,
        apices,
        s,
        t,
    })
}

fn single_terminals<T: Scalar>(net: &FlowNetwork<T>) -> Result<(VertexId, VertexId)> {
    match (net.sources(), net.sinks()) {
        ([s], [t]) => Ok((*s, *t)),
        _ => Err(Error::InvalidArgument(
            "expected exactly one source and one sink".into(),
        )),
    }
}

/// `f×`: the flow of `G°` on shared arcs, with each bridge carrying the
/// whole inflow of its vertex.
pub fn lift_flow_to_g_times<T: Scalar>(
    f_circle: &ArcFunction<T>,
    gt: &GTimes<T>,
) -> Result<ArcFunction<T>> {
    let f = f_circle.canonical();
    let mut out = ArcFunction::zeros_for(&gt.net);
    for i in 0..gt.map.base_arcs() {
        if let Some(ArcImage::Mapped(b)) = gt.map.image(ArcId(i)) {
            out.set(b, f[ArcId(i)].clone());
        }
    }
    for br in &gt.bridges {
        let inflow = flow_in(&gt.net, &out, br.x_in);
        out.set(br.arc, inflow.clone());
        let outflow = gt
            .net
            .out_arcs(br.x_out)
            .iter()
            .filter(|&&e| e != br.arc.rev())
            .fold(T::zero(), |acc, &e| acc + out[e].clone());
        if outflow != inflow {
            return Err(Error::Invariant(format!(
                "flow through vertex {} is not conserved: {inflow} in, {outflow} out",
                br.vertex
            )));
        }
        if let Some(e) = gt
            .net
            .out_arcs(br.x_in)
            .iter()
            .find(|&&e| e != br.arc && out[e].is_positive())
        {
            return Err(Error::Invariant(format!("flow leaves x_in along arc {e}")));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct HGraph<T> {
    /// Arc `i` of `net` is the residual of arc `i` of `G×`; the source and
    /// sink arcs come after them.
    pub net: FlowNetwork<T>,
    pub s_prime: VertexId,
    pub t_prime: VertexId,
    /// `(s', x_in)` and `(x_out, t')` per bridge.
    pub terminal_arcs: Vec<(ArcId, ArcId)>,
    /// Apices of `G×` plus `s'` and `t'`.
    pub apices: Vec<VertexId>,
    pub map: GadgetMap,
}

/// Residual network of `G×` under `f×` with every bridge reversed, plus
/// `s'` and `t'` wired to the bridges by the overloads.
pub fn build_h<T: Scalar>(
    gt: &GTimes<T>,
    f_times: &ArcFunction<T>,
    x: &InfeasibleSet<T>,
) -> Result<HGraph<T>> {
    let gx = &gt.net;
    let mut net = FlowNetwork::new();
    for _ in gx.vertices() {
        net.add_vertex(Capacity::Infinite);
    }
    let mut bridge_of = vec![None; gx.num_arcs()];
    for (i, br) in gt.bridges.iter().enumerate() {
        bridge_of[br.arc.0] = Some(i);
    }
    for e in gx.arc_ids().filter(|e| e.is_forward()) {
        let (c_fwd, c_rev) = match bridge_of[e.0] {
            Some(_) => (Capacity::zero(), gx.cap(e).clone()),
            None => {
                let net_flow = f_times.net_flow(e);
                (gx.cap(e).minus(&net_flow), gx.cap(e.rev()).plus(&net_flow))
            }
        };
        for c in [&c_fwd, &c_rev] {
            if c.finite().is_some_and(|v| v.is_negative()) {
                return Err(Error::Invariant(format!("f× overfills arc pair {e} of G×")));
            }
        }
        net.add_edge_pair(gx.tail(e), gx.head(e), c_fwd, c_rev)?;
    }
    let s_prime = net.add_vertex(Capacity::Infinite);
    let t_prime = net.add_vertex(Capacity::Infinite);
    let mut terminal_arcs = Vec::with_capacity(gt.bridges.len());
    for br in &gt.bridges {
        let pos = x
            .vertices
            .iter()
            .position(|&v| v == br.vertex)
            .ok_or_else(|| {
                Error::InvalidArgument(format!("bridge vertex {} is not in X", br.vertex))
            })?;
        let vio = &x.vio[pos];
        if !vio.is_positive() {
            return Err(Error::InvalidArgument(format!(
                "vertex {} has no violation",
                br.vertex
            )));
        }
        let (a, _) = net.add_arc_pair(s_prime, br.x_in, Capacity::Finite(vio.clone()))?;
        let (b, _) = net.add_arc_pair(br.x_out, t_prime, Capacity::Finite(vio.clone()))?;
        terminal_arcs.push((a, b));
    }
    net.add_source(s_prime)?;
    net.add_sink(t_prime)?;
    if let Some(rot) = gx.rotation() {
        let mut rot = rot.clone();
        rot.extend_to(net.num_vertices());
        net.set_rotation(rot)?;
    }
    let mut map = GadgetMap::identity(gx.num_vertices(), gx.num_arcs());
    map.set_derived_arcs(net.num_arcs());
    let mut apices = gt.apices.clone();
    apices.push(s_prime);
    apices.push(t_prime);
    Ok(HGraph {
        net,
        s_prime,
        t_prime,
        terminal_arcs,
        apices,
        map,
    })
}

/// Restriction of a flow on `G°` to the base network.
pub fn restrict_circle<T: Scalar>(
    f_circle: &ArcFunction<T>,
    gc: &GCircle<T>,
) -> Result<ArcFunction<T>> {
    restrict(f_circle, &gc.map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::{check_feasible, excess, validate_rotation};
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    fn fin(n: i64) -> Capacity<Q> {
        Capacity::Finite(q(n))
    }

    fn v(i: usize) -> VertexId {
        VertexId(i)
    }

    /// A star: centre 0 with capacity `c` joined to leaves 1..=3, leaves
    /// at angles 90, -30 and 210 degrees. Leaf 1 is the source, 2 the sink.
    fn star(c: Capacity<Q>) -> FlowNetwork<Q> {
        let mut g = FlowNetwork::new();
        g.add_vertex(c);
        for _ in 0..3 {
            g.add_vertex(Capacity::Infinite);
        }
        let a = g.add_arc_pair(v(1), v(0), fin(10)).unwrap().0;
        let b = g.add_arc_pair(v(0), v(2), fin(10)).unwrap().0;
        let d = g.add_arc_pair(v(0), v(3), fin(10)).unwrap().0;
        let mut rot = Rotation::new(4);
        rot.set(v(0), vec![a.rev(), b, d]);
        rot.set(v(1), vec![a]);
        rot.set(v(2), vec![b.rev()]);
        rot.set(v(3), vec![d.rev()]);
        g.set_rotation(rot).unwrap();
        g.add_source(v(1)).unwrap();
        g.add_sink(v(2)).unwrap();
        g
    }

    #[test]
    fn degree_three_vertex_becomes_triangle() {
        let g = star(fin(4));
        let gc = build_g_circle(&g, &[]).unwrap();
        let cyc = gc.cycles[0].as_ref().unwrap();
        assert_eq!(cyc.vertices.len(), 3);
        assert_eq!(cyc.edges.len(), 3);
        for &e in &cyc.edges {
            assert_eq!(gc.net.cap(e), &fin(2));
            assert_eq!(gc.net.cap(e.rev()), &fin(2));
        }
        // Leaves 2 and 3 are expanded into single vertices, terminals stay.
        assert_eq!(gc.net.num_vertices(), 3 + 3);
        assert!(validate_rotation(&gc.net, gc.net.rotation().unwrap()).is_ok());
        gc.map.check_consistent().unwrap();
    }

    #[test]
    fn infinite_vertex_gets_infinite_cycle() {
        let g = star(Capacity::Infinite);
        let gc = build_g_circle(&g, &[]).unwrap();
        let cyc = gc.cycles[0].as_ref().unwrap();
        assert!(cyc.edges.iter().all(|&e| gc.net.cap(e).is_infinite()));
    }

    #[test]
    fn restriction_through_cycle() {
        let g = star(fin(4));
        let gc = build_g_circle(&g, &[]).unwrap();
        // Route 2 units 1 -> 0 -> 2 by hand through the triangle.
        let mut f = ArcFunction::zeros_for(&gc.net);
        let a = gc.map.mapped(ArcId(0)).unwrap();
        let b = gc.map.mapped(ArcId(2)).unwrap();
        f.set(a, q(2));
        f.set(b, q(2));
        let cyc = gc.cycles[0].as_ref().unwrap();
        f.set(cyc.edges[0], q(2));
        assert!(check_feasible(&gc.net, &f).is_feasible_flow());
        let back = restrict_circle(&f, &gc).unwrap();
        assert_eq!(back[ArcId(0)], q(2));
        assert_eq!(back[ArcId(2)], q(2));
        assert_eq!(back[ArcId(4)], q(0));
        assert!(g
            .vertices()
            .filter(|&u| !g.is_terminal(u))
            .all(|u| excess(&g, &back, u) == q(0)));
    }

    fn overloaded() -> (FlowNetwork<Q>, GCircle<Q>, ArcFunction<Q>) {
        let g = star(fin(5));
        let gc = build_g_circle(&g, &[]).unwrap();
        let mut f = ArcFunction::zeros(g.num_arcs());
        f.set(ArcId(0), q(8));
        f.set(ArcId(2), q(8));
        (g, gc, f)
    }

    #[test]
    fn infeasible_set_examples() {
        let (g, _, f) = overloaded();
        let x = infeasible_set(&g, &f);
        assert_eq!(x.vertices, vec![v(0)]);
        assert_eq!(x.vio, vec![q(3)]);
        assert!(infeasible_set(&g, &ArcFunction::zeros(g.num_arcs())).is_empty());
    }

    #[test]
    fn empty_x_keeps_g_circle() {
        let (g, gc, _) = overloaded();
        let x = InfeasibleSet {
            vertices: vec![],
            vio: vec![],
        };
        let gt = build_g_times(&g, &gc, &x).unwrap();
        assert_eq!(gt.net.num_vertices(), gc.net.num_vertices());
        assert_eq!(gt.net.num_arcs(), gc.net.num_arcs());
        assert_eq!(gt.apices.len(), 2);
        let f = ArcFunction::zeros_for(&gc.net);
        assert_eq!(lift_flow_to_g_times(&f, &gt).unwrap(), f);
    }

    #[test]
    fn bridge_carries_inflow_and_h_is_wired() {
        let (g, gc, f) = overloaded();
        let x = infeasible_set(&g, &f);
        let gt = build_g_times(&g, &gc, &x).unwrap();
        assert_eq!(gt.apices.len(), 2 * x.len() + 2);
        let br = &gt.bridges[0];
        assert_eq!(gt.net.cap(br.arc), &fin(5));
        // In-degree 1 and out-degree 2 (both forward arcs of positive capacity).
        let ins = gt
            .net
            .out_arcs(br.x_in)
            .iter()
            .filter(|&&e| gt.net.cap(e.rev()).is_positive())
            .count();
        let outs = gt
            .net
            .out_arcs(br.x_out)
            .iter()
            .filter(|&&e| gt.net.cap(e).is_positive())
            .count();
        assert_eq!((ins, outs), (1, 2));

        // Lift the 8-unit flow from G°.
        let gc_flow = {
            let mut h = ArcFunction::zeros_for(&gc.net);
            let cyc = gc.cycles[0].as_ref().unwrap();
            h.set(gc.map.mapped(ArcId(0)).unwrap(), q(8));
            h.set(gc.map.mapped(ArcId(2)).unwrap(), q(8));
            h.set(cyc.edges[0], q(8));
            h
        };
        let fx = lift_flow_to_g_times(&gc_flow, &gt).unwrap();
        assert_eq!(fx[br.arc], q(8));
        let report = check_feasible(&gt.net, &fx);
        assert_eq!(report.arc_violations, vec![(br.arc, q(3))]);

        let h = build_h(&gt, &fx, &x).unwrap();
        let (a, b) = h.terminal_arcs[0];
        assert_eq!(h.net.cap(a), &fin(3));
        assert_eq!(h.net.cap(b), &fin(3));
        assert_eq!(h.net.cap(br.arc), &fin(0));
        assert_eq!(h.net.cap(br.arc.rev()), &fin(5));
        assert_eq!(h.apices.len(), 2 * x.len() + 4);
    }

    #[test]
    fn h_rejects_nonpositive_violation() {
        let (g, gc, f) = overloaded();
        let mut x = infeasible_set(&g, &f);
        let gt = build_g_times(&g, &gc, &x).unwrap();
        x.vio[0] = q(0);
        let fx = ArcFunction::zeros_for(&gt.net);
        assert!(build_h(&gt, &fx, &x).is_err());
    }
}
