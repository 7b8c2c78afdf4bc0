//! Flow algebra: residual capacities, excess, violation, preflow sum and
//! scaling, restriction, feasibility, and super-terminal wrapping.

use crate::error::{Error, Result};
use crate::netcore::arcfn::ArcFunction;
use crate::netcore::gadget_map::{ArcImage, GadgetMap};
use crate::netcore::network::{ArcId, FlowNetwork, VertexId};
use crate::scalar::{Capacity, Scalar};

/// `c(e) - rho(e) + rho(rev(e))`.
pub fn residual_capacity<T: Scalar>(
    net: &FlowNetwork<T>,
    rho: &ArcFunction<T>,
    e: ArcId,
) -> Capacity<T> {
    net.cap(e).minus(&rho.net_flow(e))
}

pub fn flow_in<T: Scalar>(net: &FlowNetwork<T>, rho: &ArcFunction<T>, v: VertexId) -> T {
    net.in_arcs(v)
        .fold(T::zero(), |acc, e| acc + rho[e].clone())
}

pub fn flow_out<T: Scalar>(net: &FlowNetwork<T>, rho: &ArcFunction<T>, v: VertexId) -> T {
    net.out_arcs(v)
        .iter()
        .fold(T::zero(), |acc, &e| acc + rho[e].clone())
}

/// `rho_in(v) - rho_out(v)`.
pub fn excess<T: Scalar>(net: &FlowNetwork<T>, rho: &ArcFunction<T>, v: VertexId) -> T {
    flow_in(net, rho, v) - flow_out(net, rho, v)
}

/// Excess of every vertex in one pass.
pub fn excesses<T: Scalar>(net: &FlowNetwork<T>, rho: &ArcFunction<T>) -> Vec<T> {
    let mut ex = vec![T::zero(); net.num_vertices()];
    for (e, val) in rho.iter() {
        if val.is_zero() {
            continue;
        }
        ex[net.head(e).0] += val.clone();
        ex[net.tail(e).0] -= val.clone();
    }
    ex
}

/// `max{0, f_in(v) - c(v)}`.
pub fn violation<T: Scalar>(net: &FlowNetwork<T>, f: &ArcFunction<T>, v: VertexId) -> T {
    net.vertex_cap(v).excess_of(&flow_in(net, f, v))
}

pub fn violation_max<T: Scalar>(net: &FlowNetwork<T>, f: &ArcFunction<T>) -> T {
    net.vertices()
        .map(|v| violation(net, f, v))
        .fold(T::zero(), |a, b| T::max_of(&a, &b))
}

/// `(rho + eta)(e) = max{0, rho(e) + eta(e) - rho(rev e) - eta(rev e)}`.
pub fn sum_preflows<T: Scalar>(rho: &ArcFunction<T>, eta: &ArcFunction<T>) -> ArcFunction<T> {
    assert_eq!(
        rho.len(),
        eta.len(),
        "sum of functions on different arc sets"
    );
    let net: Vec<T> = (0..rho.len())
        .map(|i| rho.net_flow(ArcId(i)) + eta.net_flow(ArcId(i)))
        .collect();
    ArcFunction::from_net_flows(&net)
}

/// `(c rho)(e) = c * rho(e)`.
pub fn scale_flow<T: Scalar>(c: &T, rho: &ArcFunction<T>) -> ArcFunction<T> {
    rho.scaled(c)
}

/// `|rho| = sum over sources of out - in`.
pub fn flow_value<T: Scalar>(net: &FlowNetwork<T>, rho: &ArcFunction<T>) -> T {
    net.sources()
        .iter()
        .fold(T::zero(), |acc, &s| acc - excess(net, rho, s))
}

/// Restriction of a function on a derived network back to its base:
/// `f(e) = f_big(image(e))`.
pub fn restrict<T: Scalar>(f_big: &ArcFunction<T>, gmap: &GadgetMap) -> Result<ArcFunction<T>> {
    let mut f = ArcFunction::zeros(gmap.base_arcs());
    for i in 0..gmap.base_arcs() {
        let e = ArcId(i);
        match gmap.image(e) {
            Some(ArcImage::Mapped(d)) => f.set(e, f_big[d].clone()),
            Some(ArcImage::Dropped) => {}
            None => return Err(Error::MissingCorrespondence(e)),
        }
    }
    Ok(f)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowStats<T> {
    pub value: T,
    pub max_violation: T,
    pub violated_vertices: Vec<VertexId>,
}

pub fn flow_stats<T: Scalar>(net: &FlowNetwork<T>, f: &ArcFunction<T>) -> FlowStats<T> {
    let mut max_violation = T::zero();
    let mut violated = Vec::new();
    for v in net.vertices() {
        let vio = violation(net, f, v);
        if vio.is_positive() {
            violated.push(v);
            max_violation = T::max_of(&max_violation, &vio);
        }
    }
    FlowStats {
        value: flow_value(net, f),
        max_violation,
        violated_vertices: violated,
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Conservation {
    /// `ex = 0` off `S ∪ T`.
    Flow,
    /// `ex >= 0` off `S`.
    Preflow,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityReport<T> {
    /// Arcs with `f(e) > c(e)` and the overshoot.
    pub arc_violations: Vec<(ArcId, T)>,
    /// Vertices with `f_in(v) > c(v)` and the overshoot.
    pub vertex_violations: Vec<(VertexId, T)>,
    pub conservation: Conservation,
    pub value: T,
}

impl<T: Scalar> FeasibilityReport<T> {
    pub fn arc_feasible(&self) -> bool {
        self.arc_violations.is_empty()
    }

    pub fn vertex_feasible(&self) -> bool {
        self.vertex_violations.is_empty()
    }

    pub fn is_feasible_flow(&self) -> bool {
        self.arc_feasible() && self.vertex_feasible() && self.conservation == Conservation::Flow
    }

    pub fn is_feasible_preflow(&self) -> bool {
        self.arc_feasible() && self.vertex_feasible() && self.conservation != Conservation::Neither
    }
}

pub fn check_feasible<T: Scalar>(net: &FlowNetwork<T>, f: &ArcFunction<T>) -> FeasibilityReport<T> {
    let arc_violations = f
        .iter()
        .filter_map(|(e, val)| {
            let over = net.cap(e).excess_of(val);
            over.is_positive().then_some((e, over))
        })
        .collect();
    let vertex_violations = net
        .vertices()
        .filter_map(|v| {
            let over = violation(net, f, v);
            over.is_positive().then_some((v, over))
        })
        .collect();
    let ex = excesses(net, f);
    let mut is_flow = true;
    let mut is_preflow = true;
    for v in net.vertices() {
        if net.is_source(v) {
            continue;
        }
        if ex[v.0].is_negative() {
            is_preflow = false;
        }
        if !net.is_sink(v) && !ex[v.0].is_zero() {
            is_flow = false;
        }
    }
    let conservation = if is_flow && is_preflow {
        Conservation::Flow
    } else if is_preflow {
        Conservation::Preflow
    } else {
        Conservation::Neither
    };
    FeasibilityReport {
        arc_violations,
        vertex_violations,
        conservation,
        value: flow_value(net, f),
    }
}

/// A network wrapped with a super source and super sink.
#[derive(Clone, Debug)]
pub struct SuperTerminals<T> {
    pub net: FlowNetwork<T>,
    pub s: VertexId,
    pub t: VertexId,
    /// Maps the original network into `net` (identity on shared ids).
    pub map: GadgetMap,
    pub original_sources: Vec<VertexId>,
    pub original_sinks: Vec<VertexId>,
    /// Number of original terminals, `|S| + |T|`.
    pub k: usize,
}

/// Copies `g` (same vertex and arc ids) and adds `s`, `t` with
/// infinite-capacity arcs `(s, s_i)` and `(t_i, t)`.
pub fn add_super_terminals<T: Scalar>(g: &FlowNetwork<T>) -> Result<SuperTerminals<T>> {
    let k = g.sources().len() + g.sinks().len();
    if k == 0 {
        return Err(Error::NoTerminals);
    }
    let mut net = FlowNetwork::new();
    for v in g.vertices() {
        net.add_vertex(g.vertex_cap(v).clone());
    }
    for e in g.arc_ids().filter(|e| e.is_forward()) {
        net.add_edge_pair(
            g.tail(e),
            g.head(e),
            g.cap(e).clone(),
            g.cap(e.rev()).clone(),
        )?;
    }
    let s = net.add_vertex(Capacity::Infinite);
    let t = net.add_vertex(Capacity::Infinite);
    for &si in g.sources() {
        net.add_arc_pair(s, si, Capacity::Infinite)?;
    }
    for &ti in g.sinks() {
        net.add_arc_pair(ti, t, Capacity::Infinite)?;
    }
    net.add_source(s)?;
    net.add_sink(t)?;
    if let Some(rot) = g.rotation() {
        let mut rot = rot.clone();
        rot.extend_to(net.num_vertices());
        net.set_rotation(rot)?;
    }
    let mut map = GadgetMap::identity(g.num_vertices(), g.num_arcs());
    map.set_derived_arcs(net.num_arcs());
    Ok(SuperTerminals {
        net,
        s,
        t,
        map,
        original_sources: g.sources().to_vec(),
        original_sinks: g.sinks().to_vec(),
        k,
    })
}

/// Finite stand-in for every arc capacity: infinite arcs get one more than
/// the total finite capacity, which exceeds every finite cut. Fails if a
/// source reaches a sink through infinite arcs alone.
pub fn bounded_capacities<T: Scalar>(net: &FlowNetwork<T>) -> Result<Vec<T>> {
    bounded_from(net, net.sources(), |v| net.is_sink(v))
}

/// As [`bounded_capacities`] for an explicit terminal pair.
pub fn bounded_capacities_between<T: Scalar>(
    net: &FlowNetwork<T>,
    s: VertexId,
    t: VertexId,
) -> Result<Vec<T>> {
    bounded_from(net, &[s], |v| v == t)
}

fn bounded_from<T: Scalar>(
    net: &FlowNetwork<T>,
    from: &[VertexId],
    is_target: impl Fn(VertexId) -> bool,
) -> Result<Vec<T>> {
    let mut seen = vec![false; net.num_vertices()];
    let mut stack: Vec<VertexId> = from.to_vec();
    for s in &stack {
        seen[s.0] = true;
    }
    while let Some(v) = stack.pop() {
        if is_target(v) {
            return Err(Error::Unbounded(v));
        }
        for &e in net.out_arcs(v) {
            let w = net.head(e);
            if net.cap(e).is_infinite() && !seen[w.0] {
                seen[w.0] = true;
                stack.push(w);
            }
        }
    }
    let bound = net.finite_capacity_total() + T::one();
    Ok(net
        .arc_ids()
        .map(|e| {
            net.cap(e)
                .finite()
                .cloned()
                .unwrap_or_else(|| bound.clone())
        })
        .collect())
}
