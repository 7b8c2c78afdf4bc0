//! Maximum flow in planar networks with vertex capacities.
//!
//! Capacities are doubled so that the cycle edges of `G°` stay integral.
//! A binary search over the flow value runs, per probe, three stages:
//! a flow of the candidate value in `G°`; rounds that add `1/k` of a
//! violation-cancelling circulation until the largest violation is at most
//! `2k`; and an integral repair by augmenting paths on the vertex-split
//! network.

use std::fmt;
use std::str::FromStr;

use crate::apexflow::{apex_max_flow, apex_max_flow_fifo, ApexInstance, DinicSolver};
use crate::error::{Error, Result};
use crate::gadgets::{
    build_g_circle, build_g_times, build_h, infeasible_set, lift_flow_to_g_times, GCircle, GTimes,
    InfeasibleSet,
};
use crate::netcore::{
    add_super_terminals, check_feasible, excess, flow_value, restrict, sum_preflows, violation,
    ArcFunction, ArcId, FlowNetwork, SuperTerminals, VertexId,
};
use crate::oracle::{reference_max_flow, vertex_split_reduce};
use crate::pushrelabel::{max_flow_single, PushRelabelOptions, RelabelOrder};
use crate::scalar::{Field, Scalar};
use crate::Rational;

/// Push-relabel policy used for the `G°` flow and the apex simulation.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    #[default]
    Batch,
    Fifo,
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "batch" => Ok(Strategy::Batch),
            "fifo" => Ok(Strategy::Fifo),
            other => Err(Error::InvalidArgument(format!("unknown solver `{other}`"))),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Batch => "batch",
            Strategy::Fifo => "fifo",
        })
    }
}

#[derive(Copy, Clone, Debug, Default)]
pub struct SolveOptions {
    pub strategy: Strategy,
    /// Audit every pulse and every circulation; failures become errors.
    pub checked: bool,
    pub order: RelabelOrder,
}

impl SolveOptions {
    fn push_relabel(&self) -> PushRelabelOptions {
        PushRelabelOptions {
            checked: self.checked,
            order: self.order,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveCounters {
    pub pulses: usize,
    pub relabels: usize,
    pub inner_solves: usize,
    pub improve_iters: usize,
    pub cleanup_augs: usize,
}

impl SolveCounters {
    fn absorb(&mut self, other: &SolveCounters) {
        self.pulses += other.pulses;
        self.relabels += other.relabels;
        self.inner_solves += other.inner_solves;
        self.improve_iters += other.improve_iters;
        self.cleanup_augs += other.cleanup_augs;
    }
}

// ---------------------------------------------------------------------------
// Path decomposition

/// Paths from sources to sinks and cycles whose sum is the input flow.
#[derive(Clone, Debug, Default)]
pub struct Decomposition<T> {
    pub paths: Vec<(Vec<ArcId>, T)>,
    pub cycles: Vec<(Vec<ArcId>, T)>,
    /// Walks that stop at a terminal other than a sink, e.g. flow entering
    /// a source.
    pub residue: Vec<(Vec<ArcId>, T)>,
}

impl<T: Scalar> Decomposition<T> {
    fn sum(parts: &[(Vec<ArcId>, T)], num_arcs: usize) -> Vec<T> {
        let mut net = vec![T::zero(); num_arcs];
        for (arcs, amount) in parts {
            for &e in arcs {
                net[e.0] += amount.clone();
                net[e.rev().0] -= amount.clone();
            }
        }
        net
    }
}

/// Decomposes the canonical form of `f`. Every non-terminal vertex must
/// conserve flow.
pub fn decompose<T: Scalar>(net: &FlowNetwork<T>, f: &ArcFunction<T>) -> Result<Decomposition<T>> {
    let mut rem: Vec<T> = f.canonical().values().to_vec();
    let mut next = vec![0usize; net.num_vertices()];
    let mut pos = vec![usize::MAX; net.num_vertices()];
    let mut out = Decomposition {
        paths: Vec::new(),
        cycles: Vec::new(),
        residue: Vec::new(),
    };

    let positive_arc = |rem: &[T], next: &mut [usize], v: VertexId| -> Option<ArcId> {
        let arcs = net.out_arcs(v);
        while next[v.0] < arcs.len() {
            let e = arcs[next[v.0]];
            if rem[e.0].is_positive() {
                return Some(e);
            }
            next[v.0] += 1;
        }
        None
    };

    let mut starts: Vec<VertexId> = net.sources().to_vec();
    starts.extend(net.vertices());
    for (round, start) in starts.into_iter().enumerate() {
        let from_source = round < net.sources().len();
        while positive_arc(&rem, &mut next, start).is_some() {
            let mut path: Vec<ArcId> = Vec::new();
            let mut visited = vec![start];
            pos[start.0] = 0;
            let mut v = start;
            let kind = loop {
                if from_source && net.is_sink(v) && !path.is_empty() {
                    break 0;
                }
                let Some(e) = positive_arc(&rem, &mut next, v) else {
                    if net.is_terminal(v) {
                        break 2;
                    }
                    return Err(Error::Invariant(format!(
                        "flow is not conserved at vertex {v}"
                    )));
                };
                let w = net.head(e);
                path.push(e);
                if pos[w.0] != usize::MAX {
                    path.drain(..pos[w.0]);
                    break 1;
                }
                pos[w.0] = path.len();
                visited.push(w);
                v = w;
            };
            for u in visited {
                pos[u.0] = usize::MAX;
            }
            let amount = path
                .iter()
                .map(|e| rem[e.0].clone())
                .reduce(|a, b| T::min_of(&a, &b))
                .expect("walk found a positive arc");
            for &e in &path {
                rem[e.0] -= amount.clone();
            }
            match kind {
                0 => out.paths.push((path, amount)),
                1 => out.cycles.push((path, amount)),
                _ => out.residue.push((path, amount)),
            }
        }
    }
    Ok(out)
}

/// Drops every flow cycle. The result has the same value and carries no
/// more than `f` on any arc.
pub fn acyclicize<T: Scalar>(net: &FlowNetwork<T>, f: &ArcFunction<T>) -> Result<ArcFunction<T>> {
    let d = decompose(net, f)?;
    let mut nets = Decomposition::sum(&d.paths, net.num_arcs());
    let residue = Decomposition::sum(&d.residue, net.num_arcs());
    for (a, b) in nets.iter_mut().zip(residue) {
        *a += b;
    }
    Ok(ArcFunction::from_net_flows(&nets))
}

/// Keeps whole decomposition paths until `lambda` is reached, then a
/// fraction of the next one.
fn trim_to_value<T: Scalar>(
    net: &FlowNetwork<T>,
    f: &ArcFunction<T>,
    lambda: &T,
) -> Result<ArcFunction<T>> {
    let d = decompose(net, f)?;
    let mut kept = Vec::new();
    let mut left = lambda.clone();
    for (path, amount) in d.paths {
        if !left.is_positive() {
            break;
        }
        let take = T::min_of(&amount, &left);
        left -= take.clone();
        kept.push((path, take));
    }
    if left.is_positive() {
        return Err(Error::Invariant(format!("paths carry less than {lambda}")));
    }
    Ok(ArcFunction::from_net_flows(&Decomposition::sum(
        &kept,
        net.num_arcs(),
    )))
}

/// A flow of value exactly `lambda` from `s` to `t`, or `None` when the
/// maximum flow is smaller.
pub fn flow_of_value<T: Scalar>(
    net: &FlowNetwork<T>,
    lambda: &T,
    opts: &SolveOptions,
) -> Result<Option<ArcFunction<T>>> {
    if lambda.is_negative() {
        return Err(Error::InvalidArgument(format!(
            "negative flow value {lambda}"
        )));
    }
    let run = max_flow_single(net, opts.strategy == Strategy::Fifo, &opts.push_relabel())?;
    if run.value < *lambda {
        return Ok(None);
    }
    trim_to_value(net, &run.flow, lambda).map(Some)
}

// ---------------------------------------------------------------------------
// Violation-cancelling circulation

/// The three conditions a circulation `g×` must meet, evaluated exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CirculationCheck<T> {
    /// `g×` has zero excess at every vertex.
    pub circulation: bool,
    /// `f× + g×` respects every arc capacity of `G×`.
    pub feasible: bool,
    /// The restriction of `f× + g×` has no violation on `X`.
    pub clears_x: bool,
    /// Largest violation of the restriction outside `X`.
    pub outside_violation: T,
    /// `(k - 2) · vio(f)`.
    pub bound: T,
    /// Sum of the violations on `X`.
    pub x_total: T,
}

impl<T: Scalar> CirculationCheck<T> {
    pub fn within_bound(&self) -> bool {
        self.outside_violation <= self.bound
    }

    pub fn holds(&self) -> bool {
        self.circulation && self.feasible && self.clears_x && self.within_bound()
    }
}

#[derive(Clone, Debug)]
pub struct GTimesOutcome<T> {
    pub g_times: ArcFunction<T>,
    pub h_value: T,
    pub check: CirculationCheck<T>,
    pub counters: SolveCounters,
}

/// Largest violation in `X`, which is `vio(f)`.
fn max_vio<T: Scalar>(x: &InfeasibleSet<T>) -> T {
    x.vio.iter().fold(T::zero(), |a, b| T::max_of(&a, b))
}

/// Evaluates the conditions on `g×` against the base network `g`.
pub fn circulation_check<T: Scalar>(
    g: &FlowNetwork<T>,
    gc: &GCircle<T>,
    gt: &GTimes<T>,
    f_times: &ArcFunction<T>,
    g_times: &ArcFunction<T>,
    x: &InfeasibleSet<T>,
    k: usize,
) -> Result<CirculationCheck<T>> {
    let circulation = gt
        .net
        .vertices()
        .all(|v| excess(&gt.net, g_times, v).is_zero());
    let total = sum_preflows(f_times, g_times);
    let feasible = check_feasible(&gt.net, &total).arc_violations.is_empty();
    let down = restrict(&total, &gc.map.compose(&gt.map))?;
    let mut clears_x = true;
    let mut outside = T::zero();
    for v in g.vertices() {
        let vio = violation(g, &down, v);
        if x.contains(v) {
            clears_x &= vio.is_zero();
        } else {
            outside = T::max_of(&outside, &vio);
        }
    }
    let bound = T::from_i64(k.saturating_sub(2) as i64) * max_vio(x);
    Ok(CirculationCheck {
        circulation,
        feasible,
        clears_x,
        outside_violation: outside,
        bound,
        x_total: x.total(),
    })
}

/// Computes `g×` from a maximum `s'`-`t'` flow in `H`, or `None` when that
/// flow leaves an arc at `s'` or `t'` unsaturated.
pub fn compute_g_times<T: Scalar>(
    g: &FlowNetwork<T>,
    gc: &GCircle<T>,
    gt: &GTimes<T>,
    f_times: &ArcFunction<T>,
    x: &InfeasibleSet<T>,
    k: usize,
    opts: &SolveOptions,
) -> Result<Option<GTimesOutcome<T>>> {
    let h = build_h(gt, f_times, x)?;
    let mut counters = SolveCounters::default();
    let (h_flow, h_value) = if x.is_empty() {
        (ArcFunction::zeros_for(&h.net), T::zero())
    } else {
        let inst = ApexInstance::new(&h.net, h.apices.clone(), h.s_prime, h.t_prime)?;
        let run = match opts.strategy {
            Strategy::Batch => apex_max_flow(&inst, &DinicSolver, &opts.push_relabel())?,
            Strategy::Fifo => apex_max_flow_fifo(&inst, &DinicSolver, &opts.push_relabel())?,
        };
        counters.pulses += run.counters.kx.pulses;
        counters.relabels += run.counters.kx.relabels;
        counters.inner_solves += run.counters.inner_solves;
        (acyclicize(&h.net, &run.flow)?, run.value)
    };
    for &(a, b) in &h.terminal_arcs {
        if h.net.cap(a).finite() != Some(&h_flow[a]) || h.net.cap(b).finite() != Some(&h_flow[b]) {
            return Ok(None);
        }
    }

    let gx = &gt.net;
    let mut nets = vec![T::zero(); gx.num_arcs()];
    for e in gx.arc_ids().filter(|e| e.is_forward()) {
        nets[e.0] = h_flow.net_flow(e);
    }
    for br in &gt.bridges {
        let pos = x
            .vertices
            .iter()
            .position(|&v| v == br.vertex)
            .expect("bridge vertex is in X");
        nets[br.arc.0] -= x.vio[pos].clone();
    }
    for e in gx.arc_ids().filter(|e| e.is_forward()) {
        nets[e.rev().0] = T::zero() - nets[e.0].clone();
    }
    let g_times = ArcFunction::from_net_flows(&nets);
    let check = circulation_check(g, gc, gt, f_times, &g_times, x, k)?;
    Ok(Some(GTimesOutcome {
        g_times,
        h_value,
        check,
        counters,
    }))
}

/// Net flow of `g×` on each arc of `G°`. Bridges have no counterpart.
fn circulation_on_circle<T: Scalar>(
    gc: &GCircle<T>,
    gt: &GTimes<T>,
    g_times: &ArcFunction<T>,
) -> Vec<T> {
    let mut nets = vec![T::zero(); gc.net.num_arcs()];
    for (b, val) in g_times.iter() {
        if !val.is_positive() {
            continue;
        }
        let (a, sign) = match (gt.map.preimage(b), gt.map.preimage(b.rev())) {
            (Some(a), _) => (a, true),
            (None, Some(a)) => (a, false),
            (None, None) => continue,
        };
        if sign {
            nets[a.0] += val.clone();
            nets[a.rev().0] -= val.clone();
        } else {
            nets[a.0] -= val.clone();
            nets[a.rev().0] += val.clone();
        }
    }
    nets
}

// ---------------------------------------------------------------------------
// Solver state

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Phase {
    Search,
    Improve,
    Cleanup,
    Done,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IterationRecord<T> {
    pub vio: T,
    pub x_size: usize,
    pub check: CirculationCheck<T>,
}

#[derive(Clone, Debug)]
pub struct WangState<T> {
    /// Candidate value, in doubled units.
    pub lambda: T,
    pub f_circle: ArcFunction<T>,
    pub f: ArcFunction<T>,
    pub x: InfeasibleSet<T>,
    pub iterations: usize,
    /// `vio(f)` at the start of every round, plus the final one.
    pub vio_history: Vec<T>,
    pub records: Vec<IterationRecord<T>>,
    pub phase: Phase,
    pub counters: SolveCounters,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ImproveOutcome {
    /// `vio(f)` dropped to the threshold.
    Converged,
    /// No circulation exists, so the candidate value exceeds the maximum.
    Infeasible { iteration: usize },
}

/// A network prepared for repeated probes: doubled capacities, super
/// terminals and `G°`.
#[derive(Clone, Debug)]
pub struct WangInstance<T> {
    pub original: FlowNetwork<T>,
    /// Doubled network with super terminals.
    pub base: SuperTerminals<T>,
    pub circle: GCircle<T>,
    pub k: usize,
    pub improve_budget: usize,
    /// Maximum flow of `G°` and its value, in doubled units.
    circle_max: (ArcFunction<T>, T),
    pub setup_counters: SolveCounters,
}

/// Soft cap `ceil(10 k ln(kC)) + 10` on improvement rounds.
pub fn improve_budget(k: usize, c: f64) -> usize {
    let kc = (k as f64 * c).max(1.0);
    (10.0 * k as f64 * kc.ln()).ceil() as usize + 10
}

impl<T: Field> WangInstance<T> {
    pub fn new(net: &FlowNetwork<T>, opts: &SolveOptions) -> Result<Self> {
        if net.rotation().is_none() {
            return Err(Error::NotApplicable {
                op: "planar solver",
                reason: "instance has no rotation system".into(),
            });
        }
        let two = T::from_i64(2);
        let base = add_super_terminals(&net.scaled(&two))?;
        let mut keep = base.original_sources.clone();
        keep.extend(&base.original_sinks);
        let circle = build_g_circle(&base.net, &keep)?;
        let run = max_flow_single(
            &circle.net,
            opts.strategy == Strategy::Fifo,
            &opts.push_relabel(),
        )?;
        let setup_counters = SolveCounters {
            pulses: run.counters.pulses,
            relabels: run.counters.relabels,
            ..Default::default()
        };
        let k = base.k;
        let c = base.net.max_finite_capacity().to_f64().max(1.0);
        Ok(WangInstance {
            original: net.clone(),
            improve_budget: improve_budget(k, c),
            base,
            circle,
            k,
            circle_max: (run.flow, run.value),
            setup_counters,
        })
    }

    /// Largest value worth probing, in original units.
    pub fn upper_bound(&self) -> T {
        (self.circle_max.1.clone() / T::from_i64(2)).floor()
    }

    /// Default improvement threshold `2k`.
    pub fn threshold(&self) -> T {
        T::from_i64(2 * self.k as i64)
    }

    /// Starting state for a candidate value in original units, or `None`
    /// when even `G°` cannot carry it.
    pub fn start(&self, lambda: &T) -> Result<Option<WangState<T>>> {
        let scaled = lambda.clone() * T::from_i64(2);
        if scaled > self.circle_max.1 {
            return Ok(None);
        }
        let f_circle = trim_to_value(&self.circle.net, &self.circle_max.0, &scaled)?;
        let f = restrict(&f_circle, &self.circle.map)?;
        Ok(Some(WangState {
            lambda: scaled,
            f_circle,
            f,
            x: InfeasibleSet {
                vertices: Vec::new(),
                vio: Vec::new(),
            },
            iterations: 0,
            vio_history: Vec::new(),
            records: Vec::new(),
            phase: Phase::Improve,
            counters: SolveCounters::default(),
        }))
    }

    /// Adds `1/k` of `g×` to `f°` and re-routes the cycles of `X`.
    fn apply(&self, st: &mut WangState<T>, gt: &GTimes<T>, g_times: &ArcFunction<T>) -> Result<()> {
        let gc = &self.circle;
        let delta = circulation_on_circle(gc, gt, g_times);
        let inv_k = T::one() / T::from_i64(self.k as i64);
        let mut on_x_cycle = vec![false; gc.net.num_arcs()];
        for &v in &st.x.vertices {
            for &e in &gc.cycles[v.0]
                .as_ref()
                .expect("X vertices are expanded")
                .edges
            {
                on_x_cycle[e.0] = true;
                on_x_cycle[e.rev().0] = true;
            }
        }
        let mut nets = st.f_circle.net_flows();
        for (i, d) in delta.into_iter().enumerate() {
            if !on_x_cycle[i] {
                nets[i] += d * inv_k.clone();
            }
        }
        let half = T::one() / T::from_i64(2);
        for &v in &st.x.vertices {
            let cyc = gc.cycles[v.0].as_ref().expect("X vertices are expanded");
            if cyc.edges.is_empty() {
                continue;
            }
            // Prefix sums of the net inflow from outside the cycle.
            let mut prefix = Vec::with_capacity(cyc.darts.len());
            let mut acc = T::zero();
            for &d in &cyc.darts {
                acc -= nets[d.0].clone();
                prefix.push(acc.clone());
            }
            if !acc.is_zero() {
                return Err(Error::Invariant(format!(
                    "flow through vertex {v} is not conserved"
                )));
            }
            let lo = prefix.iter().min().expect("cycle is nonempty").clone();
            let hi = prefix.iter().max().expect("cycle is nonempty").clone();
            let theta = (lo + hi) * half.clone();
            for (i, &e) in cyc.edges.iter().enumerate() {
                let val = prefix[i].clone() - theta.clone();
                let size = if val.is_negative() {
                    T::zero() - val.clone()
                } else {
                    val.clone()
                };
                if !gc.net.cap(e).admits(&size) {
                    return Err(Error::Invariant(format!(
                        "cycle of vertex {v} cannot carry {val}"
                    )));
                }
                nets[e.rev().0] = T::zero() - val.clone();
                nets[e.0] = val;
            }
        }
        st.f_circle = ArcFunction::from_net_flows(&nets);
        Ok(())
    }

    /// Improvement rounds until `vio(f) <= threshold`.
    pub fn improvement_phase(
        &self,
        st: &mut WangState<T>,
        threshold: &T,
        budget: usize,
        opts: &SolveOptions,
    ) -> Result<ImproveOutcome> {
        let g = &self.base.net;
        loop {
            st.f = restrict(&st.f_circle, &self.circle.map)?;
            st.x = infeasible_set(g, &st.f);
            let vio = max_vio(&st.x);
            st.vio_history.push(vio.clone());
            if opts.checked {
                let value = flow_value(g, &st.f);
                if value != st.lambda {
                    return Err(Error::Invariant(format!(
                        "flow value drifted to {value}, expected {}",
                        st.lambda
                    )));
                }
                if !check_feasible(&self.circle.net, &st.f_circle).is_feasible_flow() {
                    return Err(Error::Invariant("flow in G° became infeasible".into()));
                }
            }
            if vio <= *threshold {
                st.phase = Phase::Cleanup;
                return Ok(ImproveOutcome::Converged);
            }
            if st.iterations >= budget {
                return Err(Error::Budget {
                    phase: "improvement",
                    budget,
                });
            }
            let gt = build_g_times(g, &self.circle, &st.x)?;
            let f_times = lift_flow_to_g_times(&st.f_circle, &gt)?;
            let Some(out) = compute_g_times(g, &self.circle, &gt, &f_times, &st.x, self.k, opts)?
            else {
                st.phase = Phase::Done;
                return Ok(ImproveOutcome::Infeasible {
                    iteration: st.iterations,
                });
            };
            if opts.checked {
                let c = &out.check;
                if !(c.circulation && c.feasible && c.clears_x) {
                    return Err(Error::Invariant(format!(
                        "circulation fails its conditions: {c:?}"
                    )));
                }
                if c.outside_violation > c.x_total {
                    return Err(Error::Invariant(format!(
                        "circulation creates violation {} above the total {}",
                        c.outside_violation, c.x_total
                    )));
                }
            }
            st.counters.absorb(&out.counters);
            st.records.push(IterationRecord {
                vio,
                x_size: st.x.len(),
                check: out.check.clone(),
            });
            self.apply(st, &gt, &out.g_times)?;
            st.iterations += 1;
            st.counters.improve_iters += 1;
        }
    }

    /// A feasible integral maximum flow of the doubled network, rebuilt
    /// from whole paths of `st.f`. Returns the flow on the doubled network
    /// with super terminals.
    pub fn cleanup_phase(&self, st: &mut WangState<T>) -> Result<CleanupResult<T>> {
        let g = &self.base.net;
        let unit = T::from_i64(2);
        let d = decompose(g, &st.f)?;
        let mut used = vec![T::zero(); g.num_vertices()];
        let mut kept = Vec::new();
        for (path, amount) in d.paths {
            let mut take = (amount / unit.clone()).floor() * unit.clone();
            for &e in &path {
                let v = g.head(e);
                if let Some(c) = g.vertex_cap(v).finite() {
                    let slack = (c.clone() - used[v.0].clone()) / unit.clone();
                    take = T::min_of(&take, &(slack.floor() * unit.clone()));
                }
            }
            if !take.is_positive() {
                continue;
            }
            for &e in &path {
                used[g.head(e).0] += take.clone();
            }
            kept.push((path, take));
        }
        let f0 = ArcFunction::from_net_flows(&Decomposition::sum(&kept, g.num_arcs()));
        let kept_value = flow_value(g, &f0);
        let (split, smap) = vertex_split_reduce(g)?;
        let r = reference_max_flow(&split, Some(&smap.lift(g, &split, &f0)))?;
        let flow = smap.restrict(&r.flow);
        st.counters.cleanup_augs += r.augmentations;
        st.phase = Phase::Done;
        Ok(CleanupResult {
            value: flow_value(g, &flow),
            flow,
            kept_value,
            augmentations: r.augmentations,
        })
    }

    /// Runs one probe at `lambda` (original units). The witness, when the
    /// probe succeeds, is a maximum flow of the original network.
    pub fn probe(
        &self,
        lambda: &T,
        threshold: &T,
        budget: usize,
        opts: &SolveOptions,
    ) -> Result<(ProbeRecord<T>, Option<ArcFunction<T>>)> {
        let mut rec = ProbeRecord {
            lambda: lambda.clone(),
            outcome: ProbeOutcome::Infeasible(Stage::FlowOfValue),
            vio_history: Vec::new(),
            records: Vec::new(),
            counters: SolveCounters::default(),
        };
        let Some(mut st) = self.start(lambda)? else {
            return Ok((rec, None));
        };
        let outcome = self.improvement_phase(&mut st, threshold, budget, opts);
        rec.vio_history = st.vio_history.clone();
        rec.records = st.records.clone();
        rec.counters = st.counters.clone();
        if let ImproveOutcome::Infeasible { iteration } = outcome? {
            rec.outcome = ProbeOutcome::Infeasible(Stage::Improvement { iteration });
            return Ok((rec, None));
        }
        let clean = self.cleanup_phase(&mut st)?;
        rec.counters = st.counters.clone();
        let half = T::one() / T::from_i64(2);
        let witness = restrict(&clean.flow, &self.base.map)?.scaled(&half);
        let value = clean.value * half.clone();
        rec.outcome = if value >= *lambda {
            ProbeOutcome::Feasible {
                witness_value: value,
                kept_value: clean.kept_value * half,
            }
        } else {
            ProbeOutcome::Infeasible(Stage::Cleanup { reached: value })
        };
        Ok((rec, Some(witness)))
    }
}

#[derive(Clone, Debug)]
pub struct CleanupResult<T> {
    pub flow: ArcFunction<T>,
    pub value: T,
    /// Value kept from the rounded paths before augmenting.
    pub kept_value: T,
    pub augmentations: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stage<T> {
    FlowOfValue,
    Improvement { iteration: usize },
    Cleanup { reached: T },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeOutcome<T> {
    Feasible { witness_value: T, kept_value: T },
    Infeasible(Stage<T>),
}

#[derive(Clone, Debug)]
pub struct ProbeRecord<T> {
    pub lambda: T,
    pub outcome: ProbeOutcome<T>,
    pub vio_history: Vec<T>,
    pub records: Vec<IterationRecord<T>>,
    pub counters: SolveCounters,
}

impl<T> ProbeRecord<T> {
    pub fn is_feasible(&self) -> bool {
        matches!(self.outcome, ProbeOutcome::Feasible { .. })
    }
}

#[derive(Clone, Debug)]
pub struct SolveReport<T = Rational> {
    pub value: T,
    pub flow: ArcFunction<T>,
    pub probes: Vec<ProbeRecord<T>>,
    pub counters: SolveCounters,
    pub k: usize,
    pub improve_budget: usize,
    /// Number of probes whose cleanup exceeded `m + 4k^2` augmentations.
    pub cleanup_over_budget: usize,
}

/// Binary search on the value. A successful probe returns a maximum flow,
/// so the lower end jumps straight to its value.
pub fn max_flow_vertex_capacities<T: Field>(
    net: &FlowNetwork<T>,
    opts: &SolveOptions,
) -> Result<SolveReport<T>> {
    let inst = WangInstance::new(net, opts)?;
    let threshold = inst.threshold();
    let mut counters = inst.setup_counters.clone();
    let mut lo = T::zero();
    let mut hi = inst.upper_bound();
    let mut best = ArcFunction::zeros_for(net);
    let mut probes = Vec::new();
    let mut cleanup_over_budget = 0;
    let aug_budget = net.num_arcs() / 2 + 4 * inst.k * inst.k;
    while lo < hi {
        let mid = ((lo.clone() + hi.clone() + T::one()) / T::from_i64(2)).floor();
        let (rec, witness) = inst.probe(&mid, &threshold, inst.improve_budget, opts)?;
        counters.absorb(&rec.counters);
        if rec.counters.cleanup_augs > aug_budget {
            cleanup_over_budget += 1;
        }
        match (&rec.outcome, witness) {
            (ProbeOutcome::Feasible { witness_value, .. }, Some(w)) => {
                lo = witness_value.clone();
                best = w;
            }
            _ => hi = mid - T::one(),
        }
        probes.push(rec);
    }
    let report = check_feasible(net, &best);
    if !report.is_feasible_flow() || !best.is_integral() || report.value != lo {
        return Err(Error::Invariant(format!(
            "witness of value {} is not a feasible integral flow of value {lo}",
            report.value
        )));
    }
    Ok(SolveReport {
        value: lo,
        flow: best,
        probes,
        counters,
        k: inst.k,
        improve_budget: inst.improve_budget,
        cleanup_over_budget,
    })
}

/// Maximum flow value and a witness for an instance with exact rational
/// capacities.
pub fn solve(net: &FlowNetwork<Rational>, opts: &SolveOptions) -> Result<SolveReport<Rational>> {
    max_flow_vertex_capacities(net, opts)
}
