//! Maximum flow in graphs whose non-planar part is a small apex set.
//!
//! Push-relabel runs on the complete graph `K` over the apices. A `K` arc
//! `(u, v)` is residual iff the residual network of the maintained preflow
//! has a `u -> v` path whose interior avoids every apex. A bulk push from
//! `U` to `W` is a maximum flow in the residual network with the other
//! apices deleted, where each `u` may emit at most its excess.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::netcore::{
    bounded_capacities_between, validate_rotation, ArcFunction, ArcId, FlowNetwork, VertexId,
};
use crate::pushrelabel::{
    pulse_budget, relabel_budget, Counters, Labeling, PulseStats, PushRelabelOptions, RelabelOrder,
};
use crate::scalar::Scalar;

/// A network, its apex set and the terminal pair (both apices).
#[derive(Clone, Debug)]
pub struct ApexInstance<'a, T> {
    net: &'a FlowNetwork<T>,
    apices: Vec<VertexId>,
    s: VertexId,
    t: VertexId,
}

impl<'a, T: Scalar> ApexInstance<'a, T> {
    pub fn new(
        net: &'a FlowNetwork<T>,
        apices: Vec<VertexId>,
        s: VertexId,
        t: VertexId,
    ) -> Result<Self> {
        if s == t {
            return Err(Error::InvalidArgument("source equals sink".into()));
        }
        let mut seen = vec![false; net.num_vertices()];
        for &a in &apices {
            if a.0 >= net.num_vertices() {
                return Err(Error::UnknownVertex(a));
            }
            if std::mem::replace(&mut seen[a.0], true) {
                return Err(Error::InvalidArgument(format!("apex {a} listed twice")));
            }
        }
        if !seen[s.0] || !seen[t.0] {
            return Err(Error::InvalidArgument(
                "source and sink must be apices".into(),
            ));
        }
        if let Some(v) = net.first_finite_vertex_capacity() {
            return Err(Error::FiniteVertexCapacity(v));
        }
        if let Some(rot) = net.rotation() {
            let keep: Vec<bool> = seen.iter().map(|a| !a).collect();
            validate_rotation(net, &rot.restricted(net, &keep))?;
        }
        Ok(ApexInstance { net, apices, s, t })
    }

    pub fn network(&self) -> &FlowNetwork<T> {
        self.net
    }

    pub fn apices(&self) -> &[VertexId] {
        &self.apices
    }

    pub fn source(&self) -> VertexId {
        self.s
    }

    pub fn sink(&self) -> VertexId {
        self.t
    }
}

/// Residual network with some vertices deleted, sources with optional
/// emission limits (`None` is unlimited) and sinks.
#[derive(Clone, Debug)]
pub struct InnerSolverRequest<'a, T> {
    pub net: &'a FlowNetwork<T>,
    /// Residual capacity of every arc of `net`.
    pub residual: &'a [T],
    pub removed: &'a [bool],
    pub sources: Vec<(VertexId, Option<T>)>,
    pub sinks: Vec<VertexId>,
}

/// Computes a maximum limited flow for a request. The result lives on the
/// arcs of `req.net`, respects the residual capacities and conserves flow
/// at every vertex that is neither a source nor a sink of the request.
pub trait InnerSolver<T>: Sync {
    fn solve(&self, req: &InnerSolverRequest<'_, T>) -> Result<ArcFunction<T>>;
}

/// Blocking-flow (Dinic) inner solver over a virtual source and sink.
#[derive(Copy, Clone, Debug, Default)]
pub struct DinicSolver;

struct Dinic<T> {
    head: Vec<usize>,
    cap: Vec<T>,
    adj: Vec<Vec<usize>>,
    level: Vec<usize>,
    iter: Vec<usize>,
}

impl<T: Scalar> Dinic<T> {
    fn new(n: usize) -> Self {
        Dinic {
            head: Vec::new(),
            cap: Vec::new(),
            adj: vec![Vec::new(); n],
            level: vec![0; n],
            iter: vec![0; n],
        }
    }

    fn add(&mut self, u: usize, v: usize, c_uv: T, c_vu: T) -> usize {
        let e = self.head.len();
        self.head.push(v);
        self.cap.push(c_uv);
        self.head.push(u);
        self.cap.push(c_vu);
        self.adj[u].push(e);
        self.adj[v].push(e + 1);
        e
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = usize::MAX);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.adj[v] {
                let w = self.head[e];
                if self.level[w] == usize::MAX && self.cap[e].is_positive() {
                    self.level[w] = self.level[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        self.level[t] != usize::MAX
    }

    fn dfs(&mut self, v: usize, t: usize, limit: T) -> T {
        if v == t {
            return limit;
        }
        while self.iter[v] < self.adj[v].len() {
            let e = self.adj[v][self.iter[v]];
            let w = self.head[e];
            if self.cap[e].is_positive() && self.level[w] == self.level[v] + 1 {
                let pushed = self.dfs(w, t, T::min_of(&limit, &self.cap[e]));
                if pushed.is_positive() {
                    self.cap[e] -= pushed.clone();
                    self.cap[e ^ 1] += pushed.clone();
                    return pushed;
                }
            }
            self.iter[v] += 1;
        }
        T::zero()
    }

    fn run(&mut self, s: usize, t: usize, bound: &T) {
        while self.bfs(s, t) {
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let pushed = self.dfs(s, t, bound.clone());
                if !pushed.is_positive() {
                    break;
                }
            }
        }
    }
}

impl<T: Scalar> InnerSolver<T> for DinicSolver {
    fn solve(&self, req: &InnerSolverRequest<'_, T>) -> Result<ArcFunction<T>> {
        let net = req.net;
        let n = net.num_vertices();
        let (vs, vt) = (n, n + 1);
        let mut d = Dinic::new(n + 2);
        let mut local = Vec::new();
        let mut bound = T::one();
        for e in net.arc_ids().filter(|e| e.is_forward()) {
            let (u, v) = (net.tail(e), net.head(e));
            if req.removed[u.0] || req.removed[v.0] {
                continue;
            }
            let (a, b) = (req.residual[e.0].clone(), req.residual[e.rev().0].clone());
            if a.is_negative() || b.is_negative() {
                return Err(Error::Invariant(format!(
                    "negative residual capacity on arc pair {e}"
                )));
            }
            if a.is_zero() && b.is_zero() {
                continue;
            }
            bound += a.clone() + b.clone();
            local.push((e, d.add(u.0, v.0, a, b)));
        }
        for (_, limit) in &req.sources {
            if let Some(l) = limit {
                bound += l.clone();
            }
        }
        for (u, limit) in &req.sources {
            if req.removed[u.0] {
                return Err(Error::InvalidArgument(format!("source {u} was removed")));
            }
            d.add(
                vs,
                u.0,
                limit.clone().unwrap_or_else(|| bound.clone()),
                T::zero(),
            );
        }
        for w in &req.sinks {
            if req.removed[w.0] {
                return Err(Error::InvalidArgument(format!("sink {w} was removed")));
            }
            d.add(w.0, vt, bound.clone(), T::zero());
        }
        d.run(vs, vt, &bound);
        let mut delta = ArcFunction::zeros_for(net);
        for (e, le) in local {
            // Flow moved on the local pair, as net flow along `e`.
            let moved = req.residual[e.0].clone() - d.cap[le].clone();
            if moved.is_positive() {
                delta.set(e, moved);
            } else if moved.is_negative() {
                delta.set(e.rev(), T::zero() - moved);
            }
        }
        Ok(delta)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ApexCounters {
    pub kx: Counters,
    pub inner_solves: usize,
}

/// Preflow in `H` together with labels and excesses on the apices.
#[derive(Clone, Debug)]
pub struct KxState<'a, T> {
    inst: &'a ApexInstance<'a, T>,
    cap: Vec<T>,
    flow: Vec<T>,
    apex_index: Vec<Option<usize>>,
    labeling: Labeling,
    ex: Vec<T>,
    relabels_at: Vec<usize>,
    pub counters: ApexCounters,
    pushed_total: T,
    checked: bool,
}

impl<'a, T: Scalar> KxState<'a, T> {
    /// Zero preflow, `h(s) = |V_x|`, all other labels 0.
    pub fn new(inst: &'a ApexInstance<'a, T>) -> Result<Self> {
        let net = inst.net;
        let cap = bounded_capacities_between(net, inst.s, inst.t)?;
        let k = inst.apices.len();
        let mut apex_index = vec![None; net.num_vertices()];
        for (i, a) in inst.apices.iter().enumerate() {
            apex_index[a.0] = Some(i);
        }
        let s_idx = apex_index[inst.s.0].expect("source is an apex");
        Ok(KxState {
            inst,
            cap,
            flow: vec![T::zero(); net.num_arcs()],
            apex_index,
            labeling: Labeling::new(k, s_idx),
            ex: vec![T::zero(); k],
            relabels_at: vec![0; k],
            counters: ApexCounters::default(),
            pushed_total: T::zero(),
            checked: false,
        })
    }

    pub fn set_checked(&mut self, checked: bool) {
        self.checked = checked;
    }

    fn idx(&self, v: VertexId) -> usize {
        self.apex_index[v.0].expect("vertex is an apex")
    }

    pub fn is_apex(&self, v: VertexId) -> bool {
        self.apex_index[v.0].is_some()
    }

    pub fn height(&self, v: VertexId) -> usize {
        self.labeling.get(self.idx(v))
    }

    pub fn excess(&self, v: VertexId) -> &T {
        &self.ex[self.idx(v)]
    }

    pub fn labeling(&self) -> &Labeling {
        &self.labeling
    }

    pub fn is_active(&self, v: VertexId) -> bool {
        v != self.inst.s && v != self.inst.t && self.excess(v).is_positive()
    }

    fn residual(&self, e: ArcId) -> T {
        self.cap[e.0].clone() - self.flow[e.0].clone()
    }

    /// The maintained preflow.
    pub fn rho(&self) -> ArcFunction<T> {
        ArcFunction::from_net_flows(&self.flow)
    }

    pub fn pushed_total(&self) -> &T {
        &self.pushed_total
    }

    /// Apices reachable from any of `from` by residual paths whose interior
    /// avoids the apices.
    fn kx_reach(&self, from: &[VertexId]) -> Vec<bool> {
        let net = self.inst.net;
        let mut reached = vec![false; self.inst.apices.len()];
        let mut seen = vec![false; net.num_vertices()];
        let mut stack: Vec<VertexId> = from.to_vec();
        for v in from {
            seen[v.0] = true;
        }
        while let Some(v) = stack.pop() {
            for &e in net.out_arcs(v) {
                let w = net.head(e);
                if seen[w.0] || !self.residual(e).is_positive() {
                    continue;
                }
                seen[w.0] = true;
                match self.apex_index[w.0] {
                    Some(i) => reached[i] = true,
                    None => stack.push(w),
                }
            }
        }
        reached
    }

    /// Whether the `K` arc `(u, v)` is residual.
    pub fn kx_residual(&self, u: VertexId, v: VertexId) -> bool {
        self.kx_reach(&[u])[self.idx(v)]
    }

    /// Maximum flow from `sources` (with limits) to `sinks` in the
    /// residual network minus the apices outside both sets.
    fn limited_push(
        &mut self,
        sources: Vec<(VertexId, Option<T>)>,
        sinks: Vec<VertexId>,
        solver: &dyn InnerSolver<T>,
    ) -> Result<T> {
        let net = self.inst.net;
        let mut removed = vec![false; net.num_vertices()];
        for &a in &self.inst.apices {
            removed[a.0] = true;
        }
        for (u, _) in &sources {
            removed[u.0] = false;
        }
        for w in &sinks {
            removed[w.0] = false;
        }
        let residual: Vec<T> = net.arc_ids().map(|e| self.residual(e)).collect();
        let req = InnerSolverRequest {
            net,
            residual: &residual,
            removed: &removed,
            sources,
            sinks,
        };
        let delta = solver.solve(&req)?;
        self.counters.inner_solves += 1;
        let before: Vec<T> = req
            .sources
            .iter()
            .map(|(u, _)| self.excess(*u).clone())
            .collect();
        for (e, val) in delta.iter() {
            if !val.is_positive() {
                continue;
            }
            if val > &residual[e.0] {
                return Err(Error::Invariant(format!("inner solver overfilled arc {e}")));
            }
            self.flow[e.0] += val.clone();
            self.flow[e.rev().0] -= val.clone();
            if let Some(i) = self.apex_index[net.head(e).0] {
                self.ex[i] += val.clone();
            }
            if let Some(i) = self.apex_index[net.tail(e).0] {
                self.ex[i] -= val.clone();
            }
        }
        let mut moved = T::zero();
        for ((u, limit), old) in req.sources.iter().zip(before) {
            let sent = old - self.excess(*u).clone();
            if sent.is_negative() || limit.as_ref().is_some_and(|l| &sent > l) {
                return Err(Error::Invariant(format!(
                    "source {u} emitted {sent} against its limit"
                )));
            }
            moved += sent;
        }
        if self.checked {
            self.check_conservation()?;
        }
        self.pushed_total += moved.clone();
        Ok(moved)
    }

    /// Bulk push from `U` (level `h`, all active) to `W` (level `h - 1`).
    /// Does nothing when no `K` arc joins them.
    pub fn apex_bulk_push(
        &mut self,
        u_set: &[VertexId],
        w_set: &[VertexId],
        solver: &dyn InnerSolver<T>,
    ) -> Result<T> {
        let Some(&first) = u_set.first() else {
            return Ok(T::zero());
        };
        let h = self.height(first);
        for &u in u_set {
            if !self.is_apex(u) || !self.excess(u).is_positive() || self.height(u) != h {
                return Err(Error::NotApplicable {
                    op: "apex bulk push",
                    reason: format!("apex {u} is not an active apex at height {h}"),
                });
            }
        }
        for &w in w_set {
            if !self.is_apex(w) || self.height(w) + 1 != h {
                return Err(Error::NotApplicable {
                    op: "apex bulk push",
                    reason: format!("apex {w} is not at height {}", h.wrapping_sub(1)),
                });
            }
        }
        let reach = self.kx_reach(u_set);
        if !w_set.iter().any(|&w| reach[self.idx(w)]) {
            return Ok(T::zero());
        }
        let sources = u_set
            .iter()
            .map(|&u| (u, Some(self.excess(u).clone())))
            .collect();
        let moved = self.limited_push(sources, w_set.to_vec(), solver)?;
        self.counters.kx.bulk_pushes += 1;
        if self.checked {
            for &u in u_set {
                if !self.is_active(u) {
                    continue;
                }
                let reach = self.kx_reach(&[u]);
                if let Some(&w) = w_set.iter().find(|&&w| reach[self.idx(w)]) {
                    return Err(Error::Invariant(format!(
                        "after bulk push active apex {u} still has a residual path to {w}"
                    )));
                }
            }
        }
        Ok(moved)
    }

    /// Unlimited push from `s` to every other apex.
    fn initialize(&mut self, solver: &dyn InnerSolver<T>) -> Result<()> {
        let s = self.inst.s;
        let others: Vec<VertexId> = self
            .inst
            .apices
            .iter()
            .copied()
            .filter(|&a| a != s)
            .collect();
        self.limited_push(vec![(s, None)], others, solver)?;
        Ok(())
    }

    /// Sets `h(u)` to one more than the lowest apex reachable by a `K` arc.
    pub fn relabel(&mut self, u: VertexId) -> Result<usize> {
        if !self.is_active(u) {
            return Err(Error::NotApplicable {
                op: "relabel",
                reason: format!("apex {u} is not active"),
            });
        }
        let hu = self.height(u);
        let reach = self.kx_reach(&[u]);
        let mut lowest: Option<usize> = None;
        for (i, &r) in reach.iter().enumerate() {
            if r {
                let hb = self.labeling.get(i);
                if self.checked && hb < hu {
                    return Err(Error::NotApplicable {
                        op: "relabel",
                        reason: format!(
                            "apex {u} at {hu} has a residual K arc down to height {hb}"
                        ),
                    });
                }
                lowest = Some(lowest.map_or(hb, |l| l.min(hb)));
            }
        }
        let lowest = lowest
            .ok_or_else(|| Error::Invariant(format!("active apex {u} has no residual K arc")))?;
        let i = self.idx(u);
        let new = lowest + 1;
        self.labeling.set(i, new);
        self.relabels_at[i] += 1;
        self.counters.kx.relabels += 1;
        if new > self.labeling.ceiling() {
            return Err(Error::Invariant(format!(
                "label of apex {u} reached {new}, above 2k - 1"
            )));
        }
        Ok(new)
    }

    fn check_conservation(&self) -> Result<()> {
        let net = self.inst.net;
        let mut ex = vec![T::zero(); net.num_vertices()];
        for e in net.arc_ids() {
            if self.flow[e.0] > self.cap[e.0] {
                return Err(Error::Invariant(format!(
                    "preflow exceeds capacity on arc {e}"
                )));
            }
            if self.flow[e.0].is_positive() {
                ex[net.head(e).0] += self.flow[e.0].clone();
                ex[net.tail(e).0] -= self.flow[e.0].clone();
            }
        }
        for v in net.vertices() {
            match self.apex_index[v.0] {
                None if !ex[v.0].is_zero() => {
                    return Err(Error::Invariant(format!(
                        "non-apex vertex {v} holds excess {}",
                        ex[v.0]
                    )));
                }
                Some(i) if ex[v.0] != self.ex[i] => {
                    return Err(Error::Invariant(format!(
                        "excess record of apex {v} is stale"
                    )));
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Audits excesses, label bounds, monotonicity against `previous` and
    /// label validity over every residual `K` arc.
    pub fn check_invariants(&self, previous: Option<&[usize]>) -> Result<()> {
        self.check_conservation()?;
        let k = self.inst.apices.len();
        for (i, &a) in self.inst.apices.iter().enumerate() {
            if a != self.inst.s && self.ex[i].is_negative() {
                return Err(Error::Invariant(format!("negative excess at apex {a}")));
            }
            let h = self.labeling.get(i);
            if h > self.labeling.ceiling() {
                return Err(Error::Invariant(format!("label of apex {a} above 2k - 1")));
            }
            if previous.is_some_and(|p| h < p[i]) {
                return Err(Error::Invariant(format!("label of apex {a} decreased")));
            }
            let reach = self.kx_reach(&[a]);
            for j in (0..k).filter(|&j| reach[j]) {
                if h > self.labeling.get(j) + 1 {
                    return Err(Error::Invariant(format!(
                        "residual K arc ({a}, {}) from height {h} to {}",
                        self.inst.apices[j],
                        self.labeling.get(j)
                    )));
                }
            }
        }
        Ok(())
    }

    /// True iff `H` has no residual `s -> t` path at all.
    pub fn no_augmenting_path(&self) -> bool {
        let net = self.inst.net;
        let mut seen = vec![false; net.num_vertices()];
        let mut stack = vec![self.inst.s];
        seen[self.inst.s.0] = true;
        while let Some(v) = stack.pop() {
            if v == self.inst.t {
                return false;
            }
            for &e in net.out_arcs(v) {
                let w = net.head(e);
                if !seen[w.0] && self.residual(e).is_positive() {
                    seen[w.0] = true;
                    stack.push(w);
                }
            }
        }
        true
    }

    fn value(&self) -> T {
        self.excess(self.inst.t).clone()
    }
}

#[derive(Clone, Debug)]
pub struct ApexRun<T> {
    pub flow: ArcFunction<T>,
    pub value: T,
    pub pulses: Vec<PulseStats<T>>,
    pub counters: ApexCounters,
    pub pushed_total: T,
    /// `|V_x|`.
    pub k: usize,
}

fn terminate<T: Scalar>(
    st: KxState<'_, T>,
    pulses: Vec<PulseStats<T>>,
    checked: bool,
) -> Result<ApexRun<T>> {
    if checked {
        if st.kx_residual(st.inst.s, st.inst.t) {
            return Err(Error::Invariant(
                "K arc from s to t is still residual".into(),
            ));
        }
        if !st.no_augmenting_path() {
            return Err(Error::Invariant(
                "terminated with an augmenting path".into(),
            ));
        }
    }
    Ok(ApexRun {
        flow: st.rho(),
        value: st.value(),
        counters: st.counters,
        pushed_total: st.pushed_total,
        k: st.inst.apices.len(),
        pulses,
    })
}

/// Maximum `s`-`t` flow by batch highest-distance pulses on `K`.
pub fn apex_max_flow<T: Scalar>(
    inst: &ApexInstance<'_, T>,
    solver: &dyn InnerSolver<T>,
    opts: &PushRelabelOptions,
) -> Result<ApexRun<T>> {
    let mut st = KxState::new(inst)?;
    st.set_checked(opts.checked);
    st.initialize(solver)?;
    let k = inst.apices.len();
    let mut rng = match opts.order {
        RelabelOrder::Shuffled(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        RelabelOrder::Ascending => None,
    };
    if opts.checked {
        st.check_invariants(None)?;
    }
    let mut pulses = Vec::new();
    let mut last: Option<(usize, bool)> = None;
    loop {
        let active: Vec<VertexId> = inst
            .apices
            .iter()
            .copied()
            .filter(|&a| st.is_active(a))
            .collect();
        let Some(h_max) = active.iter().map(|&a| st.height(a)).max() else {
            break;
        };
        if let Some((prev, saturating)) = last {
            let ok = if saturating {
                h_max > prev
            } else {
                h_max < prev
            };
            if opts.checked && !ok {
                return Err(Error::Invariant(format!(
                    "h_max went from {prev} to {h_max}"
                )));
            }
        }
        if pulses.len() >= pulse_budget(k) {
            return Err(Error::Budget {
                phase: "apex pulses",
                budget: pulse_budget(k),
            });
        }
        let mut hmax_set: Vec<VertexId> = active
            .into_iter()
            .filter(|&a| st.height(a) == h_max)
            .collect();
        hmax_set.sort_unstable();
        let w_set: Vec<VertexId> = if h_max == 0 {
            Vec::new()
        } else {
            inst.apices
                .iter()
                .copied()
                .filter(|&a| st.height(a) + 1 == h_max)
                .collect()
        };
        let snapshot = opts.checked.then(|| st.labeling.heights().to_vec());
        let moved = if w_set.is_empty() {
            T::zero()
        } else {
            st.apex_bulk_push(&hmax_set, &w_set, solver)?
        };
        let mut order: Vec<VertexId> = hmax_set
            .iter()
            .copied()
            .filter(|&u| st.is_active(u))
            .collect();
        if let Some(rng) = rng.as_mut() {
            order.shuffle(rng);
        }
        for &u in &order {
            st.relabel(u)?;
        }
        if st.counters.kx.relabels > relabel_budget(k) {
            return Err(Error::Budget {
                phase: "apex relabels",
                budget: relabel_budget(k),
            });
        }
        st.counters.kx.pulses += 1;
        let saturating = !order.is_empty();
        if saturating {
            st.counters.kx.saturating_pulses += 1;
        }
        pulses.push(PulseStats {
            pulse: pulses.len() + 1,
            h_max,
            hmax_size: hmax_set.len(),
            w_size: w_set.len(),
            flow_moved: moved,
            relabels: order.len(),
            saturating,
        });
        last = Some((h_max, saturating));
        if let Some(prev) = snapshot {
            st.check_invariants(Some(&prev))?;
        }
    }
    terminate(st, pulses, opts.checked)
}

/// Push budget `8k^3` of the single-arc strategy.
pub fn fifo_push_budget(k: usize) -> usize {
    8 * k * k * k
}

/// Maximum `s`-`t` flow by FIFO push-relabel on `K`, where each push along
/// a `K` arc is one inner solve with a single source and sink.
pub fn apex_max_flow_fifo<T: Scalar>(
    inst: &ApexInstance<'_, T>,
    solver: &dyn InnerSolver<T>,
    opts: &PushRelabelOptions,
) -> Result<ApexRun<T>> {
    let mut st = KxState::new(inst)?;
    st.set_checked(opts.checked);
    st.initialize(solver)?;
    let k = inst.apices.len();
    if opts.checked {
        st.check_invariants(None)?;
    }
    let mut queue: VecDeque<VertexId> = inst
        .apices
        .iter()
        .copied()
        .filter(|&a| st.is_active(a))
        .collect();
    let mut queued = vec![false; k];
    for &a in &queue {
        queued[st.idx(a)] = true;
    }
    while let Some(u) = queue.pop_front() {
        queued[st.idx(u)] = false;
        let snapshot = opts.checked.then(|| st.labeling.heights().to_vec());
        while st.is_active(u) {
            let reach = st.kx_reach(&[u]);
            let hu = st.height(u);
            let target = inst
                .apices
                .iter()
                .copied()
                .find(|&b| reach[st.idx(b)] && st.height(b) + 1 == hu);
            match target {
                Some(b) => {
                    if st.counters.kx.pushes >= fifo_push_budget(k) {
                        return Err(Error::Budget {
                            phase: "apex pushes",
                            budget: fifo_push_budget(k),
                        });
                    }
                    let limit = st.excess(u).clone();
                    st.limited_push(vec![(u, Some(limit))], vec![b], solver)?;
                    st.counters.kx.pushes += 1;
                    if st.is_active(u) && st.kx_residual(u, b) {
                        return Err(Error::Invariant(format!(
                            "push {u} -> {b} left both active and residual"
                        )));
                    }
                    if st.is_active(b) && !queued[st.idx(b)] {
                        queued[st.idx(b)] = true;
                        queue.push_back(b);
                    }
                }
                None => {
                    st.relabel(u)?;
                    if st.counters.kx.relabels > relabel_budget(k) {
                        return Err(Error::Budget {
                            phase: "apex relabels",
                            budget: relabel_budget(k),
                        });
                    }
                }
            }
        }
        if let Some(prev) = snapshot {
            st.check_invariants(Some(&prev))?;
        }
    }
    terminate(st, Vec::new(), opts.checked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::Capacity;
    use crate::oracle::reference_max_flow;

    type Net = FlowNetwork<i64>;

    fn fin(c: i64) -> Capacity<i64> {
        Capacity::Finite(c)
    }

    fn v(i: usize) -> VertexId {
        VertexId(i)
    }

    fn checked() -> PushRelabelOptions {
        PushRelabelOptions {
            checked: true,
            ..Default::default()
        }
    }

    #[test]
    fn dinic_examples() {
        // Single path of capacity 7, limit 3.
        let mut g = Net::with_vertices(3);
        g.add_arc_pair(v(0), v(1), fin(7)).unwrap();
        g.add_arc_pair(v(1), v(2), fin(7)).unwrap();
        let residual: Vec<i64> = g.arc_ids().map(|e| *g.cap(e).finite().unwrap()).collect();
        let removed = vec![false; 3];
        let req = InnerSolverRequest {
            net: &g,
            residual: &residual,
            removed: &removed,
            sources: vec![(v(0), Some(3))],
            sinks: vec![v(2)],
        };
        let f = DinicSolver.solve(&req).unwrap();
        assert_eq!(f[ArcId(0)], 3);
        assert_eq!(f[ArcId(2)], 3);

        // Deleting the middle vertex disconnects the pair.
        let removed = vec![false, true, false];
        let req = InnerSolverRequest {
            removed: &removed,
            ..req
        };
        assert!(DinicSolver.solve(&req).unwrap().is_zero());
    }

    /// Two sources sharing a bottleneck of capacity 4.
    fn shared_bottleneck() -> Net {
        let mut g = Net::with_vertices(5);
        g.add_arc_pair(v(0), v(2), fin(5)).unwrap();
        g.add_arc_pair(v(1), v(2), fin(5)).unwrap();
        g.add_arc_pair(v(2), v(3), fin(4)).unwrap();
        g.add_arc_pair(v(3), v(4), fin(9)).unwrap();
        g
    }

    #[test]
    fn dinic_shared_bottleneck() {
        let g = shared_bottleneck();
        let residual: Vec<i64> = g.arc_ids().map(|e| *g.cap(e).finite().unwrap()).collect();
        let removed = vec![false; 5];
        let req = InnerSolverRequest {
            net: &g,
            residual: &residual,
            removed: &removed,
            sources: vec![(v(0), Some(3)), (v(1), Some(3))],
            sinks: vec![v(4)],
        };
        let f = DinicSolver.solve(&req).unwrap();
        assert_eq!(f[ArcId(6)], 4);
        assert!(f[ArcId(0)] <= 3 && f[ArcId(2)] <= 3);
    }

    #[test]
    fn kx_residual_respects_apex_interiors() {
        // 0 -> 1 -> 2 with 1 planar; 0 -> 3 -> 2 with 3 an apex.
        let mut g = Net::with_vertices(4);
        g.add_arc_pair(v(0), v(1), fin(1)).unwrap();
        g.add_arc_pair(v(1), v(2), fin(1)).unwrap();
        g.add_arc_pair(v(0), v(3), fin(1)).unwrap();
        g.add_arc_pair(v(3), v(2), fin(1)).unwrap();
        let inst = ApexInstance::new(&g, vec![v(0), v(2), v(3)], v(0), v(2)).unwrap();
        let st = KxState::new(&inst).unwrap();
        assert!(st.kx_residual(v(0), v(2)));
        assert!(st.kx_residual(v(0), v(3)));

        let mut g = Net::with_vertices(3);
        g.add_arc_pair(v(0), v(1), fin(1)).unwrap();
        g.add_arc_pair(v(1), v(2), fin(1)).unwrap();
        let inst = ApexInstance::new(&g, vec![v(0), v(1), v(2)], v(0), v(2)).unwrap();
        let st = KxState::new(&inst).unwrap();
        assert!(!st.kx_residual(v(0), v(2)));
    }

    /// Apex 1 holds excess 3 and reaches apex 3 through planar vertex 2.
    fn corridor(width: i64) -> Net {
        let mut g = Net::with_vertices(5);
        g.add_arc_pair(v(0), v(1), fin(3)).unwrap();
        g.add_arc_pair(v(1), v(2), fin(width)).unwrap();
        g.add_arc_pair(v(2), v(3), fin(width)).unwrap();
        g.add_arc_pair(v(3), v(4), fin(9)).unwrap();
        g
    }

    #[test]
    fn apex_bulk_push_corridor() {
        for (width, pushed) in [(5, 3), (2, 2)] {
            let g = corridor(width);
            let inst = ApexInstance::new(&g, vec![v(0), v(1), v(3), v(4)], v(0), v(4)).unwrap();
            let mut st = KxState::new(&inst).unwrap();
            st.set_checked(true);
            st.initialize(&DinicSolver).unwrap();
            assert_eq!(st.excess(v(1)), &3);
            st.labeling.set(st.idx(v(1)), 1);
            let moved = st.apex_bulk_push(&[v(1)], &[v(3)], &DinicSolver).unwrap();
            assert_eq!(moved, pushed);
            if width < 3 {
                assert!(!st.kx_residual(v(1), v(3)));
            } else {
                assert_eq!(st.excess(v(1)), &0);
            }
        }
    }

    #[test]
    fn two_apex_instance_matches_reference() {
        let mut g = corridor(2);
        g.add_source(v(0)).unwrap();
        g.add_sink(v(4)).unwrap();
        let inst = ApexInstance::new(&g, vec![v(0), v(4)], v(0), v(4)).unwrap();
        let want = reference_max_flow(&g, None).unwrap().value;
        let batch = apex_max_flow(&inst, &DinicSolver, &checked()).unwrap();
        let fifo = apex_max_flow_fifo(&inst, &DinicSolver, &checked()).unwrap();
        assert_eq!(batch.value, want);
        assert_eq!(fifo.value, want);
        assert_eq!(batch.counters.inner_solves, 1);
        assert_eq!(fifo.counters.inner_solves, 1);
    }

    #[test]
    fn single_corridor_through_apices() {
        let g = corridor(2);
        let inst = ApexInstance::new(&g, vec![v(0), v(1), v(3), v(4)], v(0), v(4)).unwrap();
        let batch = apex_max_flow(&inst, &DinicSolver, &checked()).unwrap();
        let fifo = apex_max_flow_fifo(&inst, &DinicSolver, &checked()).unwrap();
        assert_eq!(batch.value, 2);
        assert_eq!(fifo.value, 2);
        assert!(fifo.counters.kx.pushes >= 1);
    }
}
