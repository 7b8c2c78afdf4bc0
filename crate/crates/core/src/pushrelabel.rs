//! Push-relabel maximum flow with the batch highest-distance policy and a
//! FIFO policy.
//!
//! A pulse takes every active vertex at the highest label `h_max`, pushes
//! as much of their excess as possible to the vertices labelled
//! `h_max - 1`, and relabels whoever is still active. In checked mode the
//! state is audited after every pulse: nonnegative excess and residual
//! capacity, label validity, label bounds and label monotonicity.

use std::collections::VecDeque;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::netcore::{bounded_capacities_between, ArcFunction, ArcId, FlowNetwork, VertexId};
use crate::scalar::Scalar;

/// Height function over the vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeling {
    h: Vec<usize>,
    n: usize,
}

impl Labeling {
    /// `h(s) = n`, every other label 0.
    pub fn new(n: usize, s: usize) -> Self {
        let mut h = vec![0; n];
        h[s] = n;
        Labeling { h, n }
    }

    #[inline]
    pub fn get(&self, v: usize) -> usize {
        self.h[v]
    }

    pub fn set(&mut self, v: usize, label: usize) {
        self.h[v] = label;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn heights(&self) -> &[usize] {
        &self.h
    }

    /// Largest label any vertex may reach.
    pub fn ceiling(&self) -> usize {
        2 * self.n - 1
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Counters {
    pub pulses: usize,
    pub saturating_pulses: usize,
    pub relabels: usize,
    pub bulk_pushes: usize,
    pub pushes: usize,
}

/// One pulse of the batch policy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PulseStats<T> {
    pub pulse: usize,
    pub h_max: usize,
    pub hmax_size: usize,
    pub w_size: usize,
    pub flow_moved: T,
    pub relabels: usize,
    pub saturating: bool,
}

impl<T: fmt::Display> fmt::Display for PulseStats<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pulse={} h_max={} hmax_size={} w_size={} flow_moved={} relabels={}",
            self.pulse, self.h_max, self.hmax_size, self.w_size, self.flow_moved, self.relabels
        )
    }
}

/// Order in which the still-active vertices of `H_max` are relabelled.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum RelabelOrder {
    #[default]
    Ascending,
    Shuffled(u64),
}

#[derive(Copy, Clone, Debug, Default)]
pub struct PushRelabelOptions {
    pub checked: bool,
    pub order: RelabelOrder,
}

/// Pulse budget `4n^2 + 2n`.
pub fn pulse_budget(n: usize) -> usize {
    4 * n * n + 2 * n
}

/// Relabel budget `2n^2`.
pub fn relabel_budget(n: usize) -> usize {
    2 * n * n
}

fn invariant(msg: String) -> Error {
    Error::Invariant(msg)
}

fn not_applicable(op: &'static str, reason: String) -> Error {
    Error::NotApplicable { op, reason }
}

/// Excesses, residual capacities and labels of one run.
#[derive(Clone, Debug)]
pub struct PRState<'a, T> {
    net: &'a FlowNetwork<T>,
    s: VertexId,
    t: VertexId,
    cap: Vec<T>,
    cres: Vec<T>,
    ex: Vec<T>,
    labeling: Labeling,
    relabels_at: Vec<usize>,
    pub counters: Counters,
    checked: bool,
}

impl<'a, T: Scalar> PRState<'a, T> {
    /// Zero preflow except on the arcs leaving `s`, which are saturated.
    /// Infinite capacities are replaced by a bound above every finite cut.
    pub fn init(net: &'a FlowNetwork<T>, s: VertexId, t: VertexId) -> Result<Self> {
        if s == t {
            return Err(Error::InvalidArgument("source equals sink".into()));
        }
        for v in [s, t] {
            if v.0 >= net.num_vertices() {
                return Err(Error::UnknownVertex(v));
            }
        }
        if let Some(v) = net.first_finite_vertex_capacity() {
            return Err(Error::FiniteVertexCapacity(v));
        }
        let cap = bounded_capacities_between(net, s, t)?;
        let n = net.num_vertices();
        let mut st = PRState {
            net,
            s,
            t,
            cres: cap.clone(),
            cap,
            ex: vec![T::zero(); n],
            labeling: Labeling::new(n, s.0),
            relabels_at: vec![0; n],
            counters: Counters::default(),
            checked: false,
        };
        for &e in net.out_arcs(s) {
            let delta = st.cres[e.0].clone();
            if delta.is_positive() {
                st.move_flow(e, &delta);
            }
        }
        Ok(st)
    }

    pub fn set_checked(&mut self, checked: bool) {
        self.checked = checked;
    }

    pub fn network(&self) -> &FlowNetwork<T> {
        self.net
    }

    pub fn source(&self) -> VertexId {
        self.s
    }

    pub fn sink(&self) -> VertexId {
        self.t
    }

    pub fn excess(&self, v: VertexId) -> &T {
        &self.ex[v.0]
    }

    pub fn residual(&self, e: ArcId) -> &T {
        &self.cres[e.0]
    }

    pub fn labeling(&self) -> &Labeling {
        &self.labeling
    }

    pub fn height(&self, v: VertexId) -> usize {
        self.labeling.get(v.0)
    }

    /// Relabels performed on `v` so far.
    pub fn relabels_of(&self, v: VertexId) -> usize {
        self.relabels_at[v.0]
    }

    pub fn is_active(&self, v: VertexId) -> bool {
        v != self.s && v != self.t && self.ex[v.0].is_positive()
    }

    /// Overwrites a label. Used to build states by hand.
    pub fn set_height(&mut self, v: VertexId, h: usize) {
        self.labeling.set(v.0, h);
    }

    fn move_flow(&mut self, e: ArcId, delta: &T) {
        let (u, v) = (self.net.tail(e), self.net.head(e));
        self.cres[e.0] -= delta.clone();
        self.cres[e.rev().0] += delta.clone();
        self.ex[u.0] -= delta.clone();
        self.ex[v.0] += delta.clone();
    }

    /// Moves `min{ex(u), cres(e)}` along `e = (u, v)` and returns it.
    pub fn push(&mut self, u: VertexId, v: VertexId, e: ArcId) -> Result<T> {
        if self.net.tail(e) != u || self.net.head(e) != v {
            return Err(not_applicable(
                "push",
                format!("arc {e} does not join {u} to {v}"),
            ));
        }
        if !self.ex[u.0].is_positive() {
            return Err(not_applicable("push", format!("vertex {u} has no excess")));
        }
        if !self.cres[e.0].is_positive() {
            return Err(not_applicable("push", format!("arc {e} is not residual")));
        }
        if self.height(u) != self.height(v) + 1 {
            return Err(not_applicable(
                "push",
                format!(
                    "h({u}) = {} is not h({v}) + 1 = {}",
                    self.height(u),
                    self.height(v) + 1
                ),
            ));
        }
        let delta = T::min_of(&self.ex[u.0], &self.cres[e.0]);
        self.move_flow(e, &delta);
        self.counters.pushes += 1;
        Ok(delta)
    }

    /// Sets `h(u)` to one more than the lowest residual out-neighbour.
    pub fn relabel(&mut self, u: VertexId) -> Result<usize> {
        if !self.is_active(u) {
            return Err(not_applicable(
                "relabel",
                format!("vertex {u} is not active"),
            ));
        }
        let hu = self.height(u);
        let mut lowest: Option<usize> = None;
        for &e in self.net.out_arcs(u) {
            if self.cres[e.0].is_positive() {
                let hv = self.height(self.net.head(e));
                if hv < hu {
                    return Err(not_applicable(
                        "relabel",
                        format!("residual arc {e} leads down from h = {hu} to h = {hv}"),
                    ));
                }
                lowest = Some(lowest.map_or(hv, |l| l.min(hv)));
            }
        }
        let lowest = lowest
            .ok_or_else(|| invariant(format!("active vertex {u} has no residual outgoing arc")))?;
        let new = lowest + 1;
        self.labeling.set(u.0, new);
        self.relabels_at[u.0] += 1;
        self.counters.relabels += 1;
        if new > self.labeling.ceiling() {
            return Err(invariant(format!(
                "label of {u} reached {new}, above 2n - 1 = {}",
                self.labeling.ceiling()
            )));
        }
        if self.relabels_at[u.0] > self.labeling.ceiling() {
            return Err(Error::Budget {
                phase: "relabels of one vertex",
                budget: self.labeling.ceiling(),
            });
        }
        Ok(new)
    }

    /// Pushes excess from `U` (all at height `h`) to `W` (all at `h - 1`)
    /// along direct arcs, arc by arc, until every arc from an active member
    /// of `U` into `W` is saturated. Returns the total moved.
    pub fn bulk_push(&mut self, u_set: &[VertexId], w_set: &[VertexId]) -> Result<T> {
        let mut moved = T::zero();
        let Some(&first) = u_set.first() else {
            return Ok(moved);
        };
        let h = self.height(first);
        for &u in u_set {
            if !self.ex[u.0].is_positive() {
                return Err(not_applicable(
                    "bulk push",
                    format!("vertex {u} has no excess"),
                ));
            }
            if self.height(u) != h {
                return Err(not_applicable(
                    "bulk push",
                    format!("U is not level: h({u}) != {h}"),
                ));
            }
        }
        if w_set.is_empty() {
            return Ok(moved);
        }
        if h == 0 {
            return Err(not_applicable("bulk push", "U sits at height 0".into()));
        }
        let mut in_w = vec![false; self.net.num_vertices()];
        for &w in w_set {
            if self.height(w) + 1 != h {
                return Err(not_applicable("bulk push", format!("h({w}) != {}", h - 1)));
            }
            in_w[w.0] = true;
        }
        self.counters.bulk_pushes += 1;
        for &u in u_set {
            for &e in self.net.out_arcs(u) {
                if !self.ex[u.0].is_positive() {
                    break;
                }
                if in_w[self.net.head(e).0] && self.cres[e.0].is_positive() {
                    let delta = T::min_of(&self.ex[u.0], &self.cres[e.0]);
                    self.move_flow(e, &delta);
                    self.counters.pushes += 1;
                    moved += delta;
                }
            }
        }
        if self.checked {
            self.check_saturation(u_set, &in_w)?;
        }
        Ok(moved)
    }

    /// After a bulk push every direct arc from `U` into `W` is saturated or
    /// its tail is inactive.
    fn check_saturation(&self, u_set: &[VertexId], in_w: &[bool]) -> Result<()> {
        for &u in u_set {
            if !self.ex[u.0].is_positive() {
                continue;
            }
            for &e in self.net.out_arcs(u) {
                if in_w[self.net.head(e).0] && self.cres[e.0].is_positive() {
                    return Err(invariant(format!(
                        "after bulk push arc {e} out of active {u} is still residual"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Audits nonnegativity, label validity, the label ceiling and, given
    /// the labels from an earlier snapshot, monotonicity.
    pub fn check_invariants(&self, previous: Option<&[usize]>) -> Result<()> {
        let n = self.labeling.n();
        if self.height(self.s) != n || self.height(self.t) != 0 {
            return Err(invariant("labels of s and t moved".into()));
        }
        for v in self.net.vertices() {
            if v != self.s && self.ex[v.0].is_negative() {
                return Err(invariant(format!(
                    "negative excess {} at {v}",
                    self.ex[v.0]
                )));
            }
            if self.height(v) > self.labeling.ceiling() {
                return Err(invariant(format!("label of {v} above 2n - 1")));
            }
            if let Some(prev) = previous {
                if self.height(v) < prev[v.0] {
                    return Err(invariant(format!("label of {v} decreased")));
                }
            }
        }
        for e in self.net.arc_ids() {
            if self.cres[e.0].is_negative() {
                return Err(invariant(format!("negative residual capacity on arc {e}")));
            }
            if e.is_forward() {
                let lhs = self.cres[e.0].clone() + self.cres[e.rev().0].clone();
                let rhs = self.cap[e.0].clone() + self.cap[e.rev().0].clone();
                if lhs != rhs {
                    return Err(invariant(format!(
                        "residual pair {e} does not sum to capacity"
                    )));
                }
            }
            if self.cres[e.0].is_positive() {
                let (u, v) = (self.net.tail(e), self.net.head(e));
                if self.height(u) > self.height(v) + 1 {
                    return Err(invariant(format!(
                        "residual arc {e} from h = {} to h = {}",
                        self.height(u),
                        self.height(v)
                    )));
                }
            }
        }
        Ok(())
    }

    /// True iff no residual path leads from `s` to `t`.
    pub fn verify_no_augmenting_path(&self) -> bool {
        let mut seen = vec![false; self.net.num_vertices()];
        let mut stack = vec![self.s];
        seen[self.s.0] = true;
        while let Some(v) = stack.pop() {
            if v == self.t {
                return false;
            }
            for &e in self.net.out_arcs(v) {
                let w = self.net.head(e);
                if !seen[w.0] && self.cres[e.0].is_positive() {
                    seen[w.0] = true;
                    stack.push(w);
                }
            }
        }
        true
    }

    /// `f(e) = max{0, c(e) - cres(e)}`.
    pub fn flow(&self) -> ArcFunction<T> {
        let net: Vec<T> = self
            .cap
            .iter()
            .zip(&self.cres)
            .map(|(c, r)| c.clone() - r.clone())
            .collect();
        ArcFunction::from_net_flows(&net)
    }

    pub fn value(&self) -> T {
        self.ex[self.t.0].clone()
    }
}

#[derive(Clone, Debug)]
pub struct PushRelabelRun<T> {
    pub flow: ArcFunction<T>,
    pub value: T,
    pub pulses: Vec<PulseStats<T>>,
    pub counters: Counters,
    /// Largest number of relabels any single vertex received.
    pub max_vertex_relabels: usize,
    pub n: usize,
}

/// Maximum `s`-`t` flow by batch highest-distance pulses.
pub fn batch_highest_distance<T: Scalar>(
    net: &FlowNetwork<T>,
    s: VertexId,
    t: VertexId,
    opts: &PushRelabelOptions,
) -> Result<PushRelabelRun<T>> {
    let mut st = PRState::init(net, s, t)?;
    st.set_checked(opts.checked);
    let n = net.num_vertices();
    let mut rng = match opts.order {
        RelabelOrder::Shuffled(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        RelabelOrder::Ascending => None,
    };

    // Active vertices bucketed by label, plus a count of all vertices per
    // label for |W|.
    let ceiling = st.labeling.ceiling();
    let mut buckets: Vec<Vec<VertexId>> = vec![Vec::new(); ceiling + 2];
    let mut per_height = vec![0usize; ceiling + 2];
    for v in net.vertices() {
        per_height[st.height(v)] += 1;
        if st.is_active(v) {
            buckets[st.height(v)].push(v);
        }
    }
    let mut cursor = ceiling + 1;
    let mut pulses = Vec::new();
    let mut last: Option<(usize, bool)> = None;
    let budget = pulse_budget(n);
    if opts.checked {
        st.check_invariants(None)?;
    }

    loop {
        while cursor > 0 && buckets[cursor].is_empty() {
            cursor -= 1;
        }
        if buckets[cursor].is_empty() {
            break;
        }
        let h_max = cursor;
        if let Some((prev, saturating)) = last {
            let ok = if saturating {
                h_max > prev
            } else {
                h_max < prev
            };
            if opts.checked && !ok {
                return Err(invariant(format!(
                    "h_max went from {prev} to {h_max} after a {} pulse",
                    if saturating {
                        "saturating"
                    } else {
                        "non-saturating"
                    }
                )));
            }
        }
        if pulses.len() >= budget {
            return Err(Error::Budget {
                phase: "batch pulses",
                budget,
            });
        }
        let mut hmax_set = std::mem::take(&mut buckets[h_max]);
        hmax_set.sort_unstable();
        let w_size = if h_max > 0 { per_height[h_max - 1] } else { 0 };
        let snapshot = opts.checked.then(|| st.labeling.heights().to_vec());

        let moved = bulk_push_direct(&mut st, &hmax_set, h_max, &mut buckets)?;

        let mut order: Vec<VertexId> = hmax_set
            .iter()
            .copied()
            .filter(|&u| st.is_active(u))
            .collect();
        if let Some(rng) = rng.as_mut() {
            order.shuffle(rng);
        }
        for &u in &order {
            per_height[st.height(u)] -= 1;
            let new = st.relabel(u)?;
            per_height[new] += 1;
            buckets[new].push(u);
            cursor = cursor.max(new);
        }
        if st.counters.relabels > relabel_budget(n) {
            return Err(Error::Budget {
                phase: "relabels",
                budget: relabel_budget(n),
            });
        }
        st.counters.pulses += 1;
        let saturating = !order.is_empty();
        if saturating {
            st.counters.saturating_pulses += 1;
        }
        pulses.push(PulseStats {
            pulse: pulses.len() + 1,
            h_max,
            hmax_size: hmax_set.len(),
            w_size,
            flow_moved: moved,
            relabels: order.len(),
            saturating,
        });
        last = Some((h_max, saturating));
        if let Some(prev) = snapshot {
            st.check_invariants(Some(&prev))?;
        }
    }
    if opts.checked && !st.verify_no_augmenting_path() {
        return Err(invariant("terminated with an augmenting path".into()));
    }
    Ok(finish(st, pulses))
}

/// Bulk push from the pulse set into label `h_max - 1`, queueing vertices
/// that become active.
fn bulk_push_direct<T: Scalar>(
    st: &mut PRState<'_, T>,
    u_set: &[VertexId],
    h_max: usize,
    buckets: &mut [Vec<VertexId>],
) -> Result<T> {
    if h_max == 0 {
        return Ok(T::zero());
    }
    let w_set: Vec<VertexId> = st
        .net
        .vertices()
        .filter(|&v| st.height(v) + 1 == h_max)
        .collect();
    let before: Vec<bool> = w_set.iter().map(|&w| st.is_active(w)).collect();
    let moved = st.bulk_push(u_set, &w_set)?;
    for (&w, was) in w_set.iter().zip(before) {
        if !was && st.is_active(w) {
            buckets[h_max - 1].push(w);
        }
    }
    Ok(moved)
}

fn finish<T: Scalar>(st: PRState<'_, T>, pulses: Vec<PulseStats<T>>) -> PushRelabelRun<T> {
    PushRelabelRun {
        flow: st.flow(),
        value: st.value(),
        max_vertex_relabels: st.relabels_at.iter().copied().max().unwrap_or(0),
        counters: st.counters,
        n: st.labeling.n(),
        pulses,
    }
}

/// Maximum `s`-`t` flow with first-in first-out vertex selection.
pub fn fifo_push_relabel<T: Scalar>(
    net: &FlowNetwork<T>,
    s: VertexId,
    t: VertexId,
    opts: &PushRelabelOptions,
) -> Result<PushRelabelRun<T>> {
    let mut st = PRState::init(net, s, t)?;
    st.set_checked(opts.checked);
    let n = net.num_vertices();
    let mut queue: VecDeque<VertexId> = net.vertices().filter(|&v| st.is_active(v)).collect();
    let mut queued = vec![false; n];
    for v in &queue {
        queued[v.0] = true;
    }
    let mut current = vec![0usize; n];
    while let Some(u) = queue.pop_front() {
        queued[u.0] = false;
        let snapshot = opts.checked.then(|| st.labeling.heights().to_vec());
        while st.is_active(u) {
            let arcs = net.out_arcs(u);
            if current[u.0] == arcs.len() {
                st.relabel(u)?;
                if st.counters.relabels > relabel_budget(n) {
                    return Err(Error::Budget {
                        phase: "relabels",
                        budget: relabel_budget(n),
                    });
                }
                current[u.0] = 0;
                continue;
            }
            let e = arcs[current[u.0]];
            let v = net.head(e);
            if st.cres[e.0].is_positive() && st.height(u) == st.height(v) + 1 {
                st.push(u, v, e)?;
                if st.is_active(v) && !queued[v.0] {
                    queued[v.0] = true;
                    queue.push_back(v);
                }
            } else {
                current[u.0] += 1;
            }
        }
        if let Some(prev) = snapshot {
            st.check_invariants(Some(&prev))?;
        }
    }
    if opts.checked && !st.verify_no_augmenting_path() {
        return Err(invariant("terminated with an augmenting path".into()));
    }
    Ok(finish(st, Vec::new()))
}

/// Runs a push-relabel policy on a network with exactly one source and one
/// sink.
pub fn max_flow_single<T: Scalar>(
    net: &FlowNetwork<T>,
    fifo: bool,
    opts: &PushRelabelOptions,
) -> Result<PushRelabelRun<T>> {
    let (s, t) = match (net.sources(), net.sinks()) {
        ([s], [t]) => (*s, *t),
        _ => {
            return Err(Error::InvalidArgument(
                "push-relabel needs exactly one source and one sink".into(),
            ))
        }
    };
    if fifo {
        fifo_push_relabel(net, s, t, opts)
    } else {
        batch_highest_distance(net, s, t, opts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::Capacity;

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
    fn init_on_path() {
        let mut g = Net::with_vertices(3);
        let (sa, _) = g.add_arc_pair(v(0), v(1), fin(4)).unwrap();
        g.add_arc_pair(v(1), v(2), fin(7)).unwrap();
        let st = PRState::init(&g, v(0), v(2)).unwrap();
        assert_eq!(st.excess(v(1)), &4);
        assert_eq!(st.residual(sa), &0);
        assert_eq!(st.residual(sa.rev()), &4);
        assert_eq!(st.labeling().heights(), &[3, 0, 0]);
    }

    #[test]
    fn init_without_source_arcs_is_terminal() {
        let mut g = Net::with_vertices(3);
        g.add_arc_pair(v(1), v(2), fin(7)).unwrap();
        let st = PRState::init(&g, v(0), v(2)).unwrap();
        assert!(g.vertices().all(|x| !st.is_active(x)));
        let run = batch_highest_distance(&g, v(0), v(2), &checked()).unwrap();
        assert_eq!(run.value, 0);
        assert!(run.pulses.is_empty());
    }

    #[test]
    fn init_parallel_source_arcs() {
        let mut g = Net::with_vertices(3);
        g.add_arc_pair(v(0), v(1), fin(2)).unwrap();
        g.add_arc_pair(v(0), v(1), fin(3)).unwrap();
        g.add_arc_pair(v(1), v(2), fin(1)).unwrap();
        let st = PRState::init(&g, v(0), v(2)).unwrap();
        assert_eq!(st.excess(v(1)), &5);
    }

    #[test]
    fn init_rejects_vertex_capacities() {
        let mut g = Net::with_vertices(2);
        g.add_vertex(fin(3));
        assert!(matches!(
            PRState::init(&g, v(0), v(1)),
            Err(Error::FiniteVertexCapacity(_))
        ));
    }

    /// Vertex 1 holds `ex` and reaches vertex 2 by an arc of capacity `c`.
    fn push_state(ex: i64, c: i64) -> (Net, ArcId) {
        let mut g = Net::with_vertices(3);
        g.add_arc_pair(v(0), v(1), fin(ex)).unwrap();
        let (e, _) = g.add_arc_pair(v(1), v(2), fin(c)).unwrap();
        (g, e)
    }

    #[test]
    fn push_examples() {
        for (ex, c, delta, ex_after, cres_after) in
            [(4, 7, 4, 0, 3), (9, 7, 7, 2, 0), (5, 5, 5, 0, 0)]
        {
            let (g, e) = push_state(ex, c);
            let mut st = PRState::init(&g, v(0), v(2)).unwrap();
            st.set_height(v(1), 1);
            assert_eq!(st.push(v(1), v(2), e).unwrap(), delta);
            assert_eq!(st.excess(v(1)), &ex_after);
            assert_eq!(st.residual(e), &cres_after);
            assert!(st.residual(e) == &0 || st.excess(v(1)) == &0);
        }
    }

    #[test]
    fn push_names_failed_condition() {
        let (g, e) = push_state(4, 7);
        let mut st = PRState::init(&g, v(0), v(2)).unwrap();
        let err = st.push(v(1), v(2), e).unwrap_err();
        assert!(err.to_string().contains("h(1)"), "{err}");
        let err = st.push(v(2), v(1), e.rev()).unwrap_err();
        assert!(err.to_string().contains("no excess"), "{err}");
    }

    #[test]
    fn relabel_examples() {
        // Residual neighbours at heights 0 and 2.
        let mut g = Net::with_vertices(4);
        g.add_arc_pair(v(0), v(1), fin(3)).unwrap();
        g.add_arc_pair(v(1), v(2), fin(1)).unwrap();
        g.add_arc_pair(v(1), v(3), fin(1)).unwrap();
        let mut st = PRState::init(&g, v(0), v(3)).unwrap();
        st.set_height(v(2), 2);
        assert_eq!(st.relabel(v(1)).unwrap(), 1);

        // Only the arc back to s is residual.
        let mut g = Net::with_vertices(3);
        g.add_arc_pair(v(0), v(1), fin(3)).unwrap();
        let mut st = PRState::init(&g, v(0), v(2)).unwrap();
        st.set_height(v(1), 3);
        assert_eq!(st.relabel(v(1)).unwrap(), 4);

        // A residual arc pointing downhill blocks the relabel.
        let (g, _) = push_state(4, 7);
        let mut st = PRState::init(&g, v(0), v(2)).unwrap();
        st.set_height(v(1), 1);
        assert!(matches!(st.relabel(v(1)), Err(Error::NotApplicable { .. })));
    }

    #[test]
    fn bulk_push_examples() {
        // One unit may go either way; all excess leaves u.
        let mut g = Net::with_vertices(5);
        g.add_arc_pair(v(0), v(1), fin(2)).unwrap();
        g.add_arc_pair(v(1), v(2), fin(2)).unwrap();
        g.add_arc_pair(v(1), v(3), fin(2)).unwrap();
        let mut st = PRState::init(&g, v(0), v(4)).unwrap();
        st.set_checked(true);
        st.set_height(v(1), 1);
        assert_eq!(st.bulk_push(&[v(1)], &[v(2), v(3)]).unwrap(), 2);
        assert_eq!(st.excess(v(1)), &0);

        let (g, e) = push_state(5, 3);
        let mut st = PRState::init(&g, v(0), v(2)).unwrap();
        st.set_checked(true);
        st.set_height(v(1), 1);
        assert_eq!(st.bulk_push(&[v(1)], &[v(2)]).unwrap(), 3);
        assert_eq!(st.residual(e), &0);
        assert_eq!(st.excess(v(1)), &2);

        let before = st.clone();
        assert_eq!(st.bulk_push(&[v(1)], &[]).unwrap(), 0);
        assert_eq!(st.flow(), before.flow());
    }

    #[test]
    fn bulk_push_rejects_uneven_heights() {
        let (g, _) = push_state(5, 3);
        let mut st = PRState::init(&g, v(0), v(2)).unwrap();
        st.set_height(v(1), 2);
        assert!(st.bulk_push(&[v(1)], &[v(2)]).is_err());
    }

    fn diamond() -> Net {
        let mut g = Net::with_vertices(4);
        g.add_arc_pair(v(0), v(1), fin(1)).unwrap();
        g.add_arc_pair(v(0), v(2), fin(1)).unwrap();
        g.add_arc_pair(v(1), v(3), fin(1)).unwrap();
        g.add_arc_pair(v(2), v(3), fin(1)).unwrap();
        g
    }

    #[test]
    fn diamond_and_single_arc() {
        let g = diamond();
        assert_eq!(
            batch_highest_distance(&g, v(0), v(3), &checked())
                .unwrap()
                .value,
            2
        );
        assert_eq!(
            fifo_push_relabel(&g, v(0), v(3), &checked()).unwrap().value,
            2
        );

        let mut g = Net::with_vertices(2);
        g.add_arc_pair(v(0), v(1), fin(9)).unwrap();
        let run = batch_highest_distance(&g, v(0), v(1), &checked()).unwrap();
        assert_eq!(run.value, 9);
        assert!(run.pulses.is_empty());
        assert_eq!(
            fifo_push_relabel(&g, v(0), v(1), &checked()).unwrap().value,
            9
        );
    }

    #[test]
    fn verify_no_augmenting_path_cases() {
        let mut g = Net::with_vertices(2);
        g.add_arc_pair(v(0), v(1), fin(9)).unwrap();
        assert!(PRState::init(&g, v(0), v(1))
            .unwrap()
            .verify_no_augmenting_path());

        // Hand-built state where the source arc still has spare capacity.
        let mut g = Net::with_vertices(3);
        g.add_arc_pair(v(0), v(1), fin(3)).unwrap();
        g.add_arc_pair(v(1), v(2), fin(3)).unwrap();
        let mut st = PRState::init(&g, v(0), v(2)).unwrap();
        st.cres[0] = 1;
        assert!(!st.verify_no_augmenting_path());
    }

    #[test]
    fn shuffled_order_keeps_value() {
        let g = diamond();
        for seed in 0..5 {
            let opts = PushRelabelOptions {
                checked: true,
                order: RelabelOrder::Shuffled(seed),
            };
            assert_eq!(
                batch_highest_distance(&g, v(0), v(3), &opts).unwrap().value,
                2
            );
        }
    }

    #[test]
    fn infinite_arcs_are_bounded() {
        let mut g = Net::with_vertices(3);
        g.add_arc_pair(v(0), v(1), Capacity::Infinite).unwrap();
        g.add_arc_pair(v(1), v(2), fin(4)).unwrap();
        let run = batch_highest_distance(&g, v(0), v(2), &checked()).unwrap();
        assert_eq!(run.value, 4);
        assert_eq!(run.flow[ArcId(0)], 4);

        let mut g = Net::with_vertices(2);
        g.add_arc_pair(v(0), v(1), Capacity::Infinite).unwrap();
        assert!(matches!(
            batch_highest_distance(&g, v(0), v(1), &checked()),
            Err(Error::Unbounded(_))
        ));
    }
}
