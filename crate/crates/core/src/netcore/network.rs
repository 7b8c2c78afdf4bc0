use std::fmt;

use crate::error::{Error, Result};
use crate::netcore::rotation::{validate_rotation, EmbeddingSummary, Rotation};
use crate::scalar::{Capacity, Scalar};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub usize);

/// Arc index. Arcs are stored in pairs, so `rev(e)` is `e ^ 1`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArcId(pub usize);

impl ArcId {
    #[inline]
    pub fn rev(self) -> ArcId {
        ArcId(self.0 ^ 1)
    }

    /// True for the first arc of its pair (the one added as "forward").
    #[inline]
    pub fn is_forward(self) -> bool {
        self.0 & 1 == 0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for ArcId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcData<T> {
    pub tail: VertexId,
    pub head: VertexId,
    pub cap: Capacity<T>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Terminal {
    Source,
    Sink,
}

/// Directed multigraph with paired arcs, arc and vertex capacities, and
/// disjoint source/sink sets.
///
/// Every arc is created together with its reverse. Vertices and arcs are
/// append-only; derived networks are built as new instances.
#[derive(Clone, Debug)]
pub struct FlowNetwork<T> {
    vertex_cap: Vec<Capacity<T>>,
    role: Vec<Option<Terminal>>,
    arcs: Vec<ArcData<T>>,
    out: Vec<Vec<ArcId>>,
    sources: Vec<VertexId>,
    sinks: Vec<VertexId>,
    rotation: Option<Rotation>,
}

impl<T: Scalar> Default for FlowNetwork<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> FlowNetwork<T> {
    pub fn new() -> Self {
        FlowNetwork {
            vertex_cap: Vec::new(),
            role: Vec::new(),
            arcs: Vec::new(),
            out: Vec::new(),
            sources: Vec::new(),
            sinks: Vec::new(),
            rotation: None,
        }
    }

    /// Network with `n` vertices of infinite capacity and no arcs.
    pub fn with_vertices(n: usize) -> Self {
        let mut net = Self::new();
        for _ in 0..n {
            net.add_vertex(Capacity::Infinite);
        }
        net
    }

    pub fn add_vertex(&mut self, cap: Capacity<T>) -> VertexId {
        let v = VertexId(self.vertex_cap.len());
        self.vertex_cap.push(cap);
        self.role.push(None);
        self.out.push(Vec::new());
        v
    }

    pub fn set_vertex_cap(&mut self, v: VertexId, cap: Capacity<T>) -> Result<()> {
        self.check_vertex(v)?;
        if self.role[v.0].is_some() && !cap.is_infinite() {
            return Err(Error::FiniteTerminal(v));
        }
        self.vertex_cap[v.0] = cap;
        Ok(())
    }

    fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v.0 < self.vertex_cap.len() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    /// Adds `e = (u, v)` with capacity `cap` and its reverse with capacity 0.
    pub fn add_arc_pair(
        &mut self,
        u: VertexId,
        v: VertexId,
        cap: Capacity<T>,
    ) -> Result<(ArcId, ArcId)> {
        self.add_edge_pair(u, v, cap, Capacity::zero())
    }

    /// Adds a pair whose reverse also carries capacity, as used for
    /// undirected edges and materialized residual graphs.
    pub fn add_edge_pair(
        &mut self,
        u: VertexId,
        v: VertexId,
        cap_uv: Capacity<T>,
        cap_vu: Capacity<T>,
    ) -> Result<(ArcId, ArcId)> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        let e = ArcId(self.arcs.len());
        self.arcs.push(ArcData {
            tail: u,
            head: v,
            cap: cap_uv,
        });
        self.arcs.push(ArcData {
            tail: v,
            head: u,
            cap: cap_vu,
        });
        self.out[u.0].push(e);
        self.out[v.0].push(e.rev());
        Ok((e, e.rev()))
    }

    fn set_role(&mut self, v: VertexId, role: Terminal) -> Result<()> {
        self.check_vertex(v)?;
        if !self.vertex_cap[v.0].is_infinite() {
            return Err(Error::FiniteTerminal(v));
        }
        match self.role[v.0] {
            Some(r) if r == role => return Ok(()),
            Some(_) => return Err(Error::TerminalOverlap(v)),
            None => {}
        }
        self.role[v.0] = Some(role);
        match role {
            Terminal::Source => self.sources.push(v),
            Terminal::Sink => self.sinks.push(v),
        }
        Ok(())
    }

    pub fn add_source(&mut self, v: VertexId) -> Result<()> {
        self.set_role(v, Terminal::Source)
    }

    pub fn add_sink(&mut self, v: VertexId) -> Result<()> {
        self.set_role(v, Terminal::Sink)
    }

    /// Installs a rotation system after checking it against the arcs and
    /// Euler's formula.
    pub fn set_rotation(&mut self, rotation: Rotation) -> Result<EmbeddingSummary> {
        let summary = validate_rotation(self, &rotation)?;
        self.rotation = Some(rotation);
        Ok(summary)
    }

    pub fn clear_rotation(&mut self) {
        self.rotation = None;
    }

    pub fn rotation(&self) -> Option<&Rotation> {
        self.rotation.as_ref()
    }

    #[inline]
    pub fn num_vertices(&self) -> usize {
        self.vertex_cap.len()
    }

    #[inline]
    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertex_cap.len()).map(VertexId)
    }

    pub fn arc_ids(&self) -> impl Iterator<Item = ArcId> + '_ {
        (0..self.arcs.len()).map(ArcId)
    }

    #[inline]
    pub fn arc(&self, e: ArcId) -> &ArcData<T> {
        &self.arcs[e.0]
    }

    #[inline]
    pub fn tail(&self, e: ArcId) -> VertexId {
        self.arcs[e.0].tail
    }

    #[inline]
    pub fn head(&self, e: ArcId) -> VertexId {
        self.arcs[e.0].head
    }

    #[inline]
    pub fn cap(&self, e: ArcId) -> &Capacity<T> {
        &self.arcs[e.0].cap
    }

    #[inline]
    pub fn vertex_cap(&self, v: VertexId) -> &Capacity<T> {
        &self.vertex_cap[v.0]
    }

    /// Arcs with tail `v`. The arcs with head `v` are exactly their reverses.
    #[inline]
    pub fn out_arcs(&self, v: VertexId) -> &[ArcId] {
        &self.out[v.0]
    }

    pub fn in_arcs(&self, v: VertexId) -> impl Iterator<Item = ArcId> + '_ {
        self.out[v.0].iter().map(|e| e.rev())
    }

    /// Number of incident arc pairs.
    pub fn degree(&self, v: VertexId) -> usize {
        self.out[v.0].len()
    }

    pub fn sources(&self) -> &[VertexId] {
        &self.sources
    }

    pub fn sinks(&self) -> &[VertexId] {
        &self.sinks
    }

    pub fn role(&self, v: VertexId) -> Option<Terminal> {
        self.role[v.0]
    }

    pub fn is_source(&self, v: VertexId) -> bool {
        self.role[v.0] == Some(Terminal::Source)
    }

    pub fn is_sink(&self, v: VertexId) -> bool {
        self.role[v.0] == Some(Terminal::Sink)
    }

    pub fn is_terminal(&self, v: VertexId) -> bool {
        self.role[v.0].is_some()
    }

    pub fn first_finite_vertex_capacity(&self) -> Option<VertexId> {
        self.vertices()
            .find(|&v| !self.vertex_cap[v.0].is_infinite())
    }

    /// Sum of all finite arc capacities.
    pub fn finite_capacity_total(&self) -> T {
        self.arcs
            .iter()
            .filter_map(|a| a.cap.finite())
            .fold(T::zero(), |acc, c| acc + c.clone())
    }

    /// Largest finite arc or vertex capacity.
    pub fn max_finite_capacity(&self) -> T {
        self.arcs
            .iter()
            .map(|a| &a.cap)
            .chain(self.vertex_cap.iter())
            .filter_map(|c| c.finite())
            .fold(T::zero(), |acc, c| T::max_of(&acc, c))
    }

    /// Copy with every finite arc and vertex capacity multiplied by `factor`.
    pub fn scaled(&self, factor: &T) -> Self {
        let mut net = self.clone();
        for a in &mut net.arcs {
            a.cap = a.cap.times(factor);
        }
        for c in &mut net.vertex_cap {
            *c = c.times(factor);
        }
        net
    }
}
