use crate::error::{Error, Result};
use crate::netcore::arcfn::ArcFunction;
use crate::netcore::network::{ArcId, VertexId};
use crate::scalar::Scalar;

/// Where a base arc went in a derived network.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ArcImage {
    Mapped(ArcId),
    /// Removed by the construction; carries no flow (zero-capacity stubs).
    Dropped,
}

/// Correspondence between a base network and a network derived from it.
///
/// `back` is undefined exactly on gadget-internal arcs of the derived
/// network (cycle arcs, bridges, super-terminal arcs).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetMap {
    fwd: Vec<Option<ArcImage>>,
    back: Vec<Option<ArcId>>,
    vertex_map: Vec<Vec<VertexId>>,
}

impl GadgetMap {
    pub fn new(base_vertices: usize, base_arcs: usize) -> Self {
        GadgetMap {
            fwd: vec![None; base_arcs],
            back: Vec::new(),
            vertex_map: vec![Vec::new(); base_vertices],
        }
    }

    pub fn identity(num_vertices: usize, num_arcs: usize) -> Self {
        let mut m = Self::new(num_vertices, num_arcs);
        for i in 0..num_arcs {
            m.map_arc(ArcId(i), ArcId(i));
        }
        for v in 0..num_vertices {
            m.vertex_map[v] = vec![VertexId(v)];
        }
        m
    }

    pub fn map_arc(&mut self, base: ArcId, derived: ArcId) {
        self.fwd[base.0] = Some(ArcImage::Mapped(derived));
        if self.back.len() <= derived.0 {
            self.back.resize(derived.0 + 1, None);
        }
        self.back[derived.0] = Some(base);
    }

    pub fn drop_arc(&mut self, base: ArcId) {
        self.fwd[base.0] = Some(ArcImage::Dropped);
    }

    pub fn set_vertex_image(&mut self, base: VertexId, derived: Vec<VertexId>) {
        self.vertex_map[base.0] = derived;
    }

    /// Declares the derived network's arc count so that `back` covers
    /// gadget-internal arcs appended after the last mapped one.
    pub fn set_derived_arcs(&mut self, n: usize) {
        self.back.resize(n, None);
    }

    pub fn image(&self, base: ArcId) -> Option<ArcImage> {
        self.fwd[base.0]
    }

    pub fn mapped(&self, base: ArcId) -> Option<ArcId> {
        match self.fwd[base.0] {
            Some(ArcImage::Mapped(d)) => Some(d),
            _ => None,
        }
    }

    pub fn preimage(&self, derived: ArcId) -> Option<ArcId> {
        self.back.get(derived.0).copied().flatten()
    }

    pub fn vertex_image(&self, base: VertexId) -> &[VertexId] {
        &self.vertex_map[base.0]
    }

    pub fn base_arcs(&self) -> usize {
        self.fwd.len()
    }

    pub fn derived_arcs(&self) -> usize {
        self.back.len()
    }

    /// `self` maps A to B and `next` maps B to C; the result maps A to C.
    pub fn compose(&self, next: &GadgetMap) -> GadgetMap {
        let mut out = GadgetMap::new(self.vertex_map.len(), self.fwd.len());
        out.set_derived_arcs(next.derived_arcs());
        for (i, img) in self.fwd.iter().enumerate() {
            match img {
                Some(ArcImage::Mapped(mid)) => match next.image(*mid) {
                    Some(ArcImage::Mapped(d)) => out.map_arc(ArcId(i), d),
                    Some(ArcImage::Dropped) => out.drop_arc(ArcId(i)),
                    None => {}
                },
                Some(ArcImage::Dropped) => out.drop_arc(ArcId(i)),
                None => {}
            }
        }
        for (v, mids) in self.vertex_map.iter().enumerate() {
            let mut img: Vec<VertexId> = mids
                .iter()
                .flat_map(|m| next.vertex_map.get(m.0).into_iter().flatten().copied())
                .collect();
            img.dedup();
            out.vertex_map[v] = img;
        }
        out
    }

    /// `fwd` and `back` agree wherever both are defined.
    pub fn check_consistent(&self) -> Result<()> {
        for (i, img) in self.fwd.iter().enumerate() {
            if let Some(ArcImage::Mapped(d)) = img {
                if self.preimage(*d) != Some(ArcId(i)) {
                    return Err(Error::Invariant(format!(
                        "gadget map: arc {i} maps to {d} but {d} maps back to {:?}",
                        self.preimage(*d)
                    )));
                }
            }
        }
        for (d, b) in self.back.iter().enumerate() {
            if let Some(b) = b {
                if self.mapped(*b) != Some(ArcId(d)) {
                    return Err(Error::Invariant(format!(
                        "gadget map: derived arc {d} has preimage {b} which maps elsewhere"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Transfers a base function onto the derived network; gadget-internal
    /// arcs get zero.
    pub fn lift<T: Scalar>(&self, base: &ArcFunction<T>) -> ArcFunction<T> {
        let mut out = ArcFunction::zeros(self.back.len());
        for (d, b) in self.back.iter().enumerate() {
            if let Some(b) = b {
                out.set(ArcId(d), base[*b].clone());
            }
        }
        out
    }
}
