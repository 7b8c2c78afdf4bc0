//! Rotation systems: a clockwise cyclic order of outgoing darts per
//! embedded vertex, validated by tracing faces and checking Euler's
//! formula per connected component.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::netcore::network::{ArcId, FlowNetwork, VertexId};
use crate::scalar::Scalar;

/// Per-vertex clockwise order of outgoing arcs (darts).
///
/// Vertices without an order (apices) are outside the embedded part; an
/// arc is embedded iff both endpoints are.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Rotation {
    order: Vec<Option<Vec<ArcId>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingSummary {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub components: usize,
}

impl Rotation {
    pub fn new(num_vertices: usize) -> Self {
        Rotation {
            order: vec![None; num_vertices],
        }
    }

    pub fn set(&mut self, v: VertexId, darts: Vec<ArcId>) {
        if self.order.len() <= v.0 {
            self.order.resize(v.0 + 1, None);
        }
        self.order[v.0] = Some(darts);
    }

    pub fn get(&self, v: VertexId) -> Option<&[ArcId]> {
        self.order.get(v.0).and_then(|o| o.as_deref())
    }

    pub fn is_embedded(&self, v: VertexId) -> bool {
        self.get(v).is_some()
    }

    /// Pads with unembedded entries up to `n` vertices.
    pub fn extend_to(&mut self, n: usize) {
        if self.order.len() < n {
            self.order.resize(n, None);
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Keeps only the listed vertices embedded, dropping darts to removed
    /// vertices. Restricting a planar embedding stays planar.
    pub fn restricted<T: Scalar>(&self, net: &FlowNetwork<T>, keep: &[bool]) -> Rotation {
        let mut out = Rotation::new(self.order.len());
        for (v, ord) in self.order.iter().enumerate() {
            if let Some(ord) = ord {
                if keep[v] {
                    let darts = ord
                        .iter()
                        .copied()
                        .filter(|&d| keep[net.head(d).0])
                        .collect();
                    out.order[v] = Some(darts);
                }
            }
        }
        out
    }
}

fn embedded_darts<T: Scalar>(net: &FlowNetwork<T>, rot: &Rotation, v: VertexId) -> Vec<ArcId> {
    net.out_arcs(v)
        .iter()
        .copied()
        .filter(|&e| rot.is_embedded(net.head(e)))
        .collect()
}

/// Orbits of the face permutation `d -> succ(rev(d))`.
pub fn trace_faces<T: Scalar>(net: &FlowNetwork<T>, rot: &Rotation) -> Vec<Vec<ArcId>> {
    let mut succ = vec![None; net.num_arcs()];
    for v in net.vertices() {
        if let Some(ord) = rot.get(v) {
            for (i, &d) in ord.iter().enumerate() {
                succ[d.0] = Some(ord[(i + 1) % ord.len()]);
            }
        }
    }
    let mut seen = vec![false; net.num_arcs()];
    let mut faces = Vec::new();
    for start in net.arc_ids() {
        if seen[start.0] || succ[start.0].is_none() {
            continue;
        }
        let mut face = Vec::new();
        let mut d = start;
        while !seen[d.0] {
            seen[d.0] = true;
            face.push(d);
            d = succ[d.rev().0].expect("embedded dart without successor");
        }
        faces.push(face);
    }
    faces
}

pub fn validate_rotation<T: Scalar>(
    net: &FlowNetwork<T>,
    rot: &Rotation,
) -> Result<EmbeddingSummary> {
    if rot.len() > net.num_vertices() {
        return Err(Error::Rotation(format!(
            "rotation lists {} vertices, network has {}",
            rot.len(),
            net.num_vertices()
        )));
    }
    for v in net.vertices() {
        let Some(ord) = rot.get(v) else { continue };
        let mut seen = HashSet::new();
        for &d in ord {
            if d.0 >= net.num_arcs() {
                return Err(Error::Rotation(format!("vertex {v}: unknown arc {d}")));
            }
            if net.tail(d) != v {
                return Err(Error::Rotation(format!(
                    "vertex {v}: arc {d} is not incident"
                )));
            }
            if !seen.insert(d) {
                return Err(Error::Rotation(format!("vertex {v}: arc {d} listed twice")));
            }
        }
        let expected = embedded_darts(net, rot, v);
        if expected.len() != ord.len() || expected.iter().any(|d| !seen.contains(d)) {
            return Err(Error::Rotation(format!(
                "vertex {v}: rotation must list exactly its {} embedded incident arcs",
                expected.len()
            )));
        }
    }

    // Union-find over embedded vertices.
    let n = net.num_vertices();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut edges = 0usize;
    for e in net.arc_ids().filter(|e| e.is_forward()) {
        let (u, v) = (net.tail(e), net.head(e));
        if rot.is_embedded(u) && rot.is_embedded(v) {
            edges += 1;
            let (a, b) = (find(&mut parent, u.0), find(&mut parent, v.0));
            parent[a] = b;
        }
    }

    let embedded: Vec<VertexId> = net.vertices().filter(|&v| rot.is_embedded(v)).collect();
    let mut comp_vertices = vec![0i64; n];
    let mut comp_edges = vec![0i64; n];
    let mut comp_faces = vec![0i64; n];
    for &v in &embedded {
        let r = find(&mut parent, v.0);
        comp_vertices[r] += 1;
    }
    for e in net.arc_ids().filter(|e| e.is_forward()) {
        let (u, v) = (net.tail(e), net.head(e));
        if rot.is_embedded(u) && rot.is_embedded(v) {
            let r = find(&mut parent, u.0);
            comp_edges[r] += 1;
        }
    }
    let faces = trace_faces(net, rot);
    for face in &faces {
        let r = find(&mut parent, net.tail(face[0]).0);
        comp_faces[r] += 1;
    }
    let mut components = 0;
    let mut total_faces = 0;
    for &v in &embedded {
        if find(&mut parent, v.0) != v.0 {
            continue;
        }
        components += 1;
        // An isolated vertex has no darts but bounds one face.
        let f = if comp_edges[v.0] == 0 {
            1
        } else {
            comp_faces[v.0]
        };
        total_faces += f as usize;
        let chi = comp_vertices[v.0] - comp_edges[v.0] + f;
        if chi != 2 {
            return Err(Error::Rotation(format!(
                "component of vertex {v}: V - E + F = {} - {} + {} = {chi}, expected 2",
                comp_vertices[v.0], comp_edges[v.0], f
            )));
        }
    }
    Ok(EmbeddingSummary {
        vertices: embedded.len(),
        edges,
        faces: total_faces,
        components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Capacity;

    type Net = FlowNetwork<i64>;

    /// K4 drawn with vertex 3 in the middle of triangle 0-1-2.
    fn k4() -> (Net, Rotation) {
        let mut net = Net::with_vertices(4);
        let mut arc = |u: usize, v: usize| {
            net.add_arc_pair(VertexId(u), VertexId(v), Capacity::Finite(1))
                .unwrap()
                .0
        };
        let a01 = arc(0, 1);
        let a12 = arc(1, 2);
        let a20 = arc(2, 0);
        let a03 = arc(0, 3);
        let a13 = arc(1, 3);
        let a23 = arc(2, 3);
        // Coordinates: 0=(0,0), 1=(2,0), 2=(1,2), 3=(1,1) (y up); clockwise
        // is decreasing angle.
        let mut rot = Rotation::new(4);
        rot.set(VertexId(0), vec![a20.rev(), a03, a01]);
        rot.set(VertexId(1), vec![a01.rev(), a13, a12]);
        rot.set(VertexId(2), vec![a12.rev(), a23, a20]);
        rot.set(VertexId(3), vec![a23.rev(), a13.rev(), a03.rev()]);
        (net, rot)
    }

    #[test]
    fn k4_drawing_is_planar() {
        let (net, rot) = k4();
        let s = validate_rotation(&net, &rot).unwrap();
        assert_eq!((s.vertices, s.edges, s.faces, s.components), (4, 6, 4, 1));
    }

    #[test]
    fn k4_with_swapped_pair_is_rejected() {
        let (net, rot) = k4();
        let mut bad = rot.clone();
        let mut ord = rot.get(VertexId(3)).unwrap().to_vec();
        ord.swap(0, 1);
        bad.set(VertexId(3), ord);
        let err = validate_rotation(&net, &bad).unwrap_err();
        assert!(matches!(err, Error::Rotation(_)));
        assert_ne!(trace_faces(&net, &bad).len(), 4);
    }

    #[test]
    fn rotation_must_cover_incident_arcs() {
        let (net, rot) = k4();
        let mut bad = rot.clone();
        let mut ord = rot.get(VertexId(0)).unwrap().to_vec();
        ord.pop();
        bad.set(VertexId(0), ord);
        assert!(validate_rotation(&net, &bad).is_err());
    }

    #[test]
    fn isolated_vertex_and_unembedded_apex() {
        let mut net = Net::with_vertices(3);
        let (e, _) = net
            .add_arc_pair(VertexId(0), VertexId(2), Capacity::Infinite)
            .unwrap();
        let _ = e;
        let mut rot = Rotation::new(3);
        rot.set(VertexId(0), vec![]);
        rot.set(VertexId(1), vec![]);
        // Vertex 2 is an apex: the arc 0-2 is not embedded.
        let s = validate_rotation(&net, &rot).unwrap();
        assert_eq!(s.components, 2);
        assert_eq!(s.faces, 2);
    }
}
