//! Seeded random planar instances: a grid with non-crossing diagonals.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::netcore::{ArcId, Capacity, FlowNetwork, Rotation, VertexId};
use crate::scalar::Scalar;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct GridParams {
    pub width: usize,
    pub height: usize,
    /// Number of terminals; the first `k - k/2` are sources.
    pub k: usize,
    pub max_cap: i64,
    pub seed: u64,
}

impl GridParams {
    pub fn validate(&self) -> Result<()> {
        if self.width < 2 || self.height < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid {}x{} is smaller than 2x2",
                self.width, self.height
            )));
        }
        if !(2..=8).contains(&self.k) {
            return Err(Error::InvalidArgument(format!(
                "k = {} is outside 2..=8",
                self.k
            )));
        }
        if self.k > self.width * self.height {
            return Err(Error::InvalidArgument(format!(
                "k = {} exceeds the vertex count",
                self.k
            )));
        }
        if self.max_cap < 1 {
            return Err(Error::InvalidArgument(
                "maximum capacity must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Grid graph where each cell gets at most one diagonal. Every edge has a
/// forward capacity in `1..=C` and, half the time, a reverse capacity in
/// `1..=C` as well. About half the non-terminal vertices get a capacity in
/// `1..=C`; the rest are uncapacitated.
pub fn grid_instance<T: Scalar>(p: &GridParams) -> Result<FlowNetwork<T>> {
    p.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let (w, h) = (p.width, p.height);
    let id = |x: usize, y: usize| VertexId(y * w + x);
    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if x + 1 < w {
                edges.push((id(x, y), id(x + 1, y)));
            }
            if y + 1 < h {
                edges.push((id(x, y), id(x, y + 1)));
            }
            if x + 1 < w && y + 1 < h {
                match rng.gen_range(0..3) {
                    0 => edges.push((id(x, y), id(x + 1, y + 1))),
                    1 => edges.push((id(x + 1, y), id(x, y + 1))),
                    _ => {}
                }
            }
        }
    }

    let n = w * h;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let (sources, sinks) = order[..p.k].split_at(p.k - p.k / 2);
    let mut net = FlowNetwork::new();
    for v in 0..n {
        let terminal = order[..p.k].contains(&v);
        let cap = if !terminal && rng.gen_bool(0.5) {
            Capacity::from_i64(rng.gen_range(1..=p.max_cap))
        } else {
            Capacity::Infinite
        };
        net.add_vertex(cap);
    }
    for (u, v) in edges {
        let (u, v) = if rng.gen_bool(0.5) { (u, v) } else { (v, u) };
        let fwd = Capacity::from_i64(rng.gen_range(1..=p.max_cap));
        let rev = if rng.gen_bool(0.5) {
            Capacity::from_i64(rng.gen_range(1..=p.max_cap))
        } else {
            Capacity::zero()
        };
        net.add_edge_pair(u, v, fwd, rev)?;
    }
    for &s in sources {
        net.add_source(VertexId(s))?;
    }
    for &t in sinks {
        net.add_sink(VertexId(t))?;
    }

    let coords: Vec<(f64, f64)> = (0..n).map(|v| ((v % w) as f64, (v / w) as f64)).collect();
    embed_by_coordinates(&mut net, &coords)?;
    Ok(net)
}

/// Sets the rotation of a straight-line drawing: darts at each vertex in
/// clockwise order of their direction.
pub fn embed_by_coordinates<T: Scalar>(
    net: &mut FlowNetwork<T>,
    coords: &[(f64, f64)],
) -> Result<()> {
    if coords.len() != net.num_vertices() {
        return Err(Error::InvalidArgument(format!(
            "{} coordinates for {} vertices",
            coords.len(),
            net.num_vertices()
        )));
    }
    let mut rot = Rotation::new(net.num_vertices());
    for v in net.vertices() {
        let (x0, y0) = coords[v.0];
        let mut darts: Vec<(f64, ArcId)> = net
            .out_arcs(v)
            .iter()
            .map(|&d| {
                let (x1, y1) = coords[net.head(d).0];
                ((y1 - y0).atan2(x1 - x0), d)
            })
            .collect();
        darts.sort_by(|a, b| b.0.total_cmp(&a.0));
        rot.set(v, darts.into_iter().map(|(_, d)| d).collect());
    }
    net.set_rotation(rot)?;
    Ok(())
}
