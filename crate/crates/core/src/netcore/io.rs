//! Line-oriented instance format.
//!
//! ```text
//! c comment
//! p vcap <n> <m> <k_s> <k_t>
//! v <id> <cap|inf>
//! a <id> <tail> <head> <cap|inf> [<reverse cap|inf>]
//! s <id>
//! t <id>
//! r <vertex> <arc-id> <arc-id> ...
//! ```
//!
//! Vertex and arc ids are 0-based. Undeclared vertices have infinite
//! capacity. An `r` line lists the arcs incident to a vertex in clockwise
//! order. The optional reverse capacity on an `a` line makes the arc usable
//! in both directions; it defaults to 0.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::netcore::network::{ArcId, FlowNetwork, VertexId};
use crate::netcore::rotation::Rotation;
use crate::scalar::{Capacity, Scalar};

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| perr(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| perr(line, format!("bad {what} `{tok}`")))
}

fn parse_cap<T: Scalar>(tok: Option<&str>, line: usize) -> Result<Capacity<T>> {
    let tok = tok.ok_or_else(|| perr(line, "missing capacity"))?;
    if tok == "inf" {
        return Ok(Capacity::Infinite);
    }
    let v: i64 = tok
        .parse()
        .map_err(|_| perr(line, format!("bad capacity `{tok}`")))?;
    if v < 0 {
        return Err(perr(line, format!("negative capacity {v}")));
    }
    Ok(Capacity::from_i64(v))
}

struct ArcLine<T> {
    tail: usize,
    head: usize,
    cap: Capacity<T>,
    rev_cap: Capacity<T>,
    line: usize,
}

pub fn parse_instance<T: Scalar>(text: &str) -> Result<FlowNetwork<T>> {
    let mut header: Option<(usize, usize, usize, usize)> = None;
    let mut vcaps: Vec<Option<Capacity<T>>> = Vec::new();
    let mut arcs: Vec<Option<ArcLine<T>>> = Vec::new();
    let mut sources = Vec::new();
    let mut sinks = Vec::new();
    let mut rot_lines: Vec<(usize, usize, Vec<usize>)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut toks = raw.split_whitespace();
        let Some(kind) = toks.next() else { continue };
        if kind == "c" {
            continue;
        }
        if kind != "p" && header.is_none() {
            return Err(perr(line, "expected `p vcap` header first"));
        }
        match kind {
            "p" => {
                if header.is_some() {
                    return Err(perr(line, "duplicate header"));
                }
                if toks.next() != Some("vcap") {
                    return Err(perr(line, "header must start with `p vcap`"));
                }
                let n = parse_usize(toks.next(), line, "vertex count")?;
                let m = parse_usize(toks.next(), line, "arc count")?;
                let ks = parse_usize(toks.next(), line, "source count")?;
                let kt = parse_usize(toks.next(), line, "sink count")?;
                header = Some((n, m, ks, kt));
                vcaps = (0..n).map(|_| None).collect();
                arcs = (0..m).map(|_| None).collect();
            }
            "v" => {
                let id = parse_usize(toks.next(), line, "vertex id")?;
                let cap = parse_cap(toks.next(), line)?;
                let slot = vcaps
                    .get_mut(id)
                    .ok_or_else(|| perr(line, format!("vertex {id} out of range")))?;
                if slot.is_some() {
                    return Err(perr(line, format!("vertex {id} declared twice")));
                }
                *slot = Some(cap);
            }
            "a" => {
                let id = parse_usize(toks.next(), line, "arc id")?;
                let tail = parse_usize(toks.next(), line, "tail")?;
                let head = parse_usize(toks.next(), line, "head")?;
                let cap = parse_cap(toks.next(), line)?;
                let rev_cap = match toks.next() {
                    Some(tok) => parse_cap(Some(tok), line)?,
                    None => Capacity::zero(),
                };
                let slot = arcs
                    .get_mut(id)
                    .ok_or_else(|| perr(line, format!("arc {id} out of range")))?;
                if slot.is_some() {
                    return Err(perr(line, format!("arc {id} declared twice")));
                }
                *slot = Some(ArcLine {
                    tail,
                    head,
                    cap,
                    rev_cap,
                    line,
                });
            }
            "s" => sources.push((parse_usize(toks.next(), line, "source id")?, line)),
            "t" => sinks.push((parse_usize(toks.next(), line, "sink id")?, line)),
            "r" => {
                let v = parse_usize(toks.next(), line, "vertex id")?;
                let ids = toks
                    .by_ref()
                    .map(|t| {
                        t.parse()
                            .map_err(|_| perr(line, format!("bad arc id `{t}`")))
                    })
                    .collect::<Result<Vec<usize>>>()?;
                rot_lines.push((v, line, ids));
                continue;
            }
            other => return Err(perr(line, format!("unknown line type `{other}`"))),
        }
        if let Some(extra) = toks.next() {
            return Err(perr(line, format!("unexpected token `{extra}`")));
        }
    }

    let (n, _, ks, kt) = header.ok_or_else(|| perr(0, "missing `p vcap` header"))?;
    let mut net = FlowNetwork::new();
    for cap in vcaps {
        net.add_vertex(cap.unwrap_or(Capacity::Infinite));
    }
    for (id, a) in arcs.into_iter().enumerate() {
        let a = a.ok_or_else(|| perr(0, format!("arc {id} not declared")))?;
        if a.tail >= n || a.head >= n {
            return Err(perr(a.line, "arc endpoint out of range"));
        }
        net.add_edge_pair(VertexId(a.tail), VertexId(a.head), a.cap, a.rev_cap)
            .map_err(|e| perr(a.line, e.to_string()))?;
    }
    if sources.len() != ks || sinks.len() != kt {
        return Err(perr(
            0,
            format!(
                "header declares {ks} sources and {kt} sinks, found {} and {}",
                sources.len(),
                sinks.len()
            ),
        ));
    }
    for (v, line) in sources {
        net.add_source(VertexId(v))
            .map_err(|e| perr(line, e.to_string()))?;
    }
    for (v, line) in sinks {
        net.add_sink(VertexId(v))
            .map_err(|e| perr(line, e.to_string()))?;
    }
    if !rot_lines.is_empty() {
        let mut rot = Rotation::new(n);
        for (v, line, ids) in rot_lines {
            if v >= n {
                return Err(perr(line, format!("vertex {v} out of range")));
            }
            if rot.is_embedded(VertexId(v)) {
                return Err(perr(line, format!("rotation for vertex {v} given twice")));
            }
            let mut darts = Vec::with_capacity(ids.len());
            for id in ids {
                let e = ArcId(2 * id);
                if e.0 >= net.num_arcs() {
                    return Err(perr(line, format!("arc {id} out of range")));
                }
                if net.tail(e) == VertexId(v) {
                    darts.push(e);
                } else if net.head(e) == VertexId(v) {
                    darts.push(e.rev());
                } else {
                    return Err(perr(
                        line,
                        format!("arc {id} is not incident to vertex {v}"),
                    ));
                }
            }
            rot.set(VertexId(v), darts);
        }
        net.set_rotation(rot).map_err(|e| perr(0, e.to_string()))?;
    }
    Ok(net)
}

fn cap_str<T: Scalar>(c: &Capacity<T>) -> String {
    c.to_string()
}

/// Writes `net` in the instance format. Reverse capacities are emitted only
/// when nonzero, so a network read from a file round-trips byte for byte.
pub fn write_instance<T: Scalar>(net: &FlowNetwork<T>) -> String {
    let mut out = String::new();
    let m = net.num_arcs() / 2;
    let _ = writeln!(
        out,
        "p vcap {} {} {} {}",
        net.num_vertices(),
        m,
        net.sources().len(),
        net.sinks().len()
    );
    for v in net.vertices() {
        let _ = writeln!(out, "v {} {}", v, cap_str(net.vertex_cap(v)));
    }
    for i in 0..m {
        let e = ArcId(2 * i);
        let _ = write!(
            out,
            "a {} {} {} {}",
            i,
            net.tail(e),
            net.head(e),
            cap_str(net.cap(e))
        );
        if !net.cap(e.rev()).is_zero() {
            let _ = write!(out, " {}", cap_str(net.cap(e.rev())));
        }
        out.push('\n');
    }
    for s in net.sources() {
        let _ = writeln!(out, "s {s}");
    }
    for t in net.sinks() {
        let _ = writeln!(out, "t {t}");
    }
    if let Some(rot) = net.rotation() {
        for v in net.vertices() {
            if let Some(ord) = rot.get(v) {
                let _ = write!(out, "r {v}");
                for d in ord {
                    let _ = write!(out, " {}", d.0 / 2);
                }
                out.push('\n');
            }
        }
    }
    out
}
