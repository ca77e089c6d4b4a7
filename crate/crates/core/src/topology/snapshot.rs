//! Line-oriented topology snapshots.
//!
//! ```text
//! # icncache topology v1
//! [AS]
//! <as_id> <label>
//! [ROUTER]
//! <router_id> <as_id> <capacity> <border:0|1>
//! [LINK]
//! <router_a> <router_b>
//! [SERVER]
//! <lo> <hi> <router_id>
//! ```
//!
//! Ids in `[AS]` and `[ROUTER]` must be dense and listed in order. Links are
//! undirected, written once with `router_a < router_b`. Server ranges are
//! inclusive and must tile `[0, n_p)`.

use std::fmt::Write as _;

use super::{Server, Topology, TopologyParts};
use crate::{AsId, Error, ObjectId, Result, RouterId};

const HEADER: &str = "# icncache topology v1";

pub fn write_snapshot(topology: &Topology) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{HEADER}");
    out.push_str("[AS]\n");
    for a in topology.ases() {
        let _ = writeln!(out, "{} {}", a.id, a.label);
    }
    out.push_str("[ROUTER]\n");
    for r in topology.routers() {
        let _ = writeln!(out, "{} {} {} {}", r.id, r.as_id, r.capacity, u8::from(r.border));
    }
    out.push_str("[LINK]\n");
    for (u, v) in topology.router_graph().edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out.push_str("[SERVER]\n");
    for s in topology.servers() {
        let _ = writeln!(out, "{} {} {}", s.lo, s.hi, s.router);
    }
    out
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    As,
    Router,
    Link,
    Server,
}

fn fields<const N: usize>(line: &str, line_no: usize) -> Result<[u64; N]> {
    let parts: Vec<&str> = line.split_whitespace().collect();
    if parts.len() != N {
        return Err(Error::parse(line_no, format!("expected {N} fields, found {}", parts.len())));
    }
    let mut out = [0u64; N];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p
            .parse()
            .map_err(|_| Error::parse(line_no, format!("bad integer {p:?}")))?;
    }
    Ok(out)
}

pub fn read_snapshot(text: &str) -> Result<Topology> {
    let mut parts = TopologyParts::default();
    let mut section = Section::None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        section = match line {
            "[AS]" => Section::As,
            "[ROUTER]" => Section::Router,
            "[LINK]" => Section::Link,
            "[SERVER]" => Section::Server,
            _ => {
                match section {
                    Section::None => return Err(Error::parse(line_no, "data before first section")),
                    Section::As => {
                        let [id, label] = fields(line, line_no)?;
                        if id as usize != parts.as_labels.len() {
                            return Err(Error::parse(line_no, format!("AS id {id} out of order")));
                        }
                        parts.as_labels.push(label);
                    }
                    Section::Router => {
                        let [id, as_id, cap, border] = fields(line, line_no)?;
                        if id as usize != parts.routers.len() {
                            return Err(Error::parse(line_no, format!("router id {id} out of order")));
                        }
                        if border > 1 {
                            return Err(Error::parse(line_no, "border flag must be 0 or 1"));
                        }
                        parts.routers.push((AsId(as_id as u32), cap as usize, border == 1));
                    }
                    Section::Link => {
                        let [a, b] = fields(line, line_no)?;
                        parts.links.push((RouterId(a as u32), RouterId(b as u32)));
                    }
                    Section::Server => {
                        let [lo, hi, router] = fields(line, line_no)?;
                        parts.servers.push(Server {
                            lo: ObjectId(lo),
                            hi: ObjectId(hi),
                            router: RouterId(router as u32),
                        });
                    }
                }
                section
            }
        };
    }
    parts.build()
}
