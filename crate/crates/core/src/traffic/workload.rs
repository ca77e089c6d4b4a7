use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use super::ZmSampler;
use crate::topology::Topology;
use crate::{Error, ObjectId, Result, RouterId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RequestEvent {
    pub seq: u64,
    pub source_router: RouterId,
    pub object: ObjectId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceStrategy {
    /// Every router has clients attached.
    Uniform,
    /// A fixed, seeded subset of this many routers issues all requests.
    Subset(usize),
}

/// Lazily generated request stream.
#[derive(Debug, Clone)]
pub struct Workload {
    remaining: u64,
    next_seq: u64,
    sources: Vec<RouterId>,
    sampler: ZmSampler,
    rng: ChaCha8Rng,
}

impl Iterator for Workload {
    type Item = RequestEvent;

    fn next(&mut self) -> Option<RequestEvent> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let seq = self.next_seq;
        self.next_seq += 1;
        let source_router = self.sources[self.rng.gen_range(0..self.sources.len())];
        Some(RequestEvent {
            seq,
            source_router,
            object: self.sampler.sample(),
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining as usize, Some(self.remaining as usize))
    }
}

pub fn generate_workload(
    n_requests: u64,
    topology: &Topology,
    sampler: ZmSampler,
    strategy: SourceStrategy,
    seed: u64,
) -> Result<Workload> {
    if sampler.population() > topology.population() {
        return Err(Error::Validation(format!(
            "sampler population {} exceeds the topology's id space {}",
            sampler.population(),
            topology.population()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sources: Vec<RouterId> = topology.routers().iter().map(|r| r.id).collect();
    if let SourceStrategy::Subset(k) = strategy {
        if k == 0 || k > sources.len() {
            return Err(Error::Validation(format!(
                "source subset size {k} outside [1, {}]",
                sources.len()
            )));
        }
        sources.shuffle(&mut rng);
        sources.truncate(k);
        sources.sort();
    }
    Ok(Workload {
        remaining: n_requests,
        next_seq: 0,
        sources,
        sampler,
        rng,
    })
}

pub const TRACE_HEADER: &str = "seq,source_router,object_id";

pub fn write_trace(events: &[RequestEvent]) -> String {
    let mut out = String::with_capacity(events.len() * 16);
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for e in events {
        let _ = writeln!(out, "{},{},{}", e.seq, e.source_router, e.object);
    }
    out
}

pub fn read_trace(text: &str) -> Result<Vec<RequestEvent>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == TRACE_HEADER => {}
        _ => return Err(Error::parse(1, format!("expected header {TRACE_HEADER:?}"))),
    }
    let mut out = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let nums: Vec<u64> = line
            .split(',')
            .map(|f| f.trim().parse().map_err(|_| Error::parse(idx + 1, format!("bad integer {f:?}"))))
            .collect::<Result<_>>()?;
        let [seq, router, object] = nums[..] else {
            return Err(Error::parse(idx + 1, "expected 3 columns"));
        };
        if let Some(prev) = out.last().map(|e: &RequestEvent| e.seq) {
            if seq <= prev {
                return Err(Error::parse(idx + 1, "trace must be sorted by seq"));
            }
        }
        out.push(RequestEvent {
            seq,
            source_router: RouterId(router as u32),
            object: ObjectId(object),
        });
    }
    Ok(out)
}

/// Hex SHA-256 of the trace's CSV encoding.
pub fn trace_hash(events: &[RequestEvent]) -> String {
    let digest = Sha256::digest(write_trace(events).as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}
