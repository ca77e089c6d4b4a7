//! Consistent-hash ring choosing the designated router of an object inside
//! one AS.
//!
//! Keys are 64-bit FNV-1a over ASCII decimal strings, passed through the
//! SplitMix64 finalizer:
//! - an object id `n` hashes the bytes of `n` (e.g. `"42"`);
//! - virtual node `k` of router `r` hashes `"r-k"` (e.g. `"17-3"`).
//!
//! FNV-1a starts from `0xcbf29ce484222325`; for each byte it XORs the byte
//! into the state, then multiplies by `0x100000001b3` (wrapping). The
//! finalizer then computes, with wrapping arithmetic,
//!
//! ```text
//! z = h + 0x9e3779b97f4a7c15
//! z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9
//! z = (z ^ (z >> 27)) * 0x94d049bb133111eb
//! key = z ^ (z >> 31)
//! ```
//!
//! Bare FNV-1a barely moves the high bits for short strings that differ only
//! in their last digit, so consecutive ids would pile onto a few arcs.
//!
//! An object belongs to the first virtual node at or after its key, wrapping
//! at 2^64. When two virtual nodes collide the lower router id keeps the
//! point.

use std::collections::{BTreeMap, BTreeSet};

use crate::{Error, ObjectId, Result, RouterId};

pub const DEFAULT_VIRTUAL_NODES: usize = 64;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    bytes
        .iter()
        .fold(FNV_OFFSET, |h, &b| (h ^ u64::from(b)).wrapping_mul(FNV_PRIME))
}

pub fn splitmix64_finalize(h: u64) -> u64 {
    let mut z = h.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Ring position of an arbitrary byte string.
pub fn ring_hash(bytes: &[u8]) -> u64 {
    splitmix64_finalize(fnv1a64(bytes))
}

pub fn object_key(id: ObjectId) -> u64 {
    ring_hash(id.0.to_string().as_bytes())
}

fn vnode_key(router: RouterId, k: usize) -> u64 {
    ring_hash(format!("{router}-{k}").as_bytes())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashRing {
    virtual_nodes: usize,
    members: BTreeSet<RouterId>,
    points: BTreeMap<u64, RouterId>,
}

impl HashRing {
    pub fn new(routers: impl IntoIterator<Item = RouterId>, virtual_nodes: usize) -> Result<Self> {
        if virtual_nodes == 0 {
            return Err(Error::Validation("hash ring needs at least one virtual node per router".into()));
        }
        let mut ring = HashRing {
            virtual_nodes,
            members: BTreeSet::new(),
            points: BTreeMap::new(),
        };
        for r in routers {
            ring.add_router(r);
        }
        if ring.members.is_empty() {
            return Err(Error::Validation("hash ring needs at least one router".into()));
        }
        Ok(ring)
    }

    pub fn add_router(&mut self, router: RouterId) {
        if !self.members.insert(router) {
            return;
        }
        for k in 0..self.virtual_nodes {
            self.points
                .entry(vnode_key(router, k))
                .and_modify(|owner| *owner = (*owner).min(router))
                .or_insert(router);
        }
    }

    /// Ring without `router`. Only ids that mapped to `router` move.
    pub fn without_router(&self, router: RouterId) -> Result<HashRing> {
        if !self.members.contains(&router) {
            return Err(Error::Lookup(format!("router {router} is not on the ring")));
        }
        if self.members.len() == 1 {
            return Err(Error::Validation("cannot remove the last router from a ring".into()));
        }
        HashRing::new(
            self.members.iter().copied().filter(|&r| r != router),
            self.virtual_nodes,
        )
    }

    pub fn members(&self) -> impl Iterator<Item = RouterId> + '_ {
        self.members.iter().copied()
    }

    pub fn virtual_nodes(&self) -> usize {
        self.virtual_nodes
    }

    pub fn locate(&self, id: ObjectId) -> RouterId {
        let key = object_key(id);
        self.points
            .range(key..)
            .next()
            .or_else(|| self.points.iter().next())
            .map(|(_, &r)| r)
            .expect("ring is never empty")
    }
}
