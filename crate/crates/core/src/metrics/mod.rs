//! Evaluation statistics: hit ratios, hop-count ratio, eviction rate, cache
//! retention, Jain fairness, and the link-cost model for fixed placements.

mod cost;

use std::collections::HashSet;

pub use cost::{total_access_cost, Demand};

use crate::cache::LruCache;
use crate::{AsId, Error, ObjectId, Result};

/// Additive request counters for a run or a window.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counters {
    pub requests: u64,
    pub server_hits: u64,
    pub cache_hits: u64,
    pub router_hops: u64,
    pub shortest_hops: u64,
    pub as_hops: u64,
    pub evictions: u64,
}

impl std::ops::AddAssign for Counters {
    fn add_assign(&mut self, o: Counters) {
        self.requests += o.requests;
        self.server_hits += o.server_hits;
        self.cache_hits += o.cache_hits;
        self.router_hops += o.router_hops;
        self.shortest_hops += o.shortest_hops;
        self.as_hops += o.as_hops;
        self.evictions += o.evictions;
    }
}

/// `W_s / W_t`.
pub fn server_hit_ratio(c: &Counters) -> Result<f64> {
    if c.requests == 0 {
        return Err(Error::undefined("server hit ratio", "no requests"));
    }
    Ok(c.server_hits as f64 / c.requests as f64)
}

pub fn cache_hit_ratio(c: &Counters) -> Result<f64> {
    if c.requests == 0 {
        return Err(Error::undefined("cache hit ratio", "no requests"));
    }
    Ok(c.cache_hits as f64 / c.requests as f64)
}

/// Router hops travelled over shortest-path hops to the origin server.
pub fn hopcount_ratio(c: &Counters) -> Result<f64> {
    if c.shortest_hops == 0 {
        return Err(Error::undefined("hopcount ratio", "zero shortest-path hops"));
    }
    Ok(c.router_hops as f64 / c.shortest_hops as f64)
}

/// Evictions per million requests.
pub fn eviction_rate(c: &Counters) -> Result<f64> {
    if c.requests == 0 {
        return Err(Error::undefined("eviction rate", "no requests"));
    }
    Ok(1e6 * c.evictions as f64 / c.requests as f64)
}

pub fn avg_as_hops(c: &Counters) -> Result<f64> {
    if c.requests == 0 {
        return Err(Error::undefined("average AS hops", "no requests"));
    }
    Ok(c.as_hops as f64 / c.requests as f64)
}

/// Distinct ids of `observed` found in any of `caches`, over `|observed|`.
pub fn retention_ratio<'a>(
    caches: impl IntoIterator<Item = &'a LruCache>,
    observed: &HashSet<ObjectId>,
) -> Result<f64> {
    if observed.is_empty() {
        return Err(Error::undefined("retention ratio", "no observed objects"));
    }
    let cached: HashSet<ObjectId> = caches
        .into_iter()
        .flat_map(|c| c.iter())
        .filter(|id| observed.contains(id))
        .collect();
    Ok(cached.len() as f64 / observed.len() as f64)
}

/// `(Σx)² / (n·Σx²)`.
pub fn jain_index(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::undefined("jain index", "no values"));
    }
    if values.iter().any(|&v| v < 0.0) {
        return Err(Error::Validation("jain index needs non-negative values".into()));
    }
    let sum: f64 = values.iter().sum();
    let sq: f64 = values.iter().map(|v| v * v).sum();
    if sq == 0.0 {
        return Err(Error::undefined("jain index", "all values are zero"));
    }
    Ok(sum * sum / (values.len() as f64 * sq))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    /// Number of requests processed when the window closed.
    pub end: u64,
    pub counters: Counters,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsStats {
    pub as_id: AsId,
    /// `D_p`: distinct objects whose request or response crossed the AS.
    pub observed: usize,
    /// `D_q`: distinct objects of `D_p` resident in the AS's caches.
    pub retained: usize,
    /// Occupied slots per router, in router order.
    pub router_occupancy: Vec<usize>,
}

impl AsStats {
    pub fn retention(&self) -> Option<f64> {
        (self.observed > 0).then(|| self.retained as f64 / self.observed as f64)
    }

    pub fn jain(&self) -> Option<f64> {
        let values: Vec<f64> = self.router_occupancy.iter().map(|&v| v as f64).collect();
        jain_index(&values).ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ObjectPopularity {
    pub object: ObjectId,
    pub requests: u64,
    pub in_cache: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub totals: Counters,
    pub windows: Vec<Window>,
    pub per_as: Vec<AsStats>,
    /// Distinct requested objects.
    pub network_observed: usize,
    /// Distinct requested objects resident anywhere at the end of the run.
    pub network_retained: usize,
    /// Requested objects by descending request count (ties by id).
    pub popularity: Vec<ObjectPopularity>,
}

impl MetricsReport {
    pub fn empty() -> Self {
        MetricsReport {
            totals: Counters::default(),
            windows: Vec::new(),
            per_as: Vec::new(),
            network_observed: 0,
            network_retained: 0,
            popularity: Vec::new(),
        }
    }

    pub fn network_retention(&self) -> Result<f64> {
        if self.network_observed == 0 {
            return Err(Error::undefined("retention ratio", "no observed objects"));
        }
        Ok(self.network_retained as f64 / self.network_observed as f64)
    }

    /// Median per-AS retention over ASes that saw traffic.
    pub fn median_as_retention(&self) -> Option<f64> {
        let mut v: Vec<f64> = self.per_as.iter().filter_map(AsStats::retention).collect();
        median(&mut v)
    }

    pub fn mean_jain(&self) -> Option<f64> {
        let v: Vec<f64> = self.per_as.iter().filter_map(AsStats::jain).collect();
        (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
    }
}

pub fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let n = values.len();
    Some(if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    })
}
