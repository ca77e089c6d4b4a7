//! Request/response execution over a topology.
//!
//! A request follows the selected AS path. Inside each AS the designated
//! policies route ingress → designated router → egress and consult only the
//! designated router; the on-path baselines take the shortest intra-AS route
//! and consult every router. The response retraces the forward walk from the
//! serving point back to the requester, offering the object to each
//! candidate cache on the way.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cache::{should_cache, CacheContext, LruCache, PolicyConfig};
use crate::metrics::{AsStats, Counters, MetricsReport, ObjectPopularity, Window};
use crate::routing::{select_as_path, InterestRegistry, RoutingTables};
use crate::topology::Topology;
use crate::traffic::RequestEvent;
use crate::{AsId, Error, ObjectId, Result, RouterId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ServedBy {
    Server,
    Cache(RouterId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RequestOutcome {
    pub object: ObjectId,
    pub served_by: ServedBy,
    /// Router-level links travelled from the requester to the serving node.
    pub router_hops: u64,
    /// AS-level links crossed before reaching the serving node.
    pub as_hops: u64,
    /// Shortest router-level distance from the requester to the object's
    /// origin server, whatever node actually served it.
    pub shortest_router_hops: u64,
    pub evictions_caused: u64,
    pub as_path: Vec<AsId>,
}

#[derive(Debug, Clone, Copy)]
struct Step {
    router: RouterId,
    as_pos: usize,
    lookup: bool,
}

/// State of one run. Strictly sequential; owns its caches and RNG.
pub struct Simulation<'a> {
    topology: &'a Topology,
    tables: &'a RoutingTables,
    registry: &'a InterestRegistry,
    policy: PolicyConfig,
    caches: Vec<LruCache>,
    rng: ChaCha8Rng,
    avg_capacity: f64,
    distances: HashMap<RouterId, Vec<u32>>,
    window_size: u64,
    totals: Counters,
    window: Counters,
    windows: Vec<Window>,
    observed: Vec<HashSet<ObjectId>>,
    request_counts: HashMap<ObjectId, u64>,
    debug_trace: Option<String>,
    audit_every: Option<u64>,
}

impl<'a> Simulation<'a> {
    pub fn new(
        topology: &'a Topology,
        tables: &'a RoutingTables,
        registry: &'a InterestRegistry,
        policy: PolicyConfig,
        window_size: u64,
    ) -> Result<Self> {
        if window_size == 0 {
            return Err(Error::Validation("window size must be at least 1".into()));
        }
        let caches: Vec<LruCache> = topology.routers().iter().map(|r| LruCache::new(r.capacity)).collect();
        let avg_capacity = topology.total_capacity() as f64 / caches.len() as f64;
        Ok(Simulation {
            topology,
            tables,
            registry,
            policy,
            caches,
            rng: ChaCha8Rng::seed_from_u64(policy.seed),
            avg_capacity,
            distances: HashMap::new(),
            window_size,
            totals: Counters::default(),
            window: Counters::default(),
            windows: Vec::new(),
            observed: vec![HashSet::new(); topology.ases().len()],
            request_counts: HashMap::new(),
            debug_trace: None,
            audit_every: None,
        })
    }

    /// Record one `seq,object,policy,as_path,served_by,router_hops` line per request.
    pub fn enable_debug_trace(&mut self) {
        self.debug_trace.get_or_insert_with(|| "seq,object,policy,as_path,served_by,router_hops\n".into());
    }

    pub fn take_debug_trace(&mut self) -> Option<String> {
        self.debug_trace.take()
    }

    /// Check designated-router placement after every `n` requests.
    pub fn set_audit_every(&mut self, n: u64) {
        self.audit_every = (n > 0).then_some(n);
    }

    pub fn policy(&self) -> &PolicyConfig {
        &self.policy
    }

    pub fn caches(&self) -> &[LruCache] {
        &self.caches
    }

    pub fn totals(&self) -> Counters {
        self.totals
    }

    fn as_caches(&self, as_id: AsId, object: ObjectId) -> bool {
        match self.policy.kind {
            crate::cache::PolicyKind::Scene2 | crate::cache::PolicyKind::Scene3 => {
                self.policy.cache_all_ases || self.registry.covers(as_id, object)
            }
            _ => true,
        }
    }

    fn shortest_distance(&mut self, from: RouterId, to: RouterId) -> u64 {
        let graph = self.topology.router_graph();
        let dist = self.distances.entry(from).or_insert_with(|| {
            graph
                .bfs_distances(from.index())
                .into_iter()
                .map(|d| d.unwrap_or(u32::MAX))
                .collect()
        });
        u64::from(dist[to.index()])
    }

    fn forward_walk(&self, requester: RouterId, server: RouterId, ases: &[AsId], object: ObjectId) -> Result<Vec<Step>> {
        let topo = self.topology;
        let designated = self.policy.kind.is_designated();
        let last = ases.len() - 1;
        let mut seen_as = HashSet::new();
        let mut looked_up = HashSet::new();
        let mut steps: Vec<Step> = Vec::new();
        for (pos, &a) in ases.iter().enumerate() {
            let border = |other: AsId| {
                topo.border_towards(a, other)
                    .ok_or_else(|| Error::Routing(format!("no link between AS {a} and AS {other}")))
            };
            let ingress = if pos == 0 { requester } else { border(ases[pos - 1])? };
            let egress = if pos == last { server } else { border(ases[pos + 1])? };
            let first_visit = seen_as.insert(a);

            let (segment, lookup_at) = if designated && first_visit && self.as_caches(a, object) {
                let d = self.tables.designated_router(a, object)?;
                (self.tables.intra_as_route(topo, a, ingress, d, egress)?, Some(d))
            } else {
                (self.tables.intra_shortest(topo, a, ingress, egress)?, None)
            };
            for r in segment {
                let lookup = if designated {
                    Some(r) == lookup_at && looked_up.insert(r)
                } else {
                    first_visit && looked_up.insert(r)
                };
                steps.push(Step { router: r, as_pos: pos, lookup });
            }
        }
        Ok(steps)
    }

    /// Runs one request through the forward and reverse passes.
    pub fn execute_request(&mut self, event: &RequestEvent) -> Result<RequestOutcome> {
        let topo = self.topology;
        let object = event.object;
        let server = *topo
            .server_for(object)
            .ok_or_else(|| Error::Lookup(format!("object {object} has no authoritative server")))?;
        let requester = topo
            .routers()
            .get(event.source_router.index())
            .ok_or_else(|| Error::Lookup(format!("unknown source router {}", event.source_router)))?;
        let server_as = topo.router(server.router).as_id;
        let path = select_as_path(
            self.policy.kind.scenario(),
            object,
            requester.as_id,
            server_as,
            self.tables.as_routes(),
            self.registry,
        )?;
        let steps = self.forward_walk(requester.id, server.router, &path.ases, object)?;

        let mut served_idx = steps.len() - 1;
        let mut served_by = ServedBy::Server;
        for (i, s) in steps.iter().enumerate() {
            if s.lookup && self.caches[s.router.index()].lookup(object) {
                served_idx = i;
                served_by = ServedBy::Cache(s.router);
                break;
            }
        }
        let served_step = steps[served_idx];
        for pos in 0..=served_step.as_pos {
            self.observed[path.ases[pos].index()].insert(object);
        }

        // response candidates, ordered from the serving end towards the requester
        let upto = match served_by {
            ServedBy::Server => served_idx + 1,
            ServedBy::Cache(_) => served_idx,
        };
        let mut seen = HashSet::new();
        let candidates: Vec<Step> = steps[..upto]
            .iter()
            .rev()
            .filter(|s| {
                let caching = if self.policy.kind.is_designated() {
                    s.lookup
                } else {
                    self.caches[s.router.index()].capacity() > 0
                };
                caching && seen.insert(s.router)
            })
            .copied()
            .collect();

        let path_length = candidates.len();
        let mut downstream: Vec<usize> = candidates
            .iter()
            .rev()
            .scan(0usize, |acc, s| {
                *acc += self.caches[s.router.index()].capacity();
                Some(*acc)
            })
            .collect();
        downstream.reverse();

        let mut evictions = 0u64;
        for (i, s) in candidates.iter().enumerate() {
            let as_id = path.ases[s.as_pos];
            let ctx = CacheContext {
                as_is_interested: self.registry.covers(as_id, object),
                router_is_designated: self.policy.kind.is_designated() && s.lookup,
                path_position: i + 1,
                path_length,
                downstream_capacity_sum: downstream[i],
                avg_cache_size: self.avg_capacity,
            };
            if should_cache(&self.policy, &ctx, &mut self.rng)
                && self.caches[s.router.index()].insert(object).is_some()
            {
                evictions += 1;
            }
        }

        let outcome = RequestOutcome {
            object,
            served_by,
            router_hops: served_idx as u64,
            as_hops: served_step.as_pos as u64,
            shortest_router_hops: self.shortest_distance(requester.id, server.router),
            evictions_caused: evictions,
            as_path: path.ases,
        };

        if let Some(trace) = self.debug_trace.as_mut() {
            let as_path: Vec<String> = outcome.as_path.iter().map(|a| a.to_string()).collect();
            let served = match outcome.served_by {
                ServedBy::Server => "server".to_string(),
                ServedBy::Cache(r) => format!("cache:{r}"),
            };
            let _ = writeln!(
                trace,
                "{},{},{},{},{},{}",
                event.seq,
                object,
                self.policy.label(),
                as_path.join("-"),
                served,
                outcome.router_hops
            );
        }
        Ok(outcome)
    }

    /// Executes `event` and folds the outcome into the run's counters.
    pub fn process(&mut self, event: &RequestEvent) -> Result<RequestOutcome> {
        let outcome = self.execute_request(event)?;
        let c = Counters {
            requests: 1,
            server_hits: u64::from(outcome.served_by == ServedBy::Server),
            cache_hits: u64::from(outcome.served_by != ServedBy::Server),
            router_hops: outcome.router_hops,
            shortest_hops: outcome.shortest_router_hops,
            as_hops: outcome.as_hops,
            evictions: outcome.evictions_caused,
        };
        self.totals += c;
        self.window += c;
        *self.request_counts.entry(outcome.object).or_default() += 1;
        if self.window.requests == self.window_size {
            self.windows.push(Window {
                end: self.totals.requests,
                counters: std::mem::take(&mut self.window),
            });
        }
        if let Some(n) = self.audit_every {
            if self.totals.requests.is_multiple_of(n) {
                self.audit_designated()?;
            }
        }
        Ok(outcome)
    }

    pub fn run(&mut self, events: impl IntoIterator<Item = RequestEvent>) -> Result<MetricsReport> {
        for e in events {
            self.process(&e)?;
        }
        Ok(self.report())
    }

    /// Under the designated policies every cached object sits at its
    /// designated router, hence at most once per AS.
    pub fn audit_designated(&self) -> Result<()> {
        if !self.policy.kind.is_designated() {
            return Ok(());
        }
        for r in self.topology.routers() {
            for object in self.caches[r.id.index()].iter() {
                let d = self.tables.designated_router(r.as_id, object)?;
                if d != r.id {
                    return Err(Error::Validation(format!(
                        "object {object} cached at router {} but designated to {d} in AS {}",
                        r.id, r.as_id
                    )));
                }
            }
        }
        Ok(())
    }

    /// `router_id,as_id,object_id,recency_rank` rows, rank 0 = most recent.
    pub fn dump_caches(&self) -> String {
        let mut out = String::from("router_id,as_id,object_id,recency_rank\n");
        for r in self.topology.routers() {
            for (rank, object) in self.caches[r.id.index()].iter().enumerate() {
                let _ = writeln!(out, "{},{},{},{}", r.id, r.as_id, object, rank);
            }
        }
        out
    }

    pub fn report(&self) -> MetricsReport {
        let mut windows = self.windows.clone();
        if self.window.requests > 0 {
            windows.push(Window {
                end: self.totals.requests,
                counters: self.window,
            });
        }

        let per_as = self
            .topology
            .ases()
            .iter()
            .map(|a| {
                let observed = &self.observed[a.id.index()];
                let resident: HashSet<ObjectId> = a
                    .routers
                    .iter()
                    .flat_map(|r| self.caches[r.index()].iter())
                    .filter(|o| observed.contains(o))
                    .collect();
                AsStats {
                    as_id: a.id,
                    observed: observed.len(),
                    retained: resident.len(),
                    router_occupancy: a.routers.iter().map(|r| self.caches[r.index()].len()).collect(),
                }
            })
            .collect();

        let resident: HashSet<ObjectId> = self.caches.iter().flat_map(|c| c.iter()).collect();
        let mut popularity: Vec<ObjectPopularity> = self
            .request_counts
            .iter()
            .map(|(&object, &requests)| ObjectPopularity {
                object,
                requests,
                in_cache: resident.contains(&object),
            })
            .collect();
        popularity.sort_by(|a, b| b.requests.cmp(&a.requests).then(a.object.cmp(&b.object)));

        MetricsReport {
            totals: self.totals,
            windows,
            per_as,
            network_observed: self.request_counts.len(),
            network_retained: popularity.iter().filter(|p| p.in_cache).count(),
            popularity,
        }
    }
}
