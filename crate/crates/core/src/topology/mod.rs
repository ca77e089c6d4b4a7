//! Two-level topologies: an AS graph whose nodes each hold a connected
//! router graph, border routers pinned to AS links, and authoritative servers
//! for contiguous slices of the object-id space.

mod aslinks;
mod generate;
mod snapshot;

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use aslinks::{parse_as_links, AsGraph};
pub use generate::{generate_ba, generate_waxman, WaxmanGraph, WaxmanParams};
pub use snapshot::{read_snapshot, write_snapshot};

use crate::graph::Graph;
use crate::{AsId, Error, ObjectId, Result, RouterId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Router {
    pub id: RouterId,
    pub as_id: AsId,
    /// Position of this router inside its AS (index into `AutonomousSystem::routers`).
    pub local: usize,
    pub capacity: usize,
    pub border: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutonomousSystem {
    pub id: AsId,
    /// Original AS number (dense index when generated).
    pub label: u64,
    pub routers: Vec<RouterId>,
    pub border_routers: Vec<RouterId>,
    /// Intra-AS links over local router indices.
    pub links: Graph,
    /// Sum of the router capacities.
    pub capacity: usize,
}

/// Authoritative server for the inclusive id slice `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Server {
    pub lo: ObjectId,
    pub hi: ObjectId,
    pub router: RouterId,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    ases: Vec<AutonomousSystem>,
    routers: Vec<Router>,
    as_graph: Graph,
    router_graph: Graph,
    /// `(local AS, neighbour AS)` → border router of the local AS on that link.
    peering: HashMap<(AsId, AsId), RouterId>,
    servers: Vec<Server>,
}

/// Raw pieces of a topology; `build` validates and indexes them.
#[derive(Debug, Clone, Default)]
pub struct TopologyParts {
    pub as_labels: Vec<u64>,
    /// `(as, capacity, border)` per router, indexed by router id.
    pub routers: Vec<(AsId, usize, bool)>,
    pub links: Vec<(RouterId, RouterId)>,
    pub servers: Vec<Server>,
}

impl TopologyParts {
    pub fn build(self) -> Result<Topology> {
        let TopologyParts {
            as_labels,
            routers: router_specs,
            links,
            mut servers,
        } = self;
        if as_labels.is_empty() {
            return Err(Error::Validation("topology has no AS".into()));
        }

        let mut ases: Vec<AutonomousSystem> = as_labels
            .iter()
            .enumerate()
            .map(|(i, &label)| AutonomousSystem {
                id: AsId(i as u32),
                label,
                routers: Vec::new(),
                border_routers: Vec::new(),
                links: Graph::default(),
                capacity: 0,
            })
            .collect();

        let mut routers = Vec::with_capacity(router_specs.len());
        for (i, &(as_id, capacity, border)) in router_specs.iter().enumerate() {
            let id = RouterId(i as u32);
            let asys = ases
                .get_mut(as_id.index())
                .ok_or_else(|| Error::Validation(format!("router {id} references unknown AS {as_id}")))?;
            let local = asys.routers.len();
            asys.routers.push(id);
            asys.links.add_node();
            asys.capacity += capacity;
            if border {
                asys.border_routers.push(id);
            }
            routers.push(Router {
                id,
                as_id,
                local,
                capacity,
                border,
            });
        }
        if let Some(a) = ases.iter().find(|a| a.routers.is_empty()) {
            return Err(Error::Validation(format!("AS {} has no routers", a.id)));
        }

        let mut as_graph = Graph::new(ases.len());
        let mut router_graph = Graph::new(routers.len());
        let mut peering = HashMap::new();
        for &(a, b) in &links {
            let (ra, rb) = match (routers.get(a.index()), routers.get(b.index())) {
                (Some(ra), Some(rb)) => (ra, rb),
                _ => return Err(Error::Validation(format!("link {a}-{b} references unknown router"))),
            };
            if a == b {
                return Err(Error::Validation(format!("self-loop on router {a}")));
            }
            router_graph.add_edge(a.index(), b.index());
            if ra.as_id == rb.as_id {
                ases[ra.as_id.index()].links.add_edge(ra.local, rb.local);
                continue;
            }
            if !ra.border || !rb.border {
                return Err(Error::Validation(format!(
                    "inter-AS link {a}-{b} must join border routers"
                )));
            }
            if !as_graph.add_edge(ra.as_id.index(), rb.as_id.index()) {
                return Err(Error::Validation(format!(
                    "more than one link between AS {} and AS {}",
                    ra.as_id, rb.as_id
                )));
            }
            peering.insert((ra.as_id, rb.as_id), a);
            peering.insert((rb.as_id, ra.as_id), b);
        }

        servers.sort_by_key(|s| s.lo);
        let topo = Topology {
            ases,
            routers,
            as_graph,
            router_graph,
            peering,
            servers,
        };
        topo.validate()?;
        Ok(topo)
    }
}

impl Topology {
    pub fn ases(&self) -> &[AutonomousSystem] {
        &self.ases
    }

    pub fn autonomous_system(&self, id: AsId) -> Result<&AutonomousSystem> {
        self.ases
            .get(id.index())
            .ok_or_else(|| Error::Lookup(format!("unknown AS {id}")))
    }

    pub fn routers(&self) -> &[Router] {
        &self.routers
    }

    pub fn router(&self, id: RouterId) -> &Router {
        &self.routers[id.index()]
    }

    pub fn as_graph(&self) -> &Graph {
        &self.as_graph
    }

    pub fn router_graph(&self) -> &Graph {
        &self.router_graph
    }

    pub fn servers(&self) -> &[Server] {
        &self.servers
    }

    /// Size of the object-id space served by this topology.
    pub fn population(&self) -> u64 {
        self.servers.last().map_or(0, |s| s.hi.0 + 1)
    }

    /// Total cache slots `n_c`.
    pub fn total_capacity(&self) -> usize {
        self.routers.iter().map(|r| r.capacity).sum()
    }

    pub fn server_for(&self, object: ObjectId) -> Option<&Server> {
        let idx = self.servers.partition_point(|s| s.hi < object);
        self.servers.get(idx).filter(|s| s.lo <= object)
    }

    /// Border router of `from` on its link towards `to`.
    pub fn border_towards(&self, from: AsId, to: AsId) -> Option<RouterId> {
        self.peering.get(&(from, to)).copied()
    }

    pub fn validate(&self) -> Result<()> {
        if !self.as_graph.is_connected() {
            return Err(Error::Validation("AS graph is disconnected".into()));
        }
        for a in &self.ases {
            if !a.links.is_connected() {
                return Err(Error::Validation(format!("router graph of AS {} is disconnected", a.id)));
            }
            if a.border_routers.is_empty() && self.as_graph.degree(a.id.index()) > 0 {
                return Err(Error::Validation(format!("AS {} has external links but no border router", a.id)));
            }
        }
        if self.servers.is_empty() {
            return Err(Error::Validation("topology has no server".into()));
        }
        let mut next = 0u64;
        for s in &self.servers {
            if s.lo.0 != next || s.hi < s.lo {
                return Err(Error::Validation(format!(
                    "server ranges must tile the id space; expected a range starting at {next}, found [{}, {}]",
                    s.lo, s.hi
                )));
            }
            if s.router.index() >= self.routers.len() {
                return Err(Error::Validation(format!("server attached to unknown router {}", s.router)));
            }
            next = s.hi.0 + 1;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HierarchyParams {
    pub routers_per_as: usize,
    pub capacity: usize,
    pub border_count: usize,
    pub waxman: WaxmanParams,
    /// Object population `n_p`, split across `servers` equal contiguous slices.
    pub population: u64,
    pub servers: usize,
    pub seed: u64,
    /// Collapse every AS to a single caching node holding the AS's summed capacity.
    pub as_level_only: bool,
}

impl Default for HierarchyParams {
    fn default() -> Self {
        HierarchyParams {
            routers_per_as: 10,
            capacity: 5,
            border_count: 2,
            waxman: WaxmanParams::default(),
            population: 2000,
            servers: 1,
            seed: 1,
            as_level_only: false,
        }
    }
}

/// Expands an AS graph into a router-level topology: a Waxman router graph
/// per AS, seeded border routers, AS links pinned to border pairs, and
/// servers attached to uniformly drawn routers.
pub fn build_hierarchy(as_graph: &AsGraph, params: &HierarchyParams) -> Result<Topology> {
    if params.border_count == 0 || params.routers_per_as < params.border_count {
        return Err(Error::Validation(format!(
            "need routers_per_as ({}) >= border_count ({}) >= 1",
            params.routers_per_as, params.border_count
        )));
    }
    if as_graph.is_empty() {
        return Err(Error::Validation("empty AS graph".into()));
    }
    if !as_graph.graph.is_connected() {
        return Err(Error::Validation("AS graph is disconnected".into()));
    }
    if params.population == 0 || params.servers == 0 || params.servers as u64 > params.population {
        return Err(Error::Validation(format!(
            "need 1 <= servers ({}) <= population ({})",
            params.servers, params.population
        )));
    }

    let (per_as, capacity, borders) = if params.as_level_only {
        (1, params.capacity * params.routers_per_as, 1)
    } else {
        (params.routers_per_as, params.capacity, params.border_count)
    };

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut parts = TopologyParts {
        as_labels: as_graph.labels.clone(),
        ..Default::default()
    };
    let mut border_sets: Vec<Vec<RouterId>> = Vec::with_capacity(as_graph.len());
    for as_idx in 0..as_graph.len() {
        let base = parts.routers.len();
        let local = generate::generate_waxman_with(per_as, params.waxman, &mut rng)?.graph;
        let mut order: Vec<usize> = (0..per_as).collect();
        order.shuffle(&mut rng);
        let mut chosen: Vec<usize> = order[..borders].to_vec();
        chosen.sort_unstable();
        for i in 0..per_as {
            parts
                .routers
                .push((AsId(as_idx as u32), capacity, chosen.binary_search(&i).is_ok()));
        }
        parts.links.extend(
            local
                .edges()
                .map(|(u, v)| (RouterId((base + u) as u32), RouterId((base + v) as u32))),
        );
        border_sets.push(chosen.iter().map(|&i| RouterId((base + i) as u32)).collect());
    }

    let border_of = |from: usize, to: usize| {
        let k = as_graph.graph.neighbors(from).binary_search(&to).unwrap();
        let set = &border_sets[from];
        set[k % set.len()]
    };
    for (a, b) in as_graph.graph.edges() {
        parts.links.push((border_of(a, b), border_of(b, a)));
    }

    let total_routers = parts.routers.len();
    let slices = params.servers as u64;
    let (base, extra) = (params.population / slices, params.population % slices);
    let mut lo = 0;
    for i in 0..slices {
        let len = base + u64::from(i < extra);
        let router = RouterId(rng.gen_range(0..total_routers) as u32);
        parts.servers.push(Server {
            lo: ObjectId(lo),
            hi: ObjectId(lo + len - 1),
            router,
        });
        lo += len;
    }

    parts.build()
}
