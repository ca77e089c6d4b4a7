//! Path computation at both levels, AS-path selection for the three routing
//! scenarios, and designated-router resolution.

mod interest;
mod paths;
mod ring;

pub use interest::{aggregate_interest, nearest_interested_as, InterestRange, InterestRegistry, InterestStrategy};
pub use paths::{all_shortest_paths, first_shortest_path, first_shortest_path_with, shortest_path, ShortestPathTree};
pub use ring::{fnv1a64, object_key, ring_hash, splitmix64_finalize, HashRing, DEFAULT_VIRTUAL_NODES};

use std::str::FromStr;

use crate::graph::Graph;
use crate::topology::Topology;
use crate::{AsId, Error, ObjectId, Result, RouterId};

/// AS-level routing state: the AS graph plus all-pairs hop distances.
#[derive(Debug, Clone)]
pub struct AsRoutes {
    graph: Graph,
    dist: Vec<Vec<Option<u32>>>,
}

impl AsRoutes {
    pub fn new(graph: &Graph) -> Self {
        let dist = (0..graph.node_count()).map(|s| graph.bfs_distances(s)).collect();
        AsRoutes {
            graph: graph.clone(),
            dist,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn distance(&self, from: AsId, to: AsId) -> Option<u32> {
        self.dist.get(from.index())?.get(to.index()).copied().flatten()
    }

    fn check(&self, a: AsId) -> Result<()> {
        if a.index() >= self.graph.node_count() {
            return Err(Error::Lookup(format!("unknown AS {a}")));
        }
        Ok(())
    }

    fn unreachable(src: AsId, dst: AsId) -> Error {
        Error::Routing(format!("AS {dst} unreachable from AS {src}"))
    }

    /// All minimal AS paths, lexicographically ordered.
    pub fn all_shortest(&self, src: AsId, dst: AsId) -> Result<Vec<Vec<AsId>>> {
        self.check(src)?;
        self.check(dst)?;
        Ok(all_shortest_paths(&self.graph, src.index(), dst.index())?
            .into_iter()
            .map(to_as_path)
            .collect())
    }

    /// First minimal AS path under lexicographic order.
    pub fn first_shortest(&self, src: AsId, dst: AsId) -> Result<Vec<AsId>> {
        self.check(src)?;
        self.check(dst)?;
        first_shortest_path(&self.graph, &self.dist[dst.index()], src.index())
            .map(to_as_path)
            .ok_or_else(|| Self::unreachable(src, dst))
    }

    /// First minimal AS path containing an AS accepted by `wanted`.
    pub fn first_shortest_via(
        &self,
        src: AsId,
        dst: AsId,
        wanted: impl Fn(AsId) -> bool,
    ) -> Result<Option<Vec<AsId>>> {
        self.check(src)?;
        self.check(dst)?;
        if self.distance(src, dst).is_none() {
            return Err(Self::unreachable(src, dst));
        }
        Ok(
            first_shortest_path_with(&self.graph, &self.dist[dst.index()], src.index(), |v| {
                wanted(AsId(v as u32))
            })
            .map(to_as_path),
        )
    }
}

fn to_as_path(p: Vec<usize>) -> Vec<AsId> {
    p.into_iter().map(|v| AsId(v as u32)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    /// First minimal AS path.
    DefaultPath,
    /// First minimal AS path through an AS interested in the object.
    InterestedShortest,
    /// Detour through the nearest interested AS, possibly non-minimal.
    InterestedDetour,
}

/// Selected AS path. `via` is the interested AS a detour passes through.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsPath {
    pub ases: Vec<AsId>,
    pub via: Option<AsId>,
}

impl AsPath {
    pub fn hops(&self) -> usize {
        self.ases.len() - 1
    }
}

pub fn select_as_path(
    scenario: Scenario,
    object: ObjectId,
    requester: AsId,
    server: AsId,
    routes: &AsRoutes,
    registry: &InterestRegistry,
) -> Result<AsPath> {
    let default = || -> Result<AsPath> {
        Ok(AsPath {
            ases: routes.first_shortest(requester, server)?,
            via: None,
        })
    };
    match scenario {
        Scenario::DefaultPath => default(),
        Scenario::InterestedShortest => {
            match routes.first_shortest_via(requester, server, |a| registry.covers(a, object))? {
                Some(ases) => {
                    let via = ases.iter().copied().find(|&a| registry.covers(a, object));
                    Ok(AsPath { ases, via })
                }
                None => default(),
            }
        }
        Scenario::InterestedDetour => match nearest_interested_as(registry, routes, requester, object) {
            Some(via) => {
                let mut ases = routes.first_shortest(requester, via)?;
                ases.extend(routes.first_shortest(via, server)?.into_iter().skip(1));
                Ok(AsPath { ases, via: Some(via) })
            }
            None => default(),
        },
    }
}

/// How an AS picks the designated router for an id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Designation {
    /// Consistent-hash ring for every id.
    Ring,
    /// Ids inside the AS's own interest sector are split into contiguous
    /// sub-sectors, one per caching router, sized by router capacity. Other
    /// ids fall back to the ring.
    #[default]
    Sector,
}

impl Designation {
    pub fn name(self) -> &'static str {
        match self {
            Designation::Ring => "ring",
            Designation::Sector => "sector",
        }
    }
}

impl FromStr for Designation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ring" => Ok(Designation::Ring),
            "sector" => Ok(Designation::Sector),
            other => Err(Error::Config(format!("unknown designation {other:?} (expected ring or sector)"))),
        }
    }
}

#[derive(Debug, Clone)]
struct SectorMap {
    range: InterestRange,
    /// Exclusive upper offsets into the sector, one per router.
    bounds: Vec<(u64, RouterId)>,
}

impl SectorMap {
    fn new(range: InterestRange, routers: &[(RouterId, usize)]) -> Option<Self> {
        let total: u64 = routers.iter().map(|&(_, c)| c as u64).sum();
        if total == 0 {
            return None;
        }
        let len = range.len() as u128;
        let mut cum = 0u64;
        let mut bounds = Vec::new();
        for &(r, c) in routers.iter().filter(|&&(_, c)| c > 0) {
            cum += c as u64;
            bounds.push(((len * cum as u128 / total as u128) as u64, r));
        }
        Some(SectorMap { range, bounds })
    }

    fn locate(&self, id: ObjectId) -> Option<RouterId> {
        if !self.range.covers(id) {
            return None;
        }
        let offset = id.0 - self.range.lo().0;
        let i = self.bounds.partition_point(|&(end, _)| end <= offset);
        self.bounds.get(i).map(|&(_, r)| r)
    }
}

/// Immutable per-run routing tables: AS routes, per-AS shortest-path trees
/// over local router indices, one hash ring per AS and, under sector
/// designation, each interested AS's sector split.
#[derive(Debug, Clone)]
pub struct RoutingTables {
    as_routes: AsRoutes,
    intra: Vec<Vec<ShortestPathTree>>,
    rings: Vec<HashRing>,
    sectors: Vec<Option<SectorMap>>,
}

impl RoutingTables {
    pub fn new(topology: &Topology, virtual_nodes: usize) -> Result<Self> {
        let as_routes = AsRoutes::new(topology.as_graph());
        let mut intra = Vec::with_capacity(topology.ases().len());
        let mut rings = Vec::with_capacity(topology.ases().len());
        for a in topology.ases() {
            intra.push(
                (0..a.routers.len())
                    .map(|s| ShortestPathTree::dijkstra(&a.links, s))
                    .collect(),
            );
            rings.push(HashRing::new(a.routers.iter().copied(), virtual_nodes)?);
        }
        Ok(RoutingTables {
            as_routes,
            intra,
            sectors: vec![None; rings.len()],
            rings,
        })
    }

    /// Tables with the given designation; `Sector` consults `registry`.
    pub fn with_designation(
        topology: &Topology,
        virtual_nodes: usize,
        designation: Designation,
        registry: &InterestRegistry,
    ) -> Result<Self> {
        let mut tables = Self::new(topology, virtual_nodes)?;
        if designation == Designation::Sector {
            for (a, range) in registry.iter() {
                let asys = topology.autonomous_system(a)?;
                let routers: Vec<(RouterId, usize)> =
                    asys.routers.iter().map(|&r| (r, topology.router(r).capacity)).collect();
                tables.sectors[a.index()] = SectorMap::new(range, &routers);
            }
        }
        Ok(tables)
    }

    pub fn as_routes(&self) -> &AsRoutes {
        &self.as_routes
    }

    pub fn ring(&self, as_id: AsId) -> Result<&HashRing> {
        self.rings
            .get(as_id.index())
            .ok_or_else(|| Error::Lookup(format!("no ring for AS {as_id}")))
    }

    pub fn designated_router(&self, as_id: AsId, object: ObjectId) -> Result<RouterId> {
        let ring = self.ring(as_id)?;
        if let Some(r) = self.sectors[as_id.index()].as_ref().and_then(|m| m.locate(object)) {
            return Ok(r);
        }
        Ok(ring.locate(object))
    }

    /// Shortest router path between two routers of the same AS.
    pub fn intra_shortest(&self, topology: &Topology, as_id: AsId, from: RouterId, to: RouterId) -> Result<Vec<RouterId>> {
        let asys = topology.autonomous_system(as_id)?;
        let local = |r: RouterId| -> Result<usize> {
            let router = topology
                .routers()
                .get(r.index())
                .filter(|x| x.as_id == as_id)
                .ok_or_else(|| Error::Lookup(format!("router {r} is not in AS {as_id}")))?;
            Ok(router.local)
        };
        let (a, b) = (local(from)?, local(to)?);
        self.intra[as_id.index()][a]
            .path_to(b)
            .map(|p| p.into_iter().map(|l| asys.routers[l]).collect())
            .ok_or_else(|| Error::Routing(format!("router {to} unreachable from {from} in AS {as_id}")))
    }

    /// `ingress → via → egress` inside one AS, joined at `via`.
    pub fn intra_as_route(
        &self,
        topology: &Topology,
        as_id: AsId,
        ingress: RouterId,
        via: RouterId,
        egress: RouterId,
    ) -> Result<Vec<RouterId>> {
        let mut path = self.intra_shortest(topology, as_id, ingress, via)?;
        path.extend(self.intra_shortest(topology, as_id, via, egress)?.into_iter().skip(1));
        Ok(path)
    }
}
