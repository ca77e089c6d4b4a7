use std::collections::HashMap;

use icncache::cache::{PolicyConfig, PolicyKind};
use icncache::engine::{ServedBy, Simulation};
use icncache::experiment::{generate_trace, prepare, Prepared, RunConfig};
use icncache::routing::{select_as_path, InterestRegistry, RoutingTables};
use icncache::topology::{Server, Topology, TopologyParts};
use icncache::traffic::RequestEvent;
use icncache::{AsId, ObjectId, RouterId};
use proptest::prelude::*;

/// AS 0 = {r0 border, r1}, AS 1 = {r2 border, r3}; r1-r0-r2-r3 is a line and
/// r3 serves ids 0..=9.
fn two_as() -> Topology {
    TopologyParts {
        as_labels: vec![100, 200],
        routers: vec![
            (AsId(0), 1, true),
            (AsId(0), 1, false),
            (AsId(1), 1, true),
            (AsId(1), 1, false),
        ],
        links: vec![(RouterId(0), RouterId(1)), (RouterId(0), RouterId(2)), (RouterId(2), RouterId(3))],
        servers: vec![Server {
            lo: ObjectId(0),
            hi: ObjectId(9),
            router: RouterId(3),
        }],
    }
    .build()
    .unwrap()
}

fn req(seq: u64, router: u32, object: u64) -> RequestEvent {
    RequestEvent {
        seq,
        source_router: RouterId(router),
        object: ObjectId(object),
    }
}

fn resident(sim: &Simulation, object: u64) -> Vec<u32> {
    sim.caches()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.contains(ObjectId(object)))
        .map(|(i, _)| i as u32)
        .collect()
}

#[test]
fn cee_repeat_request_by_hand() {
    let topo = two_as();
    let tables = RoutingTables::new(&topo, 16).unwrap();
    let reg = InterestRegistry::new();
    let mut sim = Simulation::new(&topo, &tables, &reg, PolicyConfig::new(PolicyKind::Cee), 10).unwrap();

    let first = sim.process(&req(0, 1, 5)).unwrap();
    assert_eq!(first.served_by, ServedBy::Server);
    assert_eq!(first.router_hops, 3);
    assert_eq!(first.shortest_router_hops, 3);
    assert_eq!(first.as_hops, 1);
    assert_eq!(first.as_path, vec![AsId(0), AsId(1)]);
    assert_eq!(resident(&sim, 5), vec![0, 1, 2, 3]);

    let second = sim.process(&req(1, 1, 5)).unwrap();
    assert_eq!(second.served_by, ServedBy::Cache(RouterId(1)));
    assert_eq!((second.router_hops, second.as_hops), (0, 0));

    // a different object evicts 5 everywhere along its path
    let third = sim.process(&req(2, 1, 6)).unwrap();
    assert_eq!(third.evictions_caused, 4);
    assert_eq!(resident(&sim, 5), Vec::<u32>::new());

    let t = sim.totals();
    assert_eq!((t.requests, t.server_hits, t.cache_hits), (3, 2, 1));
    assert_eq!(t.router_hops, 6);
    assert_eq!(t.shortest_hops, 9);
}

#[test]
fn scene1_repeat_request_by_hand() {
    let topo = two_as();
    let tables = RoutingTables::new(&topo, 16).unwrap();
    let reg = InterestRegistry::new();
    let mut sim = Simulation::new(&topo, &tables, &reg, PolicyConfig::new(PolicyKind::Scene1), 10).unwrap();
    let d0 = tables.designated_router(AsId(0), ObjectId(5)).unwrap();
    let d1 = tables.designated_router(AsId(1), ObjectId(5)).unwrap();

    let first = sim.process(&req(0, 1, 5)).unwrap();
    assert_eq!(first.served_by, ServedBy::Server);
    assert_eq!(resident(&sim, 5), vec![d0.0, d1.0]);
    // every designated router lies on the line, so the walk is the plain r1-r0-r2-r3
    assert_eq!(first.router_hops, 3);
    assert_eq!(first.shortest_router_hops, 3);

    let second = sim.process(&req(1, 1, 5)).unwrap();
    assert_eq!(second.served_by, ServedBy::Cache(d0));
    assert_eq!(second.router_hops, u64::from(d0 == RouterId(0)));
    assert_eq!(second.as_hops, 0);
    sim.audit_designated().unwrap();
}

/// AS 0 = {r0 border, r1, r2} with r1 and r2 hanging off r0; AS 1 = {r3}.
fn branch() -> Topology {
    TopologyParts {
        as_labels: vec![1, 2],
        routers: vec![(AsId(0), 2, true), (AsId(0), 2, false), (AsId(0), 2, false), (AsId(1), 0, true)],
        links: vec![(RouterId(0), RouterId(1)), (RouterId(0), RouterId(2)), (RouterId(0), RouterId(3))],
        servers: vec![Server {
            lo: ObjectId(0),
            hi: ObjectId(999),
            router: RouterId(3),
        }],
    }
    .build()
    .unwrap()
}

#[test]
fn scene1_detours_through_the_designated_router() {
    let topo = branch();
    let tables = RoutingTables::new(&topo, 16).unwrap();
    let reg = InterestRegistry::new();
    let object = (0..1000)
        .find(|&i| tables.designated_router(AsId(0), ObjectId(i)).unwrap() == RouterId(2))
        .unwrap();
    let mut sim = Simulation::new(&topo, &tables, &reg, PolicyConfig::new(PolicyKind::Scene1), 10).unwrap();

    // r1 -> r0 -> r2 -> r0 -> r3
    let first = sim.process(&req(0, 1, object)).unwrap();
    assert_eq!(first.served_by, ServedBy::Server);
    assert_eq!((first.router_hops, first.shortest_router_hops, first.as_hops), (4, 2, 1));
    assert_eq!(resident(&sim, object), vec![2]);

    let second = sim.process(&req(1, 1, object)).unwrap();
    assert_eq!(second.served_by, ServedBy::Cache(RouterId(2)));
    assert_eq!((second.router_hops, second.shortest_router_hops, second.as_hops), (2, 2, 0));

    let mut cee = Simulation::new(&topo, &tables, &reg, PolicyConfig::new(PolicyKind::Cee), 10).unwrap();
    let out = cee.process(&req(0, 1, object)).unwrap();
    assert_eq!(out.router_hops, 2);
    assert_eq!(resident(&cee, object), vec![0, 1]);
}

#[test]
fn zero_requests_and_bad_window() {
    let topo = two_as();
    let tables = RoutingTables::new(&topo, 16).unwrap();
    let reg = InterestRegistry::new();
    let policy = PolicyConfig::new(PolicyKind::Scene1);
    assert!(Simulation::new(&topo, &tables, &reg, policy, 0).is_err());
    let mut sim = Simulation::new(&topo, &tables, &reg, policy, 10).unwrap();
    let report = sim.run(std::iter::empty()).unwrap();
    assert_eq!(report.totals.requests, 0);
    assert!(report.windows.is_empty());
    assert!(report.network_retention().is_err());
    assert_eq!(report.median_as_retention(), None);
    assert!(sim.process(&req(0, 9, 1)).is_err());
    assert!(sim.process(&req(0, 0, 10)).is_err());
}

fn small_config(policy: &str) -> RunConfig {
    let mut cfg = RunConfig::desk();
    cfg.topology = icncache::experiment::TopologySource::Waxman {
        as_count: 8,
        params: icncache::topology::WaxmanParams { alpha: 0.4, beta: 0.2 },
    };
    cfg.routers_per_as = 6;
    cfg.population = 300;
    cfg.requests = 3000;
    cfg.window = 500;
    let (kind, variant) = icncache::cache::parse_policy(policy).unwrap();
    cfg.policy.kind = kind;
    cfg.policy.cache_all_ases = variant.unwrap_or(true);
    cfg
}

const POLICIES: [&str; 7] = ["CEE", "PROBCACHE", "SCENE1", "SCENE2_T", "SCENE2_F", "SCENE3_T", "SCENE3_F"];

fn setup(cfg: &RunConfig) -> (Prepared, Vec<RequestEvent>) {
    let prepared = prepare(cfg).unwrap();
    let trace = generate_trace(cfg, &prepared.topology).unwrap();
    (prepared, trace)
}

#[test]
fn per_request_invariants_hold_for_every_policy() {
    for name in POLICIES {
        let cfg = small_config(name);
        let (p, trace) = setup(&cfg);
        let topo = &p.topology;
        let routes = p.tables.as_routes();
        let mut sim = Simulation::new(topo, &p.tables, &p.registry, cfg.policy, cfg.window).unwrap();
        sim.set_audit_every(1);
        let mut bfs: HashMap<RouterId, Vec<Option<u32>>> = HashMap::new();
        for e in &trace {
            let out = sim.process(e).unwrap();
            let server = topo.server_for(e.object).unwrap().router;
            let from = e.source_router;
            let dist = bfs.entry(from).or_insert_with(|| topo.router_graph().bfs_distances(from.index()));
            assert_eq!(out.shortest_router_hops, u64::from(dist[server.index()].unwrap()));
            if out.served_by == ServedBy::Server {
                assert!(out.router_hops >= out.shortest_router_hops, "{name}: {out:?}");
                let (req_as, srv_as) = (topo.router(from).as_id, topo.router(server).as_id);
                let path = select_as_path(cfg.policy.kind.scenario(), e.object, req_as, srv_as, routes, &p.registry)
                    .unwrap();
                let expected = match path.via {
                    Some(via) if name.starts_with("SCENE3") => {
                        routes.distance(req_as, via).unwrap() + routes.distance(via, srv_as).unwrap()
                    }
                    _ => routes.distance(req_as, srv_as).unwrap(),
                };
                assert_eq!(out.as_hops, u64::from(expected), "{name}");
                assert_eq!(out.as_path.len() as u64, out.as_hops + 1);
            } else {
                assert!(out.as_hops < out.as_path.len() as u64);
            }
            for c in sim.caches() {
                assert!(c.len() <= c.capacity());
            }
        }
        let report = sim.report();
        let t = report.totals;
        assert_eq!(t.server_hits + t.cache_hits, t.requests, "{name}");
        assert_eq!(t.requests, cfg.requests);
        let windows: u64 = report.windows.iter().map(|w| w.counters.requests).sum();
        assert_eq!(windows, t.requests);
        assert_eq!(report.windows.len(), 6);
        for a in &report.per_as {
            assert!(a.retained <= a.observed);
        }
    }
}

#[test]
fn designated_uniqueness_after_every_request() {
    let mut cfg = small_config("SCENE1");
    cfg.topology = icncache::experiment::TopologySource::Waxman {
        as_count: 20,
        params: icncache::topology::WaxmanParams { alpha: 0.4, beta: 0.2 },
    };
    cfg.routers_per_as = 10;
    cfg.population = 2000;
    cfg.requests = 5000;
    let (p, trace) = setup(&cfg);
    let mut sim = Simulation::new(&p.topology, &p.tables, &p.registry, cfg.policy, cfg.window).unwrap();
    sim.enable_debug_trace();
    sim.set_audit_every(1);
    sim.run(trace.iter().copied()).unwrap();
    for a in p.topology.ases() {
        let mut seen = HashMap::new();
        for &r in &a.routers {
            for o in sim.caches()[r.index()].iter() {
                assert!(seen.insert(o, r).is_none(), "object {o} cached twice in AS {}", a.id);
            }
        }
    }
    let debug = sim.take_debug_trace().unwrap();
    assert_eq!(debug.lines().count(), 5001);
    assert!(debug.starts_with("seq,object,policy,as_path,served_by,router_hops\n"));
}

#[test]
fn replay_and_repeat_are_identical() {
    for name in ["PROBCACHE", "SCENE3_T"] {
        let cfg = small_config(name);
        let (p, trace) = setup(&cfg);
        let run = |events: &[RequestEvent]| {
            let mut sim = Simulation::new(&p.topology, &p.tables, &p.registry, cfg.policy, cfg.window).unwrap();
            let report = sim.run(events.iter().copied()).unwrap();
            (report, sim.dump_caches())
        };
        let a = run(&trace);
        let b = run(&trace);
        assert_eq!(a, b);
        let text = icncache::traffic::write_trace(&trace);
        let replayed = icncache::traffic::read_trace(&text).unwrap();
        assert_eq!(run(&replayed), a);
    }
}

#[test]
fn zero_capacity_always_hits_the_server() {
    for name in POLICIES {
        let mut cfg = small_config(name);
        cfg.capacity = 0;
        cfg.requests = 500;
        let (p, trace) = setup(&cfg);
        let mut sim = Simulation::new(&p.topology, &p.tables, &p.registry, cfg.policy, cfg.window).unwrap();
        let report = sim.run(trace).unwrap();
        assert_eq!(report.totals.server_hits, 500, "{name}");
        assert_eq!(report.totals.evictions, 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]
    #[test]
    fn conservation_on_random_seeds(seed in 0u64..1000, policy in 0usize..7) {
        let mut cfg = small_config(POLICIES[policy]);
        cfg.topology_seed = seed;
        cfg.workload_seed = seed;
        cfg.requests = 600;
        let (p, trace) = setup(&cfg);
        let mut sim = Simulation::new(&p.topology, &p.tables, &p.registry, cfg.policy, cfg.window).unwrap();
        sim.set_audit_every(50);
        let r = sim.run(trace).unwrap();
        prop_assert_eq!(r.totals.server_hits + r.totals.cache_hits, r.totals.requests);
        prop_assert!(r.network_retained <= r.network_observed);
        let requested: u64 = r.popularity.iter().map(|x| x.requests).sum();
        prop_assert_eq!(requested, 600);
    }
}
