use std::fs;
use std::path::Path;

use super::config::{RunConfig, TopologySource};
use super::table::Table;
use crate::engine::Simulation;
use crate::metrics::{avg_as_hops, cache_hit_ratio, eviction_rate, hopcount_ratio, server_hit_ratio, Counters, MetricsReport};
use crate::routing::{InterestRegistry, RoutingTables};
use crate::topology::{build_hierarchy, generate_ba, generate_waxman, parse_as_links, write_snapshot, AsGraph, HierarchyParams, Topology};
use crate::traffic::{generate_workload, trace_hash, write_trace, RequestEvent, ZmSampler};
use crate::Result;

/// Immutable state shared by every policy run over one configuration.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub topology: Topology,
    pub registry: InterestRegistry,
    pub tables: RoutingTables,
}

pub fn build_as_graph(cfg: &RunConfig) -> Result<AsGraph> {
    match &cfg.topology {
        TopologySource::Waxman { as_count, params } => Ok(AsGraph::unlabeled(
            generate_waxman(*as_count, *params, cfg.topology_seed)?.graph,
        )),
        TopologySource::BarabasiAlbert { as_count, m } => {
            Ok(AsGraph::unlabeled(generate_ba(*as_count, *m, cfg.topology_seed)?))
        }
        TopologySource::File(path) => parse_as_links(&fs::read_to_string(path)?),
    }
}

pub fn build_topology(cfg: &RunConfig) -> Result<Topology> {
    let params = HierarchyParams {
        routers_per_as: cfg.routers_per_as,
        capacity: cfg.capacity,
        border_count: cfg.border_routers,
        waxman: cfg.router_waxman,
        population: cfg.population,
        servers: cfg.servers,
        seed: cfg.topology_seed,
        as_level_only: cfg.as_level_only,
    };
    build_hierarchy(&build_as_graph(cfg)?, &params)
}

pub fn prepare(cfg: &RunConfig) -> Result<Prepared> {
    cfg.validate()?;
    let topology = build_topology(cfg)?;
    let registry = InterestRegistry::assign(
        &topology,
        cfg.population,
        cfg.interest,
        cfg.interest_fraction,
        cfg.interest_seed,
    )?;
    let tables = RoutingTables::with_designation(&topology, cfg.virtual_nodes, cfg.designation, &registry)?;
    Ok(Prepared {
        topology,
        registry,
        tables,
    })
}

pub fn generate_trace(cfg: &RunConfig, topology: &Topology) -> Result<Vec<RequestEvent>> {
    let sampler = ZmSampler::new(cfg.population, cfg.alpha, cfg.q, cfg.workload_seed, cfg.permutation_seed)?;
    Ok(generate_workload(cfg.requests, topology, sampler, cfg.sources, cfg.workload_seed)?.collect())
}

pub fn simulate(cfg: &RunConfig, prepared: &Prepared, trace: &[RequestEvent]) -> Result<MetricsReport> {
    let mut sim = Simulation::new(
        &prepared.topology,
        &prepared.tables,
        &prepared.registry,
        cfg.policy,
        cfg.window,
    )?;
    sim.run(trace.iter().copied())
}

/// Builds the topology, generates the workload and runs it.
pub fn run_simulation(cfg: &RunConfig) -> Result<MetricsReport> {
    let prepared = prepare(cfg)?;
    let trace = generate_trace(cfg, &prepared.topology)?;
    simulate(cfg, &prepared, &trace)
}

/// Identifies a run inside a sweep; `axis` is `none` for single runs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunLabel {
    pub axis: String,
    pub value: String,
}

impl RunLabel {
    pub fn single() -> Self {
        RunLabel {
            axis: "none".into(),
            value: String::new(),
        }
    }
}

pub const SUMMARY_COLUMNS: &[&str] = &[
    "axis",
    "value",
    "policy",
    "population",
    "capacity",
    "network_capacity",
    "alpha",
    "q",
    "requests",
    "seed",
    "workload_hash",
    "server_hit_ratio",
    "cache_hit_ratio",
    "hopcount_ratio",
    "avg_as_hops",
    "eviction_rate",
    "retention",
    "ideal",
    "median_as_retention",
    "mean_jain",
    "error",
];

pub const WINDOW_COLUMNS: &[&str] = &[
    "axis",
    "value",
    "policy",
    "window_end",
    "requests",
    "server_hits",
    "cache_hits",
    "router_hops",
    "shortest_hops",
    "as_hops",
    "evictions",
    "server_hit_ratio",
    "cache_hit_ratio",
    "hopcount_ratio",
    "avg_as_hops",
    "eviction_rate",
];

pub const PER_AS_COLUMNS: &[&str] = &["axis", "value", "policy", "as_id", "observed", "retained", "retention", "jain"];

pub const RETENTION_COLUMNS: &[&str] = &["axis", "value", "policy", "rank", "object_id", "requests", "in_cache"];

/// Result tables of one or more runs, one row set per run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultTables {
    pub summary: Table,
    pub windows: Table,
    pub per_as: Table,
    pub retention: Table,
}

impl Default for ResultTables {
    fn default() -> Self {
        ResultTables {
            summary: Table::new(SUMMARY_COLUMNS),
            windows: Table::new(WINDOW_COLUMNS),
            per_as: Table::new(PER_AS_COLUMNS),
            retention: Table::new(RETENTION_COLUMNS),
        }
    }
}

impl ResultTables {
    pub fn append(&mut self, other: &ResultTables) -> Result<()> {
        self.summary.append(&other.summary)?;
        self.windows.append(&other.windows)?;
        self.per_as.append(&other.per_as)?;
        self.retention.append(&other.retention)
    }

    /// Loads whichever of the four CSV files exist in `dir`.
    pub fn load_dir(dir: &Path) -> Result<Self> {
        let read = |name: &str, empty: Table| -> Result<Table> {
            let p = dir.join(name);
            if p.is_file() {
                Table::from_csv(&fs::read_to_string(p)?)
            } else {
                Ok(empty)
            }
        };
        Ok(ResultTables {
            summary: read("summary.csv", Table::new(&[]))?,
            windows: read("windows.csv", Table::new(&[]))?,
            per_as: read("per_as.csv", Table::new(&[]))?,
            retention: read("retention.csv", Table::new(&[]))?,
        })
    }
}

fn fmt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_default()
}

fn ratios(c: &Counters) -> [String; 5] {
    [
        fmt(server_hit_ratio(c).ok()),
        fmt(cache_hit_ratio(c).ok()),
        fmt(hopcount_ratio(c).ok()),
        fmt(avg_as_hops(c).ok()),
        fmt(eviction_rate(c).ok()),
    ]
}

fn config_cells(cfg: &RunConfig, label: &RunLabel, network_capacity: Option<usize>) -> Vec<String> {
    vec![
        label.axis.clone(),
        label.value.clone(),
        cfg.policy.label(),
        cfg.population.to_string(),
        cfg.capacity.to_string(),
        network_capacity.map(|n| n.to_string()).unwrap_or_default(),
        cfg.alpha.to_string(),
        cfg.q.to_string(),
        cfg.requests.to_string(),
        cfg.workload_seed.to_string(),
    ]
}

/// Summary row for a run that failed before producing a report.
pub fn failure_tables(cfg: &RunConfig, label: &RunLabel, error: &str) -> ResultTables {
    let mut t = ResultTables::default();
    let mut row = config_cells(cfg, label, None);
    row.resize(SUMMARY_COLUMNS.len() - 1, String::new());
    row.push(error.replace(['\n', '\r'], " "));
    t.summary.push(row);
    t
}

pub fn result_tables(
    cfg: &RunConfig,
    label: &RunLabel,
    report: &MetricsReport,
    workload_hash: &str,
    network_capacity: usize,
) -> ResultTables {
    let mut t = ResultTables::default();
    let head = [label.axis.clone(), label.value.clone(), cfg.policy.label()];

    let mut row = config_cells(cfg, label, Some(network_capacity));
    row.push(workload_hash.to_string());
    row.extend(ratios(&report.totals));
    row.push(fmt(report.network_retention().ok()));
    row.push(fmt(Some((network_capacity as f64 / cfg.population as f64).min(1.0))));
    row.push(fmt(report.median_as_retention()));
    row.push(fmt(report.mean_jain()));
    row.push(String::new());
    t.summary.push(row);

    for w in &report.windows {
        let c = &w.counters;
        let mut row = head.to_vec();
        row.extend(
            [w.end, c.requests, c.server_hits, c.cache_hits, c.router_hops, c.shortest_hops, c.as_hops, c.evictions]
                .iter()
                .map(u64::to_string),
        );
        row.extend(ratios(c));
        t.windows.push(row);
    }

    for a in &report.per_as {
        let mut row = head.to_vec();
        row.extend([
            a.as_id.to_string(),
            a.observed.to_string(),
            a.retained.to_string(),
            fmt(a.retention()),
            fmt(a.jain()),
        ]);
        t.per_as.push(row);
    }

    for (i, p) in report.popularity.iter().enumerate() {
        let mut row = head.to_vec();
        row.extend([
            (i + 1).to_string(),
            p.object.to_string(),
            p.requests.to_string(),
            u8::from(p.in_cache).to_string(),
        ]);
        t.retention.push(row);
    }
    t
}

/// A finished single run with everything needed to write its directory.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub config: RunConfig,
    pub report: MetricsReport,
    pub trace: Vec<RequestEvent>,
    pub workload_hash: String,
    pub tables: ResultTables,
    pub topology_snapshot: String,
    pub interest_dump: String,
    /// Per-request debug lines and the final cache contents, when requested.
    pub debug: Option<(String, String)>,
}

/// Runs `cfg` over `trace`, or over a freshly generated workload when
/// `trace` is `None`. With `debug`, also records the per-request trace and
/// the final cache dump.
pub fn execute(cfg: &RunConfig, trace: Option<Vec<RequestEvent>>, debug: bool) -> Result<RunOutput> {
    let prepared = prepare(cfg)?;
    let trace = match trace {
        Some(t) => t,
        None => generate_trace(cfg, &prepared.topology)?,
    };
    let mut sim = Simulation::new(
        &prepared.topology,
        &prepared.tables,
        &prepared.registry,
        cfg.policy,
        cfg.window,
    )?;
    if debug {
        sim.enable_debug_trace();
    }
    let report = sim.run(trace.iter().copied())?;
    let debug = sim.take_debug_trace().map(|t| (t, sim.dump_caches()));
    let workload_hash = trace_hash(&trace);
    let tables = result_tables(
        cfg,
        &RunLabel::single(),
        &report,
        &workload_hash,
        prepared.topology.total_capacity(),
    );
    Ok(RunOutput {
        config: cfg.clone(),
        report,
        workload_hash,
        tables,
        topology_snapshot: write_snapshot(&prepared.topology),
        interest_dump: prepared.registry.dump(),
        trace,
        debug,
    })
}

/// Writes `config.txt`, `workload.sha256`, `trace.csv`, `topology.txt`,
/// `interest.txt`, the four result CSVs and any debug output into `dir`.
pub fn write_run_dir(dir: &Path, out: &RunOutput) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("config.txt"), out.config.emit())?;
    fs::write(dir.join("workload.sha256"), format!("{}\n", out.workload_hash))?;
    fs::write(dir.join("trace.csv"), write_trace(&out.trace))?;
    fs::write(dir.join("topology.txt"), &out.topology_snapshot)?;
    fs::write(dir.join("interest.txt"), &out.interest_dump)?;
    if let Some((trace, caches)) = &out.debug {
        fs::write(dir.join("debug_trace.csv"), trace)?;
        fs::write(dir.join("caches.csv"), caches)?;
    }
    write_tables(dir, &out.tables)
}

pub fn write_tables(dir: &Path, t: &ResultTables) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("summary.csv"), t.summary.to_csv())?;
    fs::write(dir.join("windows.csv"), t.windows.to_csv())?;
    fs::write(dir.join("per_as.csv"), t.per_as.to_csv())?;
    fs::write(dir.join("retention.csv"), t.retention.to_csv())?;
    Ok(())
}
