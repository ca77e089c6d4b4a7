//! Flat `key=value` run configuration.
//!
//! Keys are grouped by prefix (`topology.`, `policy.`, `workload.`,
//! `interest.`, `routing.`, `run.`). Blank lines and `#` comments are
//! ignored. Unknown keys are rejected and every missing required key is
//! reported in one error. [`RunConfig::emit`] writes every key, defaults
//! included, so an emitted file reloads to an identical config.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::cache::{parse_policy, PolicyConfig, PolicyKind};
use crate::routing::{Designation, InterestStrategy, DEFAULT_VIRTUAL_NODES};
use crate::topology::WaxmanParams;
use crate::traffic::SourceStrategy;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum TopologySource {
    /// Waxman AS graph with `as_count` ASes.
    Waxman { as_count: usize, params: WaxmanParams },
    /// Barabási–Albert AS graph, `m` links per new AS.
    BarabasiAlbert { as_count: usize, m: usize },
    /// AS links file (`a b` or `a|b` per line).
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub topology: TopologySource,
    pub routers_per_as: usize,
    pub border_routers: usize,
    pub router_waxman: WaxmanParams,
    pub capacity: usize,
    pub servers: usize,
    pub as_level_only: bool,
    pub topology_seed: u64,

    pub policy: PolicyConfig,

    pub population: u64,
    pub requests: u64,
    pub alpha: f64,
    pub q: f64,
    pub sources: SourceStrategy,
    pub workload_seed: u64,
    pub permutation_seed: u64,

    pub interest: InterestStrategy,
    pub interest_fraction: f64,
    pub interest_seed: u64,

    pub designation: Designation,
    pub virtual_nodes: usize,

    pub window: u64,
    pub output: PathBuf,
}

const REQUIRED: &[&str] = &["topology.kind", "policy.name"];

const KNOWN: &[&str] = &[
    "topology.kind",
    "topology.file",
    "topology.as_count",
    "topology.as_waxman_alpha",
    "topology.as_waxman_beta",
    "topology.ba_m",
    "topology.routers_per_as",
    "topology.border_routers",
    "topology.router_waxman_alpha",
    "topology.router_waxman_beta",
    "topology.capacity",
    "topology.servers",
    "topology.as_level_only",
    "topology.seed",
    "policy.name",
    "policy.probcache_times",
    "policy.seed",
    "workload.population",
    "workload.requests",
    "workload.alpha",
    "workload.q",
    "workload.sources",
    "workload.seed",
    "workload.permutation_seed",
    "interest.strategy",
    "interest.fraction",
    "interest.seed",
    "routing.designation",
    "routing.virtual_nodes",
    "run.window",
    "run.output",
];

impl RunConfig {
    /// Desk-scale profile: 20 Waxman ASes of 10 routers, capacity 5, four
    /// servers, `n_p = 2·n_c`, `4·n_p` requests.
    pub fn desk() -> Self {
        RunConfig {
            topology: TopologySource::Waxman {
                as_count: 20,
                params: WaxmanParams { alpha: 0.4, beta: 0.2 },
            },
            routers_per_as: 10,
            border_routers: 2,
            router_waxman: WaxmanParams::default(),
            capacity: 5,
            servers: 4,
            as_level_only: false,
            topology_seed: 1,
            policy: PolicyConfig::new(PolicyKind::Scene1),
            population: 2000,
            requests: 8000,
            alpha: 0.8,
            q: 5.0,
            sources: SourceStrategy::Uniform,
            workload_seed: 1,
            permutation_seed: 1,
            interest: InterestStrategy::Proportional,
            interest_fraction: 1.0,
            interest_seed: 1,
            designation: Designation::Sector,
            virtual_nodes: DEFAULT_VIRTUAL_NODES,
            window: 1000,
            output: PathBuf::from("runs/desk"),
        }
    }

    /// 20 ASes of 100 routers, capacity 5, 20,000 objects, 40,000 requests.
    pub fn full_scale() -> Self {
        RunConfig {
            routers_per_as: 100,
            border_routers: 4,
            population: 20_000,
            requests: 40_000,
            output: PathBuf::from("runs/full"),
            ..Self::desk()
        }
    }

    /// One-hundredth of the large AS-level run over a user-supplied AS links
    /// file: one caching node per AS, 2.64M objects, 200,000 requests.
    pub fn caida(as_links: impl Into<PathBuf>) -> Self {
        RunConfig {
            topology: TopologySource::File(as_links.into()),
            routers_per_as: 10,
            border_routers: 1,
            as_level_only: true,
            population: 2_640_000,
            requests: 200_000,
            sources: SourceStrategy::Subset(1000),
            window: 10_000,
            output: PathBuf::from("runs/caida"),
            ..Self::desk()
        }
    }

    pub fn profile(name: &str) -> Result<Self> {
        match name {
            "desk" => Ok(Self::desk()),
            "full" => Ok(Self::full_scale()),
            other => Err(Error::Config(format!(
                "unknown profile {other:?} (expected desk or full; the caida profile needs an AS links file)"
            ))),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = Self::parse(&text)?;
        if let TopologySource::File(f) = &mut cfg.topology {
            if f.is_relative() {
                if let Some(dir) = path.parent() {
                    *f = dir.join(&*f);
                }
            }
        }
        cfg.check_files()?;
        Ok(cfg)
    }

    /// Fails if a referenced input file does not exist.
    pub fn check_files(&self) -> Result<()> {
        if let TopologySource::File(f) = &self.topology {
            if !f.is_file() {
                return Err(Error::Config(format!("topology.file {} does not exist", f.display())));
            }
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut kv: BTreeMap<String, String> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(idx + 1, format!("expected key=value, got {line:?}")))?;
            let k = k.trim();
            if !KNOWN.contains(&k) {
                return Err(Error::Config(format!("unknown key {k:?} on line {}", idx + 1)));
            }
            if kv.insert(k.to_string(), v.trim().to_string()).is_some() {
                return Err(Error::Config(format!("duplicate key {k:?} on line {}", idx + 1)));
            }
        }
        let missing: Vec<&str> = REQUIRED.iter().copied().filter(|k| !kv.contains_key(*k)).collect();
        if !missing.is_empty() {
            return Err(Error::Config(format!("missing required keys: {}", missing.join(", "))));
        }

        let d = Self::desk();
        let mut r = Reader { kv: &kv };
        let as_count = r.get("topology.as_count", 20usize)?;
        let topology = match kv["topology.kind"].as_str() {
            "waxman" => TopologySource::Waxman {
                as_count,
                params: WaxmanParams {
                    alpha: r.get("topology.as_waxman_alpha", 0.4)?,
                    beta: r.get("topology.as_waxman_beta", 0.2)?,
                },
            },
            "ba" => TopologySource::BarabasiAlbert {
                as_count,
                m: r.get("topology.ba_m", 2usize)?,
            },
            "file" => TopologySource::File(PathBuf::from(
                kv.get("topology.file")
                    .ok_or_else(|| Error::Config("topology.kind=file requires topology.file".into()))?,
            )),
            other => {
                return Err(Error::Config(format!(
                    "topology.kind: unknown value {other:?} (expected waxman, ba or file)"
                )))
            }
        };

        let (kind, variant) = parse_policy(&kv["policy.name"])?;
        let policy = PolicyConfig {
            kind,
            cache_all_ases: variant.unwrap_or(true),
            probcache_target_times: r.get("policy.probcache_times", d.policy.probcache_target_times)?,
            seed: r.get("policy.seed", d.policy.seed)?,
        };

        let cfg = RunConfig {
            topology,
            routers_per_as: r.get("topology.routers_per_as", d.routers_per_as)?,
            border_routers: r.get("topology.border_routers", d.border_routers)?,
            router_waxman: WaxmanParams {
                alpha: r.get("topology.router_waxman_alpha", d.router_waxman.alpha)?,
                beta: r.get("topology.router_waxman_beta", d.router_waxman.beta)?,
            },
            capacity: r.get("topology.capacity", d.capacity)?,
            servers: r.get("topology.servers", d.servers)?,
            as_level_only: r.get("topology.as_level_only", d.as_level_only)?,
            topology_seed: r.get("topology.seed", d.topology_seed)?,
            policy,
            population: r.get("workload.population", d.population)?,
            requests: r.get("workload.requests", d.requests)?,
            alpha: r.get("workload.alpha", d.alpha)?,
            q: r.get("workload.q", d.q)?,
            sources: match kv.get("workload.sources").map(String::as_str) {
                None | Some("all") => SourceStrategy::Uniform,
                Some(s) => match s.strip_prefix("subset:").and_then(|k| k.parse().ok()) {
                    Some(k) => SourceStrategy::Subset(k),
                    None => {
                        return Err(Error::Config(format!(
                            "workload.sources: expected all or subset:<k>, got {s:?}"
                        )))
                    }
                },
            },
            workload_seed: r.get("workload.seed", d.workload_seed)?,
            permutation_seed: r.get("workload.permutation_seed", d.permutation_seed)?,
            interest: r.get_with("interest.strategy", d.interest, InterestStrategy::from_str)?,
            interest_fraction: r.get("interest.fraction", d.interest_fraction)?,
            interest_seed: r.get("interest.seed", d.interest_seed)?,
            designation: r.get_with("routing.designation", d.designation, Designation::from_str)?,
            virtual_nodes: r.get("routing.virtual_nodes", d.virtual_nodes)?,
            window: r.get("run.window", d.window)?,
            output: kv.get("run.output").map(PathBuf::from).unwrap_or(d.output),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Range checks that do not need the topology.
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        let mut check = |ok: bool, msg: &str| {
            if !ok {
                problems.push(msg.to_string());
            }
        };
        match &self.topology {
            TopologySource::Waxman { as_count, params } => {
                check(*as_count >= 1, "topology.as_count must be >= 1");
                check(
                    params.alpha > 0.0 && params.alpha <= 1.0 && params.beta > 0.0 && params.beta <= 1.0,
                    "topology.as_waxman_alpha/beta must lie in (0, 1]",
                );
            }
            TopologySource::BarabasiAlbert { as_count, m } => {
                check(*m >= 1 && as_count > m, "topology.ba_m must satisfy 1 <= m < topology.as_count");
            }
            TopologySource::File(_) => {}
        }
        check(self.routers_per_as >= 1, "topology.routers_per_as must be >= 1");
        check(
            self.border_routers >= 1 && self.border_routers <= self.routers_per_as,
            "topology.border_routers must lie in [1, topology.routers_per_as]",
        );
        check(
            self.router_waxman.alpha > 0.0
                && self.router_waxman.alpha <= 1.0
                && self.router_waxman.beta > 0.0
                && self.router_waxman.beta <= 1.0,
            "topology.router_waxman_alpha/beta must lie in (0, 1]",
        );
        check(self.population >= 1, "workload.population must be >= 1");
        check(
            self.servers >= 1 && self.servers as u64 <= self.population,
            "topology.servers must lie in [1, workload.population]",
        );
        check(self.alpha > 0.0 && self.alpha.is_finite(), "workload.alpha must be > 0");
        check(self.q >= 0.0 && self.q.is_finite(), "workload.q must be >= 0");
        check(
            (0.0..=1.0).contains(&self.interest_fraction),
            "interest.fraction must lie in [0, 1]",
        );
        check(
            self.policy.probcache_target_times > 0.0,
            "policy.probcache_times must be > 0",
        );
        check(self.virtual_nodes >= 1, "routing.virtual_nodes must be >= 1");
        check(self.window >= 1, "run.window must be >= 1");
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(problems.join("; ")))
        }
    }

    /// Every key, defaults included, one per line in a fixed order.
    pub fn emit(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(out, "{k}={v}");
        };
        match &self.topology {
            TopologySource::Waxman { as_count, params } => {
                put("topology.kind", "waxman".into());
                put("topology.as_count", as_count.to_string());
                put("topology.as_waxman_alpha", params.alpha.to_string());
                put("topology.as_waxman_beta", params.beta.to_string());
            }
            TopologySource::BarabasiAlbert { as_count, m } => {
                put("topology.kind", "ba".into());
                put("topology.as_count", as_count.to_string());
                put("topology.ba_m", m.to_string());
            }
            TopologySource::File(p) => {
                put("topology.kind", "file".into());
                put("topology.file", p.display().to_string());
            }
        }
        put("topology.routers_per_as", self.routers_per_as.to_string());
        put("topology.border_routers", self.border_routers.to_string());
        put("topology.router_waxman_alpha", self.router_waxman.alpha.to_string());
        put("topology.router_waxman_beta", self.router_waxman.beta.to_string());
        put("topology.capacity", self.capacity.to_string());
        put("topology.servers", self.servers.to_string());
        put("topology.as_level_only", self.as_level_only.to_string());
        put("topology.seed", self.topology_seed.to_string());
        put("policy.name", self.policy.label());
        put("policy.probcache_times", self.policy.probcache_target_times.to_string());
        put("policy.seed", self.policy.seed.to_string());
        put("workload.population", self.population.to_string());
        put("workload.requests", self.requests.to_string());
        put("workload.alpha", self.alpha.to_string());
        put("workload.q", self.q.to_string());
        put(
            "workload.sources",
            match self.sources {
                SourceStrategy::Uniform => "all".into(),
                SourceStrategy::Subset(k) => format!("subset:{k}"),
            },
        );
        put("workload.seed", self.workload_seed.to_string());
        put("workload.permutation_seed", self.permutation_seed.to_string());
        put("interest.strategy", self.interest.name().into());
        put("interest.fraction", self.interest_fraction.to_string());
        put("interest.seed", self.interest_seed.to_string());
        put("routing.designation", self.designation.name().into());
        put("routing.virtual_nodes", self.virtual_nodes.to_string());
        put("run.window", self.window.to_string());
        put("run.output", self.output.display().to_string());
        out
    }
}

struct Reader<'a> {
    kv: &'a BTreeMap<String, String>,
}

impl Reader<'_> {
    fn get<T: FromStr>(&mut self, key: &str, default: T) -> Result<T> {
        self.get_with(key, default, |s| s.parse::<T>().map_err(|_| ()))
    }

    fn get_with<T, E>(&mut self, key: &str, default: T, parse: impl Fn(&str) -> Result<T, E>) -> Result<T> {
        match self.kv.get(key) {
            None => Ok(default),
            Some(v) => parse(v).map_err(|_| Error::Config(format!("{key}: invalid value {v:?}"))),
        }
    }
}
