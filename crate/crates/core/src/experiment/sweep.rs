use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::mpsc;

use rayon::prelude::*;

use super::config::RunConfig;
use super::run::{failure_tables, generate_trace, prepare, result_tables, simulate, Prepared, ResultTables, RunLabel};
use crate::cache::{parse_policy, PolicyConfig, PolicyKind};
use crate::traffic::{trace_hash, RequestEvent};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Policy,
    /// Per-router cache capacity.
    Capacity,
    /// Object population `n_p`.
    Population,
    /// Zipf-Mandelbrot parameters, values written `alpha:q`.
    Zipf,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Policy => "policy",
            SweepAxis::Capacity => "capacity",
            SweepAxis::Population => "population",
            SweepAxis::Zipf => "alpha,q",
        }
    }

    /// `base` with this axis set to `value`.
    pub fn apply(self, base: &RunConfig, value: &str) -> Result<RunConfig> {
        let bad = || Error::Config(format!("invalid {} value {value:?}", self.name()));
        let mut cfg = base.clone();
        match self {
            SweepAxis::Policy => {
                let (kind, variant) = parse_policy(value)?;
                cfg.policy.kind = kind;
                cfg.policy.cache_all_ases = variant.unwrap_or(true);
            }
            SweepAxis::Capacity => cfg.capacity = value.trim().parse().map_err(|_| bad())?,
            SweepAxis::Population => cfg.population = value.trim().parse().map_err(|_| bad())?,
            SweepAxis::Zipf => {
                let (a, q) = value.split_once(':').ok_or_else(bad)?;
                cfg.alpha = a.trim().parse().map_err(|_| bad())?;
                cfg.q = q.trim().parse().map_err(|_| bad())?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "policy" => Ok(SweepAxis::Policy),
            "capacity" => Ok(SweepAxis::Capacity),
            "population" => Ok(SweepAxis::Population),
            "alpha,q" | "zipf" => Ok(SweepAxis::Zipf),
            other => Err(Error::Config(format!(
                "unknown sweep axis {other:?} (expected policy, capacity, population or alpha,q)"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub values: Vec<String>,
    /// Policies run at every axis value (ignored on the policy axis).
    pub policies: Vec<PolicyConfig>,
    /// When set, each run issues `round(factor · n_p)` requests.
    pub requests_per_object: Option<f64>,
    pub workers: usize,
}

impl SweepSpec {
    pub fn new(axis: SweepAxis, values: Vec<String>) -> Self {
        SweepSpec {
            axis,
            values,
            policies: PolicyKind::ALL.iter().map(|&k| PolicyConfig::new(k)).collect(),
            requests_per_object: None,
            workers: 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub tables: ResultTables,
    pub failures: usize,
}

struct Group {
    value: String,
    config: Result<RunConfig, String>,
}

struct Job {
    group: usize,
    config: Result<RunConfig, String>,
    label: RunLabel,
}

type Shared = Result<(Prepared, Vec<RequestEvent>, String), String>;

/// Runs every (axis value, policy) pair. Runs sharing an axis value share
/// one topology and one workload trace. Up to `workers` runs execute in
/// parallel; `sink` receives each run's tables in job order as soon as all
/// earlier jobs have finished. A failed run yields a summary row whose
/// `error` column is set; the sweep carries on.
pub fn run_sweep(
    base: &RunConfig,
    spec: &SweepSpec,
    mut sink: impl FnMut(&ResultTables) -> Result<()>,
) -> Result<SweepOutcome> {
    if spec.values.is_empty() {
        return Err(Error::Config("sweep needs at least one value".into()));
    }
    let label = |v: &str| RunLabel {
        axis: spec.axis.name().into(),
        value: v.to_string(),
    };

    let groups: Vec<Group> = if spec.axis == SweepAxis::Policy {
        vec![Group {
            value: String::new(),
            config: Ok(base.clone()),
        }]
    } else {
        spec.values
            .iter()
            .map(|v| Group {
                value: v.clone(),
                config: spec.axis.apply(base, v).map(|mut c| {
                    if let Some(f) = spec.requests_per_object {
                        c.requests = (f * c.population as f64).round() as u64;
                    }
                    c
                }).map_err(|e| e.to_string()),
            })
            .collect()
    };

    let mut jobs = Vec::new();
    for (g, group) in groups.iter().enumerate() {
        if spec.axis == SweepAxis::Policy {
            for v in &spec.values {
                jobs.push(Job {
                    group: g,
                    config: SweepAxis::Policy.apply(base, v).map_err(|e| e.to_string()),
                    label: label(v),
                });
            }
        } else {
            for p in &spec.policies {
                jobs.push(Job {
                    group: g,
                    config: group.config.clone().map(|mut c| {
                        c.policy = PolicyConfig { seed: c.policy.seed, ..*p };
                        c
                    }),
                    label: label(&group.value),
                });
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;

    let shared: Vec<Shared> = pool.install(|| {
        groups
            .par_iter()
            .map(|g| {
                let cfg = g.config.clone()?;
                let prepared = prepare(&cfg).map_err(|e| e.to_string())?;
                let trace = generate_trace(&cfg, &prepared.topology).map_err(|e| e.to_string())?;
                let hash = trace_hash(&trace);
                Ok((prepared, trace, hash))
            })
            .collect()
    });

    let mut out = SweepOutcome {
        tables: ResultTables::default(),
        failures: 0,
    };
    let (tx, rx) = mpsc::channel::<(usize, ResultTables, bool)>();
    std::thread::scope(|scope| -> Result<()> {
        let jobs = &jobs;
        let shared = &shared;
        let pool = &pool;
        scope.spawn(move || {
            pool.install(|| {
                jobs.par_iter().enumerate().for_each_with(tx, |tx, (i, job)| {
                    let (tables, ok) = run_job(base, job, &shared[job.group]);
                    let _ = tx.send((i, tables, ok));
                });
            });
        });

        let mut pending = BTreeMap::new();
        let mut next = 0;
        let mut sink_error = None;
        for (i, tables, ok) in rx {
            pending.insert(i, (tables, ok));
            while let Some((tables, ok)) = pending.remove(&next) {
                if !ok {
                    out.failures += 1;
                }
                if sink_error.is_none() {
                    if let Err(e) = sink(&tables) {
                        sink_error = Some(e);
                    }
                }
                out.tables.append(&tables)?;
                next += 1;
            }
        }
        sink_error.map_or(Ok(()), Err)
    })?;
    Ok(out)
}

fn run_job(base: &RunConfig, job: &Job, shared: &Shared) -> (ResultTables, bool) {
    let cfg = match &job.config {
        Ok(c) => c,
        Err(e) => return (failure_tables(base, &job.label, e), false),
    };
    let (prepared, trace, hash) = match shared {
        Ok(s) => s,
        Err(e) => return (failure_tables(cfg, &job.label, e), false),
    };
    match simulate(cfg, prepared, trace) {
        Ok(report) => (
            result_tables(cfg, &job.label, &report, hash, prepared.topology.total_capacity()),
            true,
        ),
        Err(e) => (failure_tables(cfg, &job.label, &e.to_string()), false),
    }
}
