use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::routing::Scenario;
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolicyKind {
    Cee,
    ProbCache,
    Scene1,
    Scene2,
    Scene3,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 5] = [
        PolicyKind::Cee,
        PolicyKind::ProbCache,
        PolicyKind::Scene1,
        PolicyKind::Scene2,
        PolicyKind::Scene3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::Cee => "CEE",
            PolicyKind::ProbCache => "PROBCACHE",
            PolicyKind::Scene1 => "SCENE1",
            PolicyKind::Scene2 => "SCENE2",
            PolicyKind::Scene3 => "SCENE3",
        }
    }

    /// AS-path scenario used for routing. The on-path baselines follow the default path.
    pub fn scenario(self) -> Scenario {
        match self {
            PolicyKind::Cee | PolicyKind::ProbCache | PolicyKind::Scene1 => Scenario::DefaultPath,
            PolicyKind::Scene2 => Scenario::InterestedShortest,
            PolicyKind::Scene3 => Scenario::InterestedDetour,
        }
    }

    /// Whether the policy caches only at designated routers.
    pub fn is_designated(self) -> bool {
        matches!(self, PolicyKind::Scene1 | PolicyKind::Scene2 | PolicyKind::Scene3)
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicyConfig {
    pub kind: PolicyKind,
    /// `true`: every AS on the path caches (the `_T` variants); `false`: only
    /// ASes interested in the object do (`_F`). Ignored outside SCENE2/3.
    pub cache_all_ases: bool,
    pub probcache_target_times: f64,
    pub seed: u64,
}

impl PolicyConfig {
    pub fn new(kind: PolicyKind) -> Self {
        PolicyConfig {
            kind,
            cache_all_ases: true,
            probcache_target_times: 10.0,
            seed: 1,
        }
    }

    /// Display label, e.g. `SCENE2_F`.
    pub fn label(&self) -> String {
        match self.kind {
            PolicyKind::Scene2 | PolicyKind::Scene3 => {
                format!("{}_{}", self.kind, if self.cache_all_ases { 'T' } else { 'F' })
            }
            k => k.name().to_string(),
        }
    }
}

/// Parses `CEE`, `PROBCACHE`, `SCENE1`, `SCENE2`, `SCENE3`, and the
/// `SCENE2_T`/`SCENE2_F`/`SCENE3_T`/`SCENE3_F` variants (case-insensitive).
/// Returns the kind and, for suffixed variants, the cache-all-ASes flag.
pub fn parse_policy(s: &str) -> Result<(PolicyKind, Option<bool>), Error> {
    let upper = s.trim().to_ascii_uppercase();
    let (base, variant) = match upper.rsplit_once('_') {
        Some((b, "T")) => (b, Some(true)),
        Some((b, "F")) => (b, Some(false)),
        _ => (upper.as_str(), None),
    };
    let kind = PolicyKind::from_str(base)?;
    if variant.is_some() && !matches!(kind, PolicyKind::Scene2 | PolicyKind::Scene3) {
        return Err(Error::Config(format!("policy {s:?}: _T/_F applies to SCENE2 and SCENE3 only")));
    }
    Ok((kind, variant))
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        PolicyKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown policy {s:?} (expected CEE, PROBCACHE, SCENE1, SCENE2 or SCENE3)"
                ))
            })
    }
}

/// Facts about one candidate router on the response path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CacheContext {
    /// The router's AS advertises a range covering the object.
    pub as_is_interested: bool,
    pub router_is_designated: bool,
    /// 1-based index among caching routers, counted from the serving end.
    pub path_position: usize,
    /// Number of caching routers on the response path.
    pub path_length: usize,
    /// Capacities summed from this router to the consumer end, inclusive.
    pub downstream_capacity_sum: usize,
    pub avg_cache_size: f64,
}

/// ProbCache caching probability, clamped to `[0, 1]`.
pub fn probcache_probability(ctx: &CacheContext, target_times: f64) -> f64 {
    if ctx.path_length == 0 || ctx.avg_cache_size <= 0.0 || target_times <= 0.0 {
        return 0.0;
    }
    let times_in = ctx.downstream_capacity_sum as f64 / (target_times * ctx.avg_cache_size);
    let weight = ctx.path_position as f64 / ctx.path_length as f64;
    (times_in * weight).clamp(0.0, 1.0)
}

pub fn should_cache(policy: &PolicyConfig, ctx: &CacheContext, rng: &mut impl Rng) -> bool {
    match policy.kind {
        PolicyKind::Cee => true,
        PolicyKind::Scene1 => ctx.router_is_designated,
        PolicyKind::Scene2 | PolicyKind::Scene3 => {
            ctx.router_is_designated && (policy.cache_all_ases || ctx.as_is_interested)
        }
        PolicyKind::ProbCache => {
            let p = probcache_probability(ctx, policy.probcache_target_times);
            rng.gen::<f64>() < p
        }
    }
}
