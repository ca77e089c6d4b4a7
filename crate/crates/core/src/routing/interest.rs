use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::AsRoutes;
use crate::topology::Topology;
use crate::{AsId, Error, ObjectId, Result};

/// Inclusive contiguous id sector `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InterestRange {
    lo: ObjectId,
    hi: ObjectId,
}

impl InterestRange {
    pub fn new(lo: u64, hi: u64) -> Result<Self> {
        if lo > hi {
            return Err(Error::Validation(format!("interest range [{lo},{hi}] has lo > hi")));
        }
        Ok(InterestRange {
            lo: ObjectId(lo),
            hi: ObjectId(hi),
        })
    }

    pub fn lo(&self) -> ObjectId {
        self.lo
    }

    pub fn hi(&self) -> ObjectId {
        self.hi
    }

    pub fn len(&self) -> u64 {
        self.hi.0 - self.lo.0 + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn covers(&self, id: ObjectId) -> bool {
        self.lo <= id && id <= self.hi
    }
}

impl fmt::Display for InterestRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

/// Smallest range covering all inputs, provided that after sorting each
/// range overlaps or directly follows the union of its predecessors.
pub fn aggregate_interest(ranges: &[InterestRange]) -> Result<InterestRange> {
    let mut sorted = ranges.to_vec();
    sorted.sort();
    let mut iter = sorted.into_iter();
    let mut acc = iter
        .next()
        .ok_or_else(|| Error::Validation("nothing to aggregate".into()))?;
    for next in iter {
        if next.lo.0 > acc.hi.0.saturating_add(1) {
            return Err(Error::Aggregation(acc, next));
        }
        acc.hi = acc.hi.max(next.hi);
    }
    Ok(acc)
}

/// How interest sectors are laid over the id space when a registry is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterestStrategy {
    /// No AS advertises anything.
    None,
    /// Partition `[0, n_p)` into consecutive sectors proportional to each
    /// interested AS's cache capacity.
    Proportional,
    /// Each interested AS advertises a sector as large as its capacity
    /// (capped at `n_p`), laid end to end and wrapping to the start of the
    /// id space; a sector that would straddle the end is shifted back.
    Sized,
}

impl InterestStrategy {
    pub fn name(self) -> &'static str {
        match self {
            InterestStrategy::None => "none",
            InterestStrategy::Proportional => "proportional",
            InterestStrategy::Sized => "sized",
        }
    }
}

impl std::str::FromStr for InterestStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(InterestStrategy::None),
            "proportional" => Ok(InterestStrategy::Proportional),
            "sized" => Ok(InterestStrategy::Sized),
            _ => Err(Error::Config(format!(
                "unknown interest strategy {s:?} (expected none, proportional or sized)"
            ))),
        }
    }
}

/// Interest sectors advertised by ASes. Read-only during a run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InterestRegistry {
    ranges: BTreeMap<AsId, InterestRange>,
}

impl InterestRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn advertise(&mut self, as_id: AsId, range: InterestRange) -> Result<()> {
        match self.ranges.entry(as_id) {
            Entry::Occupied(_) => Err(Error::Validation(format!("AS {as_id} advertised more than one range"))),
            Entry::Vacant(v) => {
                v.insert(range);
                Ok(())
            }
        }
    }

    pub fn range(&self, as_id: AsId) -> Option<InterestRange> {
        self.ranges.get(&as_id).copied()
    }

    pub fn covers(&self, as_id: AsId, id: ObjectId) -> bool {
        self.range(as_id).is_some_and(|r| r.covers(id))
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.is_empty()
    }

    pub fn len(&self) -> usize {
        self.ranges.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (AsId, InterestRange)> + '_ {
        self.ranges.iter().map(|(&a, &r)| (a, r))
    }

    /// Builds sectors for a `fraction` of the ASes (picked by a seeded
    /// shuffle) over the id space `[0, population)`.
    pub fn assign(
        topology: &Topology,
        population: u64,
        strategy: InterestStrategy,
        fraction: f64,
        seed: u64,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&fraction) {
            return Err(Error::Validation(format!("interested fraction {fraction} outside [0, 1]")));
        }
        let mut registry = InterestRegistry::new();
        if strategy == InterestStrategy::None || population == 0 {
            return Ok(registry);
        }
        let ases = topology.ases();
        let count = (fraction * ases.len() as f64).round() as usize;
        let mut chosen: Vec<AsId> = ases.iter().map(|a| a.id).collect();
        if count < chosen.len() {
            chosen.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            chosen.truncate(count);
            chosen.sort();
        }
        let capacity = |a: AsId| ases[a.index()].capacity as u64;

        match strategy {
            InterestStrategy::None => {}
            InterestStrategy::Proportional => {
                let total: u64 = chosen.iter().map(|&a| capacity(a)).sum();
                let mut cum = 0u64;
                for (i, &a) in chosen.iter().enumerate() {
                    // zero total capacity: fall back to equal shares
                    let (num, den) = if total == 0 {
                        (i as u64, chosen.len() as u64)
                    } else {
                        (cum, total)
                    };
                    let lo = (population as u128 * num as u128 / den as u128) as u64;
                    cum += capacity(a);
                    let next_num = if total == 0 { i as u64 + 1 } else { cum };
                    let hi_excl = (population as u128 * next_num as u128 / den as u128) as u64;
                    if hi_excl > lo {
                        registry.advertise(a, InterestRange::new(lo, hi_excl - 1)?)?;
                    }
                }
            }
            InterestStrategy::Sized => {
                let mut start = 0u64;
                for &a in &chosen {
                    let len = capacity(a).min(population);
                    if len == 0 {
                        continue;
                    }
                    let lo = if start + len > population { population - len } else { start };
                    registry.advertise(a, InterestRange::new(lo, lo + len - 1)?)?;
                    start = (lo + len) % population;
                }
            }
        }
        Ok(registry)
    }

    /// Dump as `ASID lo hi` lines.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (a, r) in self.iter() {
            let _ = writeln!(out, "{a} {} {}", r.lo, r.hi);
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut registry = InterestRegistry::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let nums: Vec<u64> = line
                .split_whitespace()
                .map(|f| f.parse().map_err(|_| Error::parse(idx + 1, format!("bad integer {f:?}"))))
                .collect::<Result<_>>()?;
            let [a, lo, hi] = nums[..] else {
                return Err(Error::parse(idx + 1, "expected `ASID lo hi`"));
            };
            registry.advertise(AsId(a as u32), InterestRange::new(lo, hi)?)?;
        }
        Ok(registry)
    }
}

/// The AS covering `id` closest (in AS hops) to `from`; ties go to the lower AS id.
pub fn nearest_interested_as(
    registry: &InterestRegistry,
    routes: &AsRoutes,
    from: AsId,
    id: ObjectId,
) -> Option<AsId> {
    registry
        .iter()
        .filter(|(_, r)| r.covers(id))
        .filter_map(|(a, _)| routes.distance(from, a).map(|d| (d, a)))
        .min()
        .map(|(_, a)| a)
}
