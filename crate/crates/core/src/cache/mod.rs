//! Per-router LRU stores and the placement decision for every policy.

mod lru;
mod policy;

pub use lru::{CacheStats, LruCache};
pub use policy::{parse_policy, probcache_probability, should_cache, CacheContext, PolicyConfig, PolicyKind};
