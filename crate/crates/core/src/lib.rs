//! Request-driven simulator for cooperative in-network caching.
//!
//! Each autonomous system hashes object ids onto a single designated router,
//! advertises a contiguous interest range, and requests are steered along AS
//! paths chosen by one of three routing scenarios. Cache-everything-everywhere
//! and ProbCache run on the same engine as baselines.

pub mod cache;
pub mod engine;
pub mod error;
pub mod experiment;
pub mod graph;
mod ids;
pub mod metrics;
pub mod routing;
pub mod topology;
pub mod traffic;

pub use error::{Error, Result};
pub use ids::{AsId, ObjectId, RouterId};
