use std::collections::{HashMap, HashSet};

use super::RequestEvent;
use crate::{Error, ObjectId, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Persistence {
    /// The gap to the next request of the object first fell below tau at this seq.
    PersistentAfter(u64),
    Transient,
}

/// Scans a seq-sorted trace for the first request of `object` followed by
/// another request of it fewer than `tau` requests later.
pub fn classify_persistence(trace: &[RequestEvent], object: ObjectId, tau: f64) -> Result<Persistence> {
    if tau.is_nan() || tau <= 0.0 {
        return Err(Error::Validation(format!("persistence threshold {tau} must be positive")));
    }
    let mut prev: Option<u64> = None;
    for e in trace.iter().filter(|e| e.object == object) {
        if let Some(p) = prev {
            if ((e.seq - p) as f64) < tau {
                return Ok(Persistence::PersistentAfter(p));
            }
        }
        prev = Some(e.seq);
    }
    Ok(Persistence::Transient)
}

/// Number of distinct objects that become persistent somewhere in the trace.
pub fn count_persistent(trace: &[RequestEvent], tau: f64) -> Result<usize> {
    if tau.is_nan() || tau <= 0.0 {
        return Err(Error::Validation(format!("persistence threshold {tau} must be positive")));
    }
    let mut last: HashMap<ObjectId, u64> = HashMap::new();
    let mut persistent: HashSet<ObjectId> = HashSet::new();
    for e in trace {
        if let Some(p) = last.insert(e.object, e.seq) {
            if ((e.seq - p) as f64) < tau {
                persistent.insert(e.object);
            }
        }
    }
    Ok(persistent.len())
}
