//! Request workloads under Zipf-Mandelbrot popularity.

mod persistence;
mod workload;
mod zipf;

pub use persistence::{classify_persistence, count_persistent, Persistence};
pub use workload::{generate_workload, read_trace, trace_hash, write_trace, RequestEvent, SourceStrategy, Workload, TRACE_HEADER};
pub use zipf::{zm_pmf, ZmSampler};
