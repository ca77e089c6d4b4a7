//! Experiment orchestration: run configuration, single runs with their
//! output directory, parameter sweeps, and plot-ready CSV export.

mod config;
mod plot;
mod run;
mod sweep;
mod table;

pub use config::{RunConfig, TopologySource};
pub use plot::{emit_plot_data, FIGURE_KEYS};
pub use run::{
    build_as_graph, build_topology, execute, failure_tables, generate_trace, prepare, result_tables, run_simulation,
    simulate, write_run_dir, write_tables, Prepared, ResultTables, RunLabel, RunOutput, PER_AS_COLUMNS,
    RETENTION_COLUMNS, SUMMARY_COLUMNS, WINDOW_COLUMNS,
};
pub use sweep::{run_sweep, SweepAxis, SweepOutcome, SweepSpec};
pub use table::Table;
