use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use icncache::cache::{parse_policy, PolicyConfig};
use icncache::experiment::{
    build_topology, emit_plot_data, execute, prepare, run_sweep, write_run_dir, write_tables, ResultTables,
    RunConfig, SweepAxis, SweepSpec, Table,
};
use icncache::topology::write_snapshot;
use icncache::traffic::read_trace;

#[derive(Parser)]
#[command(name = "icncache", version, about = "Cooperative in-network caching simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation and write its run directory.
    Run {
        config: PathBuf,
        /// Overrides `run.output`.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Also write `debug_trace.csv` and `caches.csv`.
        #[arg(long)]
        debug_trace: bool,
    },
    /// Run the configuration across the values of one parameter.
    Sweep {
        config: PathBuf,
        /// policy, capacity, population or alpha,q
        #[arg(long)]
        axis: String,
        /// Comma-separated values; `alpha:q` pairs are separated by `;`.
        #[arg(long)]
        values: String,
        /// Comma-separated policies to run at each value (default: all five).
        #[arg(long)]
        policies: Option<String>,
        /// Issue round(F · population) requests per run.
        #[arg(long, value_name = "F")]
        requests_per_object: Option<f64>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Comma-separated figure keys to export after the sweep.
        #[arg(long)]
        figures: Option<String>,
    },
    /// Build the configured topology and write its snapshot.
    GenTopology {
        config: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Run a configuration over a recorded workload trace.
    Replay {
        trace: PathBuf,
        config: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check a configuration, including building its topology.
    Validate { config: PathBuf },
    /// Print a complete configuration for a bundled profile.
    InitConfig {
        /// desk, full or caida
        #[arg(long, default_value = "desk")]
        profile: String,
        /// AS links file, required by the caida profile.
        #[arg(long)]
        as_links: Option<PathBuf>,
    },
    /// Export plot-ready CSVs from a run or sweep directory.
    Plot {
        dir: PathBuf,
        /// Comma-separated figure keys.
        #[arg(long)]
        figures: String,
        /// Defaults to `<dir>/plots`.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn load(path: &Path) -> Result<RunConfig> {
    RunConfig::load(path).with_context(|| format!("loading {}", path.display()))
}

fn export_figures(tables: &ResultTables, keys: &str, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    for key in keys.split(',').map(str::trim).filter(|k| !k.is_empty()) {
        for (name, csv) in emit_plot_data(tables, key)? {
            fs::write(dir.join(&name), csv)?;
            println!("wrote {}", dir.join(name).display());
        }
    }
    Ok(())
}

fn print_summary(t: &Table) {
    for i in 0..t.len() {
        let g = |c| t.get(i, c).unwrap_or_default();
        println!(
            "{:<10} {:<8} server_hit={} hop_ratio={} retention={} evictions/M={} {}",
            g("policy"),
            g("value"),
            g("server_hit_ratio"),
            g("hopcount_ratio"),
            g("retention"),
            g("eviction_rate"),
            g("error"),
        );
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run {
            config,
            output,
            debug_trace,
        } => {
            let cfg = load(&config)?;
            let out = execute(&cfg, None, debug_trace)?;
            let dir = output.unwrap_or_else(|| cfg.output.clone());
            write_run_dir(&dir, &out)?;
            print_summary(&out.tables.summary);
            println!("wrote {}", dir.display());
            Ok(true)
        }
        Command::Sweep {
            config,
            axis,
            values,
            policies,
            requests_per_object,
            workers,
            output,
            figures,
        } => {
            let cfg = load(&config)?;
            let axis: SweepAxis = axis.parse()?;
            let sep = if axis == SweepAxis::Zipf { ';' } else { ',' };
            let values: Vec<String> = values
                .split(sep)
                .map(|v| v.trim().to_string())
                .filter(|v| !v.is_empty())
                .collect();
            let mut spec = SweepSpec::new(axis, values);
            spec.workers = workers;
            spec.requests_per_object = requests_per_object;
            if let Some(p) = policies {
                spec.policies = p
                    .split(',')
                    .map(|s| {
                        let (kind, variant) = parse_policy(s)?;
                        let mut p = PolicyConfig::new(kind);
                        p.cache_all_ases = variant.unwrap_or(true);
                        Ok(p)
                    })
                    .collect::<icncache::Result<_>>()?;
            }
            let dir = output.unwrap_or_else(|| cfg.output.clone());
            fs::create_dir_all(&dir)?;
            fs::write(dir.join("config.txt"), cfg.emit())?;
            let mut summary = fs::File::create(dir.join("summary.csv"))?;
            let header = ResultTables::default().summary.header_csv();
            summary.write_all(header.as_bytes())?;
            let outcome = run_sweep(&cfg, &spec, |t| {
                summary.write_all(t.summary.rows_csv(0).as_bytes())?;
                summary.flush()?;
                print_summary(&t.summary);
                Ok(())
            })?;
            let tables = outcome.tables;
            write_tables(&dir, &tables)?;
            if let Some(keys) = figures {
                export_figures(&tables, &keys, &dir.join("plots"))?;
            }
            if outcome.failures > 0 {
                eprintln!("{} run(s) failed; see the error column of summary.csv", outcome.failures);
            }
            Ok(outcome.failures == 0)
        }
        Command::GenTopology { config, output } => {
            let cfg = load(&config)?;
            let topo = build_topology(&cfg)?;
            fs::write(&output, write_snapshot(&topo))?;
            println!(
                "{} ASes, {} routers, {} cache slots -> {}",
                topo.ases().len(),
                topo.routers().len(),
                topo.total_capacity(),
                output.display()
            );
            Ok(true)
        }
        Command::Replay { trace, config, output } => {
            let cfg = load(&config)?;
            let text = fs::read_to_string(&trace).with_context(|| format!("reading {}", trace.display()))?;
            let events = read_trace(&text)?;
            let out = execute(&cfg, Some(events), false)?;
            let dir = output.unwrap_or_else(|| cfg.output.join("replay"));
            write_run_dir(&dir, &out)?;
            print_summary(&out.tables.summary);
            println!("wrote {}", dir.display());
            Ok(true)
        }
        Command::Validate { config } => {
            let cfg = load(&config)?;
            let prepared = prepare(&cfg)?;
            println!(
                "ok: {} ASes, {} routers, {} cache slots, {} interested ASes",
                prepared.topology.ases().len(),
                prepared.topology.routers().len(),
                prepared.topology.total_capacity(),
                prepared.registry.len()
            );
            Ok(true)
        }
        Command::InitConfig { profile, as_links } => {
            let cfg = match (profile.as_str(), as_links) {
                ("caida", Some(p)) => RunConfig::caida(p),
                ("caida", None) => bail!("the caida profile needs --as-links <file>"),
                (name, _) => RunConfig::profile(name)?,
            };
            print!("{}", cfg.emit());
            Ok(true)
        }
        Command::Plot { dir, figures, output } => {
            let tables = ResultTables::load_dir(&dir)?;
            export_figures(&tables, &figures, &output.unwrap_or_else(|| dir.join("plots")))?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
