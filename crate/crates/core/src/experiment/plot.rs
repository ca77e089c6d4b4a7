use std::collections::BTreeSet;

use super::run::ResultTables;
use super::table::Table;
use crate::traffic::zm_pmf;
use crate::{Error, Result};

/// Figure keys understood by [`emit_plot_data`].
pub const FIGURE_KEYS: &[&str] = &[
    "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11", "fig12", "fig15", "fig16",
];

const MAX_PMF_RANKS: u64 = 100_000;

enum Source {
    Summary,
    Windows,
}

fn need(table: &Table, name: &str, key: &str, cols: &[&str]) -> Result<()> {
    let missing = table.missing(cols);
    if missing.is_empty() {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "figure {key} needs columns {} missing from {name}",
            missing.join(", ")
        )))
    }
}

fn run_label(t: &Table, i: usize) -> String {
    let policy = t.get(i, "policy").unwrap_or_default();
    match t.get(i, "value").unwrap_or_default() {
        "" => policy.to_string(),
        v => format!("{policy}@{v}"),
    }
}

/// Copies `cols` out of a summary or window table. Output column `policy`
/// carries the run label (`POLICY` or `POLICY@value` inside a sweep).
fn project(tables: &ResultTables, key: &str, source: Source, cols: &[(&str, &str)]) -> Result<String> {
    let (t, name) = match source {
        Source::Summary => (&tables.summary, "summary.csv"),
        Source::Windows => (&tables.windows, "windows.csv"),
    };
    let mut inputs: Vec<&str> = cols.iter().map(|c| c.1).collect();
    if cols.iter().any(|c| c.0 == "policy") {
        inputs.push("value");
    }
    need(t, name, key, &inputs)?;
    let mut out = Table::new(&cols.iter().map(|c| c.0).collect::<Vec<_>>());
    for i in 0..t.len() {
        out.push(
            cols.iter()
                .map(|&(o, c)| {
                    if o == "policy" {
                        run_label(t, i)
                    } else {
                        t.get(i, c).unwrap_or_default().to_string()
                    }
                })
                .collect(),
        );
    }
    Ok(out.to_csv())
}

fn file_safe(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

/// Plot-ready CSVs for figure `key` as `(file name, contents)` pairs.
///
/// | key | columns |
/// |---|---|
/// | fig4 | `rank,requests,in_cache` (one file per run) |
/// | fig5 | `policy,median_as_retention` |
/// | fig6 | `population,policy,retention,ideal` |
/// | fig7 | `window_end,policy,server_hit_ratio` |
/// | fig8 | `alpha,q,rank,probability` |
/// | fig9 | `window_end,policy,server_hit_ratio` |
/// | fig10 | `window_end,policy,cache_hit_ratio` |
/// | fig11 | `window_end,policy,hopcount_ratio` |
/// | fig12 | `window_end,policy,avg_as_hops` |
/// | fig15 | `policy,evictions_per_million` |
/// | fig16 | `capacity,policy,server_hit_ratio` |
pub fn emit_plot_data(tables: &ResultTables, key: &str) -> Result<Vec<(String, String)>> {
    let one = |csv: String| Ok(vec![(format!("{key}.csv"), csv)]);
    let window = |metric: &str| {
        project(
            tables,
            key,
            Source::Windows,
            &[("window_end", "window_end"), ("policy", "policy"), (metric, metric)],
        )
    };
    match key {
        "fig4" => {
            let t = &tables.retention;
            need(t, "retention.csv", key, &["value", "policy", "rank", "requests", "in_cache"])?;
            let mut files: Vec<(String, Table)> = Vec::new();
            for i in 0..t.len() {
                let name = format!("fig4_{}.csv", file_safe(&run_label(t, i)));
                if files.last().map(|f| &f.0) != Some(&name) {
                    files.push((name, Table::new(&["rank", "requests", "in_cache"])));
                }
                let row = ["rank", "requests", "in_cache"]
                    .iter()
                    .map(|c| t.get(i, c).unwrap_or_default().to_string())
                    .collect();
                files.last_mut().expect("pushed above").1.push(row);
            }
            Ok(files.into_iter().map(|(n, t)| (n, t.to_csv())).collect())
        }
        "fig5" => one(project(
            tables,
            key,
            Source::Summary,
            &[("policy", "policy"), ("median_as_retention", "median_as_retention")],
        )?),
        "fig6" => one(project(
            tables,
            key,
            Source::Summary,
            &[
                ("population", "population"),
                ("policy", "policy"),
                ("retention", "retention"),
                ("ideal", "ideal"),
            ],
        )?),
        "fig7" | "fig9" => one(window("server_hit_ratio")?),
        "fig10" => one(window("cache_hit_ratio")?),
        "fig11" => one(window("hopcount_ratio")?),
        "fig12" => one(window("avg_as_hops")?),
        "fig15" => one(project(
            tables,
            key,
            Source::Summary,
            &[("policy", "policy"), ("evictions_per_million", "eviction_rate")],
        )?),
        "fig16" => one(project(
            tables,
            key,
            Source::Summary,
            &[("capacity", "capacity"), ("policy", "policy"), ("server_hit_ratio", "server_hit_ratio")],
        )?),
        "fig8" => {
            let t = &tables.summary;
            need(t, "summary.csv", key, &["alpha", "q", "population"])?;
            let mut seen = BTreeSet::new();
            let mut out = Table::new(&["alpha", "q", "rank", "probability"]);
            for i in 0..t.len() {
                let cells = ["alpha", "q", "population"].map(|c| t.get(i, c).unwrap_or_default().to_string());
                if !seen.insert(cells.clone()) {
                    continue;
                }
                let bad = || Error::Config(format!("figure fig8: unparsable alpha/q/population in summary row {}", i + 1));
                let alpha: f64 = cells[0].parse().map_err(|_| bad())?;
                let q: f64 = cells[1].parse().map_err(|_| bad())?;
                let n: u64 = cells[2].parse().map_err(|_| bad())?;
                for k in 1..=n.min(MAX_PMF_RANKS) {
                    out.push(vec![
                        cells[0].clone(),
                        cells[1].clone(),
                        k.to_string(),
                        format!("{:.9e}", zm_pmf(k, alpha, q, n)?),
                    ]);
                }
            }
            one(out.to_csv())
        }
        other => Err(Error::Config(format!(
            "unknown figure key {other:?}; known keys: {}",
            FIGURE_KEYS.join(", ")
        ))),
    }
}
