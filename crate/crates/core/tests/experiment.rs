use std::fs;

use icncache::experiment::{
    emit_plot_data, execute, run_sweep, write_run_dir, ResultTables, RunConfig, SweepAxis, SweepSpec, TopologySource,
    FIGURE_KEYS,
};
use icncache::topology::WaxmanParams;
use icncache::Error;

fn small() -> RunConfig {
    let mut cfg = RunConfig::desk();
    cfg.topology = TopologySource::Waxman {
        as_count: 6,
        params: WaxmanParams { alpha: 0.4, beta: 0.2 },
    };
    cfg.routers_per_as = 5;
    cfg.population = 200;
    cfg.requests = 1200;
    cfg.window = 300;
    cfg
}

fn column(t: &icncache::experiment::Table, name: &str) -> Vec<String> {
    (0..t.len()).map(|i| t.get(i, name).unwrap().to_string()).collect()
}

#[test]
fn config_file_with_relative_topology() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("links.txt"), "1 2\n2 3\n3 1\n3 4\n").unwrap();
    let text = "# tiny\ntopology.kind = file\ntopology.file = links.txt\ntopology.routers_per_as=4\n\
                policy.name = scene2_f\nworkload.population=80\nworkload.requests=400\n";
    let path = dir.path().join("run.txt");
    fs::write(&path, text).unwrap();
    let cfg = RunConfig::load(&path).unwrap();
    assert_eq!(cfg.topology, TopologySource::File(dir.path().join("links.txt")));
    assert_eq!(cfg.policy.label(), "SCENE2_F");
    assert_eq!(RunConfig::parse(&cfg.emit()).unwrap(), cfg);

    let out = execute(&cfg, None, false).unwrap();
    assert_eq!(out.report.totals.requests, 400);
    assert_eq!(out.report.per_as.len(), 4);

    fs::remove_file(dir.path().join("links.txt")).unwrap();
    assert!(matches!(RunConfig::load(&path), Err(Error::Config(_))));
}

#[test]
fn policy_sweep_shares_one_workload() {
    let spec = SweepSpec::new(
        SweepAxis::Policy,
        ["CEE", "PROBCACHE", "SCENE1", "SCENE2", "SCENE3"].map(String::from).to_vec(),
    );
    let mut delivered = Vec::new();
    let outcome = run_sweep(&small(), &spec, |t| {
        delivered.push(t.summary.get(0, "policy").unwrap().to_string());
        Ok(())
    })
    .unwrap();
    assert_eq!(outcome.failures, 0);
    let s = &outcome.tables.summary;
    assert_eq!(s.len(), 5);
    assert_eq!(column(s, "policy"), ["CEE", "PROBCACHE", "SCENE1", "SCENE2_T", "SCENE3_T"]);
    assert_eq!(delivered, column(s, "policy"));
    let hashes = column(s, "workload_hash");
    assert!(hashes.iter().all(|h| h == &hashes[0] && h.len() == 64));
    assert!(column(s, "error").iter().all(String::is_empty));
    assert_eq!(outcome.tables.windows.len(), 5 * 4);
}

#[test]
fn capacity_sweep_lowers_server_load() {
    let mut spec = SweepSpec::new(SweepAxis::Capacity, ["1", "5", "20", "bogus"].map(String::from).to_vec());
    spec.policies = vec![icncache::cache::PolicyConfig::new(icncache::cache::PolicyKind::Cee)];
    spec.workers = 2;
    let outcome = run_sweep(&small(), &spec, |_| Ok(())).unwrap();
    assert_eq!(outcome.failures, 1);
    let s = &outcome.tables.summary;
    assert_eq!(column(s, "value"), ["1", "5", "20", "bogus"]);
    assert!(!s.get(3, "error").unwrap().is_empty());
    let shr: Vec<f64> = (0..3).map(|i| s.get(i, "server_hit_ratio").unwrap().parse().unwrap()).collect();
    assert!(shr[0] >= shr[1] && shr[1] >= shr[2], "{shr:?}");
}

#[test]
fn requests_scale_with_population() {
    let mut spec = SweepSpec::new(SweepAxis::Population, vec!["100".into(), "200".into()]);
    spec.policies = vec![icncache::cache::PolicyConfig::new(icncache::cache::PolicyKind::Scene1)];
    spec.requests_per_object = Some(3.0);
    let outcome = run_sweep(&small(), &spec, |_| Ok(())).unwrap();
    assert_eq!(column(&outcome.tables.summary, "requests"), ["300", "600"]);
    assert!(run_sweep(&small(), &SweepSpec::new(SweepAxis::Population, vec![]), |_| Ok(())).is_err());
}

#[test]
fn plot_data_for_every_figure() {
    let spec = SweepSpec::new(SweepAxis::Policy, vec!["CEE".into(), "SCENE1".into()]);
    let tables = run_sweep(&small(), &spec, |_| Ok(())).unwrap().tables;
    for key in FIGURE_KEYS {
        let files = emit_plot_data(&tables, key).unwrap();
        assert!(!files.is_empty(), "{key}");
        for (name, csv) in files {
            assert!(name.starts_with(key) && name.ends_with(".csv"), "{name}");
            assert!(csv.lines().count() >= 2, "{key} has no rows");
        }
    }
    let fig7 = emit_plot_data(&tables, "fig7").unwrap();
    assert!(fig7[0].1.starts_with("window_end,policy,server_hit_ratio\n"));
    let err = emit_plot_data(&tables, "fig99").unwrap_err().to_string();
    assert!(err.contains("fig4") && err.contains("fig16"), "{err}");
    let bare = ResultTables {
        summary: icncache::experiment::Table::new(&["policy"]),
        ..Default::default()
    };
    let err = emit_plot_data(&bare, "fig16").unwrap_err().to_string();
    assert!(err.contains("fig16") && err.contains("server_hit_ratio"), "{err}");
}

#[test]
fn run_directory_is_complete_and_byte_identical() {
    let mut cfg = small();
    cfg.policy.kind = icncache::cache::PolicyKind::Scene3;
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    write_run_dir(a.path(), &execute(&cfg, None, true).unwrap()).unwrap();
    write_run_dir(b.path(), &execute(&cfg, None, true).unwrap()).unwrap();
    let names = [
        "config.txt",
        "workload.sha256",
        "trace.csv",
        "topology.txt",
        "interest.txt",
        "debug_trace.csv",
        "caches.csv",
        "summary.csv",
        "windows.csv",
        "per_as.csv",
        "retention.csv",
    ];
    for n in names {
        let x = fs::read(a.path().join(n)).unwrap();
        assert_eq!(x, fs::read(b.path().join(n)).unwrap(), "{n} differs");
        assert!(!x.contains(&b'\r'), "{n} has CR line endings");
    }
    let loaded = ResultTables::load_dir(a.path()).unwrap();
    assert_eq!(loaded.summary.len(), 1);
    assert_eq!(loaded.windows.len(), 4);

    let reloaded = RunConfig::load(&a.path().join("config.txt")).unwrap();
    let trace = icncache::traffic::read_trace(&fs::read_to_string(a.path().join("trace.csv")).unwrap()).unwrap();
    let replay = execute(&reloaded, Some(trace), false).unwrap();
    assert_eq!(replay.tables.summary.to_csv(), loaded.summary.to_csv());
}
