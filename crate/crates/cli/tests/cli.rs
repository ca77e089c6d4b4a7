use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn icncache(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_icncache"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const SMALL: &str = "\
topology.kind=waxman
topology.as_count=5
topology.routers_per_as=4
policy.name=SCENE1
workload.population=100
workload.requests=600
run.window=200
run.output=out/run
";

fn workspace() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("small.txt"), SMALL).unwrap();
    dir
}

#[test]
fn init_config_round_trips_through_validate() {
    let dir = tempfile::tempdir().unwrap();
    let out = icncache(&["init-config", "--profile", "desk"], dir.path());
    assert!(out.status.success());
    assert!(stdout(&out).contains("topology.capacity=5"));
    fs::write(dir.path().join("desk.txt"), stdout(&out)).unwrap();
    let v = icncache(&["validate", "desk.txt"], dir.path());
    assert!(v.status.success(), "{}", stderr(&v));
    assert!(stdout(&v).starts_with("ok: 20 ASes, 200 routers, 1000 cache slots"));

    let caida = icncache(&["init-config", "--profile", "caida"], dir.path());
    assert!(!caida.status.success());
    assert!(stderr(&caida).contains("--as-links"));
}

#[test]
fn run_then_replay_gives_the_same_summary() {
    let dir = workspace();
    let run = icncache(&["run", "small.txt", "--debug-trace"], dir.path());
    assert!(run.status.success(), "{}", stderr(&run));
    let run_dir = dir.path().join("out/run");
    for f in ["summary.csv", "windows.csv", "trace.csv", "debug_trace.csv", "caches.csv", "workload.sha256"] {
        assert!(run_dir.join(f).is_file(), "missing {f}");
    }
    let replay = icncache(&["replay", "out/run/trace.csv", "small.txt"], dir.path());
    assert!(replay.status.success(), "{}", stderr(&replay));
    let a = fs::read_to_string(run_dir.join("summary.csv")).unwrap();
    let b = fs::read_to_string(run_dir.join("replay/summary.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn sweep_writes_tables_and_plots() {
    let dir = workspace();
    let out = icncache(
        &[
            "sweep", "small.txt", "--axis", "capacity", "--values", "1,5", "--policies", "CEE,SCENE2_F", "--output",
            "sw", "--figures", "fig10,fig16",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let summary = fs::read_to_string(dir.path().join("sw/summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 5);
    assert!(summary.contains("SCENE2_F"));
    assert!(dir.path().join("sw/plots/fig16.csv").is_file());

    let plot = icncache(&["plot", "sw", "--figures", "fig7", "--output", "p"], dir.path());
    assert!(plot.status.success(), "{}", stderr(&plot));
    assert!(dir.path().join("p/fig7.csv").is_file());

    let bad = icncache(&["plot", "sw", "--figures", "fig99"], dir.path());
    assert!(!bad.status.success());
    assert!(stderr(&bad).contains("fig16"));
}

#[test]
fn failed_sweep_runs_set_the_exit_status() {
    let dir = workspace();
    let out = icncache(&["sweep", "small.txt", "--axis", "capacity", "--values", "2,x", "--policies", "CEE"], dir.path());
    assert!(!out.status.success());
    let summary = fs::read_to_string(dir.path().join("out/run/summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 3);
    assert!(stderr(&out).contains("1 run(s) failed"));
}

#[test]
fn zipf_sweep_and_topology_export() {
    let dir = workspace();
    let out = icncache(&["sweep", "small.txt", "--axis", "alpha,q", "--values", "0.6:0;1.2:5", "--policies", "SCENE1"], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let gen = icncache(&["gen-topology", "small.txt", "--output", "topo.txt"], dir.path());
    assert!(gen.status.success());
    assert!(stdout(&gen).starts_with("5 ASes, 20 routers, 100 cache slots"));
    assert!(fs::read_to_string(dir.path().join("topo.txt")).unwrap().lines().count() > 20);
}

#[test]
fn config_errors_are_reported() {
    let dir = workspace();
    fs::write(dir.path().join("typo.txt"), "topology.kind=waxman\ntopology.capcity=3\n").unwrap();
    let out = icncache(&["validate", "typo.txt"], dir.path());
    assert!(!out.status.success());
    assert!(stderr(&out).contains("unknown key \"topology.capcity\""), "{}", stderr(&out));

    fs::write(dir.path().join("partial.txt"), "workload.requests=10\n").unwrap();
    let out = icncache(&["validate", "partial.txt"], dir.path());
    let err = stderr(&out);
    assert!(err.contains("topology.kind") && err.contains("policy.name"), "{err}");

    let missing = icncache(&["run", "nope.txt"], dir.path());
    assert!(!missing.status.success());
    assert!(stderr(&missing).contains("nope.txt"));
}
