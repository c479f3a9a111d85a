//! End-to-end runs of the `quilt` binary.

use std::path::Path;
use std::process::{Command, Output};

use quilt_cli::export::{decode_pixel, parse_ppm, parse_tangle_csv, pixel, read_tangle_csv};
use quilt_cli::manifest::{Manifest, ScheduleRecord};

fn quilt<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_quilt")).args(args).env_remove("QUILT_ORACLE_CAP").output().unwrap()
}

fn ok(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn chain_run_writes_csv_heatmap_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let run = dir.path().join("run1");
    ok(&quilt(["simulate", "--scheme", "chain", "--n", "30", "--t", "0.785398", "--omega", "1", "--coupling", "1", "--out", path(&run)]));
    let text = std::fs::read_to_string(run.join("tangles.csv")).unwrap();
    assert_eq!(text.lines().count(), 30);
    assert!(text.lines().all(|l| l.split(',').count() == 30));
    let m = read_tangle_csv(&run.join("tangles.csv")).unwrap();
    let t: f64 = "0.785398".parse().unwrap();
    assert!((m.get(0, 1) - (2.0 * t).sin().powi(2) * t.cos().powi(2)).abs() < 1e-12);

    let manifest = Manifest::load(&run.join("manifest.json")).unwrap();
    assert_eq!(manifest.command, "simulate");
    assert_eq!((manifest.engine.as_str(), manifest.engine_used.as_str()), ("analytic", "pairs"));
    assert_eq!(manifest.heatmap_floor, -52.0);
    assert_eq!(manifest.version, env!("CARGO_PKG_VERSION"));
    assert!(manifest.wall_time_s >= 0.0);
    let ScheduleRecord::Explicit { events } = &manifest.scheme.schedule else { panic!("explicit log expected") };
    assert_eq!(events.len(), 29);

    let img = parse_ppm(&std::fs::read(run.join("tangles.ppm")).unwrap()).unwrap();
    assert_eq!((img.width, img.height), (30, 30));
}

#[test]
fn replay_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 4] = [
        &["--preset", "hot-qubit-chain-snapshots"],
        &["--scheme", "random", "--n", "12", "--seed", "5", "--kind", "xy", "--theta", "0.4", "--omega", "1.3"],
        &["--scheme", "thermal", "--n", "7", "--n-events", "5000", "--seed", "9", "--snapshots", "10,4000"],
        &["--scheme", "random-model", "--model", "superposed", "--n", "6", "--seed", "3", "--engine", "oracle"],
    ];
    for (k, args) in cases.iter().enumerate() {
        let first = dir.path().join(format!("first{k}"));
        let again = dir.path().join(format!("again{k}"));
        let mut cmd = vec!["simulate"];
        cmd.extend_from_slice(args);
        cmd.extend(["--out", path(&first)]);
        ok(&quilt(&cmd));
        let manifest_path = first.join("manifest.json");
        let out = ok(&quilt(["replay", path(&manifest_path), "--out", path(&again), "--check"]));
        assert!(out.contains("replay identical"), "{out}");
        let manifest = Manifest::load(&manifest_path).unwrap();
        let files = std::iter::once(manifest.outputs.tangles_csv.clone())
            .chain(manifest.snapshots.iter().map(|s| s.tangles_csv.clone()));
        for f in files {
            assert_eq!(std::fs::read(first.join(&f)).unwrap(), std::fs::read(again.join(&f)).unwrap(), "{f}");
        }
    }
}

#[test]
fn replay_check_detects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let run = dir.path().join("run");
    ok(&quilt(["simulate", "--scheme", "star", "--n", "5", "--out", path(&run)]));
    std::fs::write(run.join("tangles.csv"), "0\n").unwrap();
    let out = quilt(["replay", path(&run.join("manifest.json")), "--out", path(&dir.path().join("r")), "--check"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("replay differs"));
}

#[test]
fn snapshot_runs_list_one_matrix_per_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    ok(&quilt(["simulate", "--scheme", "chain", "--n", "6", "--snapshots", "1,3,5", "--out", path(dir.path())]));
    let manifest = Manifest::load(&dir.path().join("manifest.json")).unwrap();
    let counts: Vec<u64> = manifest.snapshots.iter().map(|s| s.events).collect();
    assert_eq!(counts, [1, 3, 5]);
    for s in &manifest.snapshots {
        let m = read_tangle_csv(&dir.path().join(&s.tangles_csv)).unwrap();
        // After k chain collisions qubits beyond k are untouched.
        assert!((s.events as usize + 1..6).all(|q| m.row(q).iter().all(|&t| t == 0.0)));
        assert!(dir.path().join(&s.heatmap).exists());
    }
    assert_eq!(std::fs::read(dir.path().join("snapshot_000005.csv")).unwrap(), std::fs::read(dir.path().join("tangles.csv")).unwrap());
}

#[test]
fn compare_reports_and_records_max_diff() {
    let out = ok(&quilt(["compare", "--scheme", "random", "--n", "8", "--seed", "7"]));
    assert!(out.contains("max diff") && out.contains("PASS"), "{out}");
    let dir = tempfile::tempdir().unwrap();
    ok(&quilt(["compare", "--scheme", "random-model", "--model", "xy", "--n", "9", "--seed", "2", "--out", path(dir.path())]));
    let manifest = Manifest::load(&dir.path().join("manifest.json")).unwrap();
    let compare = manifest.compare.expect("compare record");
    assert!(compare.passed && compare.max_diff <= 1e-9);
    assert_eq!(manifest.engine, "compare");
}

#[test]
fn oracle_cap_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_quilt"))
        .args(["oracle", "--scheme", "chain", "--n", "6", "--out", path(dir.path())])
        .env("QUILT_ORACLE_CAP", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
    ok(&quilt(["oracle", "--scheme", "chain", "--n", "6", "--out", path(dir.path())]));
    assert_eq!(Manifest::load(&dir.path().join("manifest.json")).unwrap().engine_used, "oracle");
}

#[test]
fn oracle_and_analytic_csvs_agree() {
    let dir = tempfile::tempdir().unwrap();
    let (a, o) = (dir.path().join("a"), dir.path().join("o"));
    ok(&quilt(["simulate", "--preset", "hot-qubit-star", "--n", "11", "--out", path(&a)]));
    ok(&quilt(["oracle", "--preset", "hot-qubit-star", "--n", "11", "--out", path(&o)]));
    let (ma, mo) = (read_tangle_csv(&a.join("tangles.csv")).unwrap(), read_tangle_csv(&o.join("tangles.csv")).unwrap());
    assert!(ma.max_abs_diff(&mo).0 <= 1e-9);
}

#[test]
fn temperature_matches_the_low_odds_estimate() {
    let out = ok(&quilt(["temperature", "--freq-ghz", "5", "--odds", "100000"]));
    let kelvin: f64 = out.split("T = ").nth(1).unwrap().split(' ').next().unwrap().parse().unwrap();
    assert!((kelvin - 0.020).abs() < 0.002, "{out}");
    assert_eq!(quilt(["temperature", "--freq-ghz", "5", "--odds", "2"]).status.code(), Some(2));
}

#[test]
fn heatmap_subcommand_round_trips_saved_csv() {
    let dir = tempfile::tempdir().unwrap();
    ok(&quilt(["simulate", "--preset", "ground-doubling", "--scale", "2", "--out", path(dir.path())]));
    let csv = dir.path().join("tangles.csv");
    let again = dir.path().join("again.ppm");
    ok(&quilt(["heatmap", "--csv", path(&csv), "--out", path(&again), "--scale", "2"]));
    let original = std::fs::read(dir.path().join("tangles.ppm")).unwrap();
    assert_eq!(std::fs::read(&again).unwrap(), original);

    let m = parse_tangle_csv(&std::fs::read(&csv).unwrap()).unwrap();
    let img = parse_ppm(&original).unwrap();
    assert_eq!(img.width, 64);
    // Uniform quilt on 32 qubits: every pair at log2(4/32^2) = -8.
    for (i, j, t) in m.pairs() {
        assert_eq!(img.at(2 * i, 2 * j + 1), pixel(t));
        let decoded = decode_pixel(img.at(2 * i + 1, 2 * j)).unwrap();
        assert!((decoded - t.log2()).abs() <= 0.5 * 52.0 / 255.0 + 1e-12);
        assert!((decoded + 8.0).abs() < 0.11);
    }
}

#[test]
fn prep_schedules_feed_back_into_simulate() {
    let dir = tempfile::tempdir().unwrap();
    for (schedule, n) in [("uniform", "12"), ("binary", "16")] {
        let events = dir.path().join(format!("{schedule}.txt"));
        let gates = dir.path().join(format!("{schedule}.gates"));
        ok(&quilt(["prep", "--schedule", schedule, "--n", n, "--out", path(&events), "--gates", path(&gates)]));
        let n: usize = n.parse().unwrap();
        let gate_lines = std::fs::read_to_string(&gates).unwrap().lines().filter(|l| !l.starts_with('#')).count();
        assert_eq!(gate_lines, n - 1);
        let run = dir.path().join(schedule);
        ok(&quilt(["simulate", "--events", path(&events), "--out", path(&run)]));
        let m = read_tangle_csv(&run.join("tangles.csv")).unwrap();
        assert_eq!(m.n(), n);
        let want = 4.0 / (n * n) as f64;
        assert!(m.pairs().all(|(_, _, t)| (t - want).abs() < 1e-12));
    }
    let stdout = ok(&quilt(["prep", "--schedule", "binary", "--n", "4"]));
    assert_eq!(stdout.lines().filter(|l| l.contains(" ee ")).count(), 3);
}

#[test]
fn config_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    std::fs::write(
        &config,
        "schema_version = 1\nscheme = \"star\"\nn = 9\nt = 0.5\nexcited = [0, 4]\nsnapshots = [3]\n",
    )
    .unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    ok(&quilt(["simulate", "--config", path(&config), "--out", path(&a)]));
    ok(&quilt(["simulate", "--scheme", "star", "--n", "9", "--t", "0.5", "--excited", "0,4", "--snapshots", "3", "--out", path(&b)]));
    for f in ["tangles.csv", "tangles.ppm", "snapshot_000003.csv"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn errors_exit_nonzero_with_a_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let bad_config = dir.path().join("bad.toml");
    std::fs::write(&bad_config, "schema_version = 7\n").unwrap();
    let revisit = dir.path().join("revisit.txt");
    std::fs::write(&revisit, "0 1 xy 1 0.5 0\n1 0 xy 1 0.5 0\n").unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["frobnicate"],
        vec!["simulate", "--n", "4", "--bogus"],
        vec!["simulate", "--config", path(&bad_config), "--out", path(dir.path())],
        vec!["simulate", "--events", path(&revisit), "--out", path(dir.path())],
        vec!["simulate", "--scheme", "binary", "--n", "12", "--out", path(dir.path())],
        vec!["simulate", "--scheme", "chain", "--n", "5"],
    ];
    for args in cases {
        let out = quilt(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    let out = quilt(["simulate", "--config", path(&bad_config), "--out", path(dir.path())]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("schema_version"));
}
