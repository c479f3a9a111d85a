//! Subcommand implementations.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use quilt_core::engine::closed_form::bath_temperature;
use quilt_core::measures::PairwiseTangleMatrix;
use quilt_core::oracle::{compare_engines, COMPARE_TOL};
use quilt_core::qstate::Propagator;
use quilt_core::scheme::{build_binary_tree, build_uniform_quilt, Event, Scheme};
use quilt_core::simulate::{simulate, EngineChoice};

use crate::cli::{Cli, Command, HeatmapArgs, PrepArgs, PrepSchedule, ReplayArgs, TemperatureArgs};
use crate::config::{EngineName, RunConfig};
use crate::events::{format_events, EventFile};
use crate::export::{read_tangle_csv, tangle_csv, write_heatmap, HEATMAP_FLOOR};
use crate::manifest::{CompareRecord, Manifest, Outputs, SchemeRecord, SnapshotRecord};
use crate::presets::presets;

pub const TANGLES_CSV: &str = "tangles.csv";
pub const HEATMAP_PPM: &str = "tangles.ppm";
pub const MANIFEST_JSON: &str = "manifest.json";

pub fn snapshot_stem(events: u64) -> String {
    format!("snapshot_{events:06}")
}

pub fn execute(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Simulate(args) => {
            let config = args.resolve(None)?;
            let out = args.out.as_deref().context("simulate needs --out")?;
            run(&config, &config.build_scheme()?, Some(out), "simulate")
        }
        Command::Oracle(args) => {
            let config = args.resolve(Some(EngineName::Oracle))?;
            let out = args.out.as_deref().context("oracle needs --out")?;
            run(&config, &config.build_scheme()?, Some(out), "oracle")
        }
        Command::Compare(args) => {
            let config = args.resolve(Some(EngineName::Compare))?;
            run(&config, &config.build_scheme()?, args.out.as_deref(), "compare")
        }
        Command::Prep(args) => prep(&args),
        Command::Temperature(args) => temperature(&args),
        Command::Heatmap(args) => heatmap(&args),
        Command::Replay(args) => replay(&args),
        Command::Presets => {
            for p in presets() {
                println!("{:<28} {}", p.name, p.summary);
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Result of one run, before anything is written.
pub struct RunResult {
    pub tangles: PairwiseTangleMatrix,
    pub snapshots: Vec<(u64, PairwiseTangleMatrix)>,
    pub engine_used: &'static str,
    pub norm_error: Option<f64>,
    pub compare: Option<CompareRecord>,
    pub wall_time_s: f64,
}

pub fn compute(config: &RunConfig, scheme: &Scheme) -> Result<RunResult> {
    let start = Instant::now();
    let compare = if config.engine == EngineName::Compare {
        let r = compare_engines(scheme, config.oracle_cap())?;
        Some(CompareRecord {
            max_diff: r.max_diff,
            tolerance: COMPARE_TOL,
            passed: r.passed(),
            worst_pair: r.worst_pair,
            first_offending_event: r.first_offending_event,
        })
    } else {
        None
    };
    let engine: EngineChoice = config.engine_choice();
    let out = simulate(scheme, engine, &config.snapshots)?;
    Ok(RunResult {
        tangles: out.tangles,
        snapshots: out.snapshots,
        engine_used: out.engine,
        norm_error: out.norm_error,
        compare,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Writes CSVs, heat maps and the manifest into `dir`.
pub fn write_outputs(
    config: &RunConfig,
    scheme: &Scheme,
    result: &RunResult,
    dir: &Path,
    command: &str,
) -> Result<Manifest> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let scale = config.heatmap_scale;
    std::fs::write(dir.join(TANGLES_CSV), tangle_csv(&result.tangles))?;
    write_heatmap(&result.tangles, scale, &dir.join(HEATMAP_PPM))?;
    let mut snapshots = Vec::new();
    for (events, m) in &result.snapshots {
        let stem = snapshot_stem(*events);
        let rec = SnapshotRecord { events: *events, tangles_csv: format!("{stem}.csv"), heatmap: format!("{stem}.ppm") };
        std::fs::write(dir.join(&rec.tangles_csv), tangle_csv(m))?;
        write_heatmap(m, scale, &dir.join(&rec.heatmap))?;
        snapshots.push(rec);
    }
    let manifest = Manifest {
        version: env!("CARGO_PKG_VERSION").into(),
        command: command.into(),
        config: config.clone(),
        seed: config.seed,
        engine: serde_json::to_value(config.engine)?.as_str().unwrap_or_default().into(),
        engine_used: result.engine_used.into(),
        scheme: SchemeRecord::from(scheme),
        wall_time_s: result.wall_time_s,
        heatmap_floor: HEATMAP_FLOOR,
        outputs: Outputs { tangles_csv: TANGLES_CSV.into(), heatmap: HEATMAP_PPM.into() },
        snapshots,
        compare: result.compare.clone(),
        norm_error: result.norm_error,
    };
    manifest.save(&dir.join(MANIFEST_JSON))?;
    Ok(manifest)
}

fn run(config: &RunConfig, scheme: &Scheme, out: Option<&Path>, command: &str) -> Result<ExitCode> {
    let result = compute(config, scheme)?;
    let mut line = format!(
        "{} qubits, {} events, engine {}, {:.3} s",
        scheme.n_qubits,
        scheme.n_events(),
        result.engine_used,
        result.wall_time_s
    );
    if let Some(e) = result.norm_error {
        write!(line, ", norm error {e:.1e}")?;
    }
    println!("{line}");
    if let Some(dir) = out {
        write_outputs(config, scheme, &result, dir, command)?;
        println!("wrote {}", dir.join(MANIFEST_JSON).display());
    }
    Ok(report_compare(result.compare.as_ref()))
}

fn report_compare(compare: Option<&CompareRecord>) -> ExitCode {
    let Some(c) = compare else { return ExitCode::SUCCESS };
    let verdict = if c.passed { "PASS" } else { "FAIL" };
    let mut line = format!("max diff {:.3e} (tolerance {:.0e}) {verdict}", c.max_diff, c.tolerance);
    if let Some((i, j)) = c.worst_pair {
        let _ = write!(line, ", worst pair ({i}, {j})");
    }
    if let Some(k) = c.first_offending_event {
        let _ = write!(line, ", first breach after event {k}");
    }
    println!("{line}");
    if c.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn prep(args: &PrepArgs) -> Result<ExitCode> {
    let scheme = match args.schedule {
        PrepSchedule::Uniform => build_uniform_quilt(args.n, args.coupling)?,
        PrepSchedule::Binary => build_binary_tree(args.n, args.coupling)?,
    };
    let events: Vec<Event> = scheme.events().collect();
    let file = EventFile { n_qubits: Some(args.n), excited: Some(scheme.initial.excited.clone()), events };
    let text = format_events(&file);
    match &args.out {
        Some(path) => std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    if let Some(path) = &args.gates {
        std::fs::write(path, gate_list(&file.events)?).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}

/// One line per collision: `old new` and the 16 entries `re im` of the
/// interaction-picture unitary, row-major in the basis
/// `|00⟩, |01⟩, |10⟩, |11⟩` with `old` as the first factor.
pub fn gate_list(events: &[Event]) -> Result<String> {
    let mut out = String::from("# old new then re,im of U row-major in |00>,|01>,|10>,|11> (old qubit first)\n");
    for e in events {
        let Event::Collision(c) = e else { anyhow::bail!("gate lists cover two-qubit collisions only") };
        let u = Propagator::new(c.kind, c.coupling, 0.0, 0.0, c.duration)?.matrix();
        write!(out, "{} {}", c.old, c.new)?;
        for r in 0..4 {
            for k in 0..4 {
                write!(out, " {} {}", u[(r, k)].re, u[(r, k)].im)?;
            }
        }
        out.push('\n');
    }
    Ok(out)
}

fn temperature(args: &TemperatureArgs) -> Result<ExitCode> {
    let omega = 2.0 * std::f64::consts::PI * args.freq_ghz * 1e9;
    for &odds in &args.odds {
        let t = bath_temperature(odds, omega)?;
        println!("f = {} GHz, odds {odds:e}: T = {t:.6} K ({:.3} mK)", args.freq_ghz, 1e3 * t);
    }
    Ok(ExitCode::SUCCESS)
}

fn heatmap(args: &HeatmapArgs) -> Result<ExitCode> {
    let m = read_tangle_csv(&args.csv)?;
    write_heatmap(&m, args.scale, &args.out)?;
    Ok(ExitCode::SUCCESS)
}

fn replay(args: &ReplayArgs) -> Result<ExitCode> {
    let manifest = Manifest::load(&args.manifest)?;
    let scheme = Scheme::try_from(manifest.scheme.clone())?;
    let result = compute(&manifest.config, &scheme)?;
    let fresh = write_outputs(&manifest.config, &scheme, &result, &args.out, &manifest.command)?;
    println!("replayed {} events into {}", scheme.n_events(), args.out.display());
    if !args.check {
        return Ok(ExitCode::SUCCESS);
    }
    let recorded_dir = args.manifest.parent().map_or_else(PathBuf::new, Path::to_path_buf);
    let pairs = std::iter::once((&manifest.outputs.tangles_csv, &fresh.outputs.tangles_csv))
        .chain(manifest.snapshots.iter().zip(&fresh.snapshots).map(|(a, b)| (&a.tangles_csv, &b.tangles_csv)));
    let mut identical = manifest.snapshots.len() == fresh.snapshots.len();
    for (old, new) in pairs {
        let a = std::fs::read(recorded_dir.join(old)).with_context(|| format!("reading recorded {old}"))?;
        let b = std::fs::read(args.out.join(new))?;
        if a != b {
            println!("{old}: differs");
            identical = false;
        }
    }
    println!("{}", if identical { "replay identical" } else { "replay differs" });
    Ok(if identical { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compare_breach_exits_nonzero() {
        let mut rec = CompareRecord {
            max_diff: 2e-9,
            tolerance: COMPARE_TOL,
            passed: false,
            worst_pair: Some((1, 3)),
            first_offending_event: Some(4),
        };
        assert_eq!(report_compare(Some(&rec)), ExitCode::FAILURE);
        rec.passed = true;
        assert_eq!(report_compare(Some(&rec)), ExitCode::SUCCESS);
        assert_eq!(report_compare(None), ExitCode::SUCCESS);
    }

    #[test]
    fn gate_list_of_quarter_period_exchange() {
        let events = [Event::Collision(quilt_core::scheme::CollisionEvent::ee(0, 1, 1.0, std::f64::consts::FRAC_PI_4))];
        let text = gate_list(&events).unwrap();
        let line = text.lines().nth(1).unwrap();
        let v: Vec<f64> = line.split(' ').skip(2).map(|x| x.parse().unwrap()).collect();
        assert_eq!(v.len(), 32);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // |01⟩ → (|01⟩ − i|10⟩)/√2.
        assert!((v[2 * 5] - h).abs() < 1e-15 && (v[2 * 6 + 1] + h).abs() < 1e-15);
        assert_eq!((v[0], v[30]), (1.0, 1.0));
    }
}
