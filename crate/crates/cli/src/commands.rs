//! The CLI verbs.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use quermass_core::diagnostics::{analyze, render_svg, DiagnosticsReport};
use quermass_core::flowcore::series::write_series;
use quermass_core::flowcore::{run, FlowRun, Termination};
use quermass_core::hsurface::snapshot::{read_snapshot, write_snapshot};
use quermass_core::measures::{ball_w, ball_w_inverse};
use quermass_core::symfunc::{check_admissible, default_samples};
use quermass_core::{Error, GridMode, Result, SpeedFunction, SpeedKind};

use crate::manifest::RunManifest;
use crate::output::Staging;

pub const EXIT_OK: u8 = 0;
pub const EXIT_IO: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_INVARIANT: u8 = 3;
pub const EXIT_COLLAPSE: u8 = 4;

pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config { .. }
        | Error::UnknownSpeed(_)
        | Error::Parse(_)
        | Error::DimensionMismatch { .. }
        | Error::ModeMismatch(_) => EXIT_CONFIG,
        Error::StepCollapse { .. } => EXIT_COLLAPSE,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_INVARIANT,
    }
}

fn termination_code(t: Option<Termination>) -> u8 {
    match t {
        Some(Termination::TimeEnd | Termination::Converged) => EXIT_OK,
        Some(Termination::StepCollapse) => EXIT_COLLAPSE,
        _ => EXIT_INVARIANT,
    }
}

fn summary(run: &FlowRun, report: &DiagnosticsReport) -> String {
    let mut s = String::new();
    let cfg = &run.config;
    writeln!(s, "flow       n = {}, {} ^ {}, {:?}", cfg.n, report.speed, cfg.speed.alpha, cfg.constraint).unwrap();
    writeln!(s, "grid       {} nodes ({})", run.state.grid().len(), run.state.grid().mode.as_str()).unwrap();
    writeln!(s, "outcome    {:?} at t = {} after {} steps ({} rejected)", run.termination, run.t, run.steps, run.rejected).unwrap();
    if let Some(e) = &run.failure {
        writeln!(s, "failure    {e}").unwrap();
    }
    writeln!(s, "drift      {:e}", report.max_drift).unwrap();
    writeln!(s, "min kappa  {}", report.min_kappa).unwrap();
    writeln!(s, "max F      {} (bound {})", report.max_f, report.max_f_bound).unwrap();
    writeln!(
        s,
        "r_inf      fitted {} predicted {} error {:e}",
        report.r_inf.fitted, report.r_inf.predicted, report.r_inf.error
    )
    .unwrap();
    writeln!(s, "deviation  {:e}", report.sphere_deviation).unwrap();
    for m in &report.mode_fits {
        match &m.fit {
            Some(f) => writeln!(
                s,
                "mode {}     rate {} predicted {} (R^2 {:.6})",
                m.mode, f.rate, m.predicted_rate, f.r_squared
            )
            .unwrap(),
            None => writeln!(s, "mode {}     no fit: {}", m.mode, m.error.as_deref().unwrap_or("")).unwrap(),
        }
    }
    for (name, ok) in &report.checks {
        writeln!(s, "check      {:<22} {}", name, if *ok { "pass" } else { "FAIL" }).unwrap();
    }
    s
}

/// Runs one manifest and writes its artifacts to `out`; returns the exit code.
pub fn run_manifest(manifest: &RunManifest, out: &Path) -> Result<(u8, String)> {
    let initial = manifest.initial_state()?;
    let flow = run(&manifest.config, initial)?;
    let report = analyze(&flow, &manifest.analysis)?;
    let staging = Staging::new(out)?;
    let mut csv = Vec::new();
    write_series(&flow, &mut csv)?;
    staging.write("series.csv", csv)?;
    let json = serde_json::to_string_pretty(&report).map_err(|e| Error::Io(e.to_string()))?;
    staging.write("report.json", json + "\n")?;
    for (i, (t, st)) in flow.snapshots.iter().enumerate() {
        staging.write(&format!("snapshots/{i:05}.txt"), write_snapshot(st, *t))?;
    }
    if flow.state.grid().mode == GridMode::FullCircle {
        let first = flow.snapshots[0].1.clone();
        staging.write("flow.svg", render_svg(&[first, flow.state.clone()], 512)?)?;
    }
    let text = summary(&flow, &report);
    staging.write("summary.txt", &text)?;
    staging.commit()?;
    Ok((termination_code(flow.termination), text))
}

pub fn cmd_run(path: &Path, out: Option<PathBuf>, quiet: bool) -> u8 {
    let result = RunManifest::load(path).and_then(|m| {
        let out = out
            .or_else(|| m.output.as_ref().map(|o| m.base.join(o)))
            .ok_or_else(|| Error::config("output", "no output directory (use --out or the `output` field)"))?;
        run_manifest(&m, &out)
    });
    match result {
        Ok((code, text)) => {
            if !quiet {
                print!("{text}");
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Runs every manifest into `out/<manifest stem>` on up to `jobs` threads.
pub fn cmd_sweep(paths: &[PathBuf], out: &Path, jobs: usize) -> u8 {
    let next = AtomicUsize::new(0);
    let codes = Mutex::new(vec![EXIT_OK; paths.len()]);
    std::thread::scope(|scope| {
        for _ in 0..jobs.max(1).min(paths.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(path) = paths.get(i) else { break };
                let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| format!("run{i}"));
                let code = match RunManifest::load(path).and_then(|m| run_manifest(&m, &out.join(&stem))) {
                    Ok((code, _)) => code,
                    Err(e) => {
                        eprintln!("{}: {e}", path.display());
                        exit_code(&e)
                    }
                };
                codes.lock().unwrap()[i] = code;
            });
        }
    });
    let codes = codes.into_inner().unwrap();
    for (p, c) in paths.iter().zip(&codes) {
        println!("{}\t{}", c, p.display());
    }
    codes.into_iter().max().unwrap_or(EXIT_OK)
}

pub fn cmd_check_speed(name: &str, alpha: f64, n: usize, samples: usize, seed: u64, tol: f64) -> u8 {
    let speed = name
        .parse::<SpeedKind>()
        .and_then(|kind| SpeedFunction::new_unchecked(kind, n, alpha));
    let speed = match speed {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let report = check_admissible(&speed, &default_samples(n, samples, seed), tol);
    println!("speed {} alpha {} n {} ({} samples, tol {:e})", report.speed, alpha, n, samples, tol);
    println!("{:<28} {:>8} {:>8} {:>14}  result", "condition", "checked", "failed", "worst");
    for c in &report.summary {
        println!(
            "{:<28} {:>8} {:>8} {:>14.6e}  {}",
            c.condition,
            c.checked,
            c.failed,
            c.worst,
            if c.failed == 0 { "pass" } else { "FAIL" }
        );
    }
    if report.all_pass() {
        EXIT_OK
    } else {
        EXIT_INVARIANT
    }
}

/// CSV of `f_k(r)` with the round trip through the inverse.
pub fn sphere_table(n: usize, ks: &[usize], r_min: f64, r_max: f64, count: usize) -> Result<String> {
    if n == 0 || ks.iter().any(|&k| k > n + 1) {
        return Err(Error::config("k", format!("need 0 <= k <= n + 1 = {}", n + 1)));
    }
    if !(r_min > 0.0 && r_max >= r_min && count >= 1) {
        return Err(Error::config("r", "need 0 < r_min <= r_max and count >= 1"));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["n", "k", "r", "f_k", "inverse", "roundtrip_err"]).map_err(io)?;
    for &k in ks {
        for i in 0..count {
            let r = if count == 1 {
                r_min
            } else {
                r_min + (r_max - r_min) * i as f64 / (count - 1) as f64
            };
            let f = ball_w(n, k, r);
            let (inv, err) = match ball_w_inverse(n, k, f) {
                Ok(x) => (format!("{x:e}"), format!("{:e}", (x - r).abs())),
                Err(_) => (String::new(), String::new()),
            };
            w.write_record([n.to_string(), k.to_string(), format!("{r:e}"), format!("{f:e}"), inv, err])
                .map_err(io)?;
        }
    }
    String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.to_string()))?).map_err(|e| Error::Io(e.to_string()))
}

pub fn cmd_render(inputs: &[PathBuf], out: &Path, size: u32) -> u8 {
    let result = (|| {
        let mut states = Vec::new();
        for p in inputs {
            let text = std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
            states.push(read_snapshot(&text)?.state);
        }
        let svg = render_svg(&states, size)?;
        std::fs::write(out, svg)?;
        Ok(())
    })();
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
