use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn quermass(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quermass"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn manifest(dir: &Path, name: &str, k: usize, extra: &str) -> String {
    let text = format!(
        r#"{{
  "n": 1,
  "constraint": {{"kind": "quermass", "k": {k}}},
  "speed": {{"name": "Ek_root(1)", "alpha": 1.0}},
  "t_end": 12.0,
  "grid": 128,
  "initial": {{"shape": "perturbed_circle(r0=1, eps=0.1, m=2)"}},
  "seed": 3{extra}
}}"#
    );
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn standard_run_reaches_the_predicted_radius_and_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let m = manifest(dir.path(), "std.json", 1, "");
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let out = quermass(&["run", &m, "--out", a.to_str().unwrap(), "--quiet"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(a.join("report.json")).unwrap()).unwrap();
    let err = report["r_inf"]["error"].as_f64().unwrap();
    assert!(err < 1e-4, "r_inf error {err}");
    assert!(a.join("snapshots/00000.txt").exists());
    assert!(a.join("summary.txt").exists());
    assert!(a.join("flow.svg").exists());

    let out = quermass(&["run", &m, "--out", b.to_str().unwrap(), "--quiet"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read(a.join("series.csv")).unwrap(), fs::read(b.join("series.csv")).unwrap());
    assert_eq!(fs::read(a.join("report.json")).unwrap(), fs::read(b.join("report.json")).unwrap());
}

#[test]
fn rerun_replaces_previous_artifacts() {
    let dir = TempDir::new().unwrap();
    let m = manifest(dir.path(), "short.json", 1, "");
    let text = fs::read_to_string(&m).unwrap().replace("12.0", "0.5");
    fs::write(&m, text).unwrap();
    let out = dir.path().join("out");
    fs::create_dir_all(&out).unwrap();
    fs::write(out.join("stale.txt"), "x").unwrap();
    assert_eq!(quermass(&["run", &m, "--out", out.to_str().unwrap(), "-q"]).status.code(), Some(0));
    assert!(!out.join("stale.txt").exists());
    assert!(out.join("series.csv").exists());
    let leftovers: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().contains(".tmp-"))
        .collect();
    assert!(leftovers.is_empty());
}

#[test]
fn k_above_n_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let m = manifest(dir.path(), "bad.json", 2, "");
    let out_dir = dir.path().join("out");
    let out = quermass(&["run", &m, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("constraint.k"));
    assert!(!out_dir.exists());
}

#[test]
fn unknown_manifest_field_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let m = manifest(dir.path(), "typo.json", 1, r#", "renormalise": true"#);
    let out = quermass(&["run", &m, "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn run_from_snapshot() {
    let dir = TempDir::new().unwrap();
    let m = manifest(dir.path(), "seed.json", 1, "");
    let text = fs::read_to_string(&m).unwrap().replace("12.0", "0.2");
    fs::write(&m, text).unwrap();
    let first = dir.path().join("first");
    assert_eq!(quermass(&["run", &m, "--out", first.to_str().unwrap(), "-q"]).status.code(), Some(0));
    let snaps: Vec<_> = fs::read_dir(first.join("snapshots")).unwrap().collect();
    let last = format!("first/snapshots/{:05}.txt", snaps.len() - 1);
    let text = fs::read_to_string(&m)
        .unwrap()
        .replace(r#"{"shape": "perturbed_circle(r0=1, eps=0.1, m=2)"}"#, &format!(r#"{{"snapshot": "{last}"}}"#));
    let m2 = dir.path().join("resume.json");
    fs::write(&m2, text).unwrap();
    let out = quermass(&["run", m2.to_str().unwrap(), "--out", dir.path().join("second").to_str().unwrap(), "-q"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn sweep_runs_each_manifest() {
    let dir = TempDir::new().unwrap();
    let mut paths = Vec::new();
    for name in ["one.json", "two.json"] {
        let m = manifest(dir.path(), name, 1, "");
        let text = fs::read_to_string(&m).unwrap().replace("12.0", "0.3");
        fs::write(&m, text).unwrap();
        paths.push(m);
    }
    let out = dir.path().join("sweep");
    let mut args = vec!["sweep", "--out", out.to_str().unwrap(), "--jobs", "2"];
    args.extend(paths.iter().map(|s| s.as_str()));
    assert_eq!(quermass(&args).status.code(), Some(0));
    assert!(out.join("one/series.csv").exists());
    assert!(out.join("two/report.json").exists());
}

#[test]
fn check_speed_tables() {
    let ok = quermass(&["check-speed", "Ek_root(2)", "-n", "3", "--samples", "300"]);
    assert_eq!(ok.status.code(), Some(0));
    let ok = quermass(&["check-speed", "power_mean(0.5)", "-n", "2", "--samples", "300"]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = quermass(&["check-speed", "power_mean(-2)", "-n", "2", "--samples", "300"]);
    assert_ne!(bad.status.code(), Some(0));
    let table = String::from_utf8_lossy(&bad.stdout);
    let row_a = table.lines().find(|l| l.starts_with("a ")).unwrap();
    assert!(row_a.ends_with("FAIL"), "{row_a}");
    let unknown = quermass(&["check-speed", "mystery"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn sphere_table_values() {
    let out = quermass(&["sphere-table", "-n", "2", "-k", "1", "--r-min", "1", "--r-max", "1", "--count", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let f: f64 = row[3].parse().unwrap();
    // f_1(1) = (2/3) |S^2| int_0^1 cosh sinh
    let oracle = 4.0 * std::f64::consts::PI * 2.0 / 3.0 * quad(|r: f64| r.cosh() * r.sinh(), 0.0, 1.0);
    assert!((f - oracle).abs() < 1e-10, "{f} vs {oracle}");

    let out = quermass(&["sphere-table", "-n", "2", "-k", "0,1,2,3", "--count", "12"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').take(4).map(|x| x.parse().unwrap()).collect())
        .collect();
    for w in rows.windows(2) {
        if w[0][1] == w[1][1] && w[0][1] < 3.0 {
            assert!(w[1][3] > w[0][3]);
        }
    }
}

fn quad(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let m = 2000;
    let h = (b - a) / m as f64;
    (0..=m)
        .map(|i| {
            let w = if i == 0 || i == m { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            w * f(a + i as f64 * h)
        })
        .sum::<f64>()
        * h
        / 3.0
}

#[test]
fn render_snapshot_svg() {
    let dir = TempDir::new().unwrap();
    let snap = dir.path().join("c.txt");
    let mut text = String::from("n 1\nmode full_circle\nnodes 16\ntime 0\ncolumns theta r\n");
    for j in 0..16 {
        let t = 2.0 * std::f64::consts::PI * j as f64 / 16.0;
        text.push_str(&format!("{t:e} 1e0\n"));
    }
    fs::write(&snap, text).unwrap();
    let svg = dir.path().join("c.svg");
    let out = quermass(&["render", snap.to_str().unwrap(), "--out", svg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let body = fs::read_to_string(svg).unwrap();
    assert!(body.contains("<polygon"));
}
