use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod manifest;
mod output;

use commands::*;

/// Simulator for curvature flows of convex bodies in hyperbolic space.
#[derive(Parser)]
#[command(name = "quermass", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one manifest and write series.csv, report.json, snapshots/ and summary.txt.
    Run {
        manifest: PathBuf,
        /// Output directory (overrides the manifest's `output`).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, short)]
        quiet: bool,
    },
    /// Run several manifests concurrently, each into OUT/<manifest stem>.
    Sweep {
        manifests: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (defaults to the available parallelism).
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Certify a speed function against the structural assumptions on random samples.
    CheckSpeed {
        name: String,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, short, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = quermass_core::symfunc::DEFAULT_TOL)]
        tol: f64,
    },
    /// Tabulate the quermassintegrals of geodesic balls as CSV.
    SphereTable {
        #[arg(long, short, default_value_t = 2)]
        n: usize,
        /// Indices k (defaults to 0..=n+1).
        #[arg(long, short, value_delimiter = ',')]
        k: Vec<usize>,
        #[arg(long, default_value_t = 0.1)]
        r_min: f64,
        #[arg(long, default_value_t = 3.0)]
        r_max: f64,
        #[arg(long, default_value_t = 30)]
        count: usize,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw planar snapshots in the Klein disc as SVG.
    Render {
        snapshots: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 512)]
        size: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run { manifest, out, quiet } => cmd_run(&manifest, out, quiet),
        Command::Sweep { manifests, out, jobs } => {
            let jobs = jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            cmd_sweep(&manifests, &out, jobs)
        }
        Command::CheckSpeed {
            name,
            alpha,
            n,
            samples,
            seed,
            tol,
        } => cmd_check_speed(&name, alpha, n, samples, seed, tol),
        Command::SphereTable {
            n,
            k,
            r_min,
            r_max,
            count,
            out,
        } => {
            let ks = if k.is_empty() { (0..=n + 1).collect() } else { k };
            match sphere_table(n, &ks, r_min, r_max, count) {
                Ok(table) => match out {
                    Some(p) => match std::fs::write(&p, table) {
                        Ok(()) => EXIT_OK,
                        Err(e) => {
                            eprintln!("error: {e}");
                            EXIT_IO
                        }
                    },
                    None => {
                        print!("{table}");
                        EXIT_OK
                    }
                },
                Err(e) => {
                    eprintln!("error: {e}");
                    exit_code(&e)
                }
            }
        }
        Command::Render { snapshots, out, size } => cmd_render(&snapshots, &out, size),
    };
    ExitCode::from(code)
}
