//! Sampled certification of the speed assumptions.
//!
//! (a) `fddot + 2 diag(fdot / kappa)` positive semidefinite (inverse concavity),
//! (b) the pairwise condition for inverse concavity of `F_*`,
//! (c) `sum fdot_i kappa_i^2 >= f^2`,
//! (d) `f_*` decaying to zero along boundary-approach sequences.

use nalgebra::SymmetricEigen;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::SpeedFunction;

pub const DEFAULT_TOL: f64 = 1e-9;
const PROBE_T: [f64; 3] = [1e-2, 1e-4, 1e-6];
const PROBE_BASES: usize = 16;

#[derive(Debug, Clone, Serialize)]
pub struct SampleCheck {
    pub kappa: Vec<f64>,
    pub min_eig: f64,
    pub min_pair: f64,
    pub euler_slack: f64,
    pub pass_a: bool,
    pub pass_b: bool,
    pub pass_c: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundaryProbe {
    pub base: Vec<f64>,
    /// Components driven to zero.
    pub vanishing: Vec<usize>,
    pub t: Vec<f64>,
    pub values: Vec<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionSummary {
    pub condition: &'static str,
    pub checked: usize,
    pub failed: usize,
    /// Most negative normalized margin seen (>= -tol means pass).
    pub worst: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityReport {
    pub speed: String,
    pub n: usize,
    pub tol: f64,
    pub samples: Vec<SampleCheck>,
    pub probes: Vec<BoundaryProbe>,
    pub summary: Vec<ConditionSummary>,
}

impl AdmissibilityReport {
    pub fn all_pass(&self) -> bool {
        self.summary.iter().all(|c| c.failed == 0)
    }

    pub fn condition(&self, name: &str) -> Option<&ConditionSummary> {
        self.summary.iter().find(|c| c.condition == name)
    }
}

/// Randomized sample suite: bulk log-uniform points, near-boundary points and
/// near-repeated spectra.
pub fn default_samples(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| match i % 7 {
            5 => {
                let mut k: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
                k[rng.gen_range(0..n)] = 10f64.powf(rng.gen_range(-6.0..-3.0));
                k
            }
            6 => {
                let base = 10f64.powf(rng.gen_range(-1.0..1.0));
                (0..n)
                    .map(|_| base * (1.0 + rng.gen_range(-1e-9..1e-9)))
                    .collect()
            }
            _ => (0..n).map(|_| 10f64.powf(rng.gen_range(-2.0..2.0))).collect(),
        })
        .collect()
}

pub fn check_admissible(spec: &SpeedFunction, samples: &[Vec<f64>], tol: f64) -> AdmissibilityReport {
    let n = spec.n;
    let mut checks = Vec::with_capacity(samples.len());
    for kappa in samples {
        let Ok(b) = spec.derivatives(kappa) else {
            continue;
        };
        let m = nalgebra::DMatrix::from_fn(n, n, |k, l| {
            b.hess[(k, l)] + if k == l { 2.0 * b.grad[k] / kappa[k] } else { 0.0 }
        });
        let scale_a = m.amax().max(1.0);
        let min_eig = SymmetricEigen::new(m).eigenvalues.min() / scale_a;

        let mut min_pair = f64::INFINITY;
        for k in 0..n {
            for l in 0..n {
                if k == l {
                    continue;
                }
                let terms = [b.off_diag[(k, l)], b.grad[k] / kappa[l], b.grad[l] / kappa[k]];
                let scale = terms.iter().map(|t| t.abs()).fold(1.0, f64::max);
                min_pair = min_pair.min(terms.iter().sum::<f64>() / scale);
            }
        }
        if n == 1 {
            min_pair = 0.0;
        }

        let lhs: f64 = (0..n).map(|i| b.grad[i] * kappa[i] * kappa[i]).sum();
        let euler_slack = (lhs - b.value * b.value) / (b.value * b.value).max(1.0);

        checks.push(SampleCheck {
            kappa: kappa.clone(),
            min_eig,
            min_pair,
            euler_slack,
            pass_a: min_eig >= -tol,
            pass_b: min_pair >= -tol,
            pass_c: euler_slack >= -tol,
        });
    }

    let mut probes = Vec::new();
    for base in samples.iter().take(PROBE_BASES) {
        let mut patterns = vec![vec![0]];
        if n > 2 {
            patterns.push((0..n - 1).collect());
        }
        for vanishing in patterns {
            let values: Vec<f64> = PROBE_T
                .iter()
                .map(|&t| {
                    let mut z = base.clone();
                    for &i in &vanishing {
                        z[i] = t * base[i];
                    }
                    spec.eval_dual(&z).unwrap_or(f64::NAN)
                })
                .collect();
            let decreasing = values.windows(2).all(|w| w[1] < w[0]);
            let pass = decreasing && values[values.len() - 1] <= 0.5 * values[0];
            probes.push(BoundaryProbe {
                base: base.clone(),
                vanishing,
                t: PROBE_T.to_vec(),
                values,
                pass,
            });
        }
    }

    let summarize = |name: &'static str, margins: Vec<f64>| ConditionSummary {
        condition: name,
        checked: margins.len(),
        failed: margins.iter().filter(|&&m| !(m >= -tol)).count(),
        worst: margins.iter().cloned().fold(f64::INFINITY, f64::min),
    };
    let summary = vec![
        summarize("a", checks.iter().map(|c| c.min_eig).collect()),
        summarize("b", checks.iter().map(|c| c.min_pair).collect()),
        summarize("c", checks.iter().map(|c| c.euler_slack).collect()),
        summarize(
            "d",
            probes
                .iter()
                .map(|p| if p.pass { 0.0 } else { -1.0 })
                .collect(),
        ),
    ];

    AdmissibilityReport {
        speed: spec.name(),
        n,
        tol,
        samples: checks,
        probes,
        summary,
    }
}
