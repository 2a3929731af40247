//! Seeded Monte-Carlo sweeps over agent counts, convergence detection and
//! the least-squares fit of mean convergence time against `n`.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::continuous::{self, ContinuousConfig};
use crate::discrete::{self, DiscreteConfig};
use crate::error::{Error, Result};
use crate::trace::{write_summaries_csv, Model, RunSummary, Trace};

/// splitmix64 output finalizer; a bijection on `u64`.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of run `rep` at agent count `n`:
/// `mix64(base_seed + mix64((n << 32) | rep))`.
///
/// For a fixed base seed this is injective over all `n, rep < 2^32`, since
/// the packing and both mixes are bijections.
pub fn derive_seed(base_seed: u64, n: usize, rep: usize) -> u64 {
    assert!(
        n < (1 << 32) && rep < (1 << 32),
        "n and rep must fit in 32 bits"
    );
    let key = ((n as u64) << 32) | rep as u64;
    mix64(base_seed.wrapping_add(mix64(key)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub model: Model,
    pub n_values: Vec<usize>,
    pub reps: usize,
    pub base_seed: u64,
    pub spread: f64,
    /// Discrete model.
    pub step_size: f64,
    pub convergence_radius: f64,
    pub max_steps: u64,
    /// Continuous model.
    pub delta: f64,
    pub substep: f64,
    pub max_intervals: u64,
}

impl SweepConfig {
    pub fn new(model: Model, n_values: Vec<usize>, reps: usize, base_seed: u64) -> Self {
        let spread = match model {
            Model::Discrete => discrete::DEFAULT_SPREAD,
            Model::Continuous => 5.0,
        };
        SweepConfig {
            model,
            n_values,
            reps,
            base_seed,
            spread,
            step_size: 1.0,
            convergence_radius: 1.0,
            max_steps: discrete::DEFAULT_MAX_STEPS,
            delta: continuous::DEFAULT_DELTA,
            substep: continuous::DEFAULT_SUBSTEP,
            max_intervals: continuous::DEFAULT_MAX_INTERVALS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps < 1 {
            return Err(Error::config("reps must be at least 1"));
        }
        if self.n_values.is_empty() {
            return Err(Error::config("n list must not be empty"));
        }
        if self.n_values.contains(&0) {
            return Err(Error::config("every n must be at least 1"));
        }
        // Validate the per-run configuration once, with a representative n.
        match self.model {
            Model::Discrete => self.discrete_config(1, 0).validate(),
            Model::Continuous => self.continuous_config(1, 0).validate(),
        }
    }

    pub fn discrete_config(&self, n: usize, seed: u64) -> DiscreteConfig {
        DiscreteConfig {
            n,
            step_size: self.step_size,
            spread: self.spread,
            seed,
            max_steps: self.max_steps,
            convergence_radius: self.convergence_radius,
            record_every: 0,
        }
    }

    pub fn continuous_config(&self, n: usize, seed: u64) -> ContinuousConfig {
        ContinuousConfig {
            n,
            delta: self.delta,
            substep: self.substep,
            spread: self.spread,
            seed,
            max_intervals: self.max_intervals,
            record_every: 0,
        }
    }

    /// Grid cells `(n, rep)` in output order: `n` as listed, then `rep`.
    fn cells(&self) -> Vec<(usize, usize)> {
        self.n_values
            .iter()
            .flat_map(|&n| (0..self.reps).map(move |rep| (n, rep)))
            .collect()
    }
}

/// Runs every `(n, rep)` cell, in parallel, and returns the summaries in
/// grid order with `run_id` set to the cell index.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<RunSummary>> {
    config.validate()?;
    let cells = config.cells();
    cells
        .par_iter()
        .enumerate()
        .map(|(run_id, &(n, rep))| {
            let seed = derive_seed(config.base_seed, n, rep);
            let mut summary = match config.model {
                Model::Discrete => {
                    discrete::run_discrete(&config.discrete_config(n, seed))?.summary
                }
                Model::Continuous => {
                    continuous::run_continuous(&config.continuous_config(n, seed))?.summary
                }
            };
            summary.run_id = run_id as u64;
            Ok(summary)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub pearson_r: f64,
}

/// Ordinary least squares line through `points` and their Pearson
/// correlation. Needs at least two distinct `x` values. When every `y` is
/// equal the correlation is undefined and reported as 0.
pub fn least_squares_fit(points: &[(f64, f64)]) -> Result<FitResult> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return Err(Error::domain("least squares needs at least two points"));
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (dx, dy) = (x - mx, y - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx.is_nan() || sxx <= 0.0 {
        return Err(Error::domain("x values have no variance"));
    }
    let slope = sxy / sxx;
    let pearson_r = if syy > 0.0 {
        (sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0)
    } else {
        0.0
    };
    Ok(FitResult {
        slope,
        intercept: my - slope * mx,
        pearson_r,
    })
}

/// Mean convergence step at one agent count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NMean {
    pub n: usize,
    /// Mean over converged runs; `None` if no run converged.
    pub mean_converged_step: Option<f64>,
    pub converged: usize,
    pub not_converged: usize,
}

/// Fit of mean convergence step against `n`. The fit fields are `None` when
/// fewer than two agent counts have converged runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepFit {
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub pearson_r: Option<f64>,
    pub n_means: Vec<NMean>,
}

impl SweepFit {
    pub fn not_converged(&self) -> usize {
        self.n_means.iter().map(|m| m.not_converged).sum()
    }
}

/// Averages converged runs per `n` (in ascending `n`) and fits a line through
/// the means. Runs that never converged are counted but excluded.
pub fn fit_summaries(summaries: &[RunSummary]) -> SweepFit {
    let mut ns: Vec<usize> = summaries.iter().map(|s| s.n).collect();
    ns.sort_unstable();
    ns.dedup();
    let n_means: Vec<NMean> = ns
        .into_iter()
        .map(|n| {
            let steps: Vec<f64> = summaries
                .iter()
                .filter(|s| s.n == n)
                .filter_map(|s| s.converged_step.map(|k| k as f64))
                .collect();
            let total = summaries.iter().filter(|s| s.n == n).count();
            NMean {
                n,
                mean_converged_step: (!steps.is_empty())
                    .then(|| steps.iter().sum::<f64>() / steps.len() as f64),
                converged: steps.len(),
                not_converged: total - steps.len(),
            }
        })
        .collect();
    let points: Vec<(f64, f64)> = n_means
        .iter()
        .filter_map(|m| m.mean_converged_step.map(|y| (m.n as f64, y)))
        .collect();
    let fit = least_squares_fit(&points).ok();
    SweepFit {
        slope: fit.map(|f| f.slope),
        intercept: fit.map(|f| f.intercept),
        pearson_r: fit.map(|f| f.pearson_r),
        n_means,
    }
}

/// Path of the fit JSON written next to a sweep CSV: `runs.csv` gives
/// `runs.fit.json`.
pub fn fit_path(out: &Path) -> PathBuf {
    out.with_extension("fit.json")
}

/// Runs the sweep, writes the summaries CSV to `out` and the fit JSON to
/// [`fit_path`]`(out)`.
pub fn run_sweep_to(config: &SweepConfig, out: &Path) -> Result<(Vec<RunSummary>, SweepFit)> {
    let summaries = run_sweep(config)?;
    let fit = fit_summaries(&summaries);
    write_summaries_csv(&summaries, BufWriter::new(File::create(out)?))?;
    let mut json = serde_json::to_string_pretty(&fit)?;
    json.push('\n');
    std::fs::write(fit_path(out), json)?;
    Ok((summaries, fit))
}

/// How a frame's enclosing radius is compared with the target radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvergenceTest {
    /// `radius <= target`, used by the discrete model.
    AtMost,
    /// `radius < target`, the continuous model's confinement.
    Below,
}

/// Step of the first frame whose enclosing radius passes the test.
pub fn detect_convergence(trace: &Trace, radius: f64, test: ConvergenceTest) -> Option<u64> {
    trace
        .frames()
        .iter()
        .find(|f| match test {
            ConvergenceTest::AtMost => f.radius <= radius,
            ConvergenceTest::Below => f.radius < radius,
        })
        .map(|f| f.step)
}
