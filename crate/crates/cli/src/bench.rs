//! Timing harness for the interaction algorithm on the synthetic family.

use std::io::Write;
use std::time::Instant;

use gpb_core::random::synthetic;
use gpb_core::{run_algorithm2, Algorithm2Options, Grammar};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::CliError;
use crate::solve::Backend;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub algorithm: &'static str,
    pub backend: &'static str,
    pub n: usize,
    #[serde(rename = "C")]
    pub c: f64,
    pub seed: u64,
    pub wall_seconds: f64,
    #[serde(skip)]
    pub value: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fit {
    pub exponent: f64,
    pub intercept: f64,
    /// Root-mean-square residual of `ln t`.
    pub residual: f64,
    pub points: usize,
}

/// Least-squares fit of `ln t = x·ln n + b` over rows with `n` in
/// `[lo, hi]`. Needs two distinct `n` values.
pub fn fit_exponent(samples: &[(usize, f64)], lo: usize, hi: usize) -> Option<Fit> {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(n, t)| (lo..=hi).contains(n) && *t > 0.0)
        .map(|&(n, t)| ((n as f64).ln(), t.ln()))
        .collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if pts.len() < 2 || sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let sse: f64 = pts.iter().map(|p| (p.1 - intercept - exponent * p.0).powi(2)).sum();
    Some(Fit {
        exponent,
        intercept,
        residual: (sse / m).sqrt(),
        points: pts.len(),
    })
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub n_step: usize,
    pub c_list: Vec<f64>,
    pub seeds: Vec<u64>,
    pub backends: Vec<Backend>,
    pub fit_range: (usize, usize),
}

#[derive(Clone, Debug)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    /// Backends whose values differed beyond `1e-9` relative on some
    /// configuration.
    pub disagreements: Vec<String>,
}

impl BenchReport {
    pub fn fit(&self, backend: Backend, range: (usize, usize)) -> Option<Fit> {
        let samples: Vec<(usize, f64)> = self
            .rows
            .iter()
            .filter(|r| r.backend == backend.name())
            .map(|r| (r.n, r.wall_seconds))
            .collect();
        fit_exponent(&samples, range.0, range.1)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row).map_err(|e| CliError::Invalid(e.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Runs every configuration sequentially. Timing covers the solver only;
/// generation and table construction happen before the clock starts.
pub fn run_bench(config: &BenchConfig, mut progress: impl FnMut(&BenchRow)) -> Result<BenchReport, CliError> {
    if config.n_step == 0 || config.n_min == 0 || config.n_min > config.n_max {
        return Err(CliError::Invalid("need 1 ≤ n-min ≤ n-max and n-step ≥ 1".into()));
    }
    let mut rows = Vec::new();
    let mut disagreements = Vec::new();
    for n in (config.n_min..=config.n_max).step_by(config.n_step) {
        for &c in &config.c_list {
            for &seed in &config.seeds {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let inst = synthetic(&mut rng, n, c);
                let Grammar::Interaction(ig) = &inst.grammar else { unreachable!() };
                let prep = inst.prepare()?;
                let mut values = Vec::new();
                for &backend in &config.backends {
                    let options = Algorithm2Options {
                        backend: backend.apsp(),
                        backpointers: false,
                    };
                    let clock = Instant::now();
                    let run = run_algorithm2(&prep.index, &prep.tables, ig, options)?;
                    let row = BenchRow {
                        algorithm: "interaction",
                        backend: backend.name(),
                        n,
                        c,
                        seed,
                        wall_seconds: clock.elapsed().as_secs_f64(),
                        value: run.value,
                    };
                    progress(&row);
                    values.push(run.value);
                    rows.push(row);
                }
                if let Some(&first) = values.first() {
                    if values.iter().any(|&v| (v - first).abs() > 1e-9 * first.abs().max(1.0)) {
                        disagreements.push(format!("n={n} C={c} seed={seed}: {values:?}"));
                    }
                }
            }
        }
    }
    Ok(BenchReport { rows, disagreements })
}
