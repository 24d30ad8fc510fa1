//! Ensemble statistics over independent single-particle automata.
//!
//! Trials are partitioned into fixed-size chunks; each chunk accumulates its
//! own sums and the chunk results are combined in index order. The grouping
//! is independent of the worker count, so the output is byte-identical for
//! any parallelism.

use super::track::{block_of, step_position};
use super::{decide, RuleParams};
use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::rng::{hash_counter, SplitMix64, STREAM_BOOTSTRAP, STREAM_TRIAL};
use rayon::prelude::*;
use serde::Serialize;

const TRIAL_CHUNK: u64 = 4096;

/// Parameters of one ensemble run.
#[derive(Clone, Debug)]
pub struct EnsembleConfig {
    pub rule: RuleParams,
    pub steps: u32,
    pub trials: u64,
    pub seed: u64,
    pub width: u32,
    pub height: u32,
}

impl EnsembleConfig {
    /// Torus sized so that the wraparound bias stays below sampling noise.
    pub fn with_auto_torus(rule: RuleParams, steps: u32, trials: u64, seed: u64) -> Self {
        let side = auto_torus_size(rule.diffusion_coefficient(), steps);
        EnsembleConfig {
            rule,
            steps,
            trials,
            seed,
            width: side,
            height: side,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.width < 4
            || self.height < 4
            || !self.width.is_multiple_of(2)
            || !self.height.is_multiple_of(2)
        {
            return Err(Error::InvalidParameter(format!(
                "torus dimensions must be even and >= 4, got {}x{}",
                self.width, self.height
            )));
        }
        Ok(())
    }
}

/// Next even integer at or above `6 sqrt(2 D_c t)`, with a floor of 4.
pub fn auto_torus_size(dc: f64, steps: u32) -> u32 {
    let side = 6.0 * (2.0 * dc * steps as f64).sqrt();
    let mut n = side.ceil() as u32;
    if n % 2 == 1 {
        n += 1;
    }
    n.max(4)
}

/// Walks one trial and reports `x_t` at every step through `visit(t, x)`.
///
/// The start column parity is randomized per trial so the initial movement
/// direction is symmetric, matching the symmetric chain initial condition.
#[inline]
fn walk_trial(cfg: &EnsembleConfig, trial: u64, mut visit: impl FnMut(u32, i64)) {
    let trial_bits = hash_counter(cfg.seed, STREAM_TRIAL, trial, 0);
    let trial_seed = hash_counter(cfg.seed, STREAM_TRIAL, trial, 1);
    let (w, h) = (cfg.width, cfg.height);
    let mut col = (w / 2) & !1;
    let mut row = (h / 2) & !1;
    col += (trial_bits & 1) as u32;
    let mut x = 0i64;
    for t in 0..cfg.steps as u64 {
        let a = (t % 2) as u32;
        let block = block_of(col, row, w, h, a);
        let decision = decide(&cfg.rule, trial_seed, 0, t, block);
        let (ncol, nrow, dx) = step_position(col, row, w, h, a, decision);
        col = ncol;
        row = nrow;
        x += dx as i64;
        visit(t as u32 + 1, x);
    }
}

struct ChunkMoments {
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
}

/// Unbiased sample dispersion of the x-projection at each `t = 1..=steps`.
pub fn ensemble_dispersion(cfg: &EnsembleConfig) -> Result<Vec<(u32, f64)>> {
    cfg.validate()?;
    if cfg.trials < 100 {
        return Err(Error::InvalidParameter(format!(
            "ensemble needs at least 100 trials, got {}",
            cfg.trials
        )));
    }
    let len = cfg.steps as usize;
    let chunks: Vec<(u64, u64)> = (0..cfg.trials)
        .step_by(TRIAL_CHUNK as usize)
        .map(|lo| (lo, (lo + TRIAL_CHUNK).min(cfg.trials)))
        .collect();
    let partials: Vec<ChunkMoments> = chunks
        .par_iter()
        .map(|&(lo, hi)| {
            let mut acc = ChunkMoments {
                sum: vec![0.0; len],
                sum_sq: vec![0.0; len],
            };
            for trial in lo..hi {
                walk_trial(cfg, trial, |t, x| {
                    let x = x as f64;
                    acc.sum[t as usize - 1] += x;
                    acc.sum_sq[t as usize - 1] += x * x;
                });
            }
            acc
        })
        .collect();
    let mut sum = vec![0.0; len];
    let mut sum_sq = vec![0.0; len];
    for part in &partials {
        for i in 0..len {
            sum[i] += part.sum[i];
            sum_sq[i] += part.sum_sq[i];
        }
    }
    let n = cfg.trials as f64;
    Ok((1..=cfg.steps)
        .map(|t| {
            let i = t as usize - 1;
            let var = (sum_sq[i] - sum[i] * sum[i] / n) / (n - 1.0);
            (t, var)
        })
        .collect())
}

/// Empirical distribution of the endpoint `x` over all trials.
pub fn endpoint_distribution(cfg: &EnsembleConfig) -> Result<Distribution<f64>> {
    cfg.validate()?;
    if cfg.trials == 0 {
        return Err(Error::InvalidParameter(
            "at least one trial required".into(),
        ));
    }
    let span = 2 * cfg.steps as usize + 1;
    let chunks: Vec<(u64, u64)> = (0..cfg.trials)
        .step_by(TRIAL_CHUNK as usize)
        .map(|lo| (lo, (lo + TRIAL_CHUNK).min(cfg.trials)))
        .collect();
    let partials: Vec<Vec<u64>> = chunks
        .par_iter()
        .map(|&(lo, hi)| {
            let mut counts = vec![0u64; span];
            for trial in lo..hi {
                let mut x_end = 0i64;
                walk_trial(cfg, trial, |_, x| x_end = x);
                counts[(x_end + cfg.steps as i64) as usize] += 1;
            }
            counts
        })
        .collect();
    let mut counts = vec![0u64; span];
    for part in &partials {
        for (c, p) in counts.iter_mut().zip(part.iter()) {
            *c += p;
        }
    }
    let n = cfg.trials as f64;
    Ok(Distribution::new(
        cfg.steps,
        -(cfg.steps as i64),
        counts.iter().map(|&c| c as f64 / n).collect(),
    ))
}

/// Diffusion estimate from a dispersion series.
#[derive(Clone, Debug, Serialize)]
pub struct DiffusionEstimate {
    pub k: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub window: [u32; 2],
    pub dx: f64,
    pub dt: f64,
    pub seed: u64,
}

/// Averages `D_t / (2t)` over the fit window, rescaled by `dx^2/dt`, with a
/// bootstrap percentile confidence interval over the window points.
pub fn estimate_diffusion(
    series: &[(u32, f64)],
    fit_from: u32,
    fit_to: u32,
    dx: f64,
    dt: f64,
    seed: u64,
) -> Result<DiffusionEstimate> {
    let scale = dx * dx / dt;
    let ks: Vec<f64> = series
        .iter()
        .filter(|&&(t, _)| t >= fit_from && t <= fit_to && t > 0)
        .map(|&(t, d)| d / (2.0 * t as f64) * scale)
        .collect();
    if ks.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "fit window [{fit_from}, {fit_to}] selects no series points"
        )));
    }
    let mean = ks.iter().sum::<f64>() / ks.len() as f64;
    const B: usize = 1000;
    let mut rng = SplitMix64::new(hash_counter(seed, STREAM_BOOTSTRAP, 0, 0));
    let mut means = Vec::with_capacity(B);
    for _ in 0..B {
        let mut acc = 0.0;
        for _ in 0..ks.len() {
            acc += ks[(rng.next_u64() % ks.len() as u64) as usize];
        }
        means.push(acc / ks.len() as f64);
    }
    means.sort_by(|a, b| a.total_cmp(b));
    let lo_idx = (B as f64 * 0.025) as usize;
    Ok(DiffusionEstimate {
        k: mean,
        ci_low: means[lo_idx],
        ci_high: means[B - 1 - lo_idx],
        window: [fit_from, fit_to],
        dx,
        dt,
        seed,
    })
}

/// CSV dump of a dispersion series with header `t,dispersion`.
pub fn write_series_csv<W: std::io::Write + ?Sized>(
    w: &mut W,
    series: &[(u32, f64)],
) -> std::io::Result<()> {
    writeln!(w, "t,dispersion")?;
    for &(t, d) in series {
        writeln!(w, "{},{:.16e}", t, d)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic;

    #[test]
    fn auto_size_rule() {
        // 6 sqrt(2 * 0.5 * 1000) ~ 189.7 -> 190
        assert_eq!(auto_torus_size(0.5, 1000), 190);
        assert_eq!(auto_torus_size(0.5, 0), 4);
        assert!(auto_torus_size(0.25, 100).is_multiple_of(2));
    }

    #[test]
    fn requires_minimum_trials() {
        let cfg = EnsembleConfig::with_auto_torus(RuleParams::type1(0.5).unwrap(), 10, 99, 1);
        assert!(ensemble_dispersion(&cfg).is_err());
    }

    #[test]
    fn dispersion_t1_matches_p() {
        // sample dispersion at t = 1 is p within 3 standard errors
        let p = 0.25;
        let trials = 200_000u64;
        let cfg = EnsembleConfig::with_auto_torus(RuleParams::type1(p).unwrap(), 1, trials, 2024);
        let series = ensemble_dispersion(&cfg).unwrap();
        assert_eq!(series.len(), 1);
        let d1 = series[0].1;
        // Var of the t=1 indicator-like variable: E x^2 = p, E x^4 = p
        let se = (p * (1.0 - p) * 2.0 / trials as f64).sqrt().max(1e-6);
        assert!((d1 - p).abs() < 3.0 * se + 0.003, "d1 = {d1}");
    }

    #[test]
    fn dispersion_tracks_closed_form() {
        let p = 0.25;
        let cfg = EnsembleConfig::with_auto_torus(RuleParams::type1(p).unwrap(), 100, 50_000, 77);
        let series = ensemble_dispersion(&cfg).unwrap();
        for &(t, d) in series.iter().filter(|&&(t, _)| t % 25 == 0) {
            let expect = analytic::variance(t, &p).unwrap();
            let se = expect * (2.0 / (cfg.trials as f64 - 1.0)).sqrt();
            assert!(
                (d - expect).abs() < 4.0 * se,
                "t={t}: sample {d}, closed {expect}"
            );
        }
    }

    #[test]
    fn endpoint_distribution_normalizes_and_is_symmetricish() {
        let cfg = EnsembleConfig::with_auto_torus(RuleParams::type1(0.5).unwrap(), 20, 20_000, 5);
        let d = endpoint_distribution(&cfg).unwrap();
        assert!((d.total() - 1.0).abs() < 1e-12);
        assert!(d.mean().abs() < 0.1);
    }

    #[test]
    fn chunked_accumulation_is_thread_count_invariant() {
        let cfg = EnsembleConfig::with_auto_torus(RuleParams::type2(0.3).unwrap(), 50, 10_000, 31);
        let pool1 = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let pool8 = rayon::ThreadPoolBuilder::new()
            .num_threads(8)
            .build()
            .unwrap();
        let a = pool1.install(|| ensemble_dispersion(&cfg).unwrap());
        let b = pool8.install(|| ensemble_dispersion(&cfg).unwrap());
        assert_eq!(a, b);
        let da = pool1.install(|| endpoint_distribution(&cfg).unwrap());
        let db = pool8.install(|| endpoint_distribution(&cfg).unwrap());
        assert_eq!(da, db);
    }

    #[test]
    fn estimate_from_synthetic_series() {
        // series exactly on D_t = 2 k t
        let k = 0.37;
        let series: Vec<(u32, f64)> = (1..=100).map(|t| (t, 2.0 * k * t as f64)).collect();
        let est = estimate_diffusion(&series, 50, 100, 1.0, 1.0, 9).unwrap();
        assert!((est.k - k).abs() < 1e-12);
        assert!(est.ci_low <= est.k && est.k <= est.ci_high);
        // dimensional rescale: dx = 2 quadruples k
        let est2 = estimate_diffusion(&series, 50, 100, 2.0, 1.0, 9).unwrap();
        assert!((est2.k - 4.0 * k).abs() < 1e-12);
        // empty window rejected
        assert!(estimate_diffusion(&series, 200, 300, 1.0, 1.0, 9).is_err());
    }

    #[test]
    fn type1_reaches_asymptote_faster_than_type2() {
        // At matched diffusion coefficients the type-1 dispersion is closer
        // to its asymptotic slope at small t: |D_t/(2 t D_c) - 1| smaller.
        let dc = 0.125f64;
        let p = analytic::calibrate_p(&dc).unwrap();
        let ps = 1.0 - dc / 0.5;
        let t = 10u32;
        let d1 = analytic::variance(t, &p).unwrap();
        let d2 = analytic::type2_dispersion(t, &ps).unwrap();
        let gap1 = (d1 / (2.0 * t as f64 * dc) - 1.0).abs();
        let gap2 = (d2 / (2.0 * t as f64 * dc) - 1.0).abs();
        assert!(gap1 < gap2, "gap1 = {gap1}, gap2 = {gap2}");
    }

    #[test]
    fn type2_without_skips_is_type1_at_half() {
        // ps = 0 never skips, so the rule coincides with always-rotating
        // type 1; same seed gives identical draws, and across seeds the
        // endpoint laws are statistically indistinguishable.
        let a = EnsembleConfig::with_auto_torus(RuleParams::type1(0.5).unwrap(), 30, 20_000, 17);
        let b = EnsembleConfig::with_auto_torus(RuleParams::type2(0.0).unwrap(), 30, 20_000, 17);
        let da = endpoint_distribution(&a).unwrap();
        let db = endpoint_distribution(&b).unwrap();
        assert_eq!(da, db);
        let c = EnsembleConfig::with_auto_torus(RuleParams::type2(0.0).unwrap(), 30, 20_000, 18);
        let dc = endpoint_distribution(&c).unwrap();
        assert!(da.tv_distance(&dc) < 0.03);
    }
}
