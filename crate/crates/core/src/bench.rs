//! Event-driven sweeps against full recomputation on random instances.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::backend::BackendKind;
use crate::curve::{random_curve_with, BBox, Curve, Translation2};
use crate::error::Result;
use crate::freespace::frechet_value;
use crate::geom::{Direction2, Tolerance};
use crate::sweep::{change_bound, default_range, sweep_decide, EventKind, SweepOptions, VE_CHANGE_FACTOR};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchConfig {
    pub seed: u64,
    /// Vertices per curve.
    pub n: usize,
    pub trials: usize,
    pub backend: BackendKind,
    /// Record wall times (makes the report non-deterministic).
    pub timings: bool,
    pub tol: Tolerance,
}

impl BenchConfig {
    pub fn new(seed: u64, n: usize, trials: usize) -> Self {
        BenchConfig {
            seed,
            n,
            trials,
            backend: BackendKind::Baseline,
            timings: false,
            tol: Tolerance::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PhaseTimes {
    pub setup_ms: f64,
    pub sweep_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialReport {
    pub trial: usize,
    pub seed: u64,
    pub n_pi: usize,
    pub n_sigma: usize,
    pub delta: f64,
    pub direction: [f64; 2],
    pub range: [f64; 2],
    pub m_ve: usize,
    pub m_vve: usize,
    pub m: usize,
    pub ticks: usize,
    pub lattice_size: usize,
    /// Weight writes issued by events.
    pub weight_writes: u64,
    /// `m × lattice_size`: what rebuilding after every event would write.
    pub recompute_writes: u64,
    /// `weight_writes` bound from the per-event budgets.
    pub write_bound: u64,
    pub bound_violations: usize,
    /// Backend `set_weight` calls that changed a weight.
    pub updates: u64,
    pub queries: u64,
    pub feasible_intervals: Vec<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub times: Option<PhaseTimes>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub seed: u64,
    pub n: usize,
    pub trials: usize,
    pub backend: BackendKind,
    pub ve_change_factor: usize,
    pub m_ve: usize,
    pub m_vve: usize,
    pub m: usize,
    pub weight_writes: u64,
    pub recompute_writes: u64,
    /// `recompute_writes / weight_writes` (infinite when nothing was written).
    pub write_ratio: f64,
    pub updates: u64,
    pub queries: u64,
    pub bound_violations: usize,
    pub instances: Vec<TrialReport>,
}

/// A random sweep instance: two curves in the unit box, `δ` equal to their
/// Fréchet distance at the midpoint translation, a random direction, and the
/// default range.
pub fn bench_instance(seed: u64, n: usize) -> Result<(Curve, Curve, f64, Direction2)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pi = random_curve_with(&mut rng, n, BBox::unit())?;
    let sigma = random_curve_with(&mut rng, n, BBox::unit())?;
    let mid = ((pi.first() - sigma.first()) + (pi.last() - sigma.last())) * 0.5;
    let shifted = sigma.translate(Translation2::from_vector(mid));
    let delta = frechet_value(&pi, &shifted, 1e-9);
    let angle = rng.random_range(0.0..std::f64::consts::TAU);
    let dir = Direction2::new(angle.cos(), angle.sin())?;
    Ok((pi, shifted, delta, dir))
}

fn run_trial(cfg: &BenchConfig, trial: usize, seed: u64) -> Result<TrialReport> {
    let started = Instant::now();
    let (pi, sigma, delta, dir) = bench_instance(seed, cfg.n)?;
    let range = default_range(&pi, &sigma, delta);
    let setup = started.elapsed();
    let started = Instant::now();
    let out = sweep_decide(
        &pi,
        &sigma,
        dir,
        range,
        delta,
        cfg.tol,
        SweepOptions {
            backend: cfg.backend,
            audit: false,
        },
    )?;
    let sweep = started.elapsed();
    let s = &out.stats;
    let m = s.m_ve + s.m_vve;
    let ve = change_bound(EventKind::Entering, pi.len(), sigma.len()) as u64;
    let vve = change_bound(EventKind::Overlapping, pi.len(), sigma.len()) as u64;
    Ok(TrialReport {
        trial,
        seed,
        n_pi: pi.len(),
        n_sigma: sigma.len(),
        delta,
        direction: [dir.dx(), dir.dy()],
        range: [range.0, range.1],
        m_ve: s.m_ve,
        m_vve: s.m_vve,
        m,
        ticks: s.ticks,
        lattice_size: s.lattice_size,
        weight_writes: s.weight_writes,
        recompute_writes: (m * s.lattice_size) as u64,
        write_bound: s.m_ve as u64 * ve + s.m_vve as u64 * vve,
        bound_violations: s.bound_violations.len(),
        updates: s.backend.effective_updates,
        queries: s.backend.queries,
        feasible_intervals: out.intervals.clone(),
        times: cfg.timings.then_some(PhaseTimes {
            setup_ms: setup.as_secs_f64() * 1e3,
            sweep_ms: sweep.as_secs_f64() * 1e3,
        }),
    })
}

pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let seeds: Vec<u64> = (0..cfg.trials).map(|_| rng.random()).collect();
    let instances = seeds
        .par_iter()
        .enumerate()
        .map(|(k, &s)| run_trial(cfg, k, s))
        .collect::<Result<Vec<_>>>()?;
    let m_ve = instances.iter().map(|t| t.m_ve).sum();
    let m_vve = instances.iter().map(|t| t.m_vve).sum();
    let weight_writes: u64 = instances.iter().map(|t| t.weight_writes).sum();
    let recompute_writes: u64 = instances.iter().map(|t| t.recompute_writes).sum();
    Ok(BenchReport {
        seed: cfg.seed,
        n: cfg.n,
        trials: cfg.trials,
        backend: cfg.backend,
        ve_change_factor: VE_CHANGE_FACTOR,
        m_ve,
        m_vve,
        m: m_ve + m_vve,
        weight_writes,
        recompute_writes,
        write_ratio: if weight_writes == 0 {
            f64::INFINITY
        } else {
            recompute_writes as f64 / weight_writes as f64
        },
        updates: instances.iter().map(|t| t.updates).sum(),
        queries: instances.iter().map(|t| t.queries).sum(),
        bound_violations: instances.iter().map(|t| t.bound_violations).sum(),
        instances,
    })
}
