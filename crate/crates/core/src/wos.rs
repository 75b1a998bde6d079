//! Walk-on-spheres estimation of harmonic measure.
//!
//! A walker started at the basepoint repeatedly jumps to a uniform point on
//! the largest circle around it that stays inside the domain. Once it is
//! within `epsilon` of the boundary it is absorbed and its nearest boundary
//! point is the sample of the exit distribution, i.e. of `ω_D(a, ·)`.
//!
//! There is no outer killing radius: planar Brownian motion is recurrent, so
//! walks in domains with non-polar boundary terminate. Walks that exhaust
//! `max_steps` are counted separately and left out of the estimate.
//!
//! Two samplers produce decay profiles:
//!
//! * [`Sampler::Plain`] runs independent walks. With `shared = true` every
//!   walk scores every grid radius below its exit modulus, so the profile is
//!   exactly non-increasing.
//! * [`Sampler::Splitting`] is fixed-effort multilevel splitting on the
//!   walker modulus. Walkers that first reach the next level are copied back
//!   up to a fixed population and their weight is shared among the copies, so
//!   total weight is conserved and the estimate stays unbiased while rare
//!   far-out exits are sampled at a roughly constant relative accuracy per
//!   level. Standard errors come from independent replicates.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, TailQuery};
use crate::hardy_estimator::{validate_grid, DecayEntry, DecayProfile, ProfileSource};
use crate::rng::StreamKey;

const PURPOSE_PLAIN: u64 = 0;
const PURPOSE_SPLITTING: u64 = 1;

/// Unreliability threshold on the fraction of unterminated walks.
pub const UNTERMINATED_LIMIT: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WosConfig {
    /// Absorption-shell thickness; `None` means `1e-6·max(1, |a|)`.
    pub epsilon: Option<f64>,
    pub max_steps: u64,
    pub seed: u64,
    pub n_samples: usize,
}

impl WosConfig {
    pub fn new(seed: u64, n_samples: usize) -> Self {
        Self {
            epsilon: None,
            max_steps: 1_000_000,
            seed,
            n_samples,
        }
    }

    fn validate(&self) -> Result<()> {
        if let Some(eps) = self.epsilon {
            if !(eps > 0.0 && eps.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "epsilon {eps} must be positive"
                )));
            }
        }
        if self.max_steps == 0 || self.n_samples == 0 {
            return Err(Error::InvalidConfig(
                "max_steps and n_samples must be at least 1".into(),
            ));
        }
        Ok(())
    }

    pub fn epsilon_for(&self, d: &DomainSpec) -> f64 {
        self.epsilon
            .unwrap_or_else(|| 1e-6 * d.basepoint_c().norm().max(1.0))
    }
}

/// Monte Carlo estimate of `ω_D(a, E_r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HmEstimate {
    pub value: f64,
    pub stderr: f64,
    /// Walks simulated (for splitting: all particles over all levels).
    pub n_samples: usize,
    pub n_unterminated: usize,
    pub r: f64,
}

impl HmEstimate {
    pub fn unterminated_fraction(&self) -> f64 {
        self.n_unterminated as f64 / self.n_samples as f64
    }

    pub fn is_reliable(&self) -> bool {
        self.unterminated_fraction() <= UNTERMINATED_LIMIT
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sampler {
    Plain { shared: bool },
    Splitting { replicates: usize },
}

impl Default for Sampler {
    fn default() -> Self {
        Sampler::Splitting { replicates: 16 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum WalkEnd {
    /// Absorbed; modulus of the boundary projection.
    Absorbed(f64),
    /// Reached the splitting level at this position after this many steps.
    Crossed(Complex64, u64),
    Unterminated,
}

#[inline]
fn uniform_direction<R: Rng>(rng: &mut R) -> Complex64 {
    let (s, c) = (TAU * rng.random::<f64>()).sin_cos();
    Complex64::new(c, s)
}

/// Runs one walk from `z` until absorption, until `|z| ≥ level`, or until the
/// step budget is spent.
fn walk<R: Rng>(
    d: &DomainSpec,
    mut z: Complex64,
    epsilon: f64,
    mut steps: u64,
    max_steps: u64,
    level: f64,
    rng: &mut R,
) -> WalkEnd {
    loop {
        if z.norm() >= level {
            return WalkEnd::Crossed(z, steps);
        }
        let rho = d.distance_c(z);
        if rho < epsilon {
            return WalkEnd::Absorbed(d.project_c(z).norm());
        }
        if steps >= max_steps {
            return WalkEnd::Unterminated;
        }
        z += rho * uniform_direction(rng);
        steps += 1;
    }
}

fn check_start(d: &DomainSpec, cfg: &WosConfig) -> Result<()> {
    cfg.validate()?;
    let a = d.basepoint_c();
    if !d.contains_c(a) {
        return Err(Error::BasepointOutsideDomain);
    }
    if d.distance_c(a).is_infinite() {
        return Err(Error::DegenerateDomain);
    }
    Ok(())
}

/// Exit moduli of `n` plain walks, in sample order.
fn plain_exits(d: &DomainSpec, cfg: &WosConfig, block: u64) -> Vec<Option<f64>> {
    let key = StreamKey::new(cfg.seed, PURPOSE_PLAIN, block, 0);
    let eps = cfg.epsilon_for(d);
    let a = d.basepoint_c();
    (0..cfg.n_samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = key.rng(i);
            match walk(d, a, eps, 0, cfg.max_steps, f64::INFINITY, &mut rng) {
                WalkEnd::Absorbed(m) => Some(m),
                _ => None,
            }
        })
        .collect()
}

fn binomial_estimate(exits: &[Option<f64>], r: f64) -> HmEstimate {
    let terminated = exits.iter().flatten().count();
    let hits = exits.iter().flatten().filter(|&&m| m > r).count();
    let (value, stderr) = if terminated == 0 {
        (0.0, 0.0)
    } else {
        let v = hits as f64 / terminated as f64;
        (v, (v * (1.0 - v) / terminated as f64).sqrt())
    };
    HmEstimate {
        value,
        stderr,
        n_samples: exits.len(),
        n_unterminated: exits.len() - terminated,
        r,
    }
}

/// Plain walk-on-spheres estimate of `ω_D(a, E_r)`.
pub fn estimate_hm(d: &DomainSpec, q: TailQuery, cfg: &WosConfig) -> Result<HmEstimate> {
    check_start(d, cfg)?;
    Ok(binomial_estimate(&plain_exits(d, cfg, 0), q.r))
}

/// One estimate per grid radius.
pub fn estimate_profile(
    d: &DomainSpec,
    grid: &[f64],
    cfg: &WosConfig,
    sampler: Sampler,
) -> Result<DecayProfile> {
    check_start(d, cfg)?;
    validate_grid(grid)?;
    let estimates = match sampler {
        Sampler::Plain { shared: true } => {
            let exits = plain_exits(d, cfg, 0);
            grid.iter().map(|&r| binomial_estimate(&exits, r)).collect()
        }
        Sampler::Plain { shared: false } => grid
            .iter()
            .enumerate()
            .map(|(k, &r)| binomial_estimate(&plain_exits(d, cfg, k as u64), r))
            .collect(),
        Sampler::Splitting { replicates } => splitting_profile(d, grid, cfg, replicates)?,
    };
    profile_from_estimates(d, &estimates)
}

fn profile_from_estimates(d: &DomainSpec, estimates: &[HmEstimate]) -> Result<DecayProfile> {
    let entries = estimates
        .iter()
        .map(|e| DecayEntry {
            r: e.r,
            omega: e.value,
            stderr: e.stderr,
        })
        .collect();
    let n_samples = estimates.iter().map(|e| e.n_samples).max().unwrap_or(0);
    let n_unterminated = estimates
        .iter()
        .map(|e| e.n_unterminated)
        .max()
        .unwrap_or(0);
    Ok(DecayProfile::new(
        entries,
        ProfileSource::MonteCarlo {
            n_samples,
            n_unterminated,
        },
    )?
    .with_status(d.into()))
}

/// Splitting levels: the grid radii, refined so that neighbouring levels are
/// at most a factor 2 apart.
fn splitting_levels(grid: &[f64]) -> Vec<f64> {
    let mut levels = vec![grid[0]];
    for &r in &grid[1..] {
        let last = *levels.last().unwrap();
        let pieces = (r / last).log2().ceil().max(1.0) as i32;
        let step = (r / last).powf(1.0 / pieces as f64);
        for j in 1..pieces {
            levels.push(last * step.powi(j));
        }
        levels.push(r);
    }
    levels
}

#[derive(Debug, Clone, Copy)]
struct Particle {
    z: Complex64,
    weight: f64,
    steps: u64,
}

struct ReplicateTally {
    /// Absorbed weight with exit modulus above each grid radius.
    hits: Vec<f64>,
    absorbed: f64,
    walks: usize,
    unterminated: usize,
}

fn run_replicate(
    d: &DomainSpec,
    grid: &[f64],
    levels: &[f64],
    cfg: &WosConfig,
    replicate: u64,
    population: usize,
) -> ReplicateTally {
    let eps = cfg.epsilon_for(d);
    let mut tally = ReplicateTally {
        hits: vec![0.0; grid.len()],
        absorbed: 0.0,
        walks: 0,
        unterminated: 0,
    };
    let mut pool = vec![
        Particle {
            z: d.basepoint_c(),
            weight: 1.0 / population as f64,
            steps: 0,
        };
        population
    ];

    for stage in 0..=levels.len() {
        let level = levels.get(stage).copied().unwrap_or(f64::INFINITY);
        let key = StreamKey::new(cfg.seed, PURPOSE_SPLITTING, replicate, stage as u64);
        let ends: Vec<WalkEnd> = pool
            .par_iter()
            .enumerate()
            .map(|(i, p)| {
                let mut rng = key.rng(i as u64);
                walk(d, p.z, eps, p.steps, cfg.max_steps, level, &mut rng)
            })
            .collect();
        tally.walks += pool.len();

        let mut crossers = Vec::new();
        for (p, end) in pool.iter().zip(ends) {
            match end {
                WalkEnd::Absorbed(m) => {
                    tally.absorbed += p.weight;
                    for (h, &r) in tally.hits.iter_mut().zip(grid) {
                        if m > r {
                            *h += p.weight;
                        }
                    }
                }
                WalkEnd::Crossed(z, steps) => crossers.push(Particle {
                    z,
                    weight: p.weight,
                    steps,
                }),
                WalkEnd::Unterminated => tally.unterminated += 1,
            }
        }
        if crossers.is_empty() {
            break;
        }
        pool = resample(&crossers, population);
    }
    tally
}

/// Balanced copies of the crossers, weight divided among copies.
fn resample(crossers: &[Particle], population: usize) -> Vec<Particle> {
    let m = crossers.len();
    let base = population / m;
    let extra = population % m;
    let mut out = Vec::with_capacity(population.max(m));
    for (idx, p) in crossers.iter().enumerate() {
        let copies = (base + usize::from(idx < extra)).max(1);
        let weight = p.weight / copies as f64;
        out.extend(std::iter::repeat_n(Particle { weight, ..*p }, copies));
    }
    out
}

fn splitting_profile(
    d: &DomainSpec,
    grid: &[f64],
    cfg: &WosConfig,
    replicates: usize,
) -> Result<Vec<HmEstimate>> {
    if replicates < 2 {
        return Err(Error::InvalidConfig(
            "splitting needs at least two replicates".into(),
        ));
    }
    if cfg.n_samples < replicates {
        return Err(Error::InvalidConfig(format!(
            "{} samples cannot fill {replicates} replicates",
            cfg.n_samples
        )));
    }
    // no exit can land beyond a bounded boundary, so levels past it buy nothing
    let mut levels = splitting_levels(grid);
    if let Some(extent) = d.boundary_extent() {
        levels.retain(|&l| l <= extent);
    }
    let tallies: Vec<ReplicateTally> = (0..replicates)
        .map(|b| {
            let population =
                cfg.n_samples / replicates + usize::from(b < cfg.n_samples % replicates);
            run_replicate(d, grid, &levels, cfg, b as u64, population)
        })
        .collect();

    let walks = tallies.iter().map(|t| t.walks).sum();
    let unterminated = tallies.iter().map(|t| t.unterminated).sum();
    let absorbed: f64 = tallies.iter().map(|t| t.absorbed).sum();
    Ok(grid
        .iter()
        .enumerate()
        .map(|(k, &r)| {
            let hits: f64 = tallies.iter().map(|t| t.hits[k]).sum();
            let value = if absorbed > 0.0 { hits / absorbed } else { 0.0 };
            let per_rep: Vec<f64> = tallies
                .iter()
                .map(|t| {
                    if t.absorbed > 0.0 {
                        t.hits[k] / t.absorbed
                    } else {
                        0.0
                    }
                })
                .collect();
            let mean = per_rep.iter().sum::<f64>() / replicates as f64;
            let var =
                per_rep.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (replicates - 1) as f64;
            HmEstimate {
                value: value.clamp(0.0, 1.0),
                stderr: (var / replicates as f64).sqrt(),
                n_samples: walks,
                n_unterminated: unterminated,
                r,
            }
        })
        .collect())
}
