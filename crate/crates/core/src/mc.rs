//! Monte Carlo oracle for every closed form in the crate.
//!
//! Trials are cut into fixed blocks of [`BLOCK_TRIALS`]. Block `b` of stream
//! `s` draws from ChaCha8 seeded with the run seed on stream `s·2³² + b`, so
//! results depend only on (seed, stream, trials) and never on how many
//! workers executed the blocks. Reductions run in block order.
//!
//! RF gains are drawn directly as Gamma variates: squared Frobenius norms of
//! i.i.d. Nakagami-m matrices are Gamma distributed and channel phases never
//! enter them.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fso::{average_snr_scale, FsoLinkParams, MalagaParams, PointingParams};
use crate::outage::ScenarioConfig;
use crate::rf::{selection_metric, snr_to_metric, RfLinkParams, SuTxProfile};

/// Trials per independently seeded block.
pub const BLOCK_TRIALS: u64 = 1 << 14;

/// How substreams are derived from the run seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StreamScheme {
    /// ChaCha8, stream id = `stream << 32 | block`.
    #[default]
    ChaCha8Block,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngConfig {
    pub seed: u64,
    #[serde(default)]
    pub scheme: StreamScheme,
}

impl RngConfig {
    pub fn new(seed: u64) -> Self {
        RngConfig { seed, scheme: StreamScheme::ChaCha8Block }
    }

    fn block_rng(&self, stream: u32, block: u32) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream((u64::from(stream) << 32) | u64::from(block));
        rng
    }
}

/// Seeded, optionally size-limited, parallel trial runner.
#[derive(Clone)]
pub struct McEngine {
    rng: RngConfig,
    stream: u32,
    pool: Option<Arc<rayon::ThreadPool>>,
}

impl std::fmt::Debug for McEngine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("McEngine")
            .field("rng", &self.rng)
            .field("stream", &self.stream)
            .field("workers", &self.pool.as_ref().map(|p| p.current_num_threads()))
            .finish()
    }
}

impl McEngine {
    pub fn new(rng: RngConfig) -> Self {
        McEngine { rng, stream: 0, pool: None }
    }

    /// Run on a dedicated pool of `workers` threads instead of the global one.
    pub fn with_workers(mut self, workers: usize) -> Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build()
            .map_err(|e| Error::numerical("McEngine", format!("cannot build worker pool: {e}")))?;
        self.pool = Some(Arc::new(pool));
        Ok(self)
    }

    /// Same seed and pool, independent random numbers.
    pub fn substream(&self, stream: u32) -> Self {
        McEngine { stream, ..self.clone() }
    }

    pub fn rng_config(&self) -> RngConfig {
        self.rng
    }

    /// Run `trials` trials in blocks; `f(rng, n)` handles one block of `n`.
    pub fn run_blocks<T, F>(&self, trials: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(&mut ChaCha8Rng, u64) -> T + Sync,
    {
        let blocks = trials.div_ceil(BLOCK_TRIALS);
        assert!(blocks <= u64::from(u32::MAX), "too many trials for the block stream layout");
        let run = || {
            (0..blocks)
                .into_par_iter()
                .map(|b| {
                    let n = BLOCK_TRIALS.min(trials - b * BLOCK_TRIALS);
                    let mut rng = self.rng.block_rng(self.stream, b as u32);
                    f(&mut rng, n)
                })
                .collect::<Vec<T>>()
        };
        match &self.pool {
            Some(pool) => pool.install(run),
            None => run(),
        }
    }

    /// `n` independent draws, in a worker-count-independent order.
    pub fn sample<F>(&self, n: u64, draw: F) -> Vec<f64>
    where
        F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
    {
        self.run_blocks(n, |rng, count| (0..count).map(|_| draw(rng)).collect::<Vec<_>>())
            .into_iter()
            .flatten()
            .collect()
    }

    /// Number of trials in which `event` fires.
    pub fn count<F>(&self, trials: u64, event: F) -> u64
    where
        F: Fn(&mut ChaCha8Rng) -> bool + Sync,
    {
        self.run_blocks(trials, |rng, count| (0..count).filter(|_| event(rng)).count() as u64)
            .into_iter()
            .sum()
    }
}

fn gamma_dist(shape: f64, scale: f64) -> Result<Gamma<f64>> {
    Gamma::new(shape, scale).map_err(|e| Error::param("gamma", format!("shape {shape}, scale {scale}: {e}")))
}

/// Draws `‖H‖²_F` for one link.
#[derive(Debug, Clone, Copy)]
pub struct GainSampler(Gamma<f64>);

impl GainSampler {
    pub fn new(link: &RfLinkParams) -> Result<Self> {
        link.validate()?;
        Ok(GainSampler(gamma_dist(link.shape(), link.scale())?))
    }

    #[inline]
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.0.sample(rng)
    }
}

pub fn sample_rf_gain<R: Rng + ?Sized>(link: &RfLinkParams, rng: &mut R) -> Result<f64> {
    Ok(GainSampler::new(link)?.draw(rng))
}

/// Draws of the Málaga irradiance through its Gamma-Gamma mixture.
#[derive(Debug, Clone)]
pub struct MalagaSampler {
    cumulative: Vec<f64>,
    large_scale: Gamma<f64>,
    small_scale: Vec<Gamma<f64>>,
}

impl MalagaSampler {
    pub fn new(p: &MalagaParams) -> Result<Self> {
        let w = p.weights();
        let total: f64 = w.iter().sum();
        if (total - 1.0).abs() > 1e-6 {
            return Err(Error::numerical("sample_malaga", format!("mixture weights sum to {total}")));
        }
        let mut acc = 0.0;
        let cumulative = w.iter().map(|x| {
            acc += x / total;
            acc
        });
        let cumulative: Vec<f64> = cumulative.collect();
        let beta = f64::from(p.beta);
        let theta = (p.xi * beta + p.omega_prime) / beta;
        let small_scale = (1..=p.beta).map(|k| gamma_dist(f64::from(k), theta)).collect::<Result<_>>()?;
        Ok(MalagaSampler { cumulative, large_scale: gamma_dist(p.alpha, 1.0 / p.alpha)?, small_scale })
    }

    #[inline]
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        let k = self.cumulative.iter().position(|&c| u < c).unwrap_or(self.cumulative.len() - 1);
        self.large_scale.sample(rng) * self.small_scale[k].sample(rng)
    }
}

pub fn sample_malaga<R: Rng + ?Sized>(p: &MalagaParams, rng: &mut R) -> Result<f64> {
    Ok(MalagaSampler::new(p)?.draw(rng))
}

/// Inverse-CDF draw `A₀ U^{1/ζ²}`.
#[inline]
pub fn sample_pointing<R: Rng + ?Sized>(p: &PointingParams, rng: &mut R) -> f64 {
    let u: f64 = rng.random();
    p.a0 * u.powf(1.0 / p.zeta_sq())
}

/// Draws of the destination SNR `c·(h_a h_m)^r`.
#[derive(Debug, Clone)]
pub struct FsoSnrSampler {
    turbulence: MalagaSampler,
    pointing: PointingParams,
    scale: f64,
    r: i32,
}

impl FsoSnrSampler {
    pub fn new(fso: &FsoLinkParams) -> Result<Self> {
        fso.validate()?;
        Ok(FsoSnrSampler {
            turbulence: MalagaSampler::new(&fso.malaga)?,
            pointing: fso.pointing,
            scale: average_snr_scale(fso),
            r: fso.r() as i32,
        })
    }

    #[inline]
    pub fn channel<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.turbulence.draw(rng) * sample_pointing(&self.pointing, rng)
    }

    #[inline]
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.scale * self.channel(rng).powi(self.r)
    }
}

/// Draws of every user's selection metric.
#[derive(Debug, Clone)]
pub struct SelectionSampler {
    users: Vec<(GainSampler, GainSampler, f64)>,
    p_a: f64,
}

impl SelectionSampler {
    pub fn new(profiles: &[SuTxProfile], p_a: f64) -> Result<Self> {
        if profiles.is_empty() {
            return Err(Error::param("profiles", "at least one SU-TX is required"));
        }
        if !(p_a.is_finite() && p_a > 0.0) {
            return Err(Error::param("p_a", format!("must be positive and finite, got {p_a}")));
        }
        let users = profiles
            .iter()
            .map(|p| {
                p.validate()?;
                Ok((GainSampler::new(&p.sr)?, GainSampler::new(&p.sp)?, p.max_power))
            })
            .collect::<Result<_>>()?;
        Ok(SelectionSampler { users, p_a })
    }

    /// Metric of a single user `k`.
    #[inline]
    pub fn user_metric<R: Rng + ?Sized>(&self, k: usize, rng: &mut R) -> f64 {
        let (sr, sp, p_m) = &self.users[k];
        let g_sr = sr.draw(rng);
        let g_sp = sp.draw(rng);
        selection_metric(g_sr, g_sp, *p_m, self.p_a)
    }

    /// `(argmax, max)` of the metric; ties go to the lowest index.
    #[inline]
    pub fn select<R: Rng + ?Sized>(&self, rng: &mut R) -> (usize, f64) {
        let mut best = (0, f64::NEG_INFINITY);
        for k in 0..self.users.len() {
            let v = self.user_metric(k, rng);
            if v > best.1 {
                best = (k, v);
            }
        }
        best
    }
}

/// How often each SU-TX was scheduled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionStats {
    pub trials: u64,
    pub counts: Vec<u64>,
    pub frequencies: Vec<f64>,
    /// Binomial standard error of each frequency.
    pub std_errors: Vec<f64>,
}

impl SelectionStats {
    pub fn from_counts(counts: Vec<u64>) -> Self {
        let trials: u64 = counts.iter().sum();
        let n = trials.max(1) as f64;
        let frequencies: Vec<f64> = counts.iter().map(|&c| c as f64 / n).collect();
        let std_errors = frequencies.iter().map(|p| (p * (1.0 - p) / n).sqrt()).collect();
        SelectionStats { trials, counts, frequencies, std_errors }
    }
}

pub fn simulate_selection(profiles: &[SuTxProfile], p_a: f64, trials: u64, engine: &McEngine) -> Result<SelectionStats> {
    if trials == 0 {
        return Err(Error::param("trials", "at least one trial is required"));
    }
    let sampler = SelectionSampler::new(profiles, p_a)?;
    let k = profiles.len();
    let per_block = engine.run_blocks(trials, |rng, n| {
        let mut counts = vec![0u64; k];
        for _ in 0..n {
            counts[sampler.select(rng).0] += 1;
        }
        counts
    });
    let mut counts = vec![0u64; k];
    for block in per_block {
        for (c, b) in counts.iter_mut().zip(block) {
            *c += b;
        }
    }
    Ok(SelectionStats::from_counts(counts))
}

/// Empirical outage rate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutageEstimate {
    pub trials: u64,
    pub outages: u64,
    pub outage: f64,
    pub std_err: f64,
}

impl OutageEstimate {
    pub fn from_counts(outages: u64, trials: u64) -> Self {
        let n = trials.max(1) as f64;
        let p = outages as f64 / n;
        OutageEstimate { trials, outages, outage: p, std_err: (p * (1.0 - p) / n).sqrt() }
    }

    /// `(analytic - estimate) / σ`, with σ evaluated at the analytic value
    /// so that zero observed outages still give a usable score.
    pub fn z_score(&self, analytic: f64) -> f64 {
        let sigma = (analytic * (1.0 - analytic) / self.trials.max(1) as f64).sqrt();
        let diff = analytic - self.outage;
        if sigma == 0.0 {
            if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            diff / sigma
        }
    }
}

/// Which hops the simulated chain includes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ChainOptions {
    /// Treat the optical hop as never in outage.
    pub ideal_fso: bool,
    /// Every user transmits at `P_M` regardless of the interference cap.
    pub ignore_interference_cap: bool,
}

pub fn simulate_outage(s: &ScenarioConfig, trials: u64, engine: &McEngine) -> Result<OutageEstimate> {
    simulate_outage_with(s, trials, engine, ChainOptions::default())
}

/// Full chain per trial: schedule a user, convert `β*` to the relay SNR,
/// draw the optical SNR, and flag outage when the weaker hop is at or below
/// the threshold.
pub fn simulate_outage_with(
    s: &ScenarioConfig,
    trials: u64,
    engine: &McEngine,
    opts: ChainOptions,
) -> Result<OutageEstimate> {
    if trials == 0 {
        return Err(Error::param("trials", "at least one trial is required"));
    }
    s.validate()?;
    let p_a = if opts.ignore_interference_cap { f64::MAX } else { s.p_a };
    let rf = SelectionSampler::new(&s.profiles, p_a)?;
    let fso = FsoSnrSampler::new(&s.fso)?;
    let to_snr = 1.0 / snr_to_metric(&s.profiles, &s.ostbc)?;
    let gamma_th = s.gamma_th;
    let outages = engine.count(trials, |rng| {
        let relay_snr = rf.select(rng).1 * to_snr;
        let dest_snr = if opts.ideal_fso { f64::INFINITY } else { fso.draw(rng) };
        relay_snr.min(dest_snr) <= gamma_th
    });
    Ok(OutageEstimate::from_counts(outages, trials))
}

/// Sorted samples with CDF-distance helpers.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(mut samples: Vec<f64>) -> Self {
        samples.sort_by(f64::total_cmp);
        EmpiricalCdf { sorted: samples }
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// Fraction of samples `<= x`.
    pub fn eval(&self, x: f64) -> f64 {
        if self.sorted.is_empty() {
            return 0.0;
        }
        self.sorted.partition_point(|&v| v <= x) as f64 / self.sorted.len() as f64
    }

    pub fn mean(&self) -> f64 {
        self.sorted.iter().sum::<f64>() / self.sorted.len().max(1) as f64
    }

    pub fn quantile(&self, q: f64) -> f64 {
        let n = self.sorted.len();
        let i = ((q.clamp(0.0, 1.0) * n as f64).ceil() as usize).clamp(1, n) - 1;
        self.sorted[i]
    }

    /// `points` sample quantiles evenly spaced in probability, excluding 0 and 1.
    pub fn quantile_grid(&self, points: usize) -> Vec<f64> {
        (1..=points).map(|i| self.quantile(i as f64 / (points + 1) as f64)).collect()
    }

    /// Exact Kolmogorov–Smirnov statistic against `cdf`, evaluated at every sample.
    pub fn ks_distance<F>(&self, cdf: F) -> Result<f64>
    where
        F: Fn(f64) -> Result<f64>,
    {
        let n = self.sorted.len() as f64;
        let mut d: f64 = 0.0;
        for (i, &x) in self.sorted.iter().enumerate() {
            let f = cdf(x)?;
            d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
        }
        Ok(d)
    }

    /// `max |F_n(x) - F(x)|` over `grid`.
    pub fn sup_distance_on<F>(&self, grid: &[f64], cdf: F) -> Result<f64>
    where
        F: Fn(f64) -> Result<f64>,
    {
        grid.iter().try_fold(0.0f64, |d, &x| Ok(d.max((self.eval(x) - cdf(x)?).abs())))
    }
}
