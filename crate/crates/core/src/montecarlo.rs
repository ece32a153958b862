//! Chunked Monte Carlo estimation.
//!
//! A run of `samples` draws is split into chunks of `chunk` draws; chunk `c`
//! uses the random stream `(seed, c)`. Chunks are evaluated in parallel,
//! accumulated sequentially inside each chunk and merged in chunk order, so
//! results are bit-identical for any number of workers.

use nalgebra::DVector;
use rayon::prelude::*;
use std::sync::Arc;

use crate::closedform::{avg_coherence, levy_bound, to_f64};
use crate::error::{Error, Result};
use crate::functional::{Coherence, Functional};
use crate::qcore::{partial_trace, relative_entropy_coherence, PureState, Spectrum};
use crate::sampling::{haar_pure_state, induced_mixed_state, isospectral_state, RngStream};

pub const DEFAULT_CHUNK: usize = 1024;

/// Sample budget, seed and parallelism of one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub samples: usize,
    pub seed: u64,
    pub chunk: usize,
    /// Worker threads; `None` uses the global pool. Never affects results.
    pub workers: Option<usize>,
}

impl RunConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self {
            samples,
            seed,
            chunk: DEFAULT_CHUNK,
            workers: None,
        }
    }

    pub fn with_chunk(mut self, chunk: usize) -> Self {
        self.chunk = chunk;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers);
        self
    }

    fn validate(&self, min_samples: usize) -> Result<()> {
        if self.samples < min_samples {
            return Err(Error::InvalidArgument(format!(
                "need at least {min_samples} samples, got {}",
                self.samples
            )));
        }
        if self.chunk == 0 {
            return Err(Error::InvalidArgument("chunk size must be positive".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::InvalidArgument("worker count must be positive".into()));
        }
        Ok(())
    }

    fn chunk_sizes(&self) -> Vec<usize> {
        let full = self.samples / self.chunk;
        let mut sizes = vec![self.chunk; full];
        if !self.samples.is_multiple_of(self.chunk) {
            sizes.push(self.samples % self.chunk);
        }
        sizes
    }
}

/// Runs `work(stream, size)` for every chunk and returns results in chunk order.
pub fn run_chunked<T, F>(cfg: &RunConfig, work: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut RngStream, usize) -> Result<T> + Sync + Send,
{
    cfg.validate(1)?;
    let sizes = cfg.chunk_sizes();
    let run = || {
        sizes
            .par_iter()
            .enumerate()
            .map(|(c, &size)| {
                let mut rng = RngStream::new(cfg.seed, c as u64);
                work(&mut rng, size)
            })
            .collect::<Result<Vec<T>>>()
    };
    match cfg.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    }
}

/// Streaming mean and unbiased variance (Welford), mergeable across chunks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    count: u64,
    mean: f64,
    m2: f64,
}

impl MonteCarloEstimate {
    fn empty() -> Self {
        Self {
            count: 0,
            mean: 0.0,
            m2: 0.0,
        }
    }

    /// Estimate of a nonempty sample.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("estimate of an empty sample".into()));
        }
        let mut acc = Self::empty();
        for &v in values {
            acc.push(v);
        }
        Ok(acc)
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Pairwise combination of two disjoint samples.
    pub fn merge(&self, other: &Self) -> Self {
        if self.count == 0 {
            return *other;
        }
        if other.count == 0 {
            return *self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.count as f64 / count as f64;
        let m2 = self.m2 + other.m2 + delta * delta * (self.count as f64 * other.count as f64) / count as f64;
        Self { count, mean, m2 }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance; zero for a single sample.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / (self.count - 1) as f64).max(0.0)
        }
    }

    pub fn stddev(&self) -> f64 {
        self.variance().sqrt()
    }

    /// `sqrt(variance / count)`.
    pub fn stderr(&self) -> f64 {
        (self.variance() / self.count as f64).sqrt()
    }

    /// `(mean - target) / stderr`; zero when both the deviation and the
    /// standard error vanish.
    pub fn z_score(&self, target: f64) -> f64 {
        let dev = self.mean - target;
        let se = self.stderr();
        if se == 0.0 {
            if dev.abs() <= 1e-12 {
                0.0
            } else {
                f64::INFINITY.copysign(dev)
            }
        } else {
            dev / se
        }
    }
}

fn merge_all(parts: impl IntoIterator<Item = MonteCarloEstimate>) -> MonteCarloEstimate {
    parts
        .into_iter()
        .fold(MonteCarloEstimate::empty(), |acc, p| acc.merge(&p))
}

/// Functional values on induced states, in sample order.
pub fn sample_values(m: usize, n: usize, functional: &dyn Functional, cfg: &RunConfig) -> Result<Vec<f64>> {
    cfg.validate(1)?;
    let chunks = run_chunked(cfg, |rng, size| {
        (0..size)
            .map(|_| functional.evaluate(&induced_mixed_state(m, n, rng)?))
            .collect::<Result<Vec<f64>>>()
    })?;
    Ok(chunks.into_iter().flatten().collect())
}

/// Estimates several functionals on the same induced states.
pub fn estimate_functionals(
    m: usize,
    n: usize,
    functionals: &[Arc<dyn Functional>],
    cfg: &RunConfig,
) -> Result<Vec<MonteCarloEstimate>> {
    cfg.validate(2)?;
    let chunks = run_chunked(cfg, |rng, size| {
        let mut acc = vec![MonteCarloEstimate::empty(); functionals.len()];
        for _ in 0..size {
            let rho = induced_mixed_state(m, n, rng)?;
            for (a, f) in acc.iter_mut().zip(functionals) {
                a.push(f.evaluate(&rho)?);
            }
        }
        Ok(acc)
    })?;
    Ok((0..functionals.len())
        .map(|i| merge_all(chunks.iter().map(|c| c[i])))
        .collect())
}

/// Mean of a functional over `samples` induced states.
pub fn estimate_functional(
    m: usize,
    n: usize,
    functional: &dyn Functional,
    cfg: &RunConfig,
) -> Result<MonteCarloEstimate> {
    cfg.validate(2)?;
    let chunks = run_chunked(cfg, |rng, size| {
        let mut acc = MonteCarloEstimate::empty();
        for _ in 0..size {
            acc.push(functional.evaluate(&induced_mixed_state(m, n, rng)?)?);
        }
        Ok(acc)
    })?;
    Ok(merge_all(chunks))
}

/// Haar average of the coherence of `U diag(spec) U†`.
pub fn estimate_isospectral_coherence(spec: &Spectrum, cfg: &RunConfig) -> Result<MonteCarloEstimate> {
    cfg.validate(2)?;
    let chunks = run_chunked(cfg, |rng, size| {
        let mut acc = MonteCarloEstimate::empty();
        for _ in 0..size {
            acc.push(relative_entropy_coherence(&isospectral_state(spec, rng)?)?);
        }
        Ok(acc)
    })?;
    Ok(merge_all(chunks))
}

/// Empirical two-sided tail probability against a concentration bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailReport {
    pub epsilon: f64,
    pub center: f64,
    pub empirical_fraction: f64,
    pub levy_bound: f64,
    pub count: u64,
}

impl TailReport {
    /// `empirical_fraction <= min(1, levy_bound)`.
    pub fn within_bound(&self) -> bool {
        self.empirical_fraction <= self.levy_bound.min(1.0)
    }
}

/// Tail fractions `#{|x - center| > eps} / count` for each `eps`.
pub fn tail_reports<B>(values: &[f64], center: f64, epsilons: &[f64], bound: B) -> Result<Vec<TailReport>>
where
    B: Fn(f64) -> Result<f64>,
{
    if values.is_empty() {
        return Err(Error::InvalidArgument("no samples".into()));
    }
    epsilons
        .iter()
        .map(|&eps| {
            let hits = values.iter().filter(|&&x| (x - center).abs() > eps).count();
            Ok(TailReport {
                epsilon: eps,
                center,
                empirical_fraction: hits as f64 / values.len() as f64,
                levy_bound: bound(eps)?,
                count: values.len() as u64,
            })
        })
        .collect()
}

/// Tail fractions of the coherence of induced states around `(m-1)/(2n)`.
pub fn tail_experiment(m: usize, n: usize, epsilons: &[f64], cfg: &RunConfig) -> Result<Vec<TailReport>> {
    tail_experiment_for(m, n, &Coherence, epsilons, cfg)
}

/// Tail experiment for any functional whose induced mean is `(m-1)/(2n)`.
pub fn tail_experiment_for(
    m: usize,
    n: usize,
    functional: &dyn Functional,
    epsilons: &[f64],
    cfg: &RunConfig,
) -> Result<Vec<TailReport>> {
    levy_bound(m, n, 1.0)?;
    if let Some(eps) = epsilons.iter().find(|e| e.is_nan() || **e <= 0.0) {
        return Err(Error::DomainError(format!("eps must be positive, got {eps}")));
    }
    let values = sample_values(m, n, functional, cfg)?;
    let center = to_f64(&avg_coherence(m, n)?);
    tail_reports(&values, center, epsilons, |eps| levy_bound(m, n, eps))
}

/// Spread of the coherence at `n = m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcentrationRow {
    pub m: usize,
    pub n: usize,
    pub mean: f64,
    pub stddev: f64,
    pub stderr: f64,
    pub target: f64,
    pub count: u64,
}

/// Coherence mean and sample standard deviation at `n = m` for each `m`.
pub fn concentration_sweep(ms: &[usize], cfg: &RunConfig) -> Result<Vec<ConcentrationRow>> {
    if let Some(m) = ms.iter().find(|&&m| m < 2) {
        return Err(Error::DomainError(format!("concentration sweep needs m >= 2, got {m}")));
    }
    ms.iter()
        .map(|&m| {
            let est = estimate_functional(m, m, &Coherence, cfg)?;
            Ok(ConcentrationRow {
                m,
                n: m,
                mean: est.mean(),
                stddev: est.stddev(),
                stderr: est.stderr(),
                target: to_f64(&avg_coherence(m, m)?),
                count: est.count(),
            })
        })
        .collect()
}

/// True when the standard deviations strictly decrease along the rows.
pub fn strictly_decreasing(rows: &[ConcentrationRow]) -> bool {
    rows.windows(2).all(|w| w[1].stddev < w[0].stddev)
}

/// How the second state of each Lipschitz pair is drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairMode {
    /// Two independent Haar states.
    Independent,
    /// `normalize(psi + scale * xi)` with `xi` a Gaussian vector, probing the
    /// local slope.
    Local { scale: f64 },
}

/// Largest observed `|F(psi) - F(phi)| / ||psi - phi||_2`.
#[derive(Debug, Clone, PartialEq)]
pub struct LipschitzReport {
    pub functional: String,
    pub m: usize,
    pub n: usize,
    pub max_ratio: f64,
    pub bound: f64,
    pub evaluated: u64,
    pub skipped: u64,
}

impl LipschitzReport {
    pub fn within_bound(&self) -> bool {
        self.max_ratio <= self.bound
    }
}

/// Pairs closer than this are skipped as ill-conditioned.
pub const MIN_PAIR_DISTANCE: f64 = 1e-8;

/// Ratio for one pair, or `None` when the states are too close.
pub fn lipschitz_ratio(
    functional: &dyn Functional,
    psi: &PureState,
    phi: &PureState,
    m: usize,
    n: usize,
) -> Result<Option<f64>> {
    let dist = psi.distance(phi);
    if dist < MIN_PAIR_DISTANCE {
        return Ok(None);
    }
    let a = functional.evaluate(&partial_trace(psi, m, n)?)?;
    let b = functional.evaluate(&partial_trace(phi, m, n)?)?;
    Ok(Some((a - b).abs() / dist))
}

/// Lipschitz check of `psi -> C_r(Tr_B psi)` over independent Haar pairs.
pub fn lipschitz_check(m: usize, n: usize, pairs: usize, seed: u64) -> Result<LipschitzReport> {
    lipschitz_check_with(m, n, &Coherence, PairMode::Independent, &RunConfig::new(pairs, seed))
}

pub fn lipschitz_check_with(
    m: usize,
    n: usize,
    functional: &dyn Functional,
    mode: PairMode,
    cfg: &RunConfig,
) -> Result<LipschitzReport> {
    if m < 3 {
        return Err(Error::DomainError(format!("Lipschitz check needs m >= 3, got {m}")));
    }
    if m > n {
        return Err(Error::DimensionOrder { m, n });
    }
    let bound = functional.lipschitz_constant(m).ok_or_else(|| {
        Error::InvalidArgument(format!("no Lipschitz constant known for {}", functional.name()))
    })?;
    let dim = m * n;
    let chunks = run_chunked(cfg, |rng, size| {
        let mut best: f64 = 0.0;
        let (mut evaluated, mut skipped) = (0u64, 0u64);
        for _ in 0..size {
            let psi = haar_pure_state(dim, rng)?;
            let phi = match mode {
                PairMode::Independent => haar_pure_state(dim, rng)?,
                PairMode::Local { scale } => {
                    let xi = DVector::from_fn(dim, |_, _| rng.complex_gaussian() * scale);
                    PureState::normalized(psi.amplitudes() + xi)?
                }
            };
            match lipschitz_ratio(functional, &psi, &phi, m, n)? {
                Some(r) => {
                    best = best.max(r);
                    evaluated += 1;
                }
                None => skipped += 1,
            }
        }
        Ok((best, evaluated, skipped))
    })?;
    Ok(LipschitzReport {
        functional: functional.name().to_string(),
        m,
        n,
        max_ratio: chunks.iter().map(|c| c.0).fold(0.0, f64::max),
        bound,
        evaluated: chunks.iter().map(|c| c.1).sum(),
        skipped: chunks.iter().map(|c| c.2).sum(),
    })
}
