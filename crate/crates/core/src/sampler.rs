//! Monte Carlo sampling of `(|π|, w₊ - w₋, w₀)` from the product formula.
//!
//! At radius `N` every factor `(m, k)` of `M_δ` contributes an independent
//! geometric multiplicity `c_{m,k}` with `P(c = j) ∝ e^{-jm/N}`. The record
//! of one draw is `size = Σ m c`, `stat = Σ (2k+1-m) c` and
//! `trace_proxy = Σ c`. Conditioning on `size = n` gives the uniform measure
//! on plane partitions of size `n` for the pair `(stat, trace_proxy)`, which
//! is then jointly distributed as `(w₊ - w₋, w₀)`.
//!
//! Within one `m` most of the `m` factors are zero, so the sampler jumps
//! from one nonzero factor to the next with a geometric gap instead of
//! visiting every factor. Each factor still gets its exact law. The period-1
//! factor is drawn last, directly from its law conditioned on the window.

use std::io::Write;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::asym::{limit_variance, saddle_n};
use crate::format::float17;

/// Upper bound on the expected size mass dropped by truncating at `m_max`.
pub const TAIL_MASS_BOUND: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum SamplerError {
    #[error("invalid sampler config: {0}")]
    InvalidConfig(String),
    #[error("{0}")]
    AcceptanceCollapse(Box<CollapseDiagnostics>),
    #[error("config json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// What the sizes looked like when a worker gave up. A rejected attempt
/// reports the size of its factors of period `≥ 2` (the period-1 factor is
/// only drawn on acceptance); draws stopped early count as `n + window + 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CollapseDiagnostics {
    pub worker: usize,
    pub attempts: u64,
    pub target: u64,
    pub window: u64,
    pub min_size: u64,
    pub max_size: u64,
    pub mean_size: f64,
    pub below: u64,
    pub above: u64,
}

impl std::fmt::Display for CollapseDiagnostics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "no size within {} of {} in {} attempts (worker {}); sizes seen: min {}, mean {:.3}, max {}; {} below, {} above",
            self.window,
            self.target,
            self.attempts,
            self.worker,
            self.min_size,
            self.mean_size,
            self.max_size,
            self.below,
            self.above
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplerConfig {
    /// Target size.
    pub n: u64,
    /// Radius `N`; factor `m` has ratio `e^{-m/N}`.
    pub radius_n: f64,
    /// Largest factor period kept.
    pub m_max: usize,
    /// Accept sizes within `window` of `n`; `0` conditions exactly.
    pub window: u64,
    pub seed: u64,
    pub target_accepted: usize,
    /// Worker count; worker `w` draws from ChaCha8 stream `w` of `seed`.
    #[serde(default = "one")]
    pub workers: usize,
    /// A worker that goes this many attempts without an acceptance stops
    /// the run with [`SamplerError::AcceptanceCollapse`].
    #[serde(default = "default_budget")]
    pub attempt_budget: u64,
}

fn one() -> usize {
    1
}

fn default_budget() -> u64 {
    10_000_000
}

/// Expected size carried by factor period `m` at radius `N`:
/// `m · m x/(1-x)` with `x = e^{-m/N}`.
fn period_mass(m: usize, radius: f64) -> f64 {
    let x = (-(m as f64) / radius).exp();
    let m = m as f64;
    m * m * x / (1.0 - x)
}

/// Smallest `M` with `Σ_{m > M} m² x_m/(1 - x_m) < TAIL_MASS_BOUND`.
pub fn compute_m_max(radius: f64) -> usize {
    let mut end = 1usize;
    while (end as f64) < 2.0 * radius || period_mass(end, radius) > 1e-40 {
        end += 1;
    }
    let mut tail = 0.0;
    let mut m = end;
    while m > 0 {
        let next = tail + period_mass(m, radius);
        if next >= TAIL_MASS_BOUND {
            return m;
        }
        tail = next;
        m -= 1;
    }
    0
}

/// `Σ_{m ≤ m_max} m² x_m/(1 - x_m)`, the mean size of an unconditioned draw.
pub fn expected_size(radius: f64, m_max: usize) -> f64 {
    (1..=m_max).map(|m| period_mass(m, radius)).sum()
}

impl SamplerConfig {
    /// Defaults: saddle radius, computed `m_max`, exact conditioning,
    /// seed 0, 1000 samples, one worker.
    pub fn new(n: u64) -> Self {
        let radius_n = saddle_n(n.max(1) as f64);
        SamplerConfig {
            n,
            radius_n,
            m_max: compute_m_max(radius_n),
            window: 0,
            seed: 0,
            target_accepted: 1000,
            workers: 1,
            attempt_budget: default_budget(),
        }
    }

    /// Sets the radius and recomputes `m_max`.
    pub fn with_radius(mut self, radius_n: f64) -> Self {
        self.radius_n = radius_n;
        self.m_max = compute_m_max(radius_n);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_window(mut self, window: u64) -> Self {
        self.window = window;
        self
    }

    pub fn with_target(mut self, target_accepted: usize) -> Self {
        self.target_accepted = target_accepted;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_attempt_budget(mut self, budget: u64) -> Self {
        self.attempt_budget = budget;
        self
    }

    pub fn from_json(text: &str) -> Result<Self, SamplerError> {
        let c: SamplerConfig = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), SamplerError> {
        let bad = |s: &str| Err(SamplerError::InvalidConfig(s.to_string()));
        if !(self.radius_n > 0.0 && self.radius_n.is_finite()) {
            return bad("radius_n must be a positive finite number");
        }
        if self.workers == 0 {
            return bad("workers must be at least 1");
        }
        if self.attempt_budget == 0 {
            return bad("attempt_budget must be at least 1");
        }
        Ok(())
    }

    fn accepts(&self, size: u64) -> bool {
        size.abs_diff(self.n) <= self.window
    }
}

/// One draw. `worker` and `counter` locate it in the merged stream:
/// `counter` is the attempt index within the worker's RNG stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub worker: usize,
    pub counter: u64,
    pub size: u64,
    pub stat: i64,
    pub trace_proxy: u64,
}

/// Per-period constants of one configuration.
#[derive(Clone, Debug)]
pub struct Tables {
    ln_x: Vec<f64>,
    ln_1mx: Vec<f64>,
    all_zero: Vec<f64>,
}

impl Tables {
    pub fn new(config: &SamplerConfig) -> Self {
        let mut t = Tables {
            ln_x: vec![0.0],
            ln_1mx: vec![0.0],
            all_zero: vec![1.0],
        };
        for m in 1..=config.m_max {
            let ln_x = -(m as f64) / config.radius_n;
            let ln_1mx = (-ln_x.exp()).ln_1p();
            t.ln_x.push(ln_x);
            t.ln_1mx.push(ln_1mx);
            t.all_zero.push((m as f64 * ln_1mx).exp());
        }
        t
    }
}

/// Uniform on `(0, 1]` from the top 53 bits of a 64-bit word.
fn unit_open_closed<R: RngCore>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

struct Draw {
    size: u64,
    stat: i64,
    trace: u64,
}

/// Draws the factors with period `≥ first_m`, or stops early once
/// `size > stop_above`.
fn draw_factors<R: RngCore>(
    tables: &Tables,
    rng: &mut R,
    first_m: usize,
    stop_above: u64,
) -> Option<Draw> {
    let mut d = Draw {
        size: 0,
        stat: 0,
        trace: 0,
    };
    for m in first_m..tables.ln_x.len() {
        let mut u = unit_open_closed(rng);
        if u <= tables.all_zero[m] {
            continue;
        }
        let mut k = 0usize;
        loop {
            // Zeros before the next nonzero factor: P(gap ≥ g) = (1-x)^g.
            let gap = (u.ln() / tables.ln_1mx[m]).floor();
            if gap >= (m - k) as f64 {
                break;
            }
            k += gap as usize;
            // Nonzero multiplicity: 1 + Geometric, P(c ≥ j+1 | c ≥ 1) = x^j.
            let c = 1 + (unit_open_closed(rng).ln() / tables.ln_x[m]).floor() as u64;
            d.size += m as u64 * c;
            d.stat += (2 * k as i64 + 1 - m as i64) * c as i64;
            d.trace += c;
            if d.size > stop_above {
                return None;
            }
            k += 1;
            if k == m {
                break;
            }
            u = unit_open_closed(rng);
        }
    }
    Some(d)
}

/// The RNG of worker `worker`: stream `worker` of the ChaCha8 generator
/// seeded with `seed`.
pub fn worker_rng(seed: u64, worker: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(worker as u64);
    rng
}

/// One unconditioned draw.
pub fn draw_once<R: Rng>(config: &SamplerConfig, rng: &mut R) -> SampleRecord {
    draw_with_tables(&Tables::new(config), rng)
}

/// [`draw_once`] with precomputed tables.
pub fn draw_with_tables<R: Rng>(tables: &Tables, rng: &mut R) -> SampleRecord {
    let d = draw_factors(tables, rng, 1, u64::MAX).expect("no early stop");
    SampleRecord {
        worker: 0,
        counter: 0,
        size: d.size,
        stat: d.stat,
        trace_proxy: d.trace,
    }
}

/// Output of [`sample_conditioned`].
#[derive(Clone, Debug)]
pub struct SampleRun {
    pub config: SamplerConfig,
    /// Accepted records in worker-then-counter order.
    pub records: Vec<SampleRecord>,
    pub attempts: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleSummary {
    pub accepted: usize,
    pub attempts: u64,
    pub acceptance_rate: f64,
    /// Mean of `stat / n^{2/3}`.
    pub mean: f64,
    /// Sample variance of `stat / n^{2/3}`.
    pub variance: f64,
    /// Standard error of `variance`.
    pub variance_std_error: f64,
    /// The limit variance `(2ζ(3))^{-1/3}` for comparison.
    pub sigma2: f64,
    /// Window mode only approximates the fixed-size law.
    pub approximate: bool,
}

impl SampleRun {
    pub fn summary(&self) -> SampleSummary {
        let n = self.records.len();
        let scale = (self.config.n.max(1) as f64).powf(-2.0 / 3.0);
        let xs: Vec<f64> = self.records.iter().map(|r| r.stat as f64 * scale).collect();
        let nf = n as f64;
        let mean = xs.iter().sum::<f64>() / nf;
        let m2 = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / nf;
        let m4 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / nf;
        let variance = m2 * nf / (nf - 1.0);
        SampleSummary {
            accepted: n,
            attempts: self.attempts,
            acceptance_rate: n as f64 / self.attempts as f64,
            mean,
            variance,
            variance_std_error: ((m4 - m2 * m2) / nf).sqrt(),
            sigma2: limit_variance(),
            approximate: self.config.window > 0,
        }
    }

    /// CSV with a `# config: {json}` header line, then columns
    /// `worker,counter,size,stat,trace_proxy`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<(), SamplerError> {
        writeln!(w, "# config: {}", self.config.to_json())?;
        if self.config.window > 0 {
            writeln!(
                w,
                "# approximate: window > 0 does not condition on the exact size"
            )?;
        }
        let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        out.write_record(["worker", "counter", "size", "stat", "trace_proxy"])?;
        for r in &self.records {
            out.serialize(r)?;
        }
        out.flush()?;
        Ok(())
    }

    /// `key,value` lines of the summary.
    pub fn write_summary<W: Write>(&self, mut w: W) -> Result<(), SamplerError> {
        let s = self.summary();
        writeln!(w, "accepted,{}", s.accepted)?;
        writeln!(w, "attempts,{}", s.attempts)?;
        writeln!(w, "acceptance_rate,{}", float17(s.acceptance_rate))?;
        writeln!(w, "mean_normalized_stat,{}", float17(s.mean))?;
        writeln!(w, "variance_normalized_stat,{}", float17(s.variance))?;
        writeln!(w, "variance_std_error,{}", float17(s.variance_std_error))?;
        writeln!(w, "sigma2,{}", float17(s.sigma2))?;
        writeln!(w, "approximate,{}", s.approximate)?;
        Ok(())
    }
}

/// The period-1 factor has a single member with statistic weight 0, so it
/// can be drawn last, conditioned on the total landing in the window.
///
/// Given the other factors sum to `rest`, the attempt is kept with
/// probability `P(c ∈ [lo, hi]) / max_rest P(c ∈ [lo, hi])` and `c` is then
/// drawn from the geometric law restricted to `[lo, hi]`. Accepted records
/// have exactly the law of plain rejection; only the rate improves, by the
/// factor `1 / (1 - x^{2ε+1})` (about `N` when `ε = 0`).
fn complete<R: Rng>(
    tables: &Tables,
    config: &SamplerConfig,
    rest: u64,
    rng: &mut R,
) -> Option<u64> {
    if tables.ln_x.len() < 2 {
        return config.accepts(rest).then_some(0);
    }
    let ln_x = tables.ln_x[1];
    let hi = (config.n + config.window).checked_sub(rest)?;
    let lo = config.n.saturating_sub(config.window).saturating_sub(rest);
    let width = (hi - lo + 1) as f64;
    let mass = (lo as f64 * ln_x).exp() * -(width * ln_x).exp_m1();
    let norm = -((2 * config.window + 1) as f64 * ln_x).exp_m1();
    if unit_open_closed(rng) * norm > mass {
        return None;
    }
    if hi == lo {
        return Some(lo);
    }
    let span = -(width * ln_x).exp_m1();
    let u: f64 = rng.gen();
    let j = ((-u * span).ln_1p() / ln_x).floor() as u64;
    Some(lo + j.min(hi - lo))
}

#[derive(Default)]
struct SizeTally {
    attempts: u64,
    min: u64,
    max: u64,
    sum: f64,
    below: u64,
    above: u64,
}

impl SizeTally {
    fn record(&mut self, size: u64, n: u64) {
        self.min = self.min.min(size);
        self.max = self.max.max(size);
        self.sum += size as f64;
        if size < n {
            self.below += 1;
        } else {
            self.above += 1;
        }
    }
}

/// One conditioned attempt: `Ok` with the accepted draw, `Err` with the
/// size of the rejected one (a lower bound when the draw stopped early).
fn attempt<R: Rng>(tables: &Tables, config: &SamplerConfig, rng: &mut R) -> Result<Draw, u64> {
    let stop_above = config.n + config.window;
    let Some(mut d) = draw_factors(tables, rng, 2, stop_above) else {
        return Err(stop_above + 1);
    };
    match complete(tables, config, d.size, rng) {
        Some(c) => {
            d.size += c;
            d.trace += c;
            Ok(d)
        }
        None => Err(d.size),
    }
}

fn run_worker(
    config: &SamplerConfig,
    tables: &Tables,
    worker: usize,
    quota: usize,
) -> Result<(Vec<SampleRecord>, u64), SamplerError> {
    let mut rng = worker_rng(config.seed, worker);
    let mut out = Vec::with_capacity(quota);
    let mut counter = 0u64;
    let fresh = || SizeTally {
        min: u64::MAX,
        ..Default::default()
    };
    let mut dry = fresh();
    while out.len() < quota {
        let result = attempt(tables, config, &mut rng);
        counter += 1;
        match result {
            Ok(d) => {
                out.push(SampleRecord {
                    worker,
                    counter: counter - 1,
                    size: d.size,
                    stat: d.stat,
                    trace_proxy: d.trace,
                });
                dry = fresh();
            }
            Err(size) => {
                dry.attempts += 1;
                dry.record(size, config.n);
                if dry.attempts >= config.attempt_budget {
                    return Err(SamplerError::AcceptanceCollapse(Box::new(
                        CollapseDiagnostics {
                            worker,
                            attempts: dry.attempts,
                            target: config.n,
                            window: config.window,
                            min_size: dry.min,
                            max_size: dry.max,
                            mean_size: dry.sum / dry.attempts as f64,
                            below: dry.below,
                            above: dry.above,
                        },
                    )));
                }
            }
        }
    }
    Ok((out, counter))
}

/// Draws until `target_accepted` records with `|size - n| ≤ window` are
/// collected. Worker `w` of `W` collects `⌊T/W⌋` records plus one if
/// `w < T mod W`; results are concatenated in worker order.
pub fn sample_conditioned(config: &SamplerConfig) -> Result<SampleRun, SamplerError> {
    config.validate()?;
    let tables = Tables::new(config);
    let w = config.workers;
    let quota = |i: usize| config.target_accepted / w + usize::from(i < config.target_accepted % w);
    let results: Vec<Result<(Vec<SampleRecord>, u64), SamplerError>> = if w == 1 {
        vec![run_worker(config, &tables, 0, quota(0))]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..w)
                .map(|i| {
                    let tables = &tables;
                    s.spawn(move || run_worker(config, tables, i, quota(i)))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("sampler worker panicked"))
                .collect()
        })
    };
    let mut records = Vec::with_capacity(config.target_accepted);
    let mut attempts = 0;
    for r in results {
        let (recs, a) = r?;
        records.extend(recs);
        attempts += a;
    }
    Ok(SampleRun {
        config: config.clone(),
        records,
        attempts,
    })
}

/// Fraction of `pilot` attempts (worker stream 0) that are accepted.
pub fn acceptance_rate_estimate(config: &SamplerConfig, pilot: u64) -> f64 {
    let tables = Tables::new(config);
    let mut rng = worker_rng(config.seed, 0);
    let hits = (0..pilot)
        .filter(|_| attempt(&tables, config, &mut rng).is_ok())
        .count();
    hits as f64 / pilot as f64
}

/// Pearson χ² statistic and degrees of freedom of observed counts against
/// expected probabilities. Cells with expected count below `min_expected`
/// are pooled into one.
pub fn chi_square(observed: &[u64], expected_prob: &[f64], min_expected: f64) -> (f64, usize) {
    assert_eq!(observed.len(), expected_prob.len());
    let total: u64 = observed.iter().sum();
    let total = total as f64;
    let mut stat = 0.0;
    let mut cells = 0usize;
    let (mut pool_o, mut pool_e) = (0.0, 0.0);
    for (&o, &p) in observed.iter().zip(expected_prob) {
        let e = p * total;
        if e < min_expected {
            pool_o += o as f64;
            pool_e += e;
        } else {
            stat += (o as f64 - e).powi(2) / e;
            cells += 1;
        }
    }
    if pool_e > 0.0 {
        stat += (pool_o - pool_e).powi(2) / pool_e;
        cells += 1;
    }
    (stat, cells.saturating_sub(1))
}
