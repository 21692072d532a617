//! Finite-sample experiments: seeded multinomial sampling of a model and
//! empirical pre/post-selected shift estimates with an anomaly test.
//!
//! # Seed to counts mapping
//!
//! `n` draws are split into shards of [`SHARD_SIZE`]. Shard `k` draws from a
//! `ChaCha8Rng` seeded with `seed_from_u64(seed)` on stream `k`. Each draw takes
//! one `f64` uniform on `[0, 1)` and picks the first cell (in flat index order)
//! whose cumulative probability exceeds it. Counts are independent of the number
//! of worker threads.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::{pair_index, pairs, Outcome, ProbabilityTable, Sign};

pub const SHARD_SIZE: u64 = 1 << 16;

/// Detection threshold on the standardized margin statistic.
pub const DETECTION_Z: f64 = 3.0;

/// Minimum stratum size for an estimate to be reported.
pub const MIN_STRATUM: u64 = 2;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleBatch {
    pub n: u64,
    pub counts: [u64; 8],
    pub seed: u64,
}

impl SampleBatch {
    pub fn new(counts: [u64; 8], seed: u64) -> Self {
        SampleBatch {
            n: counts.iter().sum(),
            counts,
            seed,
        }
    }

    pub fn count(&self, outcome: Outcome) -> u64 {
        self.counts[outcome.index()]
    }
}

fn cumulative(table: &ProbabilityTable) -> [f64; 8] {
    let p = table.entries();
    let mut cdf = [0.0; 8];
    let mut acc = 0.0;
    for (c, v) in cdf.iter_mut().zip(p) {
        acc += v;
        *c = acc;
    }
    // Close the CDF at the last cell with mass so trailing empty cells are never drawn.
    let last = p.iter().rposition(|&v| v > 0.0).unwrap_or(7);
    cdf[last..].iter_mut().for_each(|c| *c = 1.0);
    cdf
}

fn draw_shard(cdf: &[f64; 8], seed: u64, shard: u64, draws: u64) -> [u64; 8] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard);
    let mut counts = [0u64; 8];
    for _ in 0..draws {
        let u: f64 = rng.random();
        let cell = cdf.iter().position(|&c| u < c).unwrap_or(7);
        counts[cell] += 1;
    }
    counts
}

/// Draws `n` i.i.d. outcomes from the table.
pub fn sample(table: &ProbabilityTable, n: u64, seed: u64) -> Result<SampleBatch> {
    if n == 0 {
        return Err(Error::domain("n", 0.0, "at least one draw is required"));
    }
    let cdf = cumulative(table);
    let shards = n.div_ceil(SHARD_SIZE);
    let counts = (0..shards)
        .into_par_iter()
        .map(|k| {
            let draws = SHARD_SIZE.min(n - k * SHARD_SIZE);
            draw_shard(&cdf, seed, k, draws)
        })
        .reduce(
            || [0u64; 8],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(SampleBatch { n, counts, seed })
}

/// Empirical mean of a `±1` variable over a stratum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub estimate: f64,
    pub stderr: f64,
    pub n_eff: u64,
}

impl Estimate {
    fn from_counts(plus: u64, minus: u64) -> Option<Self> {
        let n_eff = plus + minus;
        if n_eff < MIN_STRATUM {
            return None;
        }
        let estimate = (plus as f64 - minus as f64) / n_eff as f64;
        Some(Estimate {
            estimate,
            stderr: mean_stderr(estimate, n_eff),
            n_eff,
        })
    }
}

/// Standard error of a `±1` mean `m` from `n` draws: twice the binomial
/// proportion error at `p = (1 + m) / 2`.
pub fn mean_stderr(m: f64, n: u64) -> f64 {
    let p = ((1.0 + m) / 2.0).clamp(0.0, 1.0);
    2.0 * (p * (1.0 - p) / n as f64).sqrt()
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimateReport {
    pre_hat: [Option<Estimate>; 2],
    post_hat: [Option<Estimate>; 4],
    /// Largest standardized margin over strata with both estimates defined.
    pub apss_z: f64,
    pub apss_detected: bool,
    /// Strata with fewer than [`MIN_STRATUM`] draws.
    pub insufficient: Vec<(Sign, Sign)>,
}

impl EstimateReport {
    pub fn pre_hat(&self, psi: Sign) -> Option<Estimate> {
        self.pre_hat[psi.bit()]
    }

    pub fn post_hat(&self, psi: Sign, phi: Sign) -> Option<Estimate> {
        self.post_hat[pair_index(psi, phi)]
    }

    /// Standardized margin for one stratum; `None` if either estimate is undefined.
    pub fn z(&self, psi: Sign, phi: Sign) -> Option<f64> {
        let pre = self.pre_hat(psi)?;
        let post = self.post_hat(psi, phi)?;
        let diff = post.estimate.abs() - pre.estimate.abs();
        // Under the no-anomaly null the post-selected mean equals the
        // pre-selected one, so its spread is evaluated at the pre estimate.
        let post_null = mean_stderr(pre.estimate, post.n_eff);
        let se = (pre.stderr.powi(2) + post_null.powi(2)).sqrt();
        Some(if se > 0.0 {
            diff / se
        } else if diff > 0.0 {
            f64::INFINITY
        } else if diff < 0.0 {
            f64::NEG_INFINITY
        } else {
            0.0
        })
    }
}

pub fn estimate(batch: &SampleBatch) -> EstimateReport {
    let count = |psi, s, phi| batch.count(Outcome::new(psi, s, phi));

    let mut pre_hat = [None; 2];
    for psi in Sign::BOTH {
        let plus = Sign::BOTH
            .iter()
            .map(|&phi| count(psi, Sign::Plus, phi))
            .sum();
        let minus = Sign::BOTH
            .iter()
            .map(|&phi| count(psi, Sign::Minus, phi))
            .sum();
        pre_hat[psi.bit()] = Estimate::from_counts(plus, minus);
    }

    let mut post_hat = [None; 4];
    let mut insufficient = Vec::new();
    for (psi, phi) in pairs() {
        let e = Estimate::from_counts(count(psi, Sign::Plus, phi), count(psi, Sign::Minus, phi));
        if e.is_none() {
            insufficient.push((psi, phi));
        }
        post_hat[pair_index(psi, phi)] = e;
    }

    let mut report = EstimateReport {
        pre_hat,
        post_hat,
        apss_z: f64::NEG_INFINITY,
        apss_detected: false,
        insufficient,
    };
    report.apss_z = pairs()
        .into_iter()
        .filter_map(|(psi, phi)| report.z(psi, phi))
        .fold(f64::NEG_INFINITY, f64::max);
    report.apss_detected = report.apss_z > DETECTION_Z;
    report
}

#[derive(Serialize)]
struct PairSerial {
    psi: Sign,
    phi: Sign,
}

#[derive(Serialize)]
struct EstimateReportSerial {
    pre_hat: BTreeMap<String, Option<Estimate>>,
    post_hat: BTreeMap<String, Option<Estimate>>,
    apss_z: Option<f64>,
    apss_detected: bool,
    insufficient: Vec<PairSerial>,
}

impl Serialize for EstimateReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        EstimateReportSerial {
            pre_hat: Sign::BOTH
                .iter()
                .map(|&s| (s.to_string(), self.pre_hat(s)))
                .collect(),
            post_hat: pairs()
                .into_iter()
                .map(|(a, b)| (format!("{a},{b}"), self.post_hat(a, b)))
                .collect(),
            apss_z: self.apss_z.is_finite().then_some(self.apss_z),
            apss_detected: self.apss_detected,
            insufficient: self
                .insufficient
                .iter()
                .map(|&(psi, phi)| PairSerial { psi, phi })
                .collect(),
        }
        .serialize(serializer)
    }
}
