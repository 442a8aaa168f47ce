//! Drone replacement under extreme fires and the resulting fleet cost.
//!
//! Each of the `n + m` drones retires in a period with probability `p`, so
//! retirements per period are `B(n + m, p)`, close to `Poisson((n + m) p)`.

use crate::error::{ensure, Result};
use crate::sampling;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

/// Currency amount in the unit of the configured drone price.
pub type Currency = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoundingRule {
    /// Nearest integer, ties up.
    #[default]
    Nearest,
    Floor,
    Ceil,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CostParams {
    /// Per-period retirement probability.
    pub p: f64,
    /// Number of periods (months).
    pub t: u32,
    /// Unit drone price.
    pub c: Currency,
    pub rounding: RoundingRule,
}

impl Default for CostParams {
    fn default() -> Self {
        Self { p: 0.01, t: 12, c: 10_000, rounding: RoundingRule::Nearest }
    }
}

impl CostParams {
    pub fn validate(&self) -> Result<()> {
        ensure((0.0..=1.0).contains(&self.p), || format!("p must lie in [0, 1], got {}", self.p))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostEstimate {
    /// Replacements per period.
    pub u: u64,
    /// Replacement cost `u t c`.
    pub g1: Currency,
    /// Total cost `(n + m + u t) c`.
    pub g0: Currency,
}

const ROUND_NUDGE: f64 = 1e-9;

/// Expected replacements per period, rounded per `rule`.
pub fn replacements_per_period(n: u64, m: u64, p: f64, rule: RoundingRule) -> Result<u64> {
    ensure((0.0..=1.0).contains(&p), || format!("p must lie in [0, 1], got {p}"))?;
    let mean = (n + m) as f64 * p;
    let u = match rule {
        RoundingRule::Nearest => (mean + 0.5 + ROUND_NUDGE).floor(),
        RoundingRule::Floor => (mean + ROUND_NUDGE).floor(),
        RoundingRule::Ceil => (mean - ROUND_NUDGE).ceil().max(0.0),
    };
    Ok(u as u64)
}

pub fn total_costs(n: u64, m: u64, u: u64, params: &CostParams) -> CostEstimate {
    let t = u64::from(params.t);
    CostEstimate { u, g1: u * t * params.c, g0: (n + m + u * t) * params.c }
}

/// Rounds `(n + m) p` and prices the fleet.
pub fn estimate(n: u64, m: u64, params: &CostParams) -> Result<CostEstimate> {
    params.validate()?;
    let u = replacements_per_period(n, m, params.p, params.rounding)?;
    Ok(total_costs(n, m, u, params))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplacementStats {
    pub fleet: u64,
    pub p: f64,
    pub periods: u32,
    pub trials: usize,
    /// Per-period retirement counts, `periods` consecutive values per trial.
    #[serde(skip)]
    pub samples: Vec<u32>,
    pub mean: f64,
    /// Unbiased sample variance of the per-period counts.
    pub variance: f64,
    /// Standard error of `mean`.
    pub std_error: f64,
    /// `histogram[k]` = number of periods with exactly `k` retirements.
    pub histogram: Vec<u64>,
}

impl ReplacementStats {
    /// Counts for one trial.
    pub fn trial(&self, i: usize) -> &[u32] {
        let t = self.periods as usize;
        &self.samples[i * t..(i + 1) * t]
    }

    pub fn total_periods(&self) -> usize {
        self.samples.len()
    }

    /// Total-variation distance between the empirical histogram and a pmf.
    pub fn tv_distance(&self, pmf: impl Fn(u64) -> f64) -> f64 {
        let n = self.total_periods() as f64;
        let mut seen = 0.0;
        let mut diff = 0.0;
        for (k, &h) in self.histogram.iter().enumerate() {
            let q = pmf(k as u64);
            seen += q;
            diff += (h as f64 / n - q).abs();
        }
        // Mass beyond the largest observed count.
        0.5 * (diff + (1.0 - seen).max(0.0))
    }
}

/// Poisson pmf, evaluated in log space.
pub fn poisson_pmf(lambda: f64, k: u64) -> f64 {
    if lambda == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    let ln_fact: f64 = (2..=k).map(|i| (i as f64).ln()).sum();
    (k as f64 * lambda.ln() - lambda - ln_fact).exp()
}

/// Simulates `trials` independent runs of `periods` binomial retirement
/// periods on a constant fleet. Trials are split into seeded streams.
pub fn simulate_replacements(fleet: u64, p: f64, periods: u32, trials: usize, seed: u64) -> Result<ReplacementStats> {
    ensure((0.0..=1.0).contains(&p), || format!("p must lie in [0, 1], got {p}"))?;
    ensure(trials >= 1, || "at least one trial is required".into())?;
    ensure(periods >= 1, || "at least one period is required".into())?;
    let binom = Binomial::new(fleet, p).map_err(|e| crate::Error::InvalidParameter(e.to_string()))?;
    let parts = sampling::map_chunks(trials, seed, |rng, idx| {
        let mut out = Vec::with_capacity(idx.len() * periods as usize);
        for _ in idx {
            for _ in 0..periods {
                out.push(binom.sample(rng) as u32);
            }
        }
        out
    });
    let samples: Vec<u32> = parts.concat();
    let n = samples.len() as f64;
    let mean = samples.iter().map(|&x| f64::from(x)).sum::<f64>() / n;
    let variance = if samples.len() > 1 {
        samples.iter().map(|&x| (f64::from(x) - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let max = samples.iter().copied().max().unwrap_or(0) as usize;
    let mut histogram = vec![0u64; max + 1];
    for &x in &samples {
        histogram[x as usize] += 1;
    }
    Ok(ReplacementStats {
        fleet,
        p,
        periods,
        trials,
        samples,
        mean,
        variance,
        std_error: (variance / n).sqrt(),
        histogram,
    })
}

/// A row of the published extreme-fire cost table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PublishedCostRow {
    pub d_km: u32,
    pub m: u64,
    pub n: u64,
    pub u: u64,
    pub g0: Currency,
    pub g1: Currency,
}

const fn row(d_km: u32, m: u64, n: u64, u: u64, g0: Currency, g1: Currency) -> PublishedCostRow {
    PublishedCostRow { d_km, m, n, u, g0, g1 }
}

/// Mountain-region extreme-fire costs as published, with `p = 0.01`,
/// `t = 12`, `c = 10000`.
pub const PUBLISHED_COSTS: [PublishedCostRow; 14] = [
    row(40, 76, 514, 6, 6_620_000, 720_000),
    row(42, 82, 514, 6, 6_680_000, 720_000),
    row(44, 84, 542, 8, 7_220_000, 960_000),
    row(46, 88, 572, 8, 7_560_000, 960_000),
    row(48, 92, 662, 8, 7_600_000, 960_000),
    row(50, 96, 662, 8, 8_540_000, 960_000),
    row(52, 100, 794, 8, 8_580_000, 960_000),
    row(54, 104, 794, 10, 10_180_000, 1_200_000),
    row(56, 108, 794, 10, 10_220_000, 1_200_000),
    row(58, 112, 794, 10, 10_260_000, 1_200_000),
    row(60, 116, 938, 12, 11_980_000, 1_440_000),
    row(62, 120, 938, 12, 12_020_000, 1_440_000),
    row(64, 122, 938, 12, 12_040_000, 1_440_000),
    row(66, 126, 1094, 14, 13_880_000, 1_680_000),
];

/// Recomputation of one published row from its own `(n, m, u)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CostAudit {
    pub row: PublishedCostRow,
    pub g0: Currency,
    pub g1: Currency,
    /// `u` from the configured rounding of `(n + m) p`.
    pub u_rounded: u64,
    pub g0_matches: bool,
    pub g1_matches: bool,
}

pub fn audit_published_costs(params: &CostParams) -> Result<Vec<CostAudit>> {
    params.validate()?;
    PUBLISHED_COSTS
        .iter()
        .map(|&row| {
            let est = total_costs(row.n, row.m, row.u, params);
            Ok(CostAudit {
                row,
                g0: est.g0,
                g1: est.g1,
                u_rounded: replacements_per_period(row.n, row.m, params.p, params.rounding)?,
                g0_matches: est.g0 == row.g0,
                g1_matches: est.g1 == row.g1,
            })
        })
        .collect()
}
