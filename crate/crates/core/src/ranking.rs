//! Fire-risk ranking of protection zones: AHP weights for the indicators and
//! grey relational analysis (GRA) against an ideal zone.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::io::Read;

/// Saaty's random consistency index for matrix orders 1 through 9.
const RANDOM_INDEX: [f64; 9] = [0.0, 0.0, 0.58, 0.90, 1.12, 1.24, 1.32, 1.41, 1.45];

/// Consistency ratios above this are flagged.
pub const CR_LIMIT: f64 = 0.1;

/// Conventional GRA distinguishing coefficient.
pub const DEFAULT_RHO: f64 = 0.5;

/// AHP weights of FDR, RIFT and FF used for the Victorian zones.
pub const VICTORIA_WEIGHTS: [f64; 3] = [0.539, 0.248, 0.213];

/// Whether larger indicator values make a zone more fire-prone (`Benefit`)
/// or less (`Cost`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Benefit,
    Cost,
}

/// Zones × indicators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatorTable {
    pub zones: Vec<String>,
    pub indicators: Vec<String>,
    /// One row per zone.
    pub values: Vec<Vec<f64>>,
    pub orientation: Vec<Orientation>,
}

impl IndicatorTable {
    pub fn new(
        zones: Vec<String>,
        indicators: Vec<String>,
        values: Vec<Vec<f64>>,
        orientation: Vec<Orientation>,
    ) -> Result<Self> {
        let t = Self { zones, indicators, values, orientation };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.indicators.len();
        if self.zones.len() < 2 {
            return Err(Error::Validation("at least two zones are required".into()));
        }
        if k == 0 {
            return Err(Error::Validation("at least one indicator is required".into()));
        }
        if self.values.len() != self.zones.len() {
            return Err(Error::Validation(format!(
                "{} zones but {} value rows",
                self.zones.len(),
                self.values.len()
            )));
        }
        if self.orientation.len() != k {
            return Err(Error::Validation(format!(
                "{k} indicators but {} orientations",
                self.orientation.len()
            )));
        }
        for (zone, row) in self.zones.iter().zip(&self.values) {
            if row.len() != k {
                return Err(Error::Validation(format!("zone {zone:?} has {} values, expected {k}", row.len())));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::Validation(format!("zone {zone:?} has a non-finite value")));
            }
        }
        Ok(())
    }

    /// Reads a CSV with header `zone,<indicator>,...`.
    pub fn from_csv<R: Read>(reader: R, orientation: Vec<Orientation>) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.len() < 2 {
            return Err(Error::Validation("indicator CSV needs a zone column and indicators".into()));
        }
        let indicators: Vec<String> = headers.iter().skip(1).map(str::to_string).collect();
        let mut zones = Vec::new();
        let mut values = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            zones.push(rec.get(0).unwrap_or_default().to_string());
            let row = rec
                .iter()
                .skip(1)
                .map(|s| {
                    s.parse::<f64>()
                        .map_err(|_| Error::Validation(format!("not a number: {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            values.push(row);
        }
        Self::new(zones, indicators, values, orientation)
    }
}

/// Positive reciprocal judgment matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>")]
pub struct PairwiseMatrix(Vec<Vec<f64>>);

impl PairwiseMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if !(2..=9).contains(&n) {
            return Err(Error::Validation(format!("pairwise matrix order must be 2..=9, got {n}")));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Validation("pairwise matrix must be square".into()));
            }
            for (j, &a) in row.iter().enumerate() {
                if a.is_nan() || a <= 0.0 || !a.is_finite() {
                    return Err(Error::Validation(format!("entry ({i}, {j}) must be positive")));
                }
                if (a * rows[j][i] - 1.0).abs() > 1e-9 {
                    return Err(Error::Validation(format!(
                        "entries ({i}, {j}) and ({j}, {i}) are not reciprocal"
                    )));
                }
            }
        }
        Ok(Self(rows))
    }

    /// Perfectly consistent matrix `a_ij = w_i / w_j`.
    pub fn from_weights(w: &[f64]) -> Result<Self> {
        Self::new(w.iter().map(|wi| w.iter().map(|wj| wi / wj).collect()).collect())
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.0
    }
}

impl TryFrom<Vec<Vec<f64>>> for PairwiseMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(rows)
    }
}

/// Positive indicator weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>")]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.is_empty() || w.iter().any(|&q| q.is_nan() || q <= 0.0 || !q.is_finite()) {
            return Err(Error::Validation("weights must be positive".into()));
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::Validation(format!("weights sum to {sum}, not 1")));
        }
        Ok(Self(w))
    }

    /// Scales positive raw weights to sum to one.
    pub fn normalized(raw: &[f64]) -> Result<Self> {
        let sum: f64 = raw.iter().sum();
        Self::new(raw.iter().map(|q| q / sum).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for WeightVector {
    type Error = Error;

    fn try_from(w: Vec<f64>) -> Result<Self> {
        Self::new(w)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AhpResult {
    pub weights: WeightVector,
    pub lambda_max: f64,
    pub consistency_ratio: f64,
    /// `consistency_ratio > CR_LIMIT`.
    pub inconsistent: bool,
}

/// Principal eigenvector of the judgment matrix by power iteration, with
/// Saaty's consistency ratio.
pub fn ahp_weights(m: &PairwiseMatrix) -> Result<AhpResult> {
    let n = m.order();
    let a = m.rows();
    let mut x = vec![1.0 / n as f64; n];
    let mut converged = false;
    for _ in 0..100_000 {
        let y: Vec<f64> = a.iter().map(|row| row.iter().zip(&x).map(|(p, q)| p * q).sum()).collect();
        let s: f64 = y.iter().sum();
        let y: Vec<f64> = y.into_iter().map(|v| v / s).collect();
        let delta = y.iter().zip(&x).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        x = y;
        if delta < 1e-15 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Validation("power iteration did not converge".into()));
    }
    // With Σx = 1, Σ(Ax) = λ.
    let lambda_max: f64 = a.iter().map(|row| row.iter().zip(&x).map(|(p, q)| p * q).sum::<f64>()).sum();
    let ri = RANDOM_INDEX[n - 1];
    let consistency_ratio = if ri == 0.0 { 0.0 } else { ((lambda_max - n as f64) / ((n - 1) as f64 * ri)).max(0.0) };
    let inconsistent = consistency_ratio > CR_LIMIT;
    if inconsistent {
        log::warn!("pairwise judgments are inconsistent: CR = {consistency_ratio:.4}");
    }
    Ok(AhpResult { weights: WeightVector::normalized(&x)?, lambda_max, consistency_ratio, inconsistent })
}

/// Grey relational score of one zone.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GreyScore {
    pub zone: String,
    /// Weighted relational degree `r_i`.
    pub score: f64,
    /// Per-indicator relational coefficients `ξ_i(k)`.
    pub coefficients: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraResult {
    /// Sorted by descending score, ties by zone name.
    pub scores: Vec<GreyScore>,
    /// Indicators with zero range; their coefficients are all 1.
    pub degenerate_indicators: Vec<String>,
}

fn by_score_then_name(a: &GreyScore, b: &GreyScore) -> Ordering {
    b.score.total_cmp(&a.score).then_with(|| a.zone.cmp(&b.zone))
}

/// Grey relational analysis against the ideal zone.
///
/// Each indicator is min-max normalized to [0, 1] with cost indicators
/// inverted, so the ideal series is all ones. With `Δ_i(k) = |x_i(k) - 1|`,
/// `ξ_i(k) = (Δmin + ρΔmax) / (Δ_i(k) + ρΔmax)`, the extremes taken over all
/// zones and non-degenerate indicators, and `r_i = Σ q_k ξ_i(k)`.
pub fn gra_scores(table: &IndicatorTable, weights: &WeightVector, rho: f64) -> Result<GraResult> {
    table.validate()?;
    let k = table.indicators.len();
    if weights.as_slice().len() != k {
        return Err(Error::Validation(format!(
            "{} weights for {k} indicators",
            weights.as_slice().len()
        )));
    }
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::Validation(format!("rho must lie in (0, 1], got {rho}")));
    }

    let mut degenerate = vec![false; k];
    let mut delta = vec![vec![0.0; k]; table.zones.len()];
    for col in 0..k {
        let (lo, hi) = table
            .values
            .iter()
            .map(|r| r[col])
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if hi == lo {
            degenerate[col] = true;
            log::warn!("indicator {:?} is constant across zones", table.indicators[col]);
            continue;
        }
        for (row, d) in table.values.iter().zip(delta.iter_mut()) {
            let x = match table.orientation[col] {
                Orientation::Benefit => (row[col] - lo) / (hi - lo),
                Orientation::Cost => (hi - row[col]) / (hi - lo),
            };
            d[col] = (x - 1.0).abs();
        }
    }

    let live = || delta.iter().flat_map(|d| d.iter().enumerate().filter(|(c, _)| !degenerate[*c]).map(|(_, v)| *v));
    let d_min = live().fold(f64::INFINITY, f64::min);
    let d_max = live().fold(f64::NEG_INFINITY, f64::max);

    let mut scores: Vec<GreyScore> = table
        .zones
        .iter()
        .zip(&delta)
        .map(|(zone, d)| {
            let coefficients: Vec<f64> = (0..k)
                .map(|c| {
                    if degenerate[c] || d_max == 0.0 {
                        1.0
                    } else {
                        (d_min + rho * d_max) / (d[c] + rho * d_max)
                    }
                })
                .collect();
            let score = coefficients.iter().zip(weights.as_slice()).map(|(x, q)| x * q).sum();
            GreyScore { zone: zone.clone(), score, coefficients }
        })
        .collect();
    scores.sort_by(by_score_then_name);

    let degenerate_indicators = table
        .indicators
        .iter()
        .zip(&degenerate)
        .filter(|(_, d)| **d)
        .map(|(n, _)| n.clone())
        .collect();
    Ok(GraResult { scores, degenerate_indicators })
}

/// Names of the `k` highest-scoring zones, ties broken by name.
pub fn select_targets(scores: &[GreyScore], k: usize) -> Result<Vec<String>> {
    if k == 0 || k > scores.len() {
        return Err(Error::Validation(format!("k must lie in 1..={}, got {k}", scores.len())));
    }
    let mut sorted: Vec<&GreyScore> = scores.iter().collect();
    sorted.sort_by(|a, b| by_score_then_name(a, b));
    Ok(sorted.into_iter().take(k).map(|s| s.zone.clone()).collect())
}

/// Fire danger rating, restriction-in-force time and fire frequency for the
/// nine fire protection zones of Victoria.
pub fn victoria_table() -> IndicatorTable {
    let rows: [(&str, [f64; 3]); 9] = [
        ("Mallee", [11.0, 198.0, 3.0]),
        ("Wimmera", [10.0, 170.0, 7.0]),
        ("South West", [7.0, 156.0, 17.0]),
        ("Northern Country", [8.0, 163.0, 6.0]),
        ("North Central", [6.0, 156.0, 4.0]),
        ("North East", [6.0, 157.0, 15.0]),
        ("Central", [6.0, 141.0, 33.0]),
        ("West and South Gippsland", [5.0, 141.0, 45.0]),
        ("East Gippsland", [5.0, 141.0, 40.0]),
    ];
    IndicatorTable {
        zones: rows.iter().map(|(z, _)| z.to_string()).collect(),
        indicators: vec!["FDR".into(), "RIFT".into(), "FF".into()],
        values: rows.iter().map(|(_, v)| v.to_vec()).collect(),
        orientation: default_orientation(),
    }
}

/// FDR and RIFT as cost indicators, FF as benefit.
pub fn default_orientation() -> Vec<Orientation> {
    vec![Orientation::Cost, Orientation::Cost, Orientation::Benefit]
}
