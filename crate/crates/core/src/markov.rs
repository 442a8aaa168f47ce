//! Fire-scale ratings and a first-order Markov model of their sequence.
//!
//! Transition probabilities are fitted as exact rationals so that row sums
//! and the stationary equations can be checked without rounding.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

pub type Rational = BigRational;

/// Upper radius (km) of rating 1; radii equal to it stay in rating 1.
pub const RATING_ONE_MAX_KM: f64 = 10.0;
/// Lower radius (km) of rating 3; radii equal to it are already rating 3.
pub const RATING_THREE_MIN_KM: f64 = 40.0;

/// Wildfire scale class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Rating {
    One,
    Two,
    Three,
}

impl Rating {
    pub const ALL: [Rating; 3] = [Rating::One, Rating::Two, Rating::Three];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn value(self) -> u8 {
        self as u8 + 1
    }
}

impl TryFrom<u8> for Rating {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        Rating::try_from(v as i64)
    }
}

impl TryFrom<i64> for Rating {
    type Error = Error;

    fn try_from(v: i64) -> Result<Self> {
        match v {
            1 => Ok(Rating::One),
            2 => Ok(Rating::Two),
            3 => Ok(Rating::Three),
            _ => Err(Error::Validation(format!("rating must be 1, 2 or 3, got {v}"))),
        }
    }
}

impl From<Rating> for u8 {
    fn from(r: Rating) -> u8 {
        r.value()
    }
}

impl fmt::Display for Rating {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Rating of a fire of radius `radius_km`.
pub fn classify_rating(radius_km: f64) -> Result<Rating> {
    if radius_km.is_nan() || radius_km < 0.0 || !radius_km.is_finite() {
        return Err(Error::Validation(format!(
            "fire radius must be a non-negative number, got {radius_km}"
        )));
    }
    Ok(if radius_km <= RATING_ONE_MAX_KM {
        Rating::One
    } else if radius_km < RATING_THREE_MIN_KM {
        Rating::Two
    } else {
        Rating::Three
    })
}

/// Observed ratings in chronological order, at least two long.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatingSequence(Vec<Rating>);

impl RatingSequence {
    pub fn new(ratings: Vec<Rating>) -> Result<Self> {
        if ratings.len() < 2 {
            return Err(Error::Validation(format!(
                "a rating sequence needs at least 2 entries, got {}",
                ratings.len()
            )));
        }
        Ok(Self(ratings))
    }

    pub fn from_values(values: &[i64]) -> Result<Self> {
        let ratings = values.iter().map(|&v| Rating::try_from(v)).collect::<Result<Vec<_>>>()?;
        Self::new(ratings)
    }

    pub fn from_radii(radii_km: &[f64]) -> Result<Self> {
        let ratings = radii_km.iter().map(|&d| classify_rating(d)).collect::<Result<Vec<_>>>()?;
        Self::new(ratings)
    }

    pub fn as_slice(&self) -> &[Rating] {
        &self.0
    }
}

/// One-step transition matrix with exact rational entries.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    probs: [[Rational; 3]; 3],
    counts: [[u64; 3]; 3],
    unobserved: Vec<Rating>,
}

fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

impl TransitionMatrix {
    /// Builds a matrix from rational rows; each row must be a probability
    /// vector.
    pub fn from_rows(rows: [[Rational; 3]; 3]) -> Result<Self> {
        for (i, row) in rows.iter().enumerate() {
            if row.iter().any(|p| p.is_negative() || *p > Rational::one()) {
                return Err(Error::Validation(format!("row {} has entries outside [0, 1]", i + 1)));
            }
            let sum: Rational = row.iter().sum();
            if !sum.is_one() {
                return Err(Error::Validation(format!("row {} sums to {sum}, not 1", i + 1)));
            }
        }
        Ok(Self { probs: rows, counts: [[0; 3]; 3], unobserved: Vec::new() })
    }

    pub fn entry(&self, from: Rating, to: Rating) -> &Rational {
        &self.probs[from.index()][to.index()]
    }

    pub fn rows(&self) -> &[[Rational; 3]; 3] {
        &self.probs
    }

    pub fn counts(&self) -> &[[u64; 3]; 3] {
        &self.counts
    }

    /// Rows that had no outgoing observation and were set to uniform.
    pub fn unobserved_rows(&self) -> &[Rating] {
        &self.unobserved
    }

    pub fn to_f64(&self) -> [[f64; 3]; 3] {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in self.probs.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                out[i][j] = p.to_f64().unwrap_or(f64::NAN);
            }
        }
        out
    }

    /// True when some power `P^k`, `k <= 8`, is strictly positive.
    pub fn is_regular(&self) -> bool {
        let pattern: [[bool; 3]; 3] =
            std::array::from_fn(|i| std::array::from_fn(|j| !self.probs[i][j].is_zero()));
        let mut power = pattern;
        for _ in 0..8 {
            if power.iter().flatten().all(|&b| b) {
                return true;
            }
            power = std::array::from_fn(|i| {
                std::array::from_fn(|j| (0..3).any(|k| power[i][k] && pattern[k][j]))
            });
        }
        false
    }
}

/// Fits `p_ij = count(i → j) / count(i → ·)`. Rows never left are set to the
/// uniform distribution and reported by [`TransitionMatrix::unobserved_rows`].
pub fn fit_transition_matrix(seq: &RatingSequence) -> TransitionMatrix {
    let mut counts = [[0u64; 3]; 3];
    for w in seq.as_slice().windows(2) {
        counts[w[0].index()][w[1].index()] += 1;
    }
    let mut unobserved = Vec::new();
    let probs = std::array::from_fn(|i| {
        let total: u64 = counts[i].iter().sum();
        if total == 0 {
            unobserved.push(Rating::ALL[i]);
            log::warn!("rating {} is never left; using a uniform row", Rating::ALL[i]);
            std::array::from_fn(|_| ratio(1, 3))
        } else {
            std::array::from_fn(|j| ratio(counts[i][j] as i64, total as i64))
        }
    });
    TransitionMatrix { probs, counts, unobserved }
}

/// Limit distribution of a regular chain.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryDist {
    /// Exact solution of `πP = π`, `Σπ = 1`.
    pub exact: [Rational; 3],
    /// Floating-point linear solve, independent of `exact`.
    pub probs: [f64; 3],
    /// First row of `P^1000`.
    pub power_row: [f64; 3],
}

impl StationaryDist {
    pub fn probability(&self, r: Rating) -> f64 {
        self.probs[r.index()]
    }
}

#[allow(clippy::needless_range_loop)]
fn solve_exact(p: &[[Rational; 3]; 3]) -> Option<[Rational; 3]> {
    // Rows 0, 1: columns of (P - I); row 2: the normalization.
    let mut a: Vec<Vec<Rational>> = (0..3)
        .map(|row| {
            let mut r: Vec<Rational> = (0..3)
                .map(|i| {
                    if row == 2 {
                        Rational::one()
                    } else if i == row {
                        &p[i][row] - Rational::one()
                    } else {
                        p[i][row].clone()
                    }
                })
                .collect();
            r.push(if row == 2 { Rational::one() } else { Rational::zero() });
            r
        })
        .collect();

    for col in 0..3 {
        let pivot = (col..3).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let lead = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v = &*v / &lead;
        }
        for r in 0..3 {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in col..4 {
                    let delta = &factor * &a[col][c];
                    a[r][c] = &a[r][c] - delta;
                }
            }
        }
    }
    Some(std::array::from_fn(|i| a[i][3].clone()))
}

/// Stationary vector of a row-stochastic matrix by Gaussian elimination with
/// partial pivoting.
#[allow(clippy::needless_range_loop)]
pub fn stationary_f64(p: &[[f64; 3]; 3]) -> Option<[f64; 3]> {
    let mut a = [[0.0f64; 4]; 3];
    for row in 0..2 {
        for i in 0..3 {
            a[row][i] = p[i][row] - if i == row { 1.0 } else { 0.0 };
        }
    }
    a[2] = [1.0, 1.0, 1.0, 1.0];
    for col in 0..3 {
        let pivot = (col..3).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        for r in 0..3 {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..4 {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    Some(std::array::from_fn(|i| a[i][3] / a[i][i]))
}

pub(crate) fn mat_mul(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| a[i][k] * b[k][j]).sum()))
}

pub(crate) fn mat_pow(p: &[[f64; 3]; 3], mut k: u64) -> [[f64; 3]; 3] {
    let mut result = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let mut base = *p;
    while k > 0 {
        if k & 1 == 1 {
            result = mat_mul(&result, &base);
        }
        base = mat_mul(&base, &base);
        k >>= 1;
    }
    result
}

/// Unique limit distribution of a regular chain.
pub fn stationary_distribution(p: &TransitionMatrix) -> Result<StationaryDist> {
    if !p.is_regular() {
        return Err(Error::NoUniqueLimit(
            "no power of P up to 8 is strictly positive (reducible or periodic chain)".into(),
        ));
    }
    let exact = solve_exact(p.rows())
        .ok_or_else(|| Error::NoUniqueLimit("singular stationary system".into()))?;
    let pf = p.to_f64();
    let probs = stationary_f64(&pf)
        .ok_or_else(|| Error::NoUniqueLimit("singular stationary system".into()))?;
    let power_row = mat_pow(&pf, 1000)[0];
    Ok(StationaryDist { exact, probs, power_row })
}

/// Distribution over ratings `k` steps after `start`.
pub fn k_step_distribution(p: &TransitionMatrix, start: Rating, k: u64) -> [f64; 3] {
    mat_pow(&p.to_f64(), k)[start.index()]
}

/// Yearly ratings of the Victorian fire record.
pub const VICTORIA_RATINGS: [i64; 30] = [
    3, 1, 3, 2, 2, 3, 1, 3, 1, 3, 3, 1, 3, 2, 2, 2, 1, 2, 1, 3, 2, 3, 1, 1, 2, 2, 1, 1, 3, 3,
];

#[cfg(test)]
mod tests {
    use super::*;

    const VICTORIA: [i64; 30] = VICTORIA_RATINGS;

    #[test]
    fn classification_boundaries() {
        assert_eq!(classify_rating(5.0).unwrap(), Rating::One);
        assert_eq!(classify_rating(10.0).unwrap(), Rating::One);
        assert_eq!(classify_rating(10.0001).unwrap(), Rating::Two);
        assert_eq!(classify_rating(25.0).unwrap(), Rating::Two);
        assert_eq!(classify_rating(40.0).unwrap(), Rating::Three);
        assert_eq!(classify_rating(0.0).unwrap(), Rating::One);
        assert!(classify_rating(-1.0).is_err());
        assert!(classify_rating(f64::NAN).is_err());
    }

    #[test]
    fn victoria_matrix() {
        let p = fit_transition_matrix(&RatingSequence::from_values(&VICTORIA).unwrap());
        let expected = [[(1, 5), (1, 5), (3, 5)], [(1, 3), (4, 9), (2, 9)], [(1, 2), (3, 10), (1, 5)]];
        for (row, want) in p.rows().iter().zip(&expected) {
            for (got, &(num, den)) in row.iter().zip(want) {
                assert_eq!(*got, ratio(num, den));
            }
        }
        assert!(p.unobserved_rows().is_empty());
    }

    #[test]
    fn single_state_sequence() {
        let p = fit_transition_matrix(&RatingSequence::from_values(&[1, 1, 1]).unwrap());
        assert_eq!(p.rows()[0], [ratio(1, 1), ratio(0, 1), ratio(0, 1)]);
        assert_eq!(p.rows()[1], [ratio(1, 3), ratio(1, 3), ratio(1, 3)]);
        assert_eq!(p.unobserved_rows(), &[Rating::Two, Rating::Three]);
    }

    #[test]
    fn invalid_sequences() {
        assert!(RatingSequence::from_values(&[1, 4, 2]).is_err());
        assert!(RatingSequence::from_values(&[0, 1]).is_err());
        assert!(RatingSequence::from_values(&[2]).is_err());
    }

    #[test]
    fn victoria_limit() {
        let p = fit_transition_matrix(&RatingSequence::from_values(&VICTORIA).unwrap());
        let pi = stationary_distribution(&p).unwrap();
        assert_eq!(pi.exact, [ratio(10, 29), ratio(9, 29), ratio(10, 29)]);
        for i in 0..3 {
            assert!((pi.probs[i] - pi.exact[i].to_f64().unwrap()).abs() < 1e-12);
            assert!((pi.power_row[i] - pi.probs[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn identical_rows_are_their_own_limit() {
        let row = [ratio(1, 6), ratio(1, 2), ratio(1, 3)];
        let p = TransitionMatrix::from_rows([row.clone(), row.clone(), row.clone()]).unwrap();
        assert_eq!(stationary_distribution(&p).unwrap().exact, row);
    }

    #[test]
    fn periodic_and_reducible_chains_have_no_limit() {
        let z = || ratio(0, 1);
        let o = || ratio(1, 1);
        let cycle = TransitionMatrix::from_rows([[z(), o(), z()], [z(), z(), o()], [o(), z(), z()]])
            .unwrap();
        assert!(matches!(stationary_distribution(&cycle), Err(Error::NoUniqueLimit(_))));
        let identity = TransitionMatrix::from_rows([[o(), z(), z()], [z(), o(), z()], [z(), z(), o()]])
            .unwrap();
        assert!(matches!(stationary_distribution(&identity), Err(Error::NoUniqueLimit(_))));
    }

    #[test]
    fn from_rows_validates() {
        let bad = [ratio(1, 2), ratio(1, 3), ratio(1, 3)];
        let ok = [ratio(1, 3), ratio(1, 3), ratio(1, 3)];
        assert!(TransitionMatrix::from_rows([bad, ok.clone(), ok]).is_err());
    }

    #[test]
    fn k_step() {
        let p = fit_transition_matrix(&RatingSequence::from_values(&VICTORIA).unwrap());
        assert_eq!(k_step_distribution(&p, Rating::Two, 0), [0.0, 1.0, 0.0]);
        let one = k_step_distribution(&p, Rating::Three, 1);
        assert_eq!(one, [0.5, 0.3, 0.2]);
        for start in Rating::ALL {
            let far = k_step_distribution(&p, start, 200);
            for (got, want) in far.iter().zip([10.0 / 29.0, 9.0 / 29.0, 10.0 / 29.0]) {
                assert!((got - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn serde_rating_is_numeric() {
        assert_eq!(serde_json::to_string(&Rating::Three).unwrap(), "3");
        assert_eq!(serde_json::from_str::<Rating>("2").unwrap(), Rating::Two);
        assert!(serde_json::from_str::<Rating>("4").is_err());
    }
}
