//! Monte Carlo search for the repeater's safe horizontal range `r`.
//!
//! Drone altitudes `z1` are drawn uniformly from the configured bounds. A
//! sample is feasible when it lies in the domain of [`effective_range`], when
//! the thermal limit allows it, and when the effective range exceeds the
//! altitude. The range is `max sqrt(L² - z1²)` over feasible samples, with
//! `L` capped at the unobstructed handheld range.

use super::{effective_range, heat_temperature, HeatMedium, Position3, RadioParams, Terrain};
use crate::error::{ensure, Error, Result};
use crate::sampling;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub const DEFAULT_RANGE_SAMPLES: usize = 100_000;

/// What keeps a drone away from the fire.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ThermalLimit {
    #[default]
    None,
    /// The temperature ceiling expressed as a minimum flight altitude (km).
    AltitudeFloor { min_altitude_km: f64 },
    /// Temperature evaluated from a heat medium at `time`, at the drone
    /// position straight above the firefighter.
    Heat { medium: HeatMedium, time: f64 },
}

#[derive(Debug, Clone)]
pub struct RangeQuery<'a> {
    pub terrain: &'a Terrain,
    pub radio: &'a RadioParams,
    pub limit: &'a ThermalLimit,
    pub firefighter: Position3,
    /// Drone altitude bounds (km).
    pub z_bounds: (f64, f64),
    pub samples: usize,
    pub seed: u64,
}

/// Result and diagnostics of [`horizontal_range`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RangeResult {
    /// Safe horizontal range `r` (km); zero when nothing is feasible.
    pub range_km: f64,
    pub feasible: bool,
    /// Altitude of the best sample (km).
    pub best_altitude_km: Option<f64>,
    /// Effective range `L` of the best sample (km).
    pub best_effective_range_km: Option<f64>,
    pub samples: usize,
    pub feasible_samples: usize,
    /// Samples outside the domain of the range formula.
    pub out_of_domain: usize,
    /// Samples rejected by the thermal limit.
    pub too_hot: usize,
    /// Samples whose effective range does not reach the drone altitude.
    pub short_range: usize,
    /// Largest unclamped rock fraction seen.
    pub max_raw_fraction: f64,
    /// Largest `L - z1` seen over in-domain samples (km).
    pub max_range_margin_km: f64,
}

#[derive(Clone, Copy)]
struct Best {
    r: f64,
    z: f64,
    l: f64,
}

#[derive(Default, Clone, Copy)]
struct Tally {
    best: Option<Best>,
    feasible: usize,
    out_of_domain: usize,
    too_hot: usize,
    short: usize,
    max_raw: f64,
    max_margin: f64,
}

impl Tally {
    fn new() -> Self {
        Self { max_raw: f64::NEG_INFINITY, max_margin: f64::NEG_INFINITY, ..Default::default() }
    }

    fn merge(mut self, o: Tally) -> Tally {
        self.best = match (self.best, o.best) {
            (Some(a), Some(b)) => Some(if b.r > a.r { b } else { a }),
            (a, b) => a.or(b),
        };
        self.feasible += o.feasible;
        self.out_of_domain += o.out_of_domain;
        self.too_hot += o.too_hot;
        self.short += o.short;
        self.max_raw = self.max_raw.max(o.max_raw);
        self.max_margin = self.max_margin.max(o.max_margin);
        self
    }
}

impl ThermalLimit {
    fn allows(&self, drone: Position3) -> Result<bool> {
        match self {
            ThermalLimit::None => Ok(true),
            ThermalLimit::AltitudeFloor { min_altitude_km } => Ok(drone.z >= *min_altitude_km),
            ThermalLimit::Heat { medium, time } => {
                Ok(heat_temperature(drone, *time, medium)? <= medium.threshold)
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            ThermalLimit::None => Ok(()),
            ThermalLimit::AltitudeFloor { min_altitude_km } => {
                ensure(*min_altitude_km >= 0.0, || "altitude floor must be non-negative".into())
            }
            ThermalLimit::Heat { medium, time } => {
                ensure(*time >= 0.0, || "heat evaluation time must be non-negative".into())?;
                medium.validate()
            }
        }
    }
}

/// Safe horizontal range `r` of the repeater.
///
/// Deterministic for a fixed `(seed, samples)`, and a longer run with the
/// same seed sees a superset of the shorter run's samples.
pub fn horizontal_range(q: &RangeQuery<'_>) -> Result<RangeResult> {
    ensure(q.samples >= 1, || "at least one sample is required".into())?;
    let (lo, hi) = q.z_bounds;
    ensure(lo >= 0.0 && lo <= hi && hi.is_finite(), || {
        format!("altitude bounds must satisfy 0 <= lo <= hi, got ({lo}, {hi})")
    })?;
    q.terrain.validate()?;
    q.radio.validate()?;
    q.limit.validate()?;
    q.firefighter.validate()?;

    let cap = q.radio.handheld_range_km;
    let partials = sampling::map_chunks(q.samples, q.seed, |rng, idx| -> Result<Tally> {
        let mut t = Tally::new();
        for _ in idx {
            let z1 = lo + (hi - lo) * rng.random::<f64>();
            let drone = Position3::new(q.firefighter.x, q.firefighter.y, z1);
            let eval = match effective_range(drone, q.firefighter, q.terrain, q.radio) {
                Ok(e) => e,
                Err(Error::OutOfDomain(_)) => {
                    t.out_of_domain += 1;
                    continue;
                }
                Err(e) => return Err(e),
            };
            t.max_raw = t.max_raw.max(eval.raw_fraction);
            let l = eval.range_km.min(cap);
            t.max_margin = t.max_margin.max(l - z1);
            if !q.limit.allows(drone)? {
                t.too_hot += 1;
                continue;
            }
            if l < z1 {
                t.short += 1;
                continue;
            }
            t.feasible += 1;
            let r = (l * l - z1 * z1).sqrt();
            if t.best.map_or(true, |b| r > b.r) {
                t.best = Some(Best { r, z: z1, l });
            }
        }
        Ok(t)
    });

    let mut tally = Tally::new();
    for p in partials {
        tally = tally.merge(p?);
    }

    Ok(RangeResult {
        range_km: tally.best.map_or(0.0, |b| b.r),
        feasible: tally.best.is_some(),
        best_altitude_km: tally.best.map(|b| b.z),
        best_effective_range_km: tally.best.map(|b| b.l),
        samples: q.samples,
        feasible_samples: tally.feasible,
        out_of_domain: tally.out_of_domain,
        too_hot: tally.too_hot,
        short_range: tally.short,
        max_raw_fraction: tally.max_raw,
        max_range_margin_km: tally.max_margin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terrain::ConeMountain;

    fn query<'a>(
        terrain: &'a Terrain,
        radio: &'a RadioParams,
        limit: &'a ThermalLimit,
        z0: f64,
        samples: usize,
    ) -> RangeQuery<'a> {
        RangeQuery {
            terrain,
            radio,
            limit,
            firefighter: Position3::at_altitude(z0),
            z_bounds: (0.0, 5.0),
            samples,
            seed: 11,
        }
    }

    #[test]
    fn flat_unconstrained_approaches_handheld_range() {
        let radio = RadioParams::default();
        let res = horizontal_range(&query(&Terrain::Flat, &radio, &ThermalLimit::None, 0.0, 20_000))
            .unwrap();
        assert!(res.feasible);
        assert!(res.range_km <= 5.0 && res.range_km > 4.999);
    }

    #[test]
    fn altitude_floor_gives_497() {
        let radio = RadioParams::default();
        let limit = ThermalLimit::AltitudeFloor { min_altitude_km: 0.547 };
        let res = horizontal_range(&query(&Terrain::Flat, &radio, &limit, 0.0, 100_000)).unwrap();
        assert!((res.range_km - 4.97).abs() < 5e-3, "{}", res.range_km);
        assert!(res.too_hot > 0);
    }

    #[test]
    fn deterministic_and_prefix_monotone() {
        let cone = Terrain::Cone(ConeMountain::new(2.0, 1.5).unwrap());
        let radio = RadioParams { beta_factor: 0.6, ..RadioParams::default() };
        let lim = ThermalLimit::None;
        let a = horizontal_range(&query(&cone, &radio, &lim, 0.3, 6000)).unwrap();
        let b = horizontal_range(&query(&cone, &radio, &lim, 0.3, 6000)).unwrap();
        assert_eq!(a, b);
        let c = horizontal_range(&query(&cone, &radio, &lim, 0.3, 12_000)).unwrap();
        assert!(c.range_km >= a.range_km);
    }

    #[test]
    fn infeasible_is_flagged_not_an_error() {
        let radio = RadioParams::default();
        let limit = ThermalLimit::AltitudeFloor { min_altitude_km: 6.0 };
        let res = horizontal_range(&query(&Terrain::Flat, &radio, &limit, 0.0, 1000)).unwrap();
        assert!(!res.feasible);
        assert_eq!(res.range_km, 0.0);
        assert_eq!(res.too_hot, 1000);
    }

    #[test]
    fn rejects_zero_samples_and_bad_bounds() {
        let radio = RadioParams::default();
        let mut q = query(&Terrain::Flat, &radio, &ThermalLimit::None, 0.0, 0);
        assert!(horizontal_range(&q).is_err());
        q.samples = 10;
        q.z_bounds = (3.0, 1.0);
        assert!(horizontal_range(&q).is_err());
    }
}
