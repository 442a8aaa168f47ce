//! Radio-relay (RR) drones: count, hover ring and deployment time.
//!
//! `m` repeaters of safe horizontal range `r` hover at the equipartition
//! points of a ring of radius `C_m` concentric with the fire and together
//! cover the fire perimeter of radius `D`. The hover point at polar angle
//! `π/m` is the farthest from the authority, which stands `b` km beyond the
//! fire edge at polar angle `π`.

use crate::error::{ensure, Error, Result};
use crate::sampling;
use crate::ssa::CoverageReport;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Tolerance when deciding whether `π / (2 asin(r / 2D))` is an integer.
pub const INTEGER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DeploymentParams {
    /// Authority standoff beyond the fire edge `b` (km).
    pub standoff_km: f64,
    /// Flight range `l` (km).
    pub flight_range_km: f64,
    /// Maximum speed `v` (km/h).
    pub speed_kmh: f64,
}

impl Default for DeploymentParams {
    fn default() -> Self {
        // 20 m/s.
        Self { standoff_km: 5.0, flight_range_km: 30.0, speed_kmh: 72.0 }
    }
}

impl DeploymentParams {
    pub fn validate(&self) -> Result<()> {
        ensure(self.standoff_km >= 0.0, || "standoff must be non-negative".into())?;
        ensure(self.flight_range_km > 0.0, || "flight range must be positive".into())?;
        ensure(self.speed_kmh > 0.0, || "speed must be positive".into())
    }
}

fn check(radius_km: f64, range_km: f64) -> Result<()> {
    ensure(radius_km >= 0.0 && radius_km.is_finite(), || {
        format!("fire radius must be non-negative, got {radius_km}")
    })?;
    ensure(range_km > 0.0 && range_km.is_finite(), || {
        format!("repeater range must be positive, got {range_km}")
    })
}

/// Fewest repeaters covering the perimeter of a fire of radius `radius_km`.
pub fn rr_count(radius_km: f64, range_km: f64) -> Result<u32> {
    check(radius_km, range_km)?;
    if radius_km < range_km / 2.0 {
        return Ok(1);
    }
    let q = PI / (2.0 * (range_km / (2.0 * radius_km)).asin());
    let nearest = q.round();
    Ok(if (q - nearest).abs() < INTEGER_TOL { nearest as u32 } else { q.floor() as u32 + 1 })
}

/// `D/r` interval `(lower, upper]` served by `m` repeaters.
pub fn band_limits(m: u32) -> (f64, f64) {
    let upper = |k: u32| 1.0 / (2.0 * (PI / (2.0 * k as f64)).sin());
    match m {
        0 => (0.0, 0.0),
        1 => (0.0, 0.5),
        _ => (upper(m - 1), upper(m)),
    }
}

/// Hover ring radius `C_m = D cos(π/m) + sqrt(r² - D² sin²(π/m))`.
///
/// This reduces to `r - D`, `sqrt(r² - D²)` and `D/2 + sqrt(4r² - 3D²)/2`
/// for one, two and three repeaters.
pub fn ring_radius(radius_km: f64, range_km: f64, m: u32) -> Result<f64> {
    let expected = rr_count(radius_km, range_km)?;
    if m != expected {
        return Err(Error::BandMismatch { given: m, expected, ratio: radius_km / range_km });
    }
    Ok(ring_radius_unchecked(radius_km, range_km, m))
}

fn ring_radius_unchecked(d: f64, r: f64, m: u32) -> f64 {
    let half = PI / m as f64;
    let (s, c) = half.sin_cos();
    d * c + (r * r - d * d * s * s).max(0.0).sqrt()
}

/// Polar angles of the `m` hover points, starting at `π/m`.
pub fn equipartition_angles(m: u32) -> Vec<f64> {
    (0..m).map(|j| (2 * j + 1) as f64 * PI / m as f64).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RrPlan {
    /// Fire radius `D` (km).
    pub radius_km: f64,
    /// Repeater range `r` (km).
    pub range_km: f64,
    pub m: u32,
    /// Hover ring radius `C_m` (km).
    pub ring_radius_km: f64,
    /// Polar angles of the hover points (rad).
    pub angles: Vec<f64>,
    /// Farthest hover point `W_m` as (angle rad, radius km).
    pub farthest: (f64, f64),
    /// Distance `S_m` from the authority to `W_m` (km).
    pub distance_km: f64,
    /// Deployment time `Q_m = S_m / v` (h).
    pub time_h: f64,
    /// `S_m <= l`.
    pub feasible: bool,
}

impl RrPlan {
    /// Hover point coordinates (km).
    pub fn hover_points(&self) -> Vec<[f64; 2]> {
        self.angles
            .iter()
            .map(|a| [self.ring_radius_km * a.cos(), self.ring_radius_km * a.sin()])
            .collect()
    }
}

/// Count, ring, farthest point, distance and time for one fire radius.
pub fn deployment_metrics(radius_km: f64, range_km: f64, params: &DeploymentParams) -> Result<RrPlan> {
    params.validate()?;
    let m = rr_count(radius_km, range_km)?;
    let ring = ring_radius(radius_km, range_km, m)?;
    Ok(assemble(radius_km, range_km, m, ring, equipartition_angles(m), params))
}

fn assemble(d: f64, r: f64, m: u32, ring: f64, angles: Vec<f64>, params: &DeploymentParams) -> RrPlan {
    let half = PI / m as f64;
    let far = d + params.standoff_km;
    let distance_km = (ring * ring + far * far + 2.0 * ring * far * half.cos()).max(0.0).sqrt();
    let time_h = distance_km / params.speed_kmh;
    RrPlan {
        radius_km: d,
        range_km: r,
        m,
        ring_radius_km: ring,
        angles,
        farthest: (half, ring),
        distance_km,
        time_h,
        feasible: distance_km <= params.flight_range_km,
    }
}

/// Law-of-cosines distance from a hover point to the perimeter point `π/m`
/// away; equals `r` for every in-band `(D, r, m)`.
pub fn coverage_identity(radius_km: f64, ring_km: f64, m: u32) -> f64 {
    let c = (PI / m as f64).cos();
    (radius_km * radius_km + ring_km * ring_km - 2.0 * radius_km * ring_km * c).max(0.0).sqrt()
}

/// Samples perimeter angles and checks each point against the nearest of the
/// `m` hover points at ring radius `ring_km`.
pub fn verify_perimeter_coverage(
    m: u32,
    ring_km: f64,
    radius_km: f64,
    range_km: f64,
    samples: usize,
    seed: u64,
) -> CoverageReport {
    let samples = samples.max(1);
    let m_i = m.max(1) as i64;
    let step = 2.0 * PI / m_i as f64;
    let limit = range_km * (1.0 + 1e-9);
    let dist = |phi: f64, j: i64| {
        let a = (2 * j + 1) as f64 * PI / m_i as f64;
        let (px, py) = (radius_km * phi.cos(), radius_km * phi.sin());
        ((px - ring_km * a.cos()).powi(2) + (py - ring_km * a.sin()).powi(2)).sqrt()
    };
    let parts = sampling::map_chunks(samples, seed, |rng, idx| {
        let mut missed = 0;
        let mut worst: Option<([f64; 2], f64)> = None;
        for _ in idx {
            let phi = 2.0 * PI * rng.random::<f64>();
            let j = ((phi - step / 2.0) / step).round() as i64;
            let best = (j - 1..=j + 1).map(|k| dist(phi, k.rem_euclid(m_i))).fold(f64::INFINITY, f64::min);
            if best > limit {
                missed += 1;
                if worst.map_or(true, |w| best > w.1) {
                    worst = Some(([radius_km * phi.cos(), radius_km * phi.sin()], best));
                }
            }
        }
        (missed, worst)
    });
    let mut missed = 0;
    let mut worst: Option<([f64; 2], f64)> = None;
    for (k, w) in parts {
        missed += k;
        if let Some(w) = w {
            if worst.map_or(true, |cur| w.1 > cur.1) {
                worst = Some(w);
            }
        }
    }
    CoverageReport::from_misses(samples, missed, worst)
}

/// Updates a plan after the fire has grown to `new_radius_km`. Hover angles
/// are kept while the count is unchanged.
pub fn replan_on_growth(prev: &RrPlan, new_radius_km: f64, range_km: f64, params: &DeploymentParams) -> Result<RrPlan> {
    if new_radius_km < prev.radius_km {
        return Err(Error::Validation(format!(
            "fire radius shrank from {} to {new_radius_km} km",
            prev.radius_km
        )));
    }
    params.validate()?;
    let m = rr_count(new_radius_km, range_km)?;
    let ring = ring_radius(new_radius_km, range_km, m)?;
    let angles = if m == prev.m { prev.angles.clone() } else { equipartition_angles(m) };
    Ok(assemble(new_radius_km, range_km, m, ring, angles, params))
}
