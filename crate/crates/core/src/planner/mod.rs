//! End-to-end fleet planning: range, counts, positions, deployment and cost.

mod config;
mod datasets;
pub mod format;

pub use config::{
    CameraPolicy, Figure8Sweep, Figure9Sweep, PhysicalAttenuation, PlannerConfig, RangePolicy,
    SampleCounts, CONFIG_VERSION,
};
pub use datasets::{
    cost_table, figure7, figure7_counts, figure8, figure8_trend, figure9, ratio_grid,
    simulate_growth, CostTableRow, Figure7, Figure7Breakpoint, Figure7Row, Figure8Row,
    Figure8Trend, Figure9Row, GrowthRow,
};

use crate::cost::{self, CostEstimate};
use crate::error::{ensure, Error, Result};
use crate::markov::{classify_rating, Rating};
use crate::relay::{self, RrPlan};
use crate::ssa::{self, CoverageReport, SsaCount, SsaLayout};
use crate::terrain::{horizontal_range, Position3, RangeQuery, RangeResult, Terrain};
use serde::Serialize;

/// Everything deployed for one fire radius.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FleetPlan {
    /// Fire radius `D` (km).
    pub radius_km: f64,
    /// Camera range `d` (km).
    pub camera_km: f64,
    /// Repeater range `r` (km).
    pub range_km: f64,
    pub rating: Rating,
    pub ssa: SsaCount,
    pub n_cover: u64,
    pub m_cover: u64,
    pub standby_factor: u32,
    pub n_total: u64,
    pub m_total: u64,
    /// Positions of the covering drones only; standbys wait at the authority.
    pub layout: SsaLayout,
    pub relay: RrPlan,
    pub cost: CostEstimate,
    /// The farthest hover point is within flight range.
    pub feasible: bool,
}

/// Sampling-oracle verdict for a plan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub ssa: CoverageReport,
    pub relay: CoverageReport,
    /// `|law-of-cosines distance - r|` (km).
    pub identity_residual_km: f64,
    pub passed: bool,
}

/// A validated configuration with its repeater range resolved.
#[derive(Debug, Clone)]
pub struct Planner {
    config: PlannerConfig,
    range_km: f64,
    diagnostics: Option<RangeResult>,
}

impl Planner {
    pub fn new(config: PlannerConfig) -> Result<Self> {
        config.validate()?;
        let (range_km, diagnostics) = match config.range {
            RangePolicy::Fixed { km } => (km, None),
            RangePolicy::Computed => {
                let radio = config.effective_radio()?;
                let z0 = config.firefighter_altitude_km;
                let [lo, hi] = config.altitude_bounds();
                let [x, y] = config.firefighter_xy_km.unwrap_or(match config.terrain {
                    // On the cone flank at altitude z0.
                    Terrain::Cone(c) => [c.base_radius_km * (1.0 - z0 / c.height_km), 0.0],
                    Terrain::Flat => [0.0, 0.0],
                });
                let firefighter = Position3::new(x, y, z0);
                let q = RangeQuery {
                    terrain: &config.terrain,
                    radio: &radio,
                    limit: &config.thermal,
                    firefighter,
                    z_bounds: (lo, hi),
                    samples: config.samples.range,
                    seed: config.seed,
                };
                let res = horizontal_range(&q)?;
                log::info!(
                    "repeater range {:.6} km from {} of {} samples",
                    res.range_km,
                    res.feasible_samples,
                    res.samples
                );
                (res.range_km, Some(res))
            }
        };
        Ok(Self { config, range_km, diagnostics })
    }

    pub fn config(&self) -> &PlannerConfig {
        &self.config
    }

    pub fn range_km(&self) -> f64 {
        self.range_km
    }

    /// Monte Carlo diagnostics when the range was computed.
    pub fn range_diagnostics(&self) -> Option<&RangeResult> {
        self.diagnostics.as_ref()
    }

    pub fn camera_km(&self) -> f64 {
        match self.config.camera {
            CameraPolicy::EqualToRange => self.range_km,
            CameraPolicy::Fixed { km } => km,
        }
    }

    pub fn plan(&self, radius_km: f64) -> Result<FleetPlan> {
        ensure(radius_km > 0.0 && radius_km.is_finite(), || {
            format!("fire radius must be positive, got {radius_km}")
        })?;
        let relay = self.relay_plan(radius_km)?;
        self.assemble(radius_km, relay)
    }

    fn relay_plan(&self, radius_km: f64) -> Result<RrPlan> {
        if self.range_km <= 0.0 {
            return Err(Error::OutOfDomain(
                "no feasible repeater altitude, the safe horizontal range is zero".into(),
            ));
        }
        relay::deployment_metrics(radius_km, self.range_km, &self.config.deployment)
    }

    fn assemble(&self, radius_km: f64, relay: RrPlan) -> Result<FleetPlan> {
        let camera_km = self.camera_km();
        if camera_km <= 0.0 {
            return Err(Error::OutOfDomain("camera range is zero".into()));
        }
        let count = ssa::ssa_count(radius_km, camera_km)?;
        let layout = ssa::ssa_layout(radius_km, camera_km, self.config.layout_mode)?;
        let factor = u64::from(self.config.standby_factor);
        let n_cover = count.n;
        let m_cover = u64::from(relay.m);
        let (n_total, m_total) = (factor * n_cover, factor * m_cover);
        let cost = cost::estimate(n_total, m_total, &self.config.cost)?;
        Ok(FleetPlan {
            radius_km,
            camera_km,
            range_km: self.range_km,
            rating: classify_rating(radius_km)?,
            ssa: count,
            n_cover,
            m_cover,
            standby_factor: self.config.standby_factor,
            n_total,
            m_total,
            layout,
            feasible: relay.feasible,
            relay,
            cost,
        })
    }

    /// Plan for a grown fire that keeps the previous hover angles while the
    /// relay count is unchanged.
    pub fn replan(&self, prev: &FleetPlan, radius_km: f64) -> Result<FleetPlan> {
        let relay = relay::replan_on_growth(&prev.relay, radius_km, self.range_km, &self.config.deployment)?;
        self.assemble(radius_km, relay)
    }

    /// Re-checks a plan's layout and ring with the sampling oracles.
    pub fn verify(&self, plan: &FleetPlan, samples: usize) -> OracleReport {
        let seed = self.config.seed;
        let ssa = ssa::verify_disk_coverage(&plan.layout, plan.radius_km, samples, seed);
        let rr = &plan.relay;
        let relay = relay::verify_perimeter_coverage(rr.m, rr.ring_radius_km, rr.radius_km, rr.range_km, samples, seed);
        let identity_residual_km =
            (relay::coverage_identity(rr.radius_km, rr.ring_radius_km, rr.m) - rr.range_km).abs();
        let passed = ssa.covered && relay.covered && identity_residual_km <= 1e-9 * rr.range_km.max(1.0);
        OracleReport { ssa, relay, identity_residual_km, passed }
    }
}

/// One-shot [`Planner::plan`].
pub fn plan(config: &PlannerConfig, radius_km: f64) -> Result<FleetPlan> {
    Planner::new(config.clone())?.plan(radius_km)
}
