use crate::cost::CostParams;
use crate::error::{ensure, Error, Result};
use crate::relay::DeploymentParams;
use crate::ssa::LayoutMode;
use crate::terrain::{attenuation_coefficient, attenuation_multiplier, RadioParams, Terrain, ThermalLimit};
use serde::{Deserialize, Serialize};

pub const CONFIG_VERSION: u32 = 1;

/// Where the repeater range `r` comes from.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RangePolicy {
    /// Monte Carlo search over drone altitudes.
    #[default]
    Computed,
    Fixed { km: f64 },
}

/// Camera range `d`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CameraPolicy {
    #[default]
    EqualToRange,
    Fixed { km: f64 },
}

/// Material constants that replace `radio.beta_factor` with
/// `exp(-beta * path_m)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalAttenuation {
    /// rad/s
    pub angular_frequency: f64,
    /// H/m
    pub permeability: f64,
    /// F/m
    pub permittivity: f64,
    /// S/m
    pub conductivity: f64,
    /// Path length through rock (m).
    pub path_m: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SampleCounts {
    /// Altitude samples for the range search.
    pub range: usize,
    /// Samples per coverage oracle run.
    pub coverage: usize,
}

impl Default for SampleCounts {
    fn default() -> Self {
        Self { range: 100_000, coverage: 100_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Figure8Sweep {
    /// Repeater ranges to sweep (km); one curve each.
    pub ranges_km: Vec<f64>,
    pub max_ratio: f64,
    pub step: f64,
}

impl Default for Figure8Sweep {
    fn default() -> Self {
        Self { ranges_km: vec![4.97, 3.3001], max_ratio: 20.0, step: 0.01 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Figure9Sweep {
    pub height_km: f64,
    pub base_radii_km: Vec<f64>,
    pub firefighter_altitudes_km: Vec<f64>,
    pub beta_factors: Vec<f64>,
    pub samples: usize,
}

impl Default for Figure9Sweep {
    fn default() -> Self {
        Self {
            height_km: 2.0,
            base_radii_km: (1..=20).map(f64::from).collect(),
            firefighter_altitudes_km: vec![0.0, 0.25, 0.5, 0.75, 1.0],
            beta_factors: vec![0.2, 0.4, 0.6, 0.8, 1.0],
            samples: 20_000,
        }
    }
}

/// JSON planner configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlannerConfig {
    pub config_version: u32,
    pub terrain: Terrain,
    /// Firefighter altitude `z0` (km).
    pub firefighter_altitude_km: f64,
    /// Firefighter horizontal position (km). Defaults to the cone flank at
    /// altitude `z0`, or the origin on flat ground.
    pub firefighter_xy_km: Option<[f64; 2]>,
    pub radio: RadioParams,
    pub attenuation: Option<PhysicalAttenuation>,
    pub thermal: ThermalLimit,
    /// Drone altitude search bounds (km); default `[2 z0, L0]`.
    pub altitude_bounds_km: Option<[f64; 2]>,
    pub range: RangePolicy,
    pub camera: CameraPolicy,
    pub layout_mode: LayoutMode,
    pub deployment: DeploymentParams,
    pub cost: CostParams,
    pub standby_factor: u32,
    pub seed: u64,
    pub samples: SampleCounts,
    pub figure8: Figure8Sweep,
    pub figure9: Figure9Sweep,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self {
            config_version: CONFIG_VERSION,
            terrain: Terrain::Flat,
            firefighter_altitude_km: 0.0,
            firefighter_xy_km: None,
            radio: RadioParams::default(),
            attenuation: None,
            thermal: ThermalLimit::None,
            altitude_bounds_km: None,
            range: RangePolicy::Computed,
            camera: CameraPolicy::EqualToRange,
            layout_mode: LayoutMode::PaperApprox,
            deployment: DeploymentParams::default(),
            cost: CostParams::default(),
            standby_factor: 2,
            seed: 0,
            samples: SampleCounts::default(),
            figure8: Figure8Sweep::default(),
            figure9: Figure9Sweep::default(),
        }
    }
}

impl PlannerConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.config_version != CONFIG_VERSION {
            return Err(Error::Validation(format!(
                "unsupported config_version {}, expected {CONFIG_VERSION}",
                self.config_version
            )));
        }
        self.terrain.validate()?;
        self.effective_radio()?;
        self.deployment.validate()?;
        self.cost.validate()?;
        let z0 = self.firefighter_altitude_km;
        ensure(z0 >= 0.0 && z0.is_finite(), || format!("firefighter altitude must be non-negative, got {z0}"))?;
        if let Terrain::Cone(c) = self.terrain {
            ensure(z0 <= c.height_km, || format!("firefighter altitude {z0} km is above the peak"))?;
        }
        let [lo, hi] = self.altitude_bounds();
        ensure(lo >= 0.0 && lo <= hi, || format!("empty drone altitude range [{lo}, {hi}]"))?;
        ensure(self.standby_factor >= 1, || "standby factor must be at least 1".into())?;
        ensure(self.samples.range >= 1 && self.samples.coverage >= 1, || "sample counts must be positive".into())?;
        match self.range {
            RangePolicy::Fixed { km } => ensure(km > 0.0, || format!("fixed range must be positive, got {km}"))?,
            RangePolicy::Computed => {}
        }
        match self.camera {
            CameraPolicy::Fixed { km } => ensure(km > 0.0, || format!("camera range must be positive, got {km}"))?,
            CameraPolicy::EqualToRange => {}
        }
        let f8 = &self.figure8;
        ensure(f8.ranges_km.iter().all(|&r| r > 0.0), || "figure8 ranges must be positive".into())?;
        ensure(f8.step > 0.0 && f8.max_ratio >= f8.step, || "figure8 grid is empty".into())?;
        let f9 = &self.figure9;
        ensure(f9.height_km > 0.0, || "figure9 height must be positive".into())?;
        ensure(f9.base_radii_km.iter().all(|&r| r > 0.0), || "figure9 radii must be positive".into())?;
        ensure(
            f9.firefighter_altitudes_km.iter().all(|&z| (0.0..=f9.height_km).contains(&z)),
            || "figure9 firefighter altitudes must lie in [0, H]".into(),
        )?;
        ensure(
            f9.beta_factors.iter().all(|&b| b > 0.0 && b <= 1.0),
            || "figure9 beta factors must lie in (0, 1]".into(),
        )?;
        ensure(f9.samples >= 1, || "figure9 samples must be positive".into())
    }

    /// Drone altitude search bounds (km).
    pub fn altitude_bounds(&self) -> [f64; 2] {
        self.altitude_bounds_km
            .unwrap_or([2.0 * self.firefighter_altitude_km, self.radio.handheld_range_km])
    }

    /// Radio parameters with any physical attenuation folded into
    /// `beta_factor`.
    pub fn effective_radio(&self) -> Result<RadioParams> {
        let mut radio = self.radio.clone();
        if let Some(a) = self.attenuation {
            let beta = attenuation_coefficient(a.angular_frequency, a.permeability, a.permittivity, a.conductivity)?;
            radio.beta_factor = attenuation_multiplier(beta, a.path_m)?;
        }
        radio.validate()?;
        Ok(radio)
    }
}
