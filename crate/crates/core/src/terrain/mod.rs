//! Terrain, radio and thermal models that bound where a relay drone may
//! hover, ending in the repeater's safe horizontal range `r`.

mod heat;
mod radio;
mod range;

pub use heat::{heat_temperature, HeatMedium, HeatSource, InitialField, DEFAULT_QUADRATURE_STEPS};
pub use radio::{attenuation_coefficient, attenuation_multiplier, effective_range, RangeEval};
pub use range::{horizontal_range, RangeQuery, RangeResult, ThermalLimit, DEFAULT_RANGE_SAMPLES};

use crate::error::{ensure, Result};
use serde::{Deserialize, Serialize};

/// A mountain approximated by a right circular cone with its apex above the
/// horizontal origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeMountain {
    /// Peak altitude (km).
    pub height_km: f64,
    /// Radius of the cone base (km).
    pub base_radius_km: f64,
}

impl ConeMountain {
    pub fn new(height_km: f64, base_radius_km: f64) -> Result<Self> {
        let cone = Self { height_km, base_radius_km };
        cone.validate()?;
        Ok(cone)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.height_km > 0.0 && self.height_km.is_finite(), || {
            format!("cone height must be positive, got {}", self.height_km)
        })?;
        ensure(self.base_radius_km > 0.0 && self.base_radius_km.is_finite(), || {
            format!("cone base radius must be positive, got {}", self.base_radius_km)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Terrain {
    /// Open flat ground; the handheld range is unobstructed.
    #[default]
    Flat,
    Cone(ConeMountain),
}

impl Terrain {
    pub fn validate(&self) -> Result<()> {
        match self {
            Terrain::Flat => Ok(()),
            Terrain::Cone(c) => c.validate(),
        }
    }
}

/// Handheld radio and repeater parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RadioParams {
    /// Unobstructed handheld range on flat ground (km).
    pub handheld_range_km: f64,
    /// Unobstructed repeater range on flat ground (km). Informational.
    pub repeater_flat_range_km: f64,
    /// Dimensionless range multiplier for the part of the path inside rock,
    /// in (0, 1].
    pub beta_factor: f64,
    /// Transmit power (W). Informational.
    pub watts: Option<f64>,
    /// Frequency band label, e.g. "UHF". Informational.
    pub band: Option<String>,
}

impl Default for RadioParams {
    fn default() -> Self {
        Self {
            handheld_range_km: 5.0,
            repeater_flat_range_km: 20.0,
            beta_factor: 1.0,
            watts: Some(5.0),
            band: Some("UHF".to_string()),
        }
    }
}

impl RadioParams {
    pub fn validate(&self) -> Result<()> {
        ensure(self.beta_factor > 0.0 && self.beta_factor <= 1.0, || {
            format!("beta_factor must lie in (0, 1], got {}", self.beta_factor)
        })?;
        ensure(self.handheld_range_km > 0.0 && self.handheld_range_km.is_finite(), || {
            format!("handheld range must be positive, got {}", self.handheld_range_km)
        })
    }
}

/// Point in a right-handed rectangular frame, kilometres, `z` is altitude.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Position3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// A point at altitude `z` above the horizontal origin.
    pub const fn at_altitude(z: f64) -> Self {
        Self { x: 0.0, y: 0.0, z }
    }

    pub fn distance_sq(&self, other: &Position3) -> f64 {
        let (dx, dy, dz) = (self.x - other.x, self.y - other.y, self.z - other.z);
        dx * dx + dy * dy + dz * dz
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.x.is_finite() && self.y.is_finite() && self.z.is_finite(), || {
            "position coordinates must be finite".to_string()
        })?;
        ensure(self.z >= 0.0, || format!("altitude must be non-negative, got {}", self.z))
    }
}
