//! Free-space solution of the heat conduction equation
//! `T_t - α ΔT = F / (Cρ)`, `α = k / (Cρ)`.

use super::Position3;
use crate::error::{ensure, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Trapezoid intervals used for the source time integral.
pub const DEFAULT_QUADRATURE_STEPS: usize = 2000;

/// Temperature field at `t = 0`, on top of the uniform ambient level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialField {
    Uniform,
    /// Point deposit; `energy` is the volume integral of the temperature
    /// excess (temperature × volume).
    PointImpulse { energy: f64, at: Position3 },
}

/// Heat source `F`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HeatSource {
    None,
    /// Continuous point source of constant power `intensity`, switched on at
    /// `t = 0`.
    Point { intensity: f64, at: Position3 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatMedium {
    /// Thermal conductivity `k`.
    pub conductivity: f64,
    /// Specific heat capacity `C`.
    pub heat_capacity: f64,
    /// Density `ρ`.
    pub density: f64,
    /// Uniform background temperature.
    pub ambient: f64,
    /// Highest temperature a drone tolerates (`T0`).
    pub threshold: f64,
    pub initial: InitialField,
    pub source: HeatSource,
    #[serde(default = "default_steps")]
    pub quadrature_steps: usize,
}

fn default_steps() -> usize {
    DEFAULT_QUADRATURE_STEPS
}

impl HeatMedium {
    pub fn diffusivity(&self) -> f64 {
        self.conductivity / (self.heat_capacity * self.density)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(
            self.conductivity > 0.0 && self.heat_capacity > 0.0 && self.density > 0.0,
            || "conductivity, heat capacity and density must be positive".to_string(),
        )?;
        ensure(self.threshold > self.ambient, || {
            format!(
                "threshold temperature {} must exceed ambient {}",
                self.threshold, self.ambient
            )
        })?;
        ensure(self.quadrature_steps >= 1, || "quadrature_steps must be at least 1".to_string())
    }
}

/// Free-space heat kernel `(4παt)^(-3/2) exp(-dist²/(4αt))`.
pub(crate) fn kernel(dist_sq: f64, alpha: f64, t: f64) -> f64 {
    let four_at = 4.0 * alpha * t;
    (PI * four_at).powf(-1.5) * (-dist_sq / four_at).exp()
}

/// `∫₀ᵗ kernel(dist², α, s) ds` by the trapezoid rule on `s = u²`, which
/// removes the steep onset near `s = 0`.
fn source_integral(dist_sq: f64, alpha: f64, t: f64, steps: usize) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    if dist_sq == 0.0 {
        return f64::INFINITY;
    }
    let coef = 2.0 * (4.0 * PI * alpha).powf(-1.5);
    let integrand = |u: f64| {
        if u == 0.0 {
            0.0
        } else {
            coef / (u * u) * (-dist_sq / (4.0 * alpha * u * u)).exp()
        }
    };
    let upper = t.sqrt();
    let h = upper / steps as f64;
    let inner: f64 = (1..steps).map(|i| integrand(i as f64 * h)).sum();
    h * (0.5 * integrand(0.0) + inner + 0.5 * integrand(upper))
}

/// Temperature at `p` and time `t` (same time unit as the diffusivity).
pub fn heat_temperature(p: Position3, t: f64, medium: &HeatMedium) -> Result<f64> {
    ensure(t >= 0.0 && t.is_finite(), || format!("time must be non-negative, got {t}"))?;
    medium.validate()?;
    let alpha = medium.diffusivity();

    let mut temp = medium.ambient;
    if let InitialField::PointImpulse { energy, at } = medium.initial {
        let d2 = p.distance_sq(&at);
        temp += if t == 0.0 {
            if d2 == 0.0 {
                f64::INFINITY
            } else {
                0.0
            }
        } else {
            energy * kernel(d2, alpha, t)
        };
    }
    if let HeatSource::Point { intensity, at } = medium.source {
        let rate = intensity / (medium.heat_capacity * medium.density);
        temp += rate * source_integral(p.distance_sq(&at), alpha, t, medium.quadrature_steps);
    }
    Ok(temp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    pub(crate) fn unit_medium() -> HeatMedium {
        HeatMedium {
            conductivity: 1.0,
            heat_capacity: 1.0,
            density: 1.0,
            ambient: 0.0,
            threshold: 1.0,
            initial: InitialField::Uniform,
            source: HeatSource::None,
            quadrature_steps: DEFAULT_QUADRATURE_STEPS,
        }
    }

    #[test]
    fn uniform_field_is_steady() {
        let m = HeatMedium { ambient: 300.0, threshold: 400.0, ..unit_medium() };
        for &(x, t) in &[(0.0, 0.0), (3.0, 1.0), (-7.5, 100.0)] {
            let p = Position3::new(x, 1.0, 2.0);
            assert_eq!(heat_temperature(p, t, &m).unwrap(), 300.0);
        }
    }

    #[test]
    fn impulse_peak() {
        let m = HeatMedium {
            initial: InitialField::PointImpulse { energy: 1.0, at: Position3::default() },
            ..unit_medium()
        };
        let v = heat_temperature(Position3::default(), 1.0, &m).unwrap();
        assert_relative_eq!(v, (4.0 * PI).powf(-1.5), max_relative = 1e-15);
    }

    #[test]
    fn kernel_normalizes_to_one() {
        // Radial quadrature of 4πρ² G(ρ) on [0, 12] (Simpson, 24000 intervals).
        let (alpha, t) = (0.7, 1.3);
        let n = 24_000;
        let h = 12.0 / n as f64;
        let f = |r: f64| 4.0 * PI * r * r * kernel(r * r, alpha, t);
        let mut s = f(0.0) + f(12.0);
        for i in 1..n {
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
        }
        assert!((s * h / 3.0 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn negative_time_is_rejected() {
        assert!(heat_temperature(Position3::default(), -1.0, &unit_medium()).is_err());
    }

    #[test]
    fn threshold_must_exceed_ambient() {
        let m = HeatMedium { ambient: 5.0, threshold: 5.0, ..unit_medium() };
        assert!(heat_temperature(Position3::default(), 1.0, &m).is_err());
    }

    #[test]
    fn source_off_at_time_zero() {
        let m = HeatMedium {
            source: HeatSource::Point { intensity: 10.0, at: Position3::default() },
            ..unit_medium()
        };
        assert_eq!(heat_temperature(Position3::new(1.0, 0.0, 0.0), 0.0, &m).unwrap(), 0.0);
    }
}
