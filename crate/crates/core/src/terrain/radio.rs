use super::{Position3, RadioParams, Terrain};
use crate::error::{ensure, Error, Result};
use serde::Serialize;

/// Attenuation constant of a plane wave in a lossy medium (nepers per unit
/// length).
///
/// `w` is the angular frequency (rad/s), `mu` the permeability, `eps` the
/// permittivity and `sigma` the conductivity, all in consistent SI units.
///
/// The radicand `sqrt(1 + x²) - 1` with `x = sigma / (w * eps)` is evaluated as
/// `x² / (sqrt(1 + x²) + 1)`, which keeps full precision for nearly lossless
/// media.
pub fn attenuation_coefficient(w: f64, mu: f64, eps: f64, sigma: f64) -> Result<f64> {
    ensure(w > 0.0 && w.is_finite(), || format!("angular frequency must be positive, got {w}"))?;
    ensure(mu > 0.0 && mu.is_finite(), || format!("permeability must be positive, got {mu}"))?;
    ensure(eps > 0.0 && eps.is_finite(), || format!("permittivity must be positive, got {eps}"))?;
    ensure(sigma >= 0.0 && sigma.is_finite(), || {
        format!("conductivity must be non-negative, got {sigma}")
    })?;

    let x = sigma / (w * eps);
    let x2 = x * x;
    let bracket = x2 / ((1.0 + x2).sqrt() + 1.0);
    Ok(w * (mu * eps / 2.0 * bracket).sqrt())
}

/// Range multiplier `exp(-beta * path)` for a physical attenuation constant
/// `beta` over `path` length units.
pub fn attenuation_multiplier(beta: f64, path: f64) -> Result<f64> {
    ensure(beta >= 0.0 && path >= 0.0, || {
        format!("attenuation and path length must be non-negative, got {beta}, {path}")
    })?;
    Ok((-beta * path).exp())
}

/// Effective handheld range and its parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RangeEval {
    /// Effective range `L` (km).
    pub range_km: f64,
    /// Unattenuated geometric term (km).
    pub base_km: f64,
    /// Rock path fraction before clamping.
    pub raw_fraction: f64,
    /// Rock path fraction after clamping to [0, 1].
    pub fraction: f64,
}

/// Effective range `L` of a firefighter's handheld radio towards a drone.
///
/// On flat ground this is the unobstructed range. Over a cone mountain the
/// geometric term
///
/// ```text
/// base = sqrt((sqrt(L0² - z1²) - R·z0/H)² + (z1 - z0)²)
/// ```
///
/// is scaled by `1 + (beta - 1)·f`, where the rock fraction
///
/// ```text
/// f = 2R(H - z0) / (H·sqrt(L0² - z1²) + R·sqrt(z1 - 2·z0))
/// ```
///
/// is clamped to [0, 1]. Only the altitudes `z0` (firefighter) and `z1`
/// (drone) enter the formula.
pub fn effective_range(
    drone: Position3,
    firefighter: Position3,
    terrain: &Terrain,
    radio: &RadioParams,
) -> Result<RangeEval> {
    drone.validate()?;
    firefighter.validate()?;
    radio.validate()?;

    let l0 = radio.handheld_range_km;
    let z1 = drone.z;
    let z0 = firefighter.z;
    if z1 > l0 {
        return Err(Error::OutOfDomain(format!(
            "drone altitude {z1} km exceeds the handheld range {l0} km"
        )));
    }

    let cone = match terrain {
        Terrain::Flat => {
            return Ok(RangeEval { range_km: l0, base_km: l0, raw_fraction: 0.0, fraction: 0.0 })
        }
        Terrain::Cone(cone) => cone,
    };
    let (h, big_r) = (cone.height_km, cone.base_radius_km);
    if z0 > h {
        return Err(Error::OutOfDomain(format!(
            "firefighter altitude {z0} km is above the peak ({h} km)"
        )));
    }
    if z1 < 2.0 * z0 {
        return Err(Error::OutOfDomain(format!(
            "drone altitude {z1} km is below twice the firefighter altitude ({z0} km)"
        )));
    }

    let reach = (l0 * l0 - z1 * z1).sqrt();
    let base = ((reach - big_r * z0 / h).powi(2) + (z1 - z0).powi(2)).sqrt();

    let num = 2.0 * big_r * (h - z0);
    let den = h * reach + big_r * (z1 - 2.0 * z0).sqrt();
    let raw_fraction = if num == 0.0 {
        0.0
    } else if den == 0.0 {
        f64::INFINITY
    } else {
        num / den
    };
    let fraction = raw_fraction.clamp(0.0, 1.0);
    let range_km = base * (1.0 + (radio.beta_factor - 1.0) * fraction);

    Ok(RangeEval { range_km, base_km: base, raw_fraction, fraction })
}
