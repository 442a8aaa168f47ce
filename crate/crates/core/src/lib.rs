//! Planning toolkit for drone fleets that watch and relay radio traffic around
//! a wildfire.
//!
//! The fire is modeled as a disk of radius `D` (km) that grows at a constant
//! rate. Surveillance drones carry cameras with horizontal range `d` and must
//! tile the whole disk; relay drones carry radio repeaters with safe
//! horizontal range `r` and must cover the fire perimeter from a hover ring.
//!
//! Modules:
//!
//! * [`terrain`]: radio attenuation, effective handheld range over a cone
//!   mountain, the heat-kernel temperature field and the Monte Carlo
//!   repeater range `r`.
//! * [`ranking`]: AHP indicator weights and grey relational scores used to
//!   pick target zones.
//! * [`markov`]: fire-scale ratings, exact-rational transition fitting and
//!   the limit distribution.
//! * [`ssa`]: surveillance drone counts, layouts and a sampling coverage
//!   oracle.
//! * [`relay`]: relay drone counts, hover ring radius, deployment distance
//!   and time, and a perimeter coverage oracle.
//! * [`cost`]: replacement counts and fleet cost under long fires.
//! * [`planner`]: configuration, end-to-end plans and dataset emitters used
//!   by the `uavplan` binary.

pub mod cost;
pub mod error;
pub mod markov;
pub mod planner;
pub mod ranking;
pub mod relay;
pub mod sampling;
pub mod ssa;
pub mod terrain;

pub use error::{Error, Result};
