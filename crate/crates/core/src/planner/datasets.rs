//! Sweeps and tables built on top of [`Planner`].

use super::{FleetPlan, Planner};
use crate::cost::{self, CostParams, Currency, PublishedCostRow};
use crate::error::{ensure, Result};
use crate::relay::{self, DeploymentParams};
use crate::ssa;
use crate::terrain::{horizontal_range, ConeMountain, Position3, RadioParams, RangeQuery, Terrain, ThermalLimit};
use rayon::prelude::*;
use serde::Serialize;

/// `step, 2 step, ...` up to and including `max`.
pub fn ratio_grid(max: f64, step: f64) -> Result<Vec<f64>> {
    ensure(step > 0.0 && max >= step && max.is_finite(), || {
        format!("grid needs 0 < step <= max, got step {step}, max {max}")
    })?;
    let n = (max / step + 1e-9).floor() as usize;
    let mut grid: Vec<f64> = (1..=n).map(|i| i as f64 * step).collect();
    let last = *grid.last().expect("non-empty grid");
    if max - last > 1e-9 * max {
        grid.push(max);
    } else {
        *grid.last_mut().expect("non-empty grid") = max;
    }
    Ok(grid)
}

/// Covering counts `(n, m)` when camera and repeater ranges coincide.
pub fn figure7_counts(ratio: f64) -> (u64, u64) {
    let n = ssa::ssa_count(ratio, 1.0).expect("positive ratio").n;
    let m = relay::rr_count(ratio, 1.0).expect("positive ratio");
    (n, u64::from(m))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Figure7Row {
    /// `D/d`
    pub ratio: f64,
    pub n_cover: u64,
    pub m_cover: u64,
    pub n_total: u64,
    pub m_total: u64,
}

/// Largest ratio still on the lower step, located by bisection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Figure7Breakpoint {
    pub ratio: f64,
    /// `(n_total, m_total)` up to and including `ratio`.
    pub below: (u64, u64),
    /// `(n_total, m_total)` just past `ratio`.
    pub above: (u64, u64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Figure7 {
    pub rows: Vec<Figure7Row>,
    pub breakpoints: Vec<Figure7Breakpoint>,
}

/// Step function of deployed totals against `D/d`, with `d = r`.
pub fn figure7(standby_factor: u32, max_ratio: f64, step: f64) -> Result<Figure7> {
    ensure(standby_factor >= 1, || "standby factor must be at least 1".into())?;
    let f = u64::from(standby_factor);
    let totals = |x: f64| {
        let (n, m) = figure7_counts(x);
        (f * n, f * m)
    };
    let rows: Vec<Figure7Row> = ratio_grid(max_ratio, step)?
        .into_iter()
        .map(|ratio| {
            let (n_cover, m_cover) = figure7_counts(ratio);
            Figure7Row { ratio, n_cover, m_cover, n_total: f * n_cover, m_total: f * m_cover }
        })
        .collect();
    let mut breakpoints = Vec::new();
    for w in rows.windows(2) {
        let below = (w[0].n_total, w[0].m_total);
        let above = (w[1].n_total, w[1].m_total);
        if below == above {
            continue;
        }
        let (mut lo, mut hi) = (w[0].ratio, w[1].ratio);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if totals(mid) == below {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        breakpoints.push(Figure7Breakpoint { ratio: lo, below, above });
    }
    Ok(Figure7 { rows, breakpoints })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Figure8Row {
    pub range_km: f64,
    /// `D/r`
    pub ratio: f64,
    pub radius_km: f64,
    pub m: u32,
    pub ring_km: f64,
    pub distance_km: f64,
    pub time_h: f64,
    /// Law-of-cosines distance from a hover point to the nearest uncovered
    /// perimeter point; equals `range_km`.
    pub identity_km: f64,
    pub feasible: bool,
}

/// Ring radius, distance and deployment time against `D/r`, one curve per
/// range.
pub fn figure8(ranges_km: &[f64], max_ratio: f64, step: f64, params: &DeploymentParams) -> Result<Vec<Figure8Row>> {
    let grid = ratio_grid(max_ratio, step)?;
    let mut out = Vec::with_capacity(grid.len() * ranges_km.len());
    for &r in ranges_km {
        let rows: Result<Vec<Figure8Row>> = grid
            .par_iter()
            .map(|&ratio| {
                let plan = relay::deployment_metrics(ratio * r, r, params)?;
                Ok(Figure8Row {
                    range_km: r,
                    ratio,
                    radius_km: plan.radius_km,
                    m: plan.m,
                    ring_km: plan.ring_radius_km,
                    distance_km: plan.distance_km,
                    time_h: plan.time_h,
                    identity_km: relay::coverage_identity(plan.radius_km, plan.ring_radius_km, plan.m),
                    feasible: plan.feasible,
                })
            })
            .collect();
        out.extend(rows?);
    }
    Ok(out)
}

/// Shape of one deployment curve over `D/r` for a fixed range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Figure8Trend {
    pub q_nondecreasing: bool,
    /// Within each band, `C_m` never increases for `D/r < 1`.
    pub ring_band_decreasing_below_one: bool,
    /// Within-band increases of `C_m` for `D/r >= 1`.
    pub ring_band_increases_above_one: usize,
    /// The first `C_m` of each band starting at `D/r >= 1` never decreases.
    pub band_starts_nondecreasing_above_one: bool,
    /// Upward jumps of `C_m` at band changes.
    pub ring_jumps: usize,
    /// Least-squares slope of `C_m / r` against `D/r` below 1.
    pub slope_below_one: f64,
    /// Least-squares slope of `C_m / r` against `D/r` from 1 on.
    pub slope_above_one: f64,
}

impl Figure8Trend {
    /// Decreasing band by band below `D/r = 1` and rising overall above.
    pub fn flips_at_one(&self) -> bool {
        self.ring_band_decreasing_below_one && self.band_starts_nondecreasing_above_one && self.slope_above_one > 0.0
    }
}

fn ls_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return 0.0;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Trend summary of the rows for one range, in grid order.
pub fn figure8_trend(rows: &[Figure8Row]) -> Figure8Trend {
    const TOL: f64 = 1e-12;
    let mut t = Figure8Trend {
        q_nondecreasing: true,
        ring_band_decreasing_below_one: true,
        ring_band_increases_above_one: 0,
        band_starts_nondecreasing_above_one: true,
        ring_jumps: 0,
        slope_below_one: 0.0,
        slope_above_one: 0.0,
    };
    let mut last_start: Option<f64> = None;
    for w in rows.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if b.time_h < a.time_h - TOL {
            t.q_nondecreasing = false;
        }
        if a.m == b.m {
            let rising = b.ring_km > a.ring_km + TOL;
            if b.ratio < 1.0 && rising {
                t.ring_band_decreasing_below_one = false;
            }
            if a.ratio >= 1.0 && rising {
                t.ring_band_increases_above_one += 1;
            }
        } else {
            if b.ring_km > a.ring_km {
                t.ring_jumps += 1;
            }
            if b.ratio >= 1.0 {
                if last_start.is_some_and(|s| b.ring_km < s - TOL) {
                    t.band_starts_nondecreasing_above_one = false;
                }
                last_start = Some(b.ring_km);
            }
        }
    }
    let pts = |keep: &dyn Fn(f64) -> bool| -> Vec<(f64, f64)> {
        rows.iter().filter(|r| keep(r.ratio)).map(|r| (r.ratio, r.ring_km / r.range_km)).collect()
    };
    t.slope_below_one = ls_slope(&pts(&|x| x < 1.0));
    t.slope_above_one = ls_slope(&pts(&|x| x >= 1.0));
    t
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Figure9Row {
    pub height_km: f64,
    pub base_radius_km: f64,
    pub firefighter_altitude_km: f64,
    pub beta_factor: f64,
    pub range_km: f64,
    pub feasible: bool,
    pub best_altitude_km: Option<f64>,
}

/// Repeater range against the cone base radius for each `(z0, beta)`, at
/// fixed height. Every row reuses the same altitude samples.
pub fn figure9(planner: &Planner) -> Result<Vec<Figure9Row>> {
    let cfg = planner.config();
    let sweep = &cfg.figure9;
    let mut combos = Vec::new();
    for &z0 in &sweep.firefighter_altitudes_km {
        for &beta in &sweep.beta_factors {
            for &big_r in &sweep.base_radii_km {
                combos.push((z0, beta, big_r));
            }
        }
    }
    let base_radio = cfg.radio.clone();
    let limit: &ThermalLimit = &cfg.thermal;
    combos
        .par_iter()
        .map(|&(z0, beta, big_r)| {
            let cone = ConeMountain::new(sweep.height_km, big_r)?;
            let terrain = Terrain::Cone(cone);
            let radio = RadioParams { beta_factor: beta, ..base_radio.clone() };
            let x = big_r * (1.0 - z0 / sweep.height_km);
            let q = RangeQuery {
                terrain: &terrain,
                radio: &radio,
                limit,
                firefighter: Position3::new(x, 0.0, z0),
                z_bounds: (2.0 * z0, radio.handheld_range_km),
                samples: sweep.samples,
                seed: cfg.seed,
            };
            let res = horizontal_range(&q)?;
            Ok(Figure9Row {
                height_km: sweep.height_km,
                base_radius_km: big_r,
                firefighter_altitude_km: z0,
                beta_factor: beta,
                range_km: res.range_km,
                feasible: res.feasible,
                best_altitude_km: res.best_altitude_km,
            })
        })
        .collect()
}

/// Published extreme-fire cost row next to its recomputation and the
/// planner's own counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostTableRow {
    pub published: PublishedCostRow,
    pub g0_recomputed: Currency,
    pub g1_recomputed: Currency,
    pub g0_consistent: bool,
    pub g1_consistent: bool,
    /// `u` from rounding `(n + m) p` with the published counts.
    pub u_rounded: u64,
    pub n_model: u64,
    pub m_model: u64,
    /// Model relay total within two drones of the published one.
    pub m_rounding_consistent: bool,
}

/// Audits the published cost rows. Prices use the published `p`, `t` and
/// `c` with the configured rounding rule; model counts come from `planner`.
pub fn cost_table(planner: &Planner) -> Result<Vec<CostTableRow>> {
    let params = CostParams { rounding: planner.config().cost.rounding, ..CostParams::default() };
    cost::audit_published_costs(&params)?
        .into_iter()
        .map(|a| {
            let plan = planner.plan(f64::from(a.row.d_km))?;
            Ok(CostTableRow {
                published: a.row,
                g0_recomputed: a.g0,
                g1_recomputed: a.g1,
                g0_consistent: a.g0_matches,
                g1_consistent: a.g1_matches,
                u_rounded: a.u_rounded,
                n_model: plan.n_total,
                m_model: plan.m_total,
                m_rounding_consistent: plan.m_total.abs_diff(a.row.m) <= 2,
            })
        })
        .collect()
}

/// One tick of a growing fire.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthRow {
    pub t_h: f64,
    pub radius_km: f64,
    pub n_total: u64,
    pub m_total: u64,
    pub ring_km: f64,
    pub time_h: f64,
    pub feasible: bool,
    #[serde(skip)]
    pub plan: FleetPlan,
}

/// Replans every `tick_h` hours while the radius grows as
/// `D(t) = D0 + rate t`, ending exactly at `horizon_h`.
pub fn simulate_growth(planner: &Planner, d0_km: f64, rate_kmh: f64, horizon_h: f64, tick_h: f64) -> Result<Vec<GrowthRow>> {
    ensure(rate_kmh >= 0.0 && rate_kmh.is_finite(), || format!("growth rate must be non-negative, got {rate_kmh}"))?;
    ensure(horizon_h >= 0.0 && horizon_h.is_finite(), || format!("horizon must be non-negative, got {horizon_h}"))?;
    ensure(tick_h > 0.0, || format!("tick must be positive, got {tick_h}"))?;
    let ticks = (horizon_h / tick_h - 1e-9).ceil().max(0.0) as usize;
    let mut out: Vec<GrowthRow> = Vec::with_capacity(ticks + 1);
    for k in 0..=ticks {
        let t_h = (k as f64 * tick_h).min(horizon_h);
        let radius_km = d0_km + rate_kmh * t_h;
        let plan = match out.last() {
            None => planner.plan(radius_km)?,
            Some(prev) => planner.replan(&prev.plan, radius_km)?,
        };
        log::debug!("t = {t_h} h, D = {radius_km} km, m = {}", plan.relay.m);
        out.push(GrowthRow {
            t_h,
            radius_km,
            n_total: plan.n_total,
            m_total: plan.m_total,
            ring_km: plan.relay.ring_radius_km,
            time_h: plan.relay.time_h,
            feasible: plan.feasible,
            plan,
        });
    }
    Ok(out)
}
