//! Surveillance (SSA) drones: how many cameras of horizontal range `d` cover
//! a fire disk of radius `D`, where to put them, and a sampling check that
//! they do.
//!
//! Up to five drones use a circular division of the disk into equal sectors.
//! Beyond that each camera footprint is replaced by its inscribed regular
//! hexagon and hexagons are stacked in concentric layers around the centre;
//! `k` layers hold `1 + 3k(k + 1)` hexagons.

use crate::error::{ensure, Result};
use crate::sampling;
use num_rational::BigRational;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Right-closed upper bounds of `D/d` for 1, 3, 4, 5, 7, 19 and 37 drones.
///
/// Each irrational bound is the largest `f64` not above its exact value, so
/// `x <= limit` agrees with the exact comparison for every finite `x`.
pub fn small_band_limits() -> [(f64, u64); 7] {
    static LIMITS: OnceLock<[(f64, u64); 7]> = OnceLock::new();
    *LIMITS.get_or_init(|| {
        let int = |k: i64| BigRational::from_integer(k.into());
        [
            (1.0, 1),
            (float_below(2.0 / 3f64.sqrt(), |x| int(3) * x * x > int(4)), 3),
            (float_below(2f64.sqrt(), |x| x * x > int(2)), 4),
            (float_below(2.0 * (PI / 5.0).cos(), |x| x * x > x + int(1)), 5),
            (2.0, 7),
            (float_below(13f64.sqrt(), |x| x * x > int(13)), 19),
            (5.0, 37),
        ]
    })
}

/// Largest positive `f64` for which `above` is false, starting the search
/// from `approx`. `above` must be monotone in `x`.
fn float_below(approx: f64, above: impl Fn(&BigRational) -> bool) -> f64 {
    let exact = |v: f64| BigRational::from_float(v).expect("finite bound");
    let (down, up) = (|v: f64| f64::from_bits(v.to_bits() - 1), |v: f64| f64::from_bits(v.to_bits() + 1));
    let mut v = approx;
    while above(&exact(v)) {
        v = down(v);
    }
    while !above(&exact(up(v))) {
        v = up(v);
    }
    v
}

/// Drones needed for `k` full hexagon layers.
pub fn centered_hexagonal(k: u64) -> u64 {
    1 + 3 * k * (k + 1)
}

/// Which case of the piecewise count formula applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "band", rename_all = "snake_case")]
pub enum SsaBand {
    /// `D/d <= 1`.
    Single,
    /// Circular division into 3, 4 or 5 sectors.
    Sectors { n: u64 },
    /// Hexagon layers 1 through 3 (7, 19, 37 drones).
    Hexagons { layers: u64 },
    /// `(3a + 10)/2 < D/d <= (3a + 13)/2`, `a + 4` layers.
    Layered { a: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SsaMethod {
    Single,
    CircularDivision,
    Hexagonal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SsaCount {
    pub n: u64,
    pub band: SsaBand,
    pub method: SsaMethod,
}

impl SsaCount {
    /// Hexagon layers, for hexagonal counts.
    pub fn layers(&self) -> Option<u64> {
        match self.band {
            SsaBand::Hexagons { layers } => Some(layers),
            SsaBand::Layered { a } => Some(a + 4),
            _ => None,
        }
    }
}

fn check_radii(radius_km: f64, camera_km: f64) -> Result<()> {
    ensure(radius_km > 0.0 && radius_km.is_finite(), || {
        format!("fire radius must be positive, got {radius_km}")
    })?;
    ensure(camera_km > 0.0 && camera_km.is_finite(), || {
        format!("camera range must be positive, got {camera_km}")
    })
}

/// Minimum number of surveillance drones for a fire of radius `radius_km`
/// and cameras of horizontal range `camera_km`.
pub fn ssa_count(radius_km: f64, camera_km: f64) -> Result<SsaCount> {
    check_radii(radius_km, camera_km)?;
    Ok(count_for_ratio(radius_km / camera_km))
}

pub(crate) fn count_for_ratio(x: f64) -> SsaCount {
    for (i, (limit, n)) in small_band_limits().into_iter().enumerate() {
        if x <= limit {
            let (band, method) = match i {
                0 => (SsaBand::Single, SsaMethod::Single),
                1..=3 => (SsaBand::Sectors { n }, SsaMethod::CircularDivision),
                _ => (SsaBand::Hexagons { layers: i as u64 - 3 }, SsaMethod::Hexagonal),
            };
            return SsaCount { n, band, method };
        }
    }
    let upper = |a: u64| (3 * a + 13) as f64 / 2.0;
    let mut a = ((2.0 * x - 13.0) / 3.0).ceil().max(0.0) as u64;
    while x > upper(a) {
        a += 1;
    }
    while a > 0 && x <= upper(a - 1) {
        a -= 1;
    }
    SsaCount { n: 1 + 3 * (a + 5) * (a + 4), band: SsaBand::Layered { a }, method: SsaMethod::Hexagonal }
}

/// How many hexagon layers a layout uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LayoutMode {
    /// Fewest layers whose union provably contains the disk.
    ExactLayers,
    /// Layer count of [`ssa_count`].
    #[default]
    PaperApprox,
}

/// Shape each drone is credited with when checking coverage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Footprint {
    /// Full camera disk of radius `d`.
    Circle,
    /// Regular hexagon of circumradius `d` inscribed in the camera disk,
    /// centred on a hexagonal lattice cell.
    Hexagon { layers: u64 },
}

/// Horizontal drone positions relative to the fire centre (km).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SsaLayout {
    pub positions: Vec<[f64; 2]>,
    pub camera_km: f64,
    pub method: SsaMethod,
    pub footprint: Footprint,
}

impl SsaLayout {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

// Axial hex coordinates; cell (q, r) is centred at d·(√3(q + r/2), 3r/2),
// so one lattice axis lies along +x and the hexagons have a vertex on top.
const HEX_DIRS: [(i64, i64); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];

fn hex_distance(q: i64, r: i64) -> u64 {
    ((q.abs() + r.abs() + (q + r).abs()) / 2) as u64
}

fn hex_center(q: i64, r: i64, d: f64) -> [f64; 2] {
    [d * 3f64.sqrt() * (q as f64 + r as f64 / 2.0), d * 1.5 * r as f64]
}

fn hex_cells(layers: u64) -> impl Iterator<Item = (i64, i64)> {
    let k = layers as i64;
    (-k..=k).flat_map(move |q| (-k..=k).map(move |r| (q, r))).filter(move |&(q, r)| hex_distance(q, r) <= layers)
}

fn segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let t = (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
    ((a[0] + t * dx - p[0]).powi(2) + (a[1] + t * dy - p[1]).powi(2)).sqrt()
}

/// Radius of the largest centred disk inside `layers` hexagon layers, in
/// units of the hexagon circumradius.
///
/// Computed from the boundary edges of the patch: the edges of outer-ring
/// cells whose neighbour across that edge lies outside the patch.
pub fn hex_patch_inradius(layers: u64) -> f64 {
    let k = layers as i64;
    let mut best = f64::INFINITY;
    for (q, r) in hex_cells(layers).filter(|&(q, r)| hex_distance(q, r) == layers) {
        let c = hex_center(q, r, 1.0);
        for (j, (dq, dr)) in HEX_DIRS.iter().enumerate() {
            if hex_distance(q + dq, r + dr) as i64 <= k {
                continue;
            }
            let normal = PI / 3.0 * j as f64;
            let vertex = |off: f64| [c[0] + (normal + off).cos(), c[1] + (normal + off).sin()];
            best = best.min(segment_distance([0.0, 0.0], vertex(-PI / 6.0), vertex(PI / 6.0)));
        }
    }
    best
}

/// Fewest hexagon layers whose union contains a centred disk of radius
/// `ratio` hexagon circumradii.
pub fn exact_layers_for_ratio(ratio: f64) -> u64 {
    // Layer k reaches at least (3k + 1)/2.
    let mut k = ((2.0 * ratio - 1.0) / 3.0).ceil().max(0.0) as u64;
    while k > 0 && hex_patch_inradius(k - 1) >= ratio * (1.0 - 1e-12) {
        k -= 1;
    }
    while hex_patch_inradius(k) < ratio * (1.0 - 1e-12) {
        k += 1;
    }
    k
}

/// Drone positions covering a fire of radius `radius_km`.
///
/// One drone sits at the centre when the camera reaches the whole disk. For
/// 3 to 5 drones the disk is cut into equal sectors and each drone is placed
/// at the centre of the smallest circle enclosing its sector: the
/// circumcentre of the triangle formed by the fire centre and the sector's
/// chord when that triangle is not obtuse, and the chord midpoint otherwise
/// (three sectors). Larger counts use hexagon layers.
pub fn ssa_layout(radius_km: f64, camera_km: f64, mode: LayoutMode) -> Result<SsaLayout> {
    let count = ssa_count(radius_km, camera_km)?;
    let d = camera_km;
    let layout = match count.method {
        SsaMethod::Single => SsaLayout {
            positions: vec![[0.0, 0.0]],
            camera_km: d,
            method: SsaMethod::Single,
            footprint: Footprint::Circle,
        },
        SsaMethod::CircularDivision => {
            let n = count.n;
            let half = PI / n as f64;
            let offset = if 2.0 * half > PI / 2.0 {
                radius_km * half.cos()
            } else {
                radius_km / (2.0 * half.cos())
            };
            let positions = (0..n)
                .map(|j| {
                    let theta = (2 * j + 1) as f64 * half;
                    [offset * theta.cos(), offset * theta.sin()]
                })
                .collect();
            SsaLayout { positions, camera_km: d, method: SsaMethod::CircularDivision, footprint: Footprint::Circle }
        }
        SsaMethod::Hexagonal => {
            let layers = match mode {
                LayoutMode::PaperApprox => count.layers().unwrap_or(1),
                LayoutMode::ExactLayers => exact_layers_for_ratio(radius_km / d).max(1),
            };
            let positions = hex_cells(layers).map(|(q, r)| hex_center(q, r, d)).collect();
            SsaLayout { positions, camera_km: d, method: SsaMethod::Hexagonal, footprint: Footprint::Hexagon { layers } }
        }
    };
    Ok(layout)
}

/// Outcome of a sampling coverage check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageReport {
    pub covered: bool,
    pub uncovered_fraction: f64,
    pub samples: usize,
    /// Uncovered sample farthest from every drone.
    pub worst_point: Option<[f64; 2]>,
    /// Distance from `worst_point` to its nearest drone (km).
    pub worst_distance_km: Option<f64>,
}

impl CoverageReport {
    pub(crate) fn from_misses(samples: usize, uncovered: usize, worst: Option<([f64; 2], f64)>) -> Self {
        Self {
            covered: uncovered == 0,
            uncovered_fraction: uncovered as f64 / samples as f64,
            samples,
            worst_point: worst.map(|w| w.0),
            worst_distance_km: worst.map(|w| w.1),
        }
    }
}

const COVER_TOL: f64 = 1e-9;

fn in_hexagon(p: [f64; 2], c: [f64; 2], d: f64) -> bool {
    let (x, y) = ((p[0] - c[0]).abs(), (p[1] - c[1]).abs());
    let inr = 3f64.sqrt() / 2.0 * d * (1.0 + COVER_TOL);
    x <= inr && 0.5 * x + 3f64.sqrt() / 2.0 * y <= inr
}

fn nearest_cell(p: [f64; 2], d: f64) -> (i64, i64) {
    let rf = p[1] / (1.5 * d);
    let qf = p[0] / (3f64.sqrt() * d) - rf / 2.0;
    let sf = -qf - rf;
    let (mut q, mut r, s) = (qf.round(), rf.round(), sf.round());
    let (dq, dr, ds) = ((q - qf).abs(), (r - rf).abs(), (s - sf).abs());
    if dq > dr && dq > ds {
        q = -r - s;
    } else if dr > ds {
        r = -q - s;
    }
    (q as i64, r as i64)
}

impl SsaLayout {
    /// Whether the point lies in some drone's footprint.
    pub fn covers(&self, p: [f64; 2]) -> bool {
        let d = self.camera_km;
        match self.footprint {
            Footprint::Circle => {
                let lim = (d * (1.0 + COVER_TOL)).powi(2);
                self.positions.iter().any(|c| (p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2) <= lim)
            }
            Footprint::Hexagon { layers } => {
                let (q, r) = nearest_cell(p, d);
                if hex_distance(q, r) <= layers {
                    return true;
                }
                // Points on a shared edge may round outward.
                HEX_DIRS.iter().any(|(dq, dr)| {
                    hex_distance(q + dq, r + dr) <= layers && in_hexagon(p, hex_center(q + dq, r + dr, d), d)
                })
            }
        }
    }

    fn nearest_distance(&self, p: [f64; 2]) -> f64 {
        self.positions
            .iter()
            .map(|c| ((p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2)).sqrt())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Samples `samples` points uniformly over the fire disk and checks each
/// against the layout's footprints.
pub fn verify_disk_coverage(layout: &SsaLayout, radius_km: f64, samples: usize, seed: u64) -> CoverageReport {
    let samples = samples.max(1);
    let parts = sampling::map_chunks(samples, seed, |rng, idx| {
        let mut missed = 0usize;
        let mut worst: Option<([f64; 2], f64)> = None;
        for _ in idx {
            let rho = radius_km * rng.random::<f64>().sqrt();
            let theta = 2.0 * PI * rng.random::<f64>();
            let p = [rho * theta.cos(), rho * theta.sin()];
            if !layout.covers(p) {
                missed += 1;
                let dist = layout.nearest_distance(p);
                if worst.map_or(true, |w| dist > w.1) {
                    worst = Some((p, dist));
                }
            }
        }
        (missed, worst)
    });
    let mut missed = 0;
    let mut worst: Option<([f64; 2], f64)> = None;
    for (m, w) in parts {
        missed += m;
        if let Some(w) = w {
            if worst.map_or(true, |cur| w.1 > cur.1) {
                worst = Some(w);
            }
        }
    }
    CoverageReport::from_misses(samples, missed, worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(x: f64) -> u64 {
        ssa_count(x, 1.0).unwrap().n
    }

    #[test]
    fn formula_examples() {
        assert_eq!(n(0.5), 1);
        assert_eq!(n(1.0), 1);
        assert_eq!(n(1.1), 3);
        assert_eq!(n(1.5), 5);
        assert_eq!(n(1.7), 7);
        assert_eq!(n(3.0), 19);
        assert_eq!(n(4.9), 37);
        assert_eq!(n(5.0), 37);
        assert_eq!(n(6.0), 61);
        assert_eq!(n(6.5), 61);
        assert_eq!(n(6.5000001), 91);
        assert_eq!(n(8.0), 91);
        assert_eq!(ssa_count(40.0, 3.3001).unwrap().n, 217);
        assert_eq!(ssa_count(40.0, 3.3001).unwrap().band, SsaBand::Layered { a: 4 });
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(ssa_count(0.0, 1.0).is_err());
        assert!(ssa_count(1.0, 0.0).is_err());
        assert!(ssa_count(-1.0, 1.0).is_err());
        assert!(ssa_count(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn patch_inradius_matches_known_layers() {
        assert!((hex_patch_inradius(0) - 3f64.sqrt() / 2.0).abs() < 1e-12);
        assert!((hex_patch_inradius(1) - 2.0).abs() < 1e-12);
        assert!((hex_patch_inradius(2) - 13f64.sqrt()).abs() < 1e-12);
        assert!((hex_patch_inradius(3) - 5.0).abs() < 1e-12);
        // Even layers reach beyond the midpoint rule (3k + 1)/2.
        assert!(hex_patch_inradius(4) > 6.5);
        assert!((hex_patch_inradius(5) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn exact_layer_counts() {
        assert_eq!(exact_layers_for_ratio(1.7), 1);
        assert_eq!(exact_layers_for_ratio(2.0), 1);
        assert_eq!(exact_layers_for_ratio(2.01), 2);
        assert_eq!(exact_layers_for_ratio(6.55), 4);
        assert_eq!(exact_layers_for_ratio(6.6), 5);
    }

    #[test]
    fn layouts_have_n_positions() {
        for &x in &[0.5, 1.1, 1.3, 1.6, 1.9, 3.0, 4.9, 7.0, 12.0] {
            let c = ssa_count(x, 1.0).unwrap();
            let l = ssa_layout(x, 1.0, LayoutMode::PaperApprox).unwrap();
            assert_eq!(l.len() as u64, c.n, "x = {x}");
        }
        let single = ssa_layout(0.8, 1.0, LayoutMode::ExactLayers).unwrap();
        assert_eq!(single.positions, vec![[0.0, 0.0]]);
    }

    #[test]
    fn sector_layouts_cover() {
        for &x in &[1.1, 1.15, 1.4, 1.6, 1.618] {
            let l = ssa_layout(x, 1.0, LayoutMode::ExactLayers).unwrap();
            let rep = verify_disk_coverage(&l, x, 100_000, 3);
            assert!(rep.covered, "x = {x}: {rep:?}");
        }
    }

    #[test]
    fn hex_layout_covers_band_top() {
        let l = ssa_layout(4.9, 1.0, LayoutMode::ExactLayers).unwrap();
        assert_eq!(l.len(), 37);
        assert!(verify_disk_coverage(&l, 4.9, 100_000, 5).covered);
    }

    #[test]
    fn shrunk_camera_misses() {
        let mut l = ssa_layout(1.6, 1.0, LayoutMode::ExactLayers).unwrap();
        assert!(verify_disk_coverage(&l, 1.6, 100_000, 9).covered);
        l.camera_km = 0.9;
        let rep = verify_disk_coverage(&l, 1.6, 100_000, 9);
        assert!(!rep.covered);
        assert!(rep.uncovered_fraction > 0.0);
        assert!(rep.worst_distance_km.unwrap() > 0.9);
    }

    #[test]
    fn tiny_fire_covered_by_centre_drone() {
        let l = ssa_layout(1e-9, 1.0, LayoutMode::ExactLayers).unwrap();
        assert!(verify_disk_coverage(&l, 1e-9, 1000, 1).covered);
    }

    #[test]
    fn nearest_cell_roundtrip() {
        for (q, r) in hex_cells(4) {
            let c = hex_center(q, r, 2.5);
            assert_eq!(nearest_cell(c, 2.5), (q, r));
            assert!(in_hexagon([c[0] + 2.0, c[1]], c, 2.5));
            assert!(!in_hexagon([c[0] + 2.3, c[1]], c, 2.5));
            assert!(in_hexagon([c[0], c[1] + 2.49], c, 2.5));
        }
    }
}
