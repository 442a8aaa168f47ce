//! C ABI over `wildfire-uav`.
//!
//! Every function returns a [`WuStatus`]. On failure the message is kept in
//! thread-local storage and can be read with [`wu_last_error_message`].
//! Handles are created by `*_new`/`*_fit` functions and released with the
//! matching `*_free`. Strings returned through `char **` must be released
//! with [`wu_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use wildfire_uav::cost::{self, CostParams, RoundingRule};
use wildfire_uav::markov::{self, RatingSequence, StationaryDist, TransitionMatrix};
use wildfire_uav::planner::{Planner, PlannerConfig};
use wildfire_uav::{relay, ssa, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WuStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidParameter = 3,
    OutOfDomain = 4,
    Validation = 5,
    BandMismatch = 6,
    NoUniqueLimit = 7,
    Io = 8,
    Panic = 9,
}

impl From<&Error> for WuStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidParameter(_) => WuStatus::InvalidParameter,
            Error::OutOfDomain(_) => WuStatus::OutOfDomain,
            Error::Validation(_) | Error::Json(_) | Error::Csv(_) => WuStatus::Validation,
            Error::BandMismatch { .. } => WuStatus::BandMismatch,
            Error::NoUniqueLimit(_) => WuStatus::NoUniqueLimit,
            Error::Io(_) => WuStatus::Io,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: WuStatus, msg: impl Into<String>) -> WuStatus {
    set_error(msg.into());
    status
}

fn guard(f: impl FnOnce() -> Result<(), WuStatus>) -> WuStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => WuStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(WuStatus::Panic, "panic inside wildfire-uav"),
    }
}

fn lib<T>(r: wildfire_uav::Result<T>) -> Result<T, WuStatus> {
    r.map_err(|e| fail(WuStatus::from(&e), e.to_string()))
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), WuStatus> {
    if p.is_null() {
        Err(fail(WuStatus::NullPointer, format!("{name} is null")))
    } else {
        Ok(())
    }
}

unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, WuStatus> {
    non_null(p, name)?;
    CStr::from_ptr(p).to_str().map_err(|_| fail(WuStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("JSON has no interior NUL").into_raw()
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn wu_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn wu_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Validated configuration with its repeater range resolved.
pub struct WuPlanner {
    inner: Planner,
}

/// Headline numbers of a fleet plan.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct WuFleetSummary {
    pub radius_km: f64,
    pub camera_km: f64,
    pub range_km: f64,
    pub n_cover: u64,
    pub m_cover: u64,
    pub n_total: u64,
    pub m_total: u64,
    pub ring_km: f64,
    pub distance_km: f64,
    pub time_h: f64,
    pub feasible: bool,
    pub replacements: u64,
    pub total_cost: u64,
    pub replacement_cost: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WuCostEstimate {
    pub replacements: u64,
    pub total_cost: u64,
    pub replacement_cost: u64,
}

/// Builds a planner from a JSON configuration; NULL selects the defaults.
///
/// # Safety
/// `config_json` must be NULL or a NUL-terminated string; `out` must be a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wu_planner_new(config_json: *const c_char, out: *mut *mut WuPlanner) -> WuStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = ptr::null_mut();
        let cfg = if config_json.is_null() {
            PlannerConfig::default()
        } else {
            lib(PlannerConfig::from_json(read_str(config_json, "config_json")?))?
        };
        let inner = lib(Planner::new(cfg))?;
        *out = Box::into_raw(Box::new(WuPlanner { inner }));
        Ok(())
    })
}

/// # Safety
/// `planner` must be NULL or a handle from [`wu_planner_new`], freed once.
#[no_mangle]
pub unsafe extern "C" fn wu_planner_free(planner: *mut WuPlanner) {
    if !planner.is_null() {
        drop(Box::from_raw(planner));
    }
}

/// Repeater range `r` (km) the planner resolved.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn wu_planner_range_km(planner: *const WuPlanner, out: *mut f64) -> WuStatus {
    guard(|| {
        non_null(planner, "planner")?;
        non_null(out, "out")?;
        *out = (*planner).inner.range_km();
        Ok(())
    })
}

/// Plans for a fire of radius `radius_km`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn wu_planner_plan(
    planner: *const WuPlanner,
    radius_km: f64,
    out: *mut WuFleetSummary,
) -> WuStatus {
    guard(|| {
        non_null(planner, "planner")?;
        non_null(out, "out")?;
        let p = lib((*planner).inner.plan(radius_km))?;
        *out = WuFleetSummary {
            radius_km: p.radius_km,
            camera_km: p.camera_km,
            range_km: p.range_km,
            n_cover: p.n_cover,
            m_cover: p.m_cover,
            n_total: p.n_total,
            m_total: p.m_total,
            ring_km: p.relay.ring_radius_km,
            distance_km: p.relay.distance_km,
            time_h: p.relay.time_h,
            feasible: p.feasible,
            replacements: p.cost.u,
            total_cost: p.cost.g0,
            replacement_cost: p.cost.g1,
        };
        Ok(())
    })
}

/// Full plan, including drone positions, as JSON. Free the result with
/// [`wu_string_free`].
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn wu_planner_plan_json(
    planner: *const WuPlanner,
    radius_km: f64,
    out: *mut *mut c_char,
) -> WuStatus {
    guard(|| {
        non_null(planner, "planner")?;
        non_null(out, "out")?;
        *out = ptr::null_mut();
        let p = lib((*planner).inner.plan(radius_km))?;
        let json = lib(serde_json::to_string(&p).map_err(Error::from))?;
        *out = into_c_string(json);
        Ok(())
    })
}

/// Surveillance drones needed for fire radius `radius_km` and camera range
/// `camera_km`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wu_ssa_count(radius_km: f64, camera_km: f64, out: *mut u64) -> WuStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = lib(ssa::ssa_count(radius_km, camera_km))?.n;
        Ok(())
    })
}

/// Relay drones needed for fire radius `radius_km` and repeater range
/// `range_km`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wu_rr_count(radius_km: f64, range_km: f64, out: *mut u32) -> WuStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = lib(relay::rr_count(radius_km, range_km))?;
        Ok(())
    })
}

/// Hover ring radius for `m` relays; `WU_STATUS_BAND_MISMATCH` when `m` is
/// not the count for `radius_km / range_km`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wu_ring_radius(radius_km: f64, range_km: f64, m: u32, out: *mut f64) -> WuStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = lib(relay::ring_radius(radius_km, range_km, m))?;
        Ok(())
    })
}

/// Replacements per month and costs with nearest-integer rounding.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wu_cost_estimate(
    n: u64,
    m: u64,
    p: f64,
    months: u32,
    unit_price: u64,
    out: *mut WuCostEstimate,
) -> WuStatus {
    guard(|| {
        non_null(out, "out")?;
        let params = CostParams { p, t: months, c: unit_price, rounding: RoundingRule::Nearest };
        let e = lib(cost::estimate(n, m, &params))?;
        *out = WuCostEstimate { replacements: e.u, total_cost: e.g0, replacement_cost: e.g1 };
        Ok(())
    })
}

/// Fitted rating chain.
pub struct WuMarkovModel {
    matrix: TransitionMatrix,
    stationary: Option<StationaryDist>,
}

/// Fits a transition matrix to `len` ratings, each 1, 2 or 3.
///
/// # Safety
/// `ratings` must point to `len` values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wu_markov_fit(ratings: *const i64, len: usize, out: *mut *mut WuMarkovModel) -> WuStatus {
    guard(|| {
        non_null(ratings, "ratings")?;
        non_null(out, "out")?;
        *out = ptr::null_mut();
        let seq = lib(RatingSequence::from_values(std::slice::from_raw_parts(ratings, len)))?;
        let matrix = markov::fit_transition_matrix(&seq);
        let stationary = markov::stationary_distribution(&matrix).ok();
        *out = Box::into_raw(Box::new(WuMarkovModel { matrix, stationary }));
        Ok(())
    })
}

/// # Safety
/// `model` must be NULL or a handle from [`wu_markov_fit`], freed once.
#[no_mangle]
pub unsafe extern "C" fn wu_markov_free(model: *mut WuMarkovModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Row-major transition probabilities.
///
/// # Safety
/// `out` must point to 9 doubles.
#[no_mangle]
pub unsafe extern "C" fn wu_markov_transition(model: *const WuMarkovModel, out: *mut f64) -> WuStatus {
    guard(|| {
        non_null(model, "model")?;
        non_null(out, "out")?;
        let p = (*model).matrix.to_f64();
        let dst = std::slice::from_raw_parts_mut(out, 9);
        for (i, row) in p.iter().enumerate() {
            dst[i * 3..i * 3 + 3].copy_from_slice(row);
        }
        Ok(())
    })
}

/// Limit distribution; `WU_STATUS_NO_UNIQUE_LIMIT` for chains that are not
/// regular.
///
/// # Safety
/// `out` must point to 3 doubles.
#[no_mangle]
pub unsafe extern "C" fn wu_markov_stationary(model: *const WuMarkovModel, out: *mut f64) -> WuStatus {
    guard(|| {
        non_null(model, "model")?;
        non_null(out, "out")?;
        let Some(s) = &(*model).stationary else {
            return Err(fail(WuStatus::NoUniqueLimit, "chain has no unique limit distribution"));
        };
        std::slice::from_raw_parts_mut(out, 3).copy_from_slice(&s.probs);
        Ok(())
    })
}

/// Exact transition matrix and limit distribution as JSON fractions, e.g.
/// `{"transition":[["1/5",...],...],"stationary":["10/29",...]}`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn wu_markov_exact_json(model: *const WuMarkovModel, out: *mut *mut c_char) -> WuStatus {
    use wildfire_uav::planner::format::fraction;
    guard(|| {
        non_null(model, "model")?;
        non_null(out, "out")?;
        let m = &*model;
        let transition: Vec<Vec<String>> =
            m.matrix.rows().iter().map(|row| row.iter().map(fraction).collect()).collect();
        let stationary: Option<Vec<String>> = m.stationary.as_ref().map(|s| s.exact.iter().map(fraction).collect());
        let json = serde_json::json!({ "transition": transition, "stationary": stationary });
        *out = into_c_string(json.to_string());
        Ok(())
    })
}
