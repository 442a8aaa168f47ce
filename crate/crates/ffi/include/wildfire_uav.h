#ifndef WILDFIRE_UAV_H
#define WILDFIRE_UAV_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum WuStatus {
  WU_STATUS_OK = 0,
  WU_STATUS_NULL_POINTER = 1,
  WU_STATUS_INVALID_UTF8 = 2,
  WU_STATUS_INVALID_PARAMETER = 3,
  WU_STATUS_OUT_OF_DOMAIN = 4,
  WU_STATUS_VALIDATION = 5,
  WU_STATUS_BAND_MISMATCH = 6,
  WU_STATUS_NO_UNIQUE_LIMIT = 7,
  WU_STATUS_IO = 8,
  WU_STATUS_PANIC = 9,
} WuStatus;

/**
 * Fitted rating chain.
 */
typedef struct WuMarkovModel WuMarkovModel;

/**
 * Validated configuration with its repeater range resolved.
 */
typedef struct WuPlanner WuPlanner;

/**
 * Headline numbers of a fleet plan.
 */
typedef struct WuFleetSummary {
  double radius_km;
  double camera_km;
  double range_km;
  uint64_t n_cover;
  uint64_t m_cover;
  uint64_t n_total;
  uint64_t m_total;
  double ring_km;
  double distance_km;
  double time_h;
  bool feasible;
  uint64_t replacements;
  uint64_t total_cost;
  uint64_t replacement_cost;
} WuFleetSummary;

typedef struct WuCostEstimate {
  uint64_t replacements;
  uint64_t total_cost;
  uint64_t replacement_cost;
} WuCostEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next call into this library on the same thread.
 */
const char *wu_last_error_message(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and must not be used afterwards.
 */
void wu_string_free(char *s);

/**
 * Builds a planner from a JSON configuration; NULL selects the defaults.
 *
 * # Safety
 * `config_json` must be NULL or a NUL-terminated string; `out` must be a
 * valid pointer.
 */
enum WuStatus wu_planner_new(const char *config_json, struct WuPlanner **out);

/**
 * # Safety
 * `planner` must be NULL or a handle from [`wu_planner_new`], freed once.
 */
void wu_planner_free(struct WuPlanner *planner);

/**
 * Repeater range `r` (km) the planner resolved.
 *
 * # Safety
 * Pointers must be valid.
 */
enum WuStatus wu_planner_range_km(const struct WuPlanner *planner, double *out);

/**
 * Plans for a fire of radius `radius_km`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum WuStatus wu_planner_plan(const struct WuPlanner *planner,
                              double radius_km,
                              struct WuFleetSummary *out);

/**
 * Full plan, including drone positions, as JSON. Free the result with
 * [`wu_string_free`].
 *
 * # Safety
 * Pointers must be valid.
 */
enum WuStatus wu_planner_plan_json(const struct WuPlanner *planner, double radius_km, char **out);

/**
 * Surveillance drones needed for fire radius `radius_km` and camera range
 * `camera_km`.
 *
 * # Safety
 * `out` must be valid.
 */
enum WuStatus wu_ssa_count(double radius_km, double camera_km, uint64_t *out);

/**
 * Relay drones needed for fire radius `radius_km` and repeater range
 * `range_km`.
 *
 * # Safety
 * `out` must be valid.
 */
enum WuStatus wu_rr_count(double radius_km, double range_km, uint32_t *out);

/**
 * Hover ring radius for `m` relays; `WU_STATUS_BAND_MISMATCH` when `m` is
 * not the count for `radius_km / range_km`.
 *
 * # Safety
 * `out` must be valid.
 */
enum WuStatus wu_ring_radius(double radius_km, double range_km, uint32_t m, double *out);

/**
 * Replacements per month and costs with nearest-integer rounding.
 *
 * # Safety
 * `out` must be valid.
 */
enum WuStatus wu_cost_estimate(uint64_t n,
                               uint64_t m,
                               double p,
                               uint32_t months,
                               uint64_t unit_price,
                               struct WuCostEstimate *out);

/**
 * Fits a transition matrix to `len` ratings, each 1, 2 or 3.
 *
 * # Safety
 * `ratings` must point to `len` values; `out` must be valid.
 */
enum WuStatus wu_markov_fit(const int64_t *ratings, size_t len, struct WuMarkovModel **out);

/**
 * # Safety
 * `model` must be NULL or a handle from [`wu_markov_fit`], freed once.
 */
void wu_markov_free(struct WuMarkovModel *model);

/**
 * Row-major transition probabilities.
 *
 * # Safety
 * `out` must point to 9 doubles.
 */
enum WuStatus wu_markov_transition(const struct WuMarkovModel *model, double *out);

/**
 * Limit distribution; `WU_STATUS_NO_UNIQUE_LIMIT` for chains that are not
 * regular.
 *
 * # Safety
 * `out` must point to 3 doubles.
 */
enum WuStatus wu_markov_stationary(const struct WuMarkovModel *model, double *out);

/**
 * Exact transition matrix and limit distribution as JSON fractions, e.g.
 * `{"transition":[["1/5",...],...],"stationary":["10/29",...]}`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum WuStatus wu_markov_exact_json(const struct WuMarkovModel *model, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WILDFIRE_UAV_H */
