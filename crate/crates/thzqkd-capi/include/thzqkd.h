#ifndef THZQKD_H
#define THZQKD_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a fallible call. `Ok` is zero; everything else indicates the
 * call had no effect and [`thz_last_error`] describes why.
 */
typedef enum {
  /**
   * The call succeeded.
   */
  THZ_STATUS_OK = 0,
  /**
   * The input describes an impossible configuration (bad JSON, a
   * parameter outside its domain, an inconsistent sweep).
   */
  THZ_STATUS_VALIDATION = 1,
  /**
   * The filesystem got in the way (unreadable spectrum table,
   * unwritable cache directory).
   */
  THZ_STATUS_IO = 2,
  /**
   * An intermediate state violated a physical bound; indicates a bug
   * rather than bad input.
   */
  THZ_STATUS_PHYSICALITY = 3,
  /**
   * A required pointer argument was null.
   */
  THZ_STATUS_NULL_POINTER = 4,
  /**
   * A string argument was not valid UTF-8.
   */
  THZ_STATUS_INVALID_UTF8 = 5,
  /**
   * The library panicked internally; the handle state is unchanged.
   */
  THZ_STATUS_PANIC = 6,
} ThzStatus;

/**
 * A parsed, validated scenario. Created by [`thz_scenario_from_json`],
 * released by [`thz_scenario_free`].
 */
typedef struct ThzScenario ThzScenario;

/**
 * A finished distance sweep. Created by [`thz_scenario_run`], released by
 * [`thz_sweep_free`].
 */
typedef struct ThzSweep ThzSweep;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parse and validate a scenario from a NUL-terminated JSON document,
 * storing a handle in `*out` on success.
 *
 * # Safety
 * `json` must point to a NUL-terminated byte string and `out` to writable
 * memory for one pointer; both must be non-null.
 */
ThzStatus thz_scenario_from_json(const char *json, ThzScenario **out);

/**
 * Release a scenario handle. Null is a no-op.
 *
 * # Safety
 * `scenario` must be null or a pointer obtained from
 * [`thz_scenario_from_json`] that has not been freed already.
 */
void thz_scenario_free(ThzScenario *scenario);

/**
 * The scenario's name, as given in the JSON document. The pointer stays
 * valid for the lifetime of the handle. Null in, null out.
 *
 * # Safety
 * `scenario` must be null or a live scenario handle.
 */
const char *thz_scenario_name(const ThzScenario *scenario);

/**
 * Sweep the scenario over its configured distance grid, storing a result
 * handle in `*out` on success.
 *
 * `cache_dir` may be null; when non-null it names a directory where
 * generated absorption spectra are cached between runs, so repeated sweeps
 * of the same carrier plan skip the line-by-line evaluation.
 *
 * # Safety
 * `scenario` must be a live scenario handle, `out` writable memory for one
 * pointer, and `cache_dir` null or a NUL-terminated string.
 */
ThzStatus thz_scenario_run(const ThzScenario *scenario, const char *cache_dir, ThzSweep **out);

/**
 * Release a sweep handle. Null is a no-op.
 *
 * # Safety
 * `sweep` must be null or a pointer obtained from [`thz_scenario_run`]
 * that has not been freed already.
 */
void thz_sweep_free(ThzSweep *sweep);

/**
 * Number of distance points in the sweep. Null yields zero.
 *
 * # Safety
 * `sweep` must be null or a live sweep handle.
 */
uintptr_t thz_sweep_len(const ThzSweep *sweep);

/**
 * Number of subcarriers carried by each row's per-subcarrier rates. Null
 * yields zero.
 *
 * # Safety
 * `sweep` must be null or a live sweep handle.
 */
uintptr_t thz_sweep_subcarrier_count(const ThzSweep *sweep);

/**
 * Link distance of `row` in metres, or NaN when `row` is out of range.
 *
 * # Safety
 * `sweep` must be null or a live sweep handle.
 */
double thz_sweep_distance_m(const ThzSweep *sweep, uintptr_t row);

/**
 * Aggregate secret key rate of `row` in bits per multi-carrier symbol, or
 * NaN when `row` is out of range.
 *
 * # Safety
 * `sweep` must be null or a live sweep handle.
 */
double thz_sweep_rate_bits(const ThzSweep *sweep, uintptr_t row);

/**
 * Secret key rate of one subcarrier in bits per symbol. `index` is
 * zero-based and counts subcarriers from the lowest frequency, so it runs
 * to one below [`thz_sweep_subcarrier_count`]. Out-of-range indices yield
 * NaN.
 *
 * # Safety
 * `sweep` must be null or a live sweep handle.
 */
double thz_sweep_subcarrier_rate_bits(const ThzSweep *sweep, uintptr_t row, uintptr_t index);

/**
 * Longest swept distance at which the key rate clears the secure floor.
 * Returns true and writes `*out_distance_m` (when non-null) if any swept
 * point was secure; returns false when the whole sweep is below the floor.
 *
 * # Safety
 * `sweep` must be null or a live sweep handle; `out_distance_m` must be
 * null or writable memory for one double.
 */
bool thz_sweep_max_secure_distance_m(const ThzSweep *sweep, double *out_distance_m);

/**
 * Message describing the most recent failed call on this thread, or null
 * when the most recent call succeeded. The pointer stays valid until the
 * next call into the library from the same thread.
 */
const char *thz_last_error(void);

/**
 * The library's version as a static string.
 */
const char *thz_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* THZQKD_H */
