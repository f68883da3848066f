#ifndef FOURBESSEL_H
#define FOURBESSEL_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  /**
   * Paired closed form when the orders allow it, otherwise the general sum.
   */
  FB_FORMULA_AUTO = 0,
  FB_FORMULA_GENERAL = 1,
  FB_FORMULA_PAIRED = 2,
} FbFormula;

typedef enum {
  FB_METHOD_ANALYTIC = 0,
  FB_METHOD_PAIRED = 1,
  FB_METHOD_ORACLE = 2,
} FbMethod;

/**
 * Status code of every fallible call. `FB_STATUS_OK` is zero.
 */
typedef enum {
  FB_STATUS_OK = 0,
  /**
   * No bridge order satisfies both triangle windows.
   */
  FB_STATUS_NO_VALID_BRIDGE = 1,
  /**
   * A dividing 3j symbol vanishes.
   */
  FB_STATUS_PREFACTOR_ZERO = 2,
  /**
   * k1 and k2 coincide for a bridge order of at least one.
   */
  FB_STATUS_DEGENERATE_MOMENTA = 3,
  /**
   * The quadrature oracle did not reach its tolerance.
   */
  FB_STATUS_NO_CONVERGENCE = 4,
  /**
   * An argument is outside the mathematical domain.
   */
  FB_STATUS_DOMAIN_ERROR = 5,
  /**
   * A required pointer was null.
   */
  FB_STATUS_NULL_POINTER = 6,
  /**
   * An index or enum value is out of range.
   */
  FB_STATUS_INVALID_ARGUMENT = 7,
  /**
   * The request needs data the report does not hold.
   */
  FB_STATUS_NOT_AVAILABLE = 8,
  /**
   * An internal panic was caught at the boundary.
   */
  FB_STATUS_INTERNAL = 9,
} FbStatus;

/**
 * Opaque evaluation report.
 */
typedef struct FbReport FbReport;

/**
 * Oracle settings. A non-positive `max_radius` selects the default radius.
 */
typedef struct {
  double rel_tol;
  double max_radius;
  uint32_t panels_per_period;
  uint32_t acceleration_depth;
} FbQuadratureConfig;

/**
 * One term of an analytic report. Indices are -1 for paired terms, which
 * carry no bridge or Legendre indices.
 */
typedef struct {
  int32_t cal_l;
  int32_t cal_lp;
  int32_t l;
  int32_t lp;
  uint32_t mu;
  double value;
} FbTerm;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null if none occurred.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *fb_last_error_message(void);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` is null or was returned by this library and not yet freed.
 */
void fb_string_free(char *s);

/**
 * Default oracle settings.
 */
FbQuadratureConfig fb_quadrature_config_default(void);

/**
 * Evaluate the four-Bessel integral analytically. `formula` is an
 * `FbFormula` value.
 *
 * # Safety
 * `lambda` points to four `u32`; `out` is a valid pointer to write a handle.
 */
FbStatus fb_evaluate(const uint32_t *lambda, double k1, double k2, int32_t formula, FbReport **out);

/**
 * Run the quadrature oracle on the report's integral and record the
 * relative discrepancy. A null `config` uses the defaults.
 *
 * # Safety
 * `report` is a live handle; `config` is null or valid.
 */
FbStatus fb_report_check(FbReport *report, const FbQuadratureConfig *config);

/**
 * Release a report. Null is ignored.
 *
 * # Safety
 * `report` is null or a handle from [`fb_evaluate`] not yet freed.
 */
void fb_report_free(FbReport *report);

/**
 * Value of the integral, or NaN for a null handle.
 *
 * # Safety
 * `report` is null or a live handle.
 */
double fb_report_value(const FbReport *report);

/**
 * Bridge order L, or -1 when the report has none or the handle is null.
 *
 * # Safety
 * `report` is null or a live handle.
 */
int64_t fb_report_bridge_order(const FbReport *report);

/**
 * How the value was obtained.
 *
 * # Safety
 * `report` is a live handle.
 */
FbStatus fb_report_method(const FbReport *report, FbMethod *out);

/**
 * Number of terms, zero for a null handle.
 *
 * # Safety
 * `report` is null or a live handle.
 */
size_t fb_report_term_count(const FbReport *report);

/**
 * Copy term `index` into `out`.
 *
 * # Safety
 * `report` is a live handle and `out` is writable.
 */
FbStatus fb_report_term(const FbReport *report, size_t index, FbTerm *out);

/**
 * Oracle value, error estimate and relative discrepancy recorded by
 * [`fb_report_check`]. Any out-pointer may be null.
 *
 * # Safety
 * `report` is a live handle; non-null out-pointers are writable.
 */
FbStatus fb_report_oracle(const FbReport *report,
                          double *value,
                          double *error_estimate,
                          double *discrepancy);

/**
 * The report as JSON, in the same shape the CLI prints. Free with
 * [`fb_string_free`]. Null on failure.
 *
 * # Safety
 * `report` is null or a live handle.
 */
char *fb_report_to_json(const FbReport *report);

/**
 * Evaluate the integral by quadrature alone. A null `config` uses the
 * defaults; `error_estimate` may be null.
 *
 * # Safety
 * `lambda` points to four `u32`; `value` is writable.
 */
FbStatus fb_oracle(const uint32_t *lambda,
                   double k1,
                   double k2,
                   const FbQuadratureConfig *config,
                   double *value,
                   double *error_estimate);

/**
 * Smallest parity-valid bridge order.
 *
 * # Safety
 * `out` is writable.
 */
FbStatus fb_bridge_order(uint32_t l1, uint32_t l2, uint32_t l3, uint32_t l4, uint32_t *out);

/**
 * The 3j symbol (j1 j2 j3; 0 0 0).
 *
 * # Safety
 * `value` is writable; `exact` is null or writable.
 */
FbStatus fb_wigner_3j_zero(uint32_t j1, uint32_t j2, uint32_t j3, double *value, char **exact);

/**
 * The 6j symbol {j1 j2 j3; j4 j5 j6}.
 *
 * # Safety
 * `value` is writable; `exact` is null or writable.
 */
FbStatus fb_wigner_6j(uint32_t j1,
                      uint32_t j2,
                      uint32_t j3,
                      uint32_t j4,
                      uint32_t j5,
                      uint32_t j6,
                      double *value,
                      char **exact);

/**
 * Associated Legendre function of order `twice_m / 2` for `x > 1`.
 *
 * # Safety
 * `out` is writable.
 */
FbStatus fb_assoc_legendre_gt1(uint32_t l, int32_t twice_m, double x, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FOURBESSEL_H */
