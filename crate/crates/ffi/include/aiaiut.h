#ifndef AIAIUT_H
#define AIAIUT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AiaiutStatus {
  AIAIUT_STATUS_OK = 0,
  AIAIUT_STATUS_NULL_POINTER = 1,
  AIAIUT_STATUS_INVALID_ARGUMENT = 2,
  AIAIUT_STATUS_INVALID_CORRELATION = 3,
  AIAIUT_STATUS_DEGENERATE_GROUP = 4,
  AIAIUT_STATUS_SINGULAR_DESIGN = 5,
  AIAIUT_STATUS_NONCONVERGENCE = 6,
  AIAIUT_STATUS_BUFFER_TOO_SMALL = 7,
  AIAIUT_STATUS_PANIC = 99,
} AiaiutStatus;

typedef enum AiaiutAlternative {
  AIAIUT_ALTERNATIVE_GREATER = 0,
  AIAIUT_ALTERNATIVE_LESS = 1,
  AIAIUT_ALTERNATIVE_TWO_SIDED = 2,
} AiaiutAlternative;

typedef enum AiaiutCovariance {
  AIAIUT_COVARIANCE_MODEL_BASED = 0,
  AIAIUT_COVARIANCE_SANDWICH = 1,
} AiaiutCovariance;

// Which per-hypothesis vector [`aiaiut_analysis_values`] copies.
typedef enum AiaiutQuantity {
  AIAIUT_QUANTITY_ESTIMATE = 0,
  AIAIUT_QUANTITY_STD_ERROR = 1,
  AIAIUT_QUANTITY_T_STAT = 2,
  AIAIUT_QUANTITY_ADJUSTED_P = 3,
  AIAIUT_QUANTITY_MARGINAL_P = 4,
  AIAIUT_QUANTITY_LOWER = 5,
  AIAIUT_QUANTITY_UPPER = 6,
} AiaiutQuantity;

// Result of [`aiaiut_analyze`].
typedef struct AiaiutAnalysis AiaiutAnalysis;

// Group-labelled response matrix.
typedef struct AiaiutDataset AiaiutDataset;

// Result of [`aiaiut_simulate_power`].
typedef struct AiaiutPowerRow AiaiutPowerRow;

// Global decisions of one analysis.
typedef struct AiaiutDecisions {
  bool iut_reject;
  bool uit_reject;
  bool aia_reject;
  double p_iut_max;
  double p_aia_max;
} AiaiutDecisions;

// Global rejection rates; `rr` is NaN when IUT never rejected.
typedef struct AiaiutPowerSummary {
  double iut;
  double uit;
  double aia;
  double rr;
  size_t n_hypotheses;
  uint64_t resampled;
} AiaiutPowerSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or null. Valid until the
// next failing call on the same thread.
const char *aiaiut_last_error(void);

// Static description of a status code.
const char *aiaiut_status_message(enum AiaiutStatus status);

// `P(T <= upper)` for the central multivariate t with `df` degrees of
// freedom (infinite for the normal); `corr` is `dim x dim`, row-major.
//
// # Safety
// `upper` must hold `dim` values and `corr` `dim * dim`; `value` and
// `complement` must be writable or null.
enum AiaiutStatus aiaiut_mvt_cdf(size_t dim,
                                 const double *upper,
                                 const double *corr,
                                 double df,
                                 uint64_t seed,
                                 double *value,
                                 double *complement);

// Builds a data set from `n` rows. `groups[i]` is the group of row `i`,
// group 0 being the control; `responses` is `n x n_endpoints`, row-major.
//
// # Safety
// Pointers must reference arrays of the stated sizes; `out` must be writable.
enum AiaiutStatus aiaiut_dataset_new(size_t n,
                                     size_t n_endpoints,
                                     const uint32_t *groups,
                                     const double *responses,
                                     struct AiaiutDataset **out);

// # Safety
// `ds` must come from [`aiaiut_dataset_new`] or be null.
void aiaiut_dataset_free(struct AiaiutDataset *ds);

// Dunnett contrasts of every endpoint against group 0, max-T adjusted over
// the whole family, with simultaneous limits at level `1 - alpha`.
// Marginal p-values are per hypothesis.
//
// # Safety
// `ds` must be a live data set; `out` must be writable.
enum AiaiutStatus aiaiut_analyze(const struct AiaiutDataset *ds,
                                 double alpha,
                                 enum AiaiutAlternative alternative,
                                 enum AiaiutCovariance covariance,
                                 struct AiaiutAnalysis **out);

// # Safety
// `a` must come from [`aiaiut_analyze`] or be null.
void aiaiut_analysis_free(struct AiaiutAnalysis *a);

// Number of hypotheses (endpoint-major), or 0 for a null handle.
//
// # Safety
// `a` must be a live analysis or null.
size_t aiaiut_analysis_len(const struct AiaiutAnalysis *a);

// Copies one per-hypothesis vector into `buf` (capacity `len`).
//
// # Safety
// `a` must be a live analysis; `buf` must hold `len` values.
enum AiaiutStatus aiaiut_analysis_values(const struct AiaiutAnalysis *a,
                                         enum AiaiutQuantity quantity,
                                         double *buf,
                                         size_t len);

// # Safety
// `a` must be a live analysis; `out` must be writable.
enum AiaiutStatus aiaiut_analysis_decisions(const struct AiaiutAnalysis *a,
                                            struct AiaiutDecisions *out);

// Monte Carlo power of one scenario. `group_sizes` has `k` entries (group
// 0 is the control), `means` is `k x j` row-major, `sds` has `j` entries and
// `corr` is `j x j` row-major. `workers = 0` uses all cores; results do not
// depend on it.
//
// # Safety
// Pointers must reference arrays of the stated sizes; `out` must be writable.
enum AiaiutStatus aiaiut_simulate_power(size_t k,
                                        size_t j,
                                        const size_t *group_sizes,
                                        const double *means,
                                        const double *sds,
                                        const double *corr,
                                        double alpha,
                                        size_t sims,
                                        uint64_t seed,
                                        size_t workers,
                                        struct AiaiutPowerRow **out);

// # Safety
// `row` must come from [`aiaiut_simulate_power`] or be null.
void aiaiut_power_free(struct AiaiutPowerRow *row);

// # Safety
// `row` must be a live power row; `out` must be writable.
enum AiaiutStatus aiaiut_power_summary(const struct AiaiutPowerRow *row,
                                       struct AiaiutPowerSummary *out);

// Per-hypothesis rates: adjusted (`m`) and marginal (`e`), each of
// length `n_hypotheses`.
//
// # Safety
// `row` must be a live power row; buffers must hold `len` values each.
enum AiaiutStatus aiaiut_power_rates(const struct AiaiutPowerRow *row,
                                     double *m,
                                     double *e,
                                     size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AIAIUT_H */
