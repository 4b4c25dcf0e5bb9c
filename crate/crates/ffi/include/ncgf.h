#ifndef NCGF_H
#define NCGF_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum NcgfChartKind {
  NCGF_CHART_KIND_EXPONENTIAL = 0,
  NCGF_CHART_KIND_TRACE = 1,
} NcgfChartKind;

typedef enum NcgfGroup {
  NCGF_GROUP_RD = 0,
  NCGF_GROUP_U1 = 1,
  NCGF_GROUP_SU2 = 2,
  NCGF_GROUP_SO3 = 3,
} NcgfGroup;

typedef enum NcgfScheme {
  NCGF_SCHEME_IMAGINARY_TIME = 0,
  NCGF_SCHEME_REAL_TIME = 1,
} NcgfScheme;

// Result codes. `Ok` is 0; the others mirror the library error kinds.
typedef enum NcgfStatus {
  NCGF_STATUS_OK = 0,
  NCGF_STATUS_NULL_POINTER = 1,
  NCGF_STATUS_INVALID_UTF8 = 2,
  NCGF_STATUS_PANIC = 3,
  NCGF_STATUS_GROUP_MISMATCH = 10,
  NCGF_STATUS_CUT_LOCUS = 11,
  NCGF_STATUS_OUT_OF_DOMAIN = 12,
  NCGF_STATUS_OUT_OF_RANGE = 13,
  NCGF_STATUS_LENGTH_MISMATCH = 14,
  NCGF_STATUS_GRID_MISMATCH = 15,
  NCGF_STATUS_UNSUPPORTED_CHART = 16,
  NCGF_STATUS_NOT_REGULAR = 17,
  NCGF_STATUS_ORDER_OVERFLOW = 18,
  NCGF_STATUS_CHART_ANOMALY = 19,
  NCGF_STATUS_TAYLOR_FAILURE = 20,
  NCGF_STATUS_UNSUPPORTED_GROUP = 21,
  NCGF_STATUS_TRUNCATION_INADEQUATE = 22,
  NCGF_STATUS_NON_CENTRAL = 23,
  NCGF_STATUS_QUADRATURE_FAILURE = 24,
  NCGF_STATUS_INVALID_CONFIG = 25,
  NCGF_STATUS_IO = 26,
  NCGF_STATUS_JSON = 27,
} NcgfStatus;

typedef struct NcgfChart NcgfChart;

typedef struct NcgfDual NcgfDual;

typedef struct NcgfGrid NcgfGrid;

typedef struct NcgfKernel NcgfKernel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version, a static NUL-terminated string.
const char *ncgf_version(void);

// Message of the last failed call on this thread, or NULL. Valid until
// the next `ncgf_*` call on the same thread.
const char *ncgf_last_error_message(void);

// `dim` is used for `Rd` only.
enum NcgfStatus ncgf_chart_new(enum NcgfGroup group,
                               size_t dim,
                               enum NcgfChartKind kind,
                               struct NcgfChart **out);

void ncgf_chart_free(struct NcgfChart *chart);

// Algebra dimension, 0 for NULL.
size_t ncgf_chart_dim(const struct NcgfChart *chart);

// Largest violation of the chart conditions over `samples` points.
enum NcgfStatus ncgf_chart_validate(const struct NcgfChart *chart,
                                    size_t samples,
                                    uint64_t seed,
                                    double *out_violation);

// `E_g(X)` for `g` at chart coordinates `z`; `z`, `x` have `dim` entries,
// `out` receives one complex number.
enum NcgfStatus ncgf_plane_wave(const struct NcgfChart *chart,
                                const double *z,
                                const double *x,
                                double *out);

// Midpoint grid with `n` nodes per dimension. `half_width > 0` sets the
// extent (required on R^d); otherwise the chart range is used.
enum NcgfStatus ncgf_grid_new(const struct NcgfChart *chart,
                              size_t n,
                              double half_width,
                              struct NcgfGrid **out);

void ncgf_grid_free(struct NcgfGrid *grid);

// Number of nodes, 0 for NULL.
size_t ncgf_grid_len(const struct NcgfGrid *grid);

// Node coordinates, row-major; `len` must be `ncgf_grid_len * dim`.
enum NcgfStatus ncgf_grid_nodes(const struct NcgfGrid *grid, double *out, size_t len);

// Haar quadrature weights; `len` must be `ncgf_grid_len`.
enum NcgfStatus ncgf_grid_weights(const struct NcgfGrid *grid, double *out, size_t len);

// Transform of the complex node samples `values` (`len = 2 * ncgf_grid_len`).
enum NcgfStatus ncgf_transform(const struct NcgfGrid *grid,
                               const double *values,
                               size_t len,
                               struct NcgfDual **out);

void ncgf_dual_free(struct NcgfDual *f);

// `φ̃(X)`; `x` has `dim` entries, `out` receives one complex number.
enum NcgfStatus ncgf_dual_evaluate(const struct NcgfDual *f, const double *x, double *out);

enum NcgfStatus ncgf_star_product(const struct NcgfDual *a,
                                  const struct NcgfDual *b,
                                  struct NcgfDual **out);

// Group-side node values of `f` (`len = 2 * grid length`).
enum NcgfStatus ncgf_inverse_transform(const struct NcgfDual *f, double *out, size_t len);

// Free-particle kernel at `T = epsilon * steps` on a group grid with
// `n` nodes per dimension (`half_width` as in [`ncgf_grid_new`]).
enum NcgfStatus ncgf_propagate_free(const struct NcgfChart *chart,
                                    double epsilon,
                                    size_t steps,
                                    enum NcgfScheme scheme,
                                    size_t n,
                                    double half_width,
                                    struct NcgfKernel **out);

void ncgf_kernel_free(struct NcgfKernel *k);

// Number of sample points, 0 for NULL.
size_t ncgf_kernel_len(const struct NcgfKernel *k);

// `K(e, g_k)` at the grid nodes (`len = 2 * ncgf_kernel_len`).
enum NcgfStatus ncgf_kernel_values(const struct NcgfKernel *k, double *out, size_t len);

// `(1/V) ∫ K χ_j` for `two_j = 2j` (SU(2)/SO(3) central kernels).
enum NcgfStatus ncgf_kernel_character_coefficient(const struct NcgfKernel *k,
                                                  size_t two_j,
                                                  double *out);

// Exact heat kernel `e^{tΔ/2}(θ)` on U(1), SU(2) or SO(3), with `θ` the
// rotation angle (the U(1) angle on U(1)).
enum NcgfStatus ncgf_heat_kernel(enum NcgfGroup group, double theta, double t, double *out);

// Runs a CLI configuration given as JSON (must name its `command`).
// `out_exit_code` receives 0 when every check passed, 1 otherwise.
enum NcgfStatus ncgf_run_config(const char *json, int32_t *out_exit_code);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NCGF_H */
