#include <stdio.h>
#include <stdlib.h>
#include "ncgf.h"

int main(void) {
    NcgfChart *chart = NULL;
    if (ncgf_chart_new(NCGF_GROUP_SU2, 0, NCGF_CHART_KIND_EXPONENTIAL, &chart) != NCGF_STATUS_OK) return 1;
    double violation = 1.0;
    if (ncgf_chart_validate(chart, 50, 1, &violation) != NCGF_STATUS_OK || violation > 1e-6) return 2;
    NcgfGrid *grid = NULL;
    if (ncgf_grid_new(chart, 8, 0.0, &grid) != NCGF_STATUS_OK) return 3;
    size_t n = ncgf_grid_len(grid);
    double *values = calloc(2 * n, sizeof(double));
    for (size_t k = 0; k < n; k++) values[2 * k] = 1.0;
    NcgfDual *f = NULL;
    if (ncgf_transform(grid, values, 2 * n, &f) != NCGF_STATUS_OK) return 4;
    if (ncgf_transform(grid, values, n, &f) != NCGF_STATUS_LENGTH_MISMATCH) return 5;
    if (ncgf_last_error_message() == NULL) return 6;
    double x[3] = {0.0, 0.0, 0.0}, out[2];
    if (ncgf_dual_evaluate(f, x, out) != NCGF_STATUS_OK) return 7;
    printf("%s %.6f\n", ncgf_version(), out[0]);
    ncgf_dual_free(f);
    ncgf_grid_free(grid);
    ncgf_chart_free(chart);
    free(values);
    return 0;
}
