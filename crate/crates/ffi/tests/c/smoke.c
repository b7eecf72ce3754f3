#include <math.h>
#include <stdio.h>
#include "fracyamabe.h"

int main(void) {
    FyModel *m = NULL;
    if (fy_model_new(3, 0.5, &m) != FY_STATUS_OK) return 1;
    double k = 0.0;
    if (fy_kernel(m, 1.0, &k) != FY_STATUS_OK) return 2;
    if (fabs(k - 2.2747067948377) > 1e-9) return 3;
    double l0 = 0.0, agreement = 0.0;
    if (fy_find_l0(m, FY_METHOD_BOTH, &l0, &agreement) != FY_STATUS_OK) return 4;
    if (fabs(l0 - 5.1538) > 1e-3) return 5;
    FyModel *bad = NULL;
    if (fy_model_new(2, 0.9, &bad) != FY_STATUS_INVALID_PARAMS) return 6;
    char msg[128];
    if (fy_last_error_message(msg, sizeof msg) == 0) return 7;
    fy_model_free(m);
    printf("ok %.6f\n", l0);
    return 0;
}
