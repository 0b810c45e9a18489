#include <stdio.h>
#include <string.h>

#include "padic_vertex.h"

int main(void) {
    PvTs *ts = NULL;
    if (pv_ts_compute(1, 2, 1, 2, 5, 1, &ts) != PV_STATUS_OK) {
        fprintf(stderr, "compute: %s\n", pv_last_error());
        return 1;
    }
    int64_t degree = 0;
    int32_t sign = 0;
    pv_ts_degree(ts, &degree);
    pv_ts_sign(ts, &sign);
    printf("degree %lld sign %d coeffs", (long long)degree, sign);
    for (size_t i = 0; i <= (size_t)degree; i++) {
        char *c = NULL;
        pv_ts_coeff_str(ts, i, true, &c);
        printf(" %s", c);
        pv_string_free(c);
    }
    printf("\n");
    pv_ts_free(ts);

    PvTs *bad = NULL;
    PvStatus st = pv_ts_compute(1, 3, 1, 2, 4, 1, &bad);
    printf("invalid %d %s\n", (int)st, pv_last_error());

    char *lift = NULL;
    pv_teichmuller_lift(2, 5, 3, &lift);
    printf("lift %s\n", lift);
    pv_string_free(lift);
    return 0;
}
