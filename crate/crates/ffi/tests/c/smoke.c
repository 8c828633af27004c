#include <math.h>
#include <stdio.h>
#include "stabmagic.h"

int main(void) {
    SmUnitary *t = NULL;
    if (sm_unitary_from_gate("t", NULL, 0, 0, &t) != SM_OK) {
        fprintf(stderr, "%s\n", sm_last_error_message());
        return 1;
    }
    double h = sqrt(0.5);
    double re[2] = {h, h}, im[2] = {0.0, 0.0};
    SmState *plus = NULL, *out = NULL;
    if (sm_state_from_amplitudes(re, im, 2, &plus) != SM_OK) return 2;
    if (sm_unitary_apply(t, plus, &out) != SM_OK) return 3;
    double m2 = 0.0;
    if (sm_sre(out, 2.0, &m2) != SM_OK) return 4;
    if (fabs(m2 - (2.0 - log2(3.0))) > 1e-12) return 5;

    SmUnitary *qft = NULL;
    double choi = 0.0;
    uint64_t sre_bound = 0, nullity = 0;
    if (sm_unitary_from_gate("qft", NULL, 0, 3, &qft) != SM_OK) return 6;
    if (sm_tcount_bound(qft, &choi, &sre_bound, &nullity) != SM_OK) return 7;
    if (sre_bound != 6 || nullity != 4) return 8;

    if (sm_sre(NULL, 2.0, &m2) != SM_ERR_NULL_POINTER) return 9;

    printf("%.12f %llu %llu\n", m2, (unsigned long long)sre_bound, (unsigned long long)nullity);
    sm_state_free(out);
    sm_state_free(plus);
    sm_unitary_free(t);
    sm_unitary_free(qft);
    return 0;
}
