/* Build: cc examples/far_pair.c -Iinclude -L../../target/release -ltht_ffi -lm */
#include <stdio.h>
#include "tht.h"

int main(void) {
    const double weights[2] = {0.5, 0.5}, means[2] = {-5.0, 5.0}, sds[2] = {1.0, 1.0};
    ThtModel *model = NULL;
    ThtSampler *sampler = NULL;
    ThtRng *rng = NULL;
    enum { ITERS = 500 };
    double states[ITERS + 1];
    const double x0 = 4.0;

    if (tht_model_mixture_new(1, 2, weights, means, sds, &model) != THT_STATUS_OK ||
        tht_sampler_new(0.1, 6.0, 500, 2.0, 4, 9, 508, &sampler) != THT_STATUS_OK ||
        tht_rng_new(7, &rng) != THT_STATUS_OK ||
        tht_run_chain(sampler, model, rng, &x0, 1, ITERS, states, NULL) != THT_STATUS_OK) {
        fprintf(stderr, "error: %s\n", tht_last_error_message());
        return 1;
    }
    int hops = 0;
    for (int i = 1; i <= ITERS; i++) hops += (states[i] > 0) != (states[i - 1] > 0);
    printf("tht %s: %d mode switches in %d iterations\n", tht_version(), hops, ITERS);

    tht_rng_free(rng);
    tht_sampler_free(sampler);
    tht_model_free(model);
    return 0;
}
