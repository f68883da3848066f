#include <math.h>
#include <stdio.h>

#include "fourbessel.h"

int main(void) {
    const uint32_t lambda[4] = {1, 1, 1, 1};
    FbReport *report = NULL;
    FbStatus status = fb_evaluate(lambda, 1.0, 2.0, FB_FORMULA_AUTO, &report);
    if (status != FB_STATUS_OK) {
        fprintf(stderr, "%s\n", fb_last_error_message());
        return 1;
    }
    FbQuadratureConfig config = fb_quadrature_config_default();
    status = fb_report_check(report, &config);
    double discrepancy = NAN;
    fb_report_oracle(report, NULL, NULL, &discrepancy);
    for (size_t i = 0; i < fb_report_term_count(report); ++i) {
        FbTerm term;
        fb_report_term(report, i, &term);
        printf("mu=%u %.17g\n", term.mu, term.value);
    }
    FbMethod method;
    fb_report_method(report, &method);
    printf("%.17g L=%lld method=%d discrepancy=%g\n", fb_report_value(report),
           (long long)fb_report_bridge_order(report), (int)method, discrepancy);
    fb_report_free(report);

    char *exact = NULL;
    double value = 0.0;
    fb_wigner_3j_zero(1, 1, 2, &value, &exact);
    printf("%s %.17g\n", exact, value);
    fb_string_free(exact);
    return status == FB_STATUS_OK ? 0 : 1;
}
