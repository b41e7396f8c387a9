/* compiled as plain C to prove the public header needs no C++ compiler */
#include <math.h>
#include <stdio.h>
#include <string.h>

#include "udnmf.h"

int main(void) {
    if (strcmp(udnmf_version(), "0.1.0") != 0) {
        fprintf(stderr, "unexpected version %s\n", udnmf_version());
        return 1;
    }
    double w = 0.0;
    if (udnmf_lambert_w0(1.0, &w) != UDNMF_OK || fabs(w - 0.5671432904097838) > 1e-12) {
        fprintf(stderr, "lambert w mismatch: %.17g\n", w);
        return 1;
    }
    udnmf_config* cfg = NULL;
    if (udnmf_config_from_preset("validate", &cfg) != UDNMF_OK) {
        fprintf(stderr, "preset failed: %s\n", udnmf_last_error());
        return 1;
    }
    char* text = NULL;
    if (udnmf_config_to_json(cfg, &text) != UDNMF_OK || strstr(text, "\"preset\"") == NULL) {
        fprintf(stderr, "serialization failed: %s\n", udnmf_last_error());
        udnmf_config_destroy(cfg);
        return 1;
    }
    udnmf_string_free(text);
    udnmf_config_destroy(cfg);
    puts("c compatibility ok");
    return 0;
}
