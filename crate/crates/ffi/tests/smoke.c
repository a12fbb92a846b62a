#include <stdio.h>
#include <string.h>
#include "fcakit.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s (line %d)\n", #cond, __LINE__); return 1; } } while (0)

int main(int argc, char **argv) {
    FcaContext *ctx = NULL;
    FcaLattice *lat = NULL;
    FcaExploration *ex = NULL;
    char *text = NULL;
    size_t concepts = 0;

    CHECK(argc == 2);
    CHECK(fca_context_load(argv[1], &ctx) == FCA_STATUS_OK);
    CHECK(fca_context_object_count(ctx) == 9);
    CHECK(fca_context_concept_count(ctx, &concepts) == FCA_STATUS_OK && concepts == 12);

    CHECK(fca_context_implications(ctx, &text) == FCA_STATUS_OK);
    CHECK(strncmp(text, "1 < 2 > medium ==> far from sun, moon;\n", 39) == 0);
    fca_string_free(text);

    CHECK(fca_lattice_build(ctx, 0, &lat) == FCA_STATUS_OK);
    CHECK(fca_lattice_size(lat) == 12);
    CHECK(fca_lattice_render(lat, FCA_FORMAT_SVG, &text) == FCA_STATUS_OK);
    CHECK(strstr(text, "<svg") != NULL);
    fca_string_free(text);
    fca_lattice_free(lat);

    CHECK(fca_exploration_start(ctx, &ex) == FCA_STATUS_OK);
    while (!fca_exploration_is_finished(ex))
        CHECK(fca_exploration_accept(ex) == FCA_STATUS_OK);
    CHECK(fca_exploration_implications(ex, &text) == FCA_STATUS_OK);
    printf("%s", text);
    fca_string_free(text);
    fca_exploration_free(ex);

    CHECK(fca_context_set_incidence(ctx, 99, 0, true) == FCA_STATUS_OUT_OF_RANGE);
    CHECK(strstr(fca_last_error_message(), "out of range") != NULL);
    fca_context_free(ctx);
    return 0;
}
