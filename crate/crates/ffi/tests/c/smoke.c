#include <stdio.h>
#include "navmap.h"

int main(int argc, char **argv) {
    if (argc != 2) {
        return 64;
    }
    NavmapAnalysis *a = NULL;
    NavmapParams params = navmap_params_default();
    NavmapStatus s = navmap_analyze_file(argv[1], &params, NULL, &a);
    if (s != NAVMAP_STATUS_OK) {
        fprintf(stderr, "%s\n", navmap_last_error_message());
        return (int)s;
    }
    NavmapDoorDirective d;
    navmap_analysis_door_directive(a, &d);
    printf("nodes=%zu side=%d ordinal=%u\n", navmap_analysis_route_len(a), (int)d.side, d.ordinal);
    navmap_analysis_free(a);

    s = navmap_analyze_file("/nonexistent/mask.png", NULL, NULL, &a);
    printf("missing=%d\n", (int)s);
    return 0;
}
