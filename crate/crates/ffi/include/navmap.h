#ifndef NAVMAP_H
#define NAVMAP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum NavmapStatus {
  NAVMAP_STATUS_OK = 0,
  NAVMAP_STATUS_OTHER = 1,
  NAVMAP_STATUS_BAD_INPUT = 2,
  NAVMAP_STATUS_NO_CORRIDOR = 3,
  NAVMAP_STATUS_NO_ROUTE = 4,
  NAVMAP_STATUS_LANDMARK = 5,
  NAVMAP_STATUS_NULL_ARGUMENT = 10,
  NAVMAP_STATUS_INVALID_UTF8 = 11,
  NAVMAP_STATUS_OUT_OF_RANGE = 12,
  NAVMAP_STATUS_PANIC = 13,
} NavmapStatus;

typedef enum NavmapNodeKind {
  NAVMAP_NODE_KIND_TURNING = 0,
  NAVMAP_NODE_KIND_DOOR = 1,
  NAVMAP_NODE_KIND_START = 2,
  NAVMAP_NODE_KIND_END = 3,
} NavmapNodeKind;

typedef enum NavmapDirection {
  NAVMAP_DIRECTION_HARD_RIGHT = 0,
  NAVMAP_DIRECTION_NORMAL_RIGHT = 1,
  NAVMAP_DIRECTION_LIGHT_RIGHT = 2,
  NAVMAP_DIRECTION_STRAIGHT = 3,
  NAVMAP_DIRECTION_LIGHT_LEFT = 4,
  NAVMAP_DIRECTION_NORMAL_LEFT = 5,
  NAVMAP_DIRECTION_HARD_LEFT = 6,
} NavmapDirection;

typedef enum NavmapTravelSide {
  NAVMAP_TRAVEL_SIDE_LEFT = 0,
  NAVMAP_TRAVEL_SIDE_RIGHT = 1,
} NavmapTravelSide;

typedef enum NavmapAxis {
  NAVMAP_AXIS_VERTICAL = 0,
  NAVMAP_AXIS_HORIZONTAL = 1,
} NavmapAxis;

/**
 * Opaque result of a pipeline run.
 */
typedef struct NavmapAnalysis NavmapAnalysis;

typedef struct NavmapParams {
  uint32_t min_width;
  uint32_t max_width;
  /**
   * 0 means "same as max_width".
   */
  uint32_t door_probe;
  uint32_t k;
} NavmapParams;

typedef struct NavmapNode {
  size_t id;
  int32_t x;
  int32_t y;
  enum NavmapNodeKind kind;
} NavmapNode;

typedef struct NavmapInstruction {
  size_t at_node;
  double angle;
  enum NavmapDirection direction;
  bool actionable;
} NavmapInstruction;

typedef struct NavmapDoorDirective {
  enum NavmapTravelSide side;
  uint32_t ordinal;
  enum NavmapAxis axis;
} NavmapDoorDirective;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

struct NavmapParams navmap_params_default(void);

/**
 * Library version as a static nul-terminated string.
 */
const char *navmap_version(void);

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *navmap_last_error_message(void);

/**
 * Runs the pipeline on a mask file. `params` and `colors_path` may be null
 * for defaults. On success `*out` receives a handle to free with
 * [`navmap_analysis_free`].
 *
 * # Safety
 * `path` and `colors_path` must be null or nul-terminated strings, `params`
 * null or valid, and `out` a valid pointer.
 */
enum NavmapStatus navmap_analyze_file(const char *path,
                                      const struct NavmapParams *params,
                                      const char *colors_path,
                                      struct NavmapAnalysis **out);

/**
 * # Safety
 * `analysis` must be null or a handle from [`navmap_analyze_file`] that has
 * not been freed.
 */
void navmap_analysis_free(struct NavmapAnalysis *analysis);

/**
 * Canonical knowledge-base JSON. Free `*out_json` with
 * [`navmap_string_free`].
 *
 * # Safety
 * `analysis` must be a live handle and `out_json` a valid pointer.
 */
enum NavmapStatus navmap_analysis_to_json(const struct NavmapAnalysis *analysis, char **out_json);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void navmap_string_free(char *s);

/**
 * # Safety
 * `analysis` must be a live handle and `path` a nul-terminated string.
 */
enum NavmapStatus navmap_analysis_write_kb(const struct NavmapAnalysis *analysis, const char *path);

/**
 * Writes the overlay PNG.
 *
 * # Safety
 * `analysis` must be a live handle and `path` a nul-terminated string.
 */
enum NavmapStatus navmap_analysis_render(const struct NavmapAnalysis *analysis, const char *path);

/**
 * Number of nodes on the selected route, 0 for a null handle.
 *
 * # Safety
 * `analysis` must be null or a live handle.
 */
size_t navmap_analysis_route_len(const struct NavmapAnalysis *analysis);

/**
 * Total length of the selected route in pixels, NaN for a null handle.
 *
 * # Safety
 * `analysis` must be null or a live handle.
 */
double navmap_analysis_route_length(const struct NavmapAnalysis *analysis);

/**
 * # Safety
 * `analysis` must be a live handle and `out` a valid pointer.
 */
enum NavmapStatus navmap_analysis_route_node(const struct NavmapAnalysis *analysis,
                                             size_t index,
                                             struct NavmapNode *out);

/**
 * Number of turn instructions, 0 for a null handle.
 *
 * # Safety
 * `analysis` must be null or a live handle.
 */
size_t navmap_analysis_instruction_count(const struct NavmapAnalysis *analysis);

/**
 * # Safety
 * `analysis` must be a live handle and `out` a valid pointer.
 */
enum NavmapStatus navmap_analysis_instruction(const struct NavmapAnalysis *analysis,
                                              size_t index,
                                              struct NavmapInstruction *out);

/**
 * # Safety
 * `analysis` must be a live handle and `out` a valid pointer.
 */
enum NavmapStatus navmap_analysis_door_directive(const struct NavmapAnalysis *analysis,
                                                 struct NavmapDoorDirective *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NAVMAP_H */
