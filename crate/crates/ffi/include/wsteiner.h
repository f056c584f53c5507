#ifndef WSTEINER_H
#define WSTEINER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum WsOrdering {
  WS_ORDERING_INPUT = 0,
  WS_ORDERING_ACUTEST_FIRST = 1,
} WsOrdering;

typedef enum WsMergePolicy {
  WS_MERGE_POLICY_TERMINAL_KEEPS_WEIGHT = 0,
  WS_MERGE_POLICY_TERMINAL_ADOPTS_STEINER_WEIGHT = 1,
} WsMergePolicy;

typedef enum WsRelaxObjective {
  WS_RELAX_OBJECTIVE_EUCLIDEAN = 0,
  WS_RELAX_OBJECTIVE_WEIGHTED = 1,
} WsRelaxObjective;

typedef enum WsStatus {
  WS_STATUS_OK = 0,
  WS_STATUS_NULL_POINTER = 1,
  WS_STATUS_INVALID_ARGUMENT = 2,
  WS_STATUS_PARSE = 3,
  WS_STATUS_CAP_EXCEEDED = 4,
  WS_STATUS_INFEASIBLE = 5,
  WS_STATUS_OUT_OF_RANGE = 6,
  WS_STATUS_PANIC = 7,
} WsStatus;

/**
 * Terminal set under construction.
 */
typedef struct WsInstance WsInstance;

/**
 * Heuristic result: final tree plus report.
 */
typedef struct WsSolution WsSolution;

/**
 * Solver settings. Obtain defaults from [`ws_config_default`].
 */
typedef struct WsConfig {
  double angle_tolerance_fraction;
  uint32_t relax_step_cap;
  double collision_epsilon;
  double tilt_degrees;
  enum WsOrdering ordering;
  enum WsMergePolicy merge_policy;
  enum WsRelaxObjective relax_objective;
  /**
   * Zero selects the default cap.
   */
  uint32_t max_iterations;
} WsConfig;

typedef struct WsMetrics {
  double wmst_weighted_length;
  double wmst_euclidean_length;
  double plane_wmst_weighted_length;
  double plane_wmst_euclidean_length;
  double final_weighted_length;
  double final_euclidean_length;
  double ratio_weighted;
  double ratio_euclidean;
  uint32_t steiner_count;
  uint32_t iterations;
  uint32_t planarity_violations;
  bool converged;
} WsMetrics;

typedef struct WsVertex {
  uint32_t id;
  double x;
  double y;
  double weight;
  bool is_steiner;
} WsVertex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *ws_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ws_version(void);

struct WsConfig ws_config_default(void);

/**
 * Empty terminal set. Never null.
 */
struct WsInstance *ws_instance_new(void);

/**
 * # Safety
 * `inst` is null or a handle from this library not yet freed.
 */
void ws_instance_free(struct WsInstance *inst);

/**
 * Appends a terminal. Its id is its position in the instance.
 *
 * # Safety
 * `inst` is a live instance handle.
 */
enum WsStatus ws_instance_push(struct WsInstance *inst, double x, double y, double weight);

/**
 * Parses instance text (`x y w` per line, `#` comments).
 *
 * # Safety
 * `text` is a NUL-terminated string; `out` is writable.
 */
enum WsStatus ws_instance_parse(const char *text, struct WsInstance **out);

/**
 * # Safety
 * `inst` is null or a live instance handle.
 */
size_t ws_instance_len(const struct WsInstance *inst);

/**
 * Runs the heuristic. `config` may be null for defaults. On success `*out`
 * receives a solution handle; a run that hit the iteration cap still
 * succeeds and reports `converged = false` in its metrics.
 *
 * # Safety
 * `inst` is a live instance handle, `config` is null or readable, `out`
 * is writable.
 */
enum WsStatus ws_solve(const struct WsInstance *inst,
                       const struct WsConfig *config,
                       struct WsSolution **out);

/**
 * # Safety
 * `sol` is null or a solution handle not yet freed.
 */
void ws_solution_free(struct WsSolution *sol);

/**
 * # Safety
 * `sol` is a live solution handle and `out` is writable.
 */
enum WsStatus ws_solution_metrics(const struct WsSolution *sol, struct WsMetrics *out);

/**
 * # Safety
 * `sol` is null or a live solution handle.
 */
size_t ws_solution_vertex_count(const struct WsSolution *sol);

/**
 * # Safety
 * `sol` is null or a live solution handle.
 */
size_t ws_solution_edge_count(const struct WsSolution *sol);

/**
 * Vertex `index` in id order.
 *
 * # Safety
 * `sol` is a live solution handle and `out` is writable.
 */
enum WsStatus ws_solution_vertex(const struct WsSolution *sol, size_t index, struct WsVertex *out);

/**
 * Edge `index` as a pair of vertex ids.
 *
 * # Safety
 * `sol` is a live solution handle; `u` and `v` are writable.
 */
enum WsStatus ws_solution_edge(const struct WsSolution *sol,
                               size_t index,
                               uint32_t *u,
                               uint32_t *v);

/**
 * Full JSON report as a new string; release it with [`ws_string_free`].
 *
 * # Safety
 * `sol` is a live solution handle and `out` is writable.
 */
enum WsStatus ws_solution_json(const struct WsSolution *sol, char **out);

/**
 * # Safety
 * `s` is null or a string returned by this library, not yet freed.
 */
void ws_string_free(char *s);

/**
 * Exact weighted and Euclidean length of the weighted Steiner minimal tree
 * for at most seven terminals.
 *
 * # Safety
 * `inst` is a live instance handle; the outputs are writable.
 */
enum WsStatus ws_oracle(const struct WsInstance *inst,
                        double *weighted_length,
                        double *euclidean_length);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WSTEINER_H */
