#ifndef SMALLCUT_H
#define SMALLCUT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SmallcutAlgo {
  SMALLCUT_ALGO_CUT_EDGES = 0,
  SMALLCUT_ALGO_CUT_PAIRS = 1,
  SMALLCUT_ALGO_CUT_VERTICES = 2,
  SMALLCUT_ALGO_TWO_ECC = 3,
  SMALLCUT_ALGO_THREE_ECC = 4,
  SMALLCUT_ALGO_ALL = 5,
} SmallcutAlgo;

typedef enum SmallcutMode {
  SMALLCUT_MODE_SEQUENTIAL = 0,
  SMALLCUT_MODE_DISTRIBUTED = 1,
  SMALLCUT_MODE_ORACLE = 2,
} SmallcutMode;

typedef enum SmallcutStatus {
  SMALLCUT_STATUS_OK = 0,
  SMALLCUT_STATUS_NULL_POINTER = 1,
  SMALLCUT_STATUS_INVALID_ARGUMENT = 2,
  SMALLCUT_STATUS_PARSE = 3,
  /**
   * A verifier kept rejecting until the attempt limit.
   */
  SMALLCUT_STATUS_REJECTED = 4,
  /**
   * The algorithm or simulator failed, e.g. on a disconnected graph.
   */
  SMALLCUT_STATUS_FAULT = 5,
  /**
   * The output buffer is too small; the needed length was written.
   */
  SMALLCUT_STATUS_BUFFER_TOO_SMALL = 6,
  SMALLCUT_STATUS_PANIC = 7,
} SmallcutStatus;

/**
 * An undirected simple graph.
 */
typedef struct SmallcutGraph SmallcutGraph;

/**
 * The result of one run.
 */
typedef struct SmallcutReport SmallcutReport;

/**
 * Simulator totals of a distributed run; all zero for other modes.
 */
typedef struct SmallcutMetrics {
  uint64_t rounds;
  uint64_t messages;
  size_t max_payload_bits;
} SmallcutMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer stays
 * valid until the next call on this thread.
 */
const char *smallcut_last_error(void);

/**
 * Parse a graph file body (`n m` header, then `u v` lines).
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum SmallcutStatus smallcut_graph_parse(const char *text, struct SmallcutGraph **out);

/**
 * Build a graph from `m` endpoint pairs stored flat in `endpoints`
 * (`2m` entries).
 *
 * # Safety
 * `endpoints` must point to `2 * m` readable values (it may be null when
 * `m` is 0) and `out` must be a valid pointer.
 */
enum SmallcutStatus smallcut_graph_from_edges(size_t n,
                                              const size_t *endpoints,
                                              size_t m,
                                              struct SmallcutGraph **out);

/**
 * # Safety
 * `graph` must be null or a handle from this library, not yet freed.
 */
void smallcut_graph_free(struct SmallcutGraph *graph);

/**
 * Vertex count, or 0 for a null handle.
 *
 * # Safety
 * `graph` must be null or a live handle.
 */
size_t smallcut_graph_vertex_count(const struct SmallcutGraph *graph);

/**
 * Edge count, or 0 for a null handle.
 *
 * # Safety
 * `graph` must be null or a live handle.
 */
size_t smallcut_graph_edge_count(const struct SmallcutGraph *graph);

/**
 * Compute a report. `las_vegas` repeats each stage until verified, up to
 * `max_attempts` tries (0 means the library default).
 *
 * # Safety
 * `graph` must be a live handle and `out` a valid pointer.
 */
enum SmallcutStatus smallcut_run(const struct SmallcutGraph *graph,
                                 enum SmallcutMode mode,
                                 enum SmallcutAlgo algo,
                                 uint64_t seed,
                                 bool las_vegas,
                                 size_t max_attempts,
                                 struct SmallcutReport **out);

/**
 * # Safety
 * `report` must be null or a handle from this library, not yet freed.
 */
void smallcut_report_free(struct SmallcutReport *report);

/**
 * The report as JSON. Release the string with [`smallcut_string_free`].
 *
 * # Safety
 * `report` must be a live handle and `out` a valid pointer.
 */
enum SmallcutStatus smallcut_report_json(const struct SmallcutReport *report, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void smallcut_string_free(char *s);

/**
 * Cut edge indices, ascending.
 *
 * # Safety
 * `report` must be a live handle, `buf` must hold `cap` values (or be null
 * when `cap` is 0) and `len` must be a valid pointer.
 */
enum SmallcutStatus smallcut_report_cut_edges(const struct SmallcutReport *report,
                                              size_t *buf,
                                              size_t cap,
                                              size_t *len);

/**
 * Cut vertices, ascending.
 *
 * # Safety
 * As for [`smallcut_report_cut_edges`].
 */
enum SmallcutStatus smallcut_report_cut_vertices(const struct SmallcutReport *report,
                                                 size_t *buf,
                                                 size_t cap,
                                                 size_t *len);

/**
 * Cut class id of every edge, or `SIZE_MAX` for edges in no cut pair.
 * Needs `m` entries.
 *
 * # Safety
 * As for [`smallcut_report_cut_edges`].
 */
enum SmallcutStatus smallcut_report_cut_classes(const struct SmallcutReport *report,
                                                size_t *buf,
                                                size_t cap,
                                                size_t *len);

/**
 * Simulator totals of a distributed run.
 *
 * # Safety
 * `report` must be a live handle and `out` a valid pointer.
 */
enum SmallcutStatus smallcut_report_metrics(const struct SmallcutReport *report,
                                            struct SmallcutMetrics *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SMALLCUT_H */
