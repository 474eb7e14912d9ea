#ifndef RECTDUAL_H
#define RECTDUAL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RdStatus {
  RD_STATUS_OK = 0,
  /**
   * The call worked and the answer is no: inconclusive membership, a
   * layout that is not area-universal, or a solve that did not converge.
   */
  RD_STATUS_NEGATIVE = 1,
  RD_STATUS_NULL_POINTER = 2,
  RD_STATUS_INVALID_UTF8 = 3,
  /**
   * Malformed edge list, layout JSON or area JSON.
   */
  RD_STATUS_PARSE = 4,
  /**
   * Well-formed input that breaks a precondition.
   */
  RD_STATUS_INVALID = 5,
  /**
   * A member graph for which no layout could be built.
   */
  RD_STATUS_BUILD = 6,
  RD_STATUS_PANIC = 7,
} RdStatus;

/**
 * Opaque plane graph.
 */
typedef struct RdGraph RdGraph;

/**
 * Opaque layout.
 */
typedef struct RdLayout RdLayout;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *rd_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void rd_string_free(char *s);

/**
 * Parses an edge list into a new graph handle.
 *
 * # Safety
 * `edges` must be a nul-terminated string; `out` must be writable.
 */
enum RdStatus rd_graph_parse(const char *edges, struct RdGraph **out);

/**
 * # Safety
 * `g` must be null or a handle from [`rd_graph_parse`], not yet freed.
 */
void rd_graph_free(struct RdGraph *g);

/**
 * Number of vertices, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live graph handle.
 */
size_t rd_graph_vertex_count(const struct RdGraph *g);

/**
 * Classifies the graph. Writes the result JSON to `out_json` and returns
 * `Ok` for a member, `Negative` when inconclusive.
 *
 * # Safety
 * `g` must be a live graph handle; `out_json` must be writable.
 */
enum RdStatus rd_classify(const struct RdGraph *g, char **out_json);

/**
 * Builds an area-universal dual with its lower-left corner at
 * (`origin_x`, `origin_y`).
 *
 * # Safety
 * `g` must be a live graph handle; `out` must be writable.
 */
enum RdStatus rd_build(const struct RdGraph *g,
                       int64_t origin_x,
                       int64_t origin_y,
                       struct RdLayout **out);

/**
 * Parses layout JSON into a new handle. The layout is not validated here.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum RdStatus rd_layout_from_json(const char *json, struct RdLayout **out);

/**
 * # Safety
 * `l` must be a live layout handle; `out_json` must be writable.
 */
enum RdStatus rd_layout_to_json(const struct RdLayout *l, char **out_json);

/**
 * Number of rectangles, or 0 for a null handle.
 *
 * # Safety
 * `l` must be null or a live layout handle.
 */
size_t rd_layout_len(const struct RdLayout *l);

/**
 * # Safety
 * `l` must be null or a layout handle from this library, not yet freed.
 */
void rd_layout_free(struct RdLayout *l);

/**
 * Validates the partition and tests area-universality. Returns `Ok` when
 * area-universal, `Negative` otherwise, `Invalid` for a broken partition.
 *
 * # Safety
 * `l` must be a live layout handle.
 */
enum RdStatus rd_verify(const struct RdLayout *l);

/**
 * Realizes the target areas in `areas_json` (`{"areas": {id: area}}`).
 * Writes the cartogram JSON on success; on `Negative` (not converged) the
 * best layout found is written instead.
 *
 * # Safety
 * `l` must be a live layout handle, `areas_json` a nul-terminated string,
 * `out_json` writable.
 */
enum RdStatus rd_solve(const struct RdLayout *l,
                       const char *areas_json,
                       double rel_tol,
                       size_t max_iters,
                       char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RECTDUAL_H */
