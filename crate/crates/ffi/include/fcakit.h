#ifndef FCAKIT_H
#define FCAKIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FcaStatus {
  FCA_STATUS_OK = 0,
  FCA_STATUS_NULL_ARGUMENT = 1,
  FCA_STATUS_INVALID_UTF8 = 2,
  FCA_STATUS_PARSE_ERROR = 3,
  FCA_STATUS_IO_ERROR = 4,
  FCA_STATUS_OUT_OF_RANGE = 5,
  FCA_STATUS_INVALID_ARGUMENT = 6,
  FCA_STATUS_TOO_LARGE = 7,
  FCA_STATUS_NO_QUESTION = 8,
  FCA_STATUS_INVALID_COUNTEREXAMPLE = 9,
  FCA_STATUS_NOT_FINISHED = 10,
  FCA_STATUS_PANIC = 99,
} FcaStatus;

typedef enum FcaFormat {
  FCA_FORMAT_DOT = 0,
  FCA_FORMAT_SVG = 1,
  FCA_FORMAT_JSON = 2,
} FcaFormat;

typedef struct FcaContext FcaContext;

typedef struct FcaExploration FcaExploration;

typedef struct FcaLattice FcaLattice;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until
 * the next call into the library on this thread.
 */
const char *fca_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *fca_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void fca_string_free(char *s);

/**
 * Parses CXT text.
 *
 * # Safety
 * `data` must point to `len` readable bytes; `out` must be writable.
 */
enum FcaStatus fca_context_parse_cxt(const uint8_t *data, size_t len, struct FcaContext **out);

/**
 * Reads and parses a CXT file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum FcaStatus fca_context_load(const char *path, struct FcaContext **out);

/**
 * # Safety
 * `ctx` must be null or a live context handle.
 */
void fca_context_free(struct FcaContext *ctx);

/**
 * Number of objects; 0 for a null handle.
 *
 * # Safety
 * `ctx` must be null or a live context handle.
 */
size_t fca_context_object_count(const struct FcaContext *ctx);

/**
 * Number of attributes; 0 for a null handle.
 *
 * # Safety
 * `ctx` must be null or a live context handle.
 */
size_t fca_context_attribute_count(const struct FcaContext *ctx);

/**
 * # Safety
 * `ctx` must be a live context handle; `out` must be writable.
 */
enum FcaStatus fca_context_object_name(const struct FcaContext *ctx, size_t index, char **out);

/**
 * # Safety
 * `ctx` must be a live context handle; `out` must be writable.
 */
enum FcaStatus fca_context_attribute_name(const struct FcaContext *ctx, size_t index, char **out);

/**
 * # Safety
 * `ctx` must be a live context handle; `out` must be writable.
 */
enum FcaStatus fca_context_has(const struct FcaContext *ctx,
                               size_t object,
                               size_t attribute,
                               bool *out);

/**
 * # Safety
 * `ctx` must be a live context handle not used concurrently.
 */
enum FcaStatus fca_context_set_incidence(struct FcaContext *ctx,
                                         size_t object,
                                         size_t attribute,
                                         bool value);

/**
 * Canonical CXT text of the context.
 *
 * # Safety
 * `ctx` must be a live context handle; `out` must be writable.
 */
enum FcaStatus fca_context_write_cxt(const struct FcaContext *ctx, char **out);

/**
 * # Safety
 * `ctx` must be a live context handle; `out` must be writable.
 */
enum FcaStatus fca_context_concept_count(const struct FcaContext *ctx, size_t *out);

/**
 * The canonical implication base in listing format, one line per
 * implication.
 *
 * # Safety
 * `ctx` must be a live context handle; `out` must be writable.
 */
enum FcaStatus fca_context_implications(const struct FcaContext *ctx, char **out);

/**
 * Builds the concept lattice, failing with `TooLarge` past
 * `max_concepts` concepts (0 means no limit).
 *
 * # Safety
 * `ctx` must be a live context handle; `out` must be writable.
 */
enum FcaStatus fca_lattice_build(const struct FcaContext *ctx,
                                 size_t max_concepts,
                                 struct FcaLattice **out);

/**
 * # Safety
 * `lattice` must be null or a live lattice handle.
 */
void fca_lattice_free(struct FcaLattice *lattice);

/**
 * Number of concepts; 0 for a null handle.
 *
 * # Safety
 * `lattice` must be null or a live lattice handle.
 */
size_t fca_lattice_size(const struct FcaLattice *lattice);

/**
 * Number of cover edges; 0 for a null handle.
 *
 * # Safety
 * `lattice` must be null or a live lattice handle.
 */
size_t fca_lattice_cover_count(const struct FcaLattice *lattice);

/**
 * Line diagram as DOT, SVG or JSON.
 *
 * # Safety
 * `lattice` must be a live lattice handle; `out` must be writable.
 */
enum FcaStatus fca_lattice_render(const struct FcaLattice *lattice,
                                  enum FcaFormat format,
                                  char **out);

/**
 * Starts exploring a copy of `ctx`.
 *
 * # Safety
 * `ctx` must be a live context handle; `out` must be writable.
 */
enum FcaStatus fca_exploration_start(const struct FcaContext *ctx, struct FcaExploration **out);

/**
 * # Safety
 * `session` must be null or a live exploration handle.
 */
void fca_exploration_free(struct FcaExploration *session);

/**
 * True when no question is pending (also for a null handle).
 *
 * # Safety
 * `session` must be null or a live exploration handle.
 */
bool fca_exploration_is_finished(const struct FcaExploration *session);

/**
 * The pending question as `premise ==> conclusion`.
 *
 * # Safety
 * `session` must be a live exploration handle; `out` must be writable.
 */
enum FcaStatus fca_exploration_question(const struct FcaExploration *session, char **out);

/**
 * Accepts the pending question.
 *
 * # Safety
 * `session` must be a live exploration handle not used concurrently.
 */
enum FcaStatus fca_exploration_accept(struct FcaExploration *session);

/**
 * Rejects the pending question with a new object named `name` having the
 * attributes at the `count` indices in `attributes`.
 *
 * # Safety
 * `session` must be a live exploration handle not used concurrently;
 * `name` a NUL-terminated string; `attributes` must point to `count`
 * readable values.
 */
enum FcaStatus fca_exploration_counterexample(struct FcaExploration *session,
                                              const char *name,
                                              const size_t *attributes,
                                              size_t count);

/**
 * Copy of the session's current context.
 *
 * # Safety
 * `session` must be a live exploration handle; `out` must be writable.
 */
enum FcaStatus fca_exploration_context(const struct FcaExploration *session,
                                       struct FcaContext **out);

/**
 * Accepted implications in listing format. Fails with `NotFinished`
 * while a question is pending.
 *
 * # Safety
 * `session` must be a live exploration handle; `out` must be writable.
 */
enum FcaStatus fca_exploration_implications(const struct FcaExploration *session, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FCAKIT_H */
