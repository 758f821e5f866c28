#ifndef QMB_H
#define QMB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Rank reported for an infinitely implausible event.
 */
#define QMB_RANK_INFINITE UINT64_MAX

/**
 * Result code of every fallible call.
 */
typedef enum QmbStatus {
  QMB_STATUS_OK = 0,
  /**
   * A null pointer or a string that is not UTF-8.
   */
  QMB_STATUS_INVALID_ARGUMENT = 1,
  QMB_STATUS_INVALID_INPUT = 2,
  QMB_STATUS_INCONSISTENT_EVIDENCE = 3,
  QMB_STATUS_CAP_EXCEEDED = 4,
  QMB_STATUS_UNSAFE = 5,
  QMB_STATUS_DOMAIN_MISMATCH = 6,
  QMB_STATUS_PANIC = 7,
} QmbStatus;

/**
 * Verdict of [`qmb_constraints_belief`].
 */
typedef enum QmbEntailed {
  QMB_ENTAILED_BELIEVED = 0,
  QMB_ENTAILED_NOT_BELIEVED = 1,
  QMB_ENTAILED_UNDETERMINED = 2,
} QmbEntailed;

typedef struct QmbConstraints QmbConstraints;

typedef struct QmbFilter QmbFilter;

typedef struct QmbModel QmbModel;

/**
 * The message of the last failed call on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *qmb_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void qmb_string_free(char *s);

/**
 * Parses and validates a model.
 *
 * # Safety
 * `source` must be a NUL-terminated string and `out` a writable pointer.
 */
enum QmbStatus qmb_model_parse(const char *source, struct QmbModel **out);

/**
 * # Safety
 * `model` must be null or a handle from this library, not yet freed.
 */
void qmb_model_free(struct QmbModel *model);

/**
 * Number of states in the model's state space.
 *
 * # Safety
 * `model` must be a live handle.
 */
size_t qmb_model_state_count(const struct QmbModel *model);

/**
 * Writes the model in the model file format.
 *
 * # Safety
 * `model` must be a live handle and `out` a writable pointer.
 */
enum QmbStatus qmb_model_render(const struct QmbModel *model, char **out);

/**
 * Whether `prop` is believed at time `at` given the observations.
 *
 * # Safety
 * `model` must be a live handle, the strings NUL-terminated and `out`
 * writable.
 */
enum QmbStatus qmb_model_believes(const struct QmbModel *model,
                                  const char *observations,
                                  size_t at,
                                  const char *prop,
                                  bool *out);

/**
 * Conditional kappa rank of `prop` at time `at`; [`QMB_RANK_INFINITE`]
 * for an impossible event.
 *
 * # Safety
 * As for [`qmb_model_believes`].
 */
enum QmbStatus qmb_model_rank(const struct QmbModel *model,
                              const char *observations,
                              size_t at,
                              const char *prop,
                              uint64_t *out);

/**
 * Starts a filter at time 0. The filter keeps its own reference to the
 * model, so the model handle may be freed first.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum QmbStatus qmb_filter_new(const struct QmbModel *model, struct QmbFilter **out);

/**
 * # Safety
 * `filter` must be null or a live handle.
 */
void qmb_filter_free(struct QmbFilter *filter);

/**
 * Advances the filter by one observation, a state set such as `PF,PE`.
 * On failure the filter is left unchanged.
 *
 * # Safety
 * `filter` must be a live handle and `observation` NUL-terminated.
 */
enum QmbStatus qmb_filter_step(struct QmbFilter *filter, const char *observation);

/**
 * Current time of the filter.
 *
 * # Safety
 * `filter` must be a live handle.
 */
size_t qmb_filter_time(const struct QmbFilter *filter);

/**
 * Whether `prop` is believed about the current state.
 *
 * # Safety
 * `filter` must be a live handle, `prop` NUL-terminated and `out` writable.
 */
enum QmbStatus qmb_filter_believes(const struct QmbFilter *filter, const char *prop, bool *out);

/**
 * Writes the current vector as tab-separated `state=value` pairs.
 *
 * # Safety
 * `filter` must be a live handle and `out` writable.
 */
enum QmbStatus qmb_filter_render(const struct QmbFilter *filter, bool normalize, char **out);

/**
 * Parses a constraint file.
 *
 * # Safety
 * `source` must be NUL-terminated and `out` writable.
 */
enum QmbStatus qmb_constraints_parse(const char *source, struct QmbConstraints **out);

/**
 * # Safety
 * `constraints` must be null or a live handle.
 */
void qmb_constraints_free(struct QmbConstraints *constraints);

/**
 * Returns [`QmbStatus::Unsafe`] with the witness in [`qmb_last_error`] if
 * the constraints are unsafe.
 *
 * # Safety
 * `constraints` must be a live handle.
 */
enum QmbStatus qmb_constraints_check_safe(const struct QmbConstraints *constraints);

/**
 * The belief shared by every Markovian kappa measure satisfying the
 * constraints.
 *
 * # Safety
 * `constraints` must be a live handle, the strings NUL-terminated and
 * `out` writable.
 */
enum QmbStatus qmb_constraints_belief(const struct QmbConstraints *constraints,
                                      const char *observations,
                                      size_t at,
                                      const char *prop,
                                      enum QmbEntailed *out);

/**
 * Builds a kappa model satisfying the constraints; the same seed always
 * gives the same model.
 *
 * # Safety
 * `constraints` must be a live handle and `out` writable.
 */
enum QmbStatus qmb_constraints_sample(const struct QmbConstraints *constraints,
                                      uint64_t seed,
                                      struct QmbModel **out);

#endif  /* QMB_H */
