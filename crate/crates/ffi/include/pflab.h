#ifndef PFLAB_H
#define PFLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every function.
 */
typedef enum PflabStatus {
  PFLAB_STATUS_OK = 0,
  PFLAB_STATUS_NULL_POINTER = 1,
  PFLAB_STATUS_INVALID_UTF8 = 2,
  PFLAB_STATUS_PARSE = 3,
  PFLAB_STATUS_INVALID_SPEC = 4,
  PFLAB_STATUS_BUDGET_EXCEEDED = 5,
  PFLAB_STATUS_UNSUPPORTED = 6,
  PFLAB_STATUS_GAME_ERROR = 7,
  PFLAB_STATUS_OVERFLOW = 8,
  PFLAB_STATUS_PANIC = 9,
} PflabStatus;

/**
 * A parsed game spec with its configured strategies.
 */
typedef struct PflabSpec PflabSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *pflab_last_error(void);

/**
 * Parses a TOML spec. On success `*out` owns a new handle.
 *
 * # Safety
 * `toml` must be a nul-terminated string and `out` a valid pointer.
 */
enum PflabStatus pflab_spec_parse(const char *toml, struct PflabSpec **out);

/**
 * Releases a handle from [`pflab_spec_parse`]. Null is ignored.
 *
 * # Safety
 * `spec` must come from `pflab_spec_parse` and not be used afterwards.
 */
void pflab_spec_free(struct PflabSpec *spec);

/**
 * Label count, instance count and horizon of a spec.
 *
 * # Safety
 * `spec` must be a live handle; outputs must be valid pointers.
 */
enum PflabStatus pflab_spec_shape(const struct PflabSpec *spec,
                                  uint32_t *labels,
                                  uint32_t *instances,
                                  uint32_t *horizon);

/**
 * Caps memoised solver states for subsequent calls; zero removes the cap.
 */
void pflab_set_state_budget(uint64_t limit);

/**
 * Largest number of mistakes an adversary forces in `depth` rounds.
 *
 * # Safety
 * `spec` must be a live handle and `out` a valid pointer.
 */
enum PflabStatus pflab_pfl_dim(const struct PflabSpec *spec, uint32_t depth, uint32_t *out);

/**
 * Deterministic minimax regret over `depth` rounds.
 *
 * # Safety
 * `spec` must be a live handle and `out` a valid pointer.
 */
enum PflabStatus pflab_det_regret(const struct PflabSpec *spec, uint32_t depth, uint32_t *out);

/**
 * Measure-scale dimension at scale `gamma_num / gamma_den` over a grid of
 * resolution `grid`.
 *
 * # Safety
 * `spec` must be a live handle and `out` a valid pointer.
 */
enum PflabStatus pflab_pms_dim(const struct PflabSpec *spec,
                               uint32_t depth,
                               uint64_t gamma_num,
                               uint64_t gamma_den,
                               uint32_t grid,
                               uint32_t *out);

/**
 * Randomized minimax regret over `depth` rounds, restricted to the grid, as
 * `*num / *den`.
 *
 * # Safety
 * `spec` must be a live handle; outputs must be valid pointers.
 */
enum PflabStatus pflab_rand_regret(const struct PflabSpec *spec,
                                   uint32_t depth,
                                   uint32_t grid,
                                   int64_t *num,
                                   uint64_t *den);

/**
 * Plays a learner against an adversary and reports the expected regret.
 * A null name selects the strategy configured in the spec.
 *
 * # Safety
 * `spec` must be a live handle, names null or nul-terminated, outputs valid.
 */
enum PflabStatus pflab_play(const struct PflabSpec *spec,
                            const char *learner,
                            const char *adversary,
                            int64_t *regret_num,
                            uint64_t *regret_den);

/**
 * Number of replication checks; ids run from 1 to this value.
 */
uint32_t pflab_check_count(void);

/**
 * Runs one replication check. A failed check is reported through `passed`,
 * not the status.
 *
 * # Safety
 * `passed` must be a valid pointer.
 */
enum PflabStatus pflab_run_check(uint32_t id, bool *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PFLAB_H */
