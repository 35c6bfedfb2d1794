#ifndef ENRIQUES_H
#define ENRIQUES_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Which Brauer decision procedure to run.
 */
typedef enum EnqMethod {
  ENQ_METHOD_BOTH = 0,
  ENQ_METHOD_PICARD = 1,
  ENQ_METHOD_FORM = 2,
} EnqMethod;

/**
 * Status codes returned by every fallible call.
 */
typedef enum EnqStatus {
  ENQ_STATUS_OK = 0,
  ENQ_STATUS_NULL_POINTER = 1,
  ENQ_STATUS_INVALID_UTF8 = 2,
  ENQ_STATUS_PARSE = 3,
  ENQ_STATUS_INVALID = 4,
  ENQ_STATUS_VERIFICATION_FAILED = 5,
  ENQ_STATUS_PANIC = 6,
} EnqStatus;

/**
 * Opaque handle to the fixed double-cover model.
 */
typedef struct EnqModel EnqModel;

/**
 * Signature of a symmetric form.
 */
typedef struct EnqSignature {
  size_t positive;
  size_t negative;
  size_t null;
} EnqSignature;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds the model. Never returns null.
 */
struct EnqModel *enq_model_new(void);

/**
 * # Safety
 * `model` must come from `enq_model_new` and not be freed twice. Null is ignored.
 */
void enq_model_free(struct EnqModel *model);

/**
 * Message for the last failure on this thread, or null. Valid until the next call.
 */
const char *enq_last_error(void);

/**
 * # Safety
 * `s` must come from this library. Null is ignored.
 */
void enq_string_free(char *s);

/**
 * Signature of the `n x n` row-major Gram matrix `gram`.
 *
 * # Safety
 * `gram` must point to `n * n` values and `out` to writable memory.
 */
enum EnqStatus enq_lattice_signature(const int64_t *gram, size_t n, struct EnqSignature *out);

/**
 * Decides Brauer-class vanishing for a JSON `{"label", "generators"}` spec.
 * Writes a JSON array of decision reports to `out`.
 *
 * # Safety
 * `model` from `enq_model_new`, `spec_json` a NUL-terminated string, `out` writable.
 */
enum EnqStatus enq_brauer_decide(const struct EnqModel *model,
                                 const char *spec_json,
                                 enum EnqMethod method,
                                 char **out);

/**
 * Hypersurface census for odd `k` in `3..=k_max`, as a JSON array.
 *
 * # Safety
 * `model` from `enq_model_new`, `out` writable.
 */
enum EnqStatus enq_census(const struct EnqModel *model, uint64_t k_max, char **out);

/**
 * Runs the model self-checks. Writes `{"checks", "summary"}` JSON to `out`
 * and returns `VerificationFailed` when any check fails.
 *
 * # Safety
 * `model` from `enq_model_new`, `out` writable.
 */
enum EnqStatus enq_check_lemmas(const struct EnqModel *model,
                                uint64_t seed,
                                size_t samples,
                                char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ENRIQUES_H */
