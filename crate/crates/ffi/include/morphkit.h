#ifndef MORPHKIT_H
#define MORPHKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MkStatus {
  MK_STATUS_OK = 0,
  MK_STATUS_NULL_ARGUMENT = 1,
  MK_STATUS_INVALID_UTF8 = 2,
  MK_STATUS_PARSE = 3,
  MK_STATUS_ALPHABET = 4,
  MK_STATUS_NOT_PARIKH_POSITIVE = 5,
  MK_STATUS_TRUNCATED = 6,
  MK_STATUS_CONTRACT = 7,
  MK_STATUS_INVALID_MATRIX = 8,
  MK_STATUS_PANIC = 9,
} MkStatus;

typedef enum MkVerdict {
  MK_VERDICT_EXCLUSIVELY_REDUCIBLE = 0,
  MK_VERDICT_EXCLUSIVELY_IRREDUCIBLE = 1,
  MK_VERDICT_NOT_EXCLUSIVELY_IRREDUCIBLE = 2,
  MK_VERDICT_MIXED = 3,
  MK_VERDICT_UNKNOWN = 4,
} MkVerdict;

/*
 Opaque incidence matrix handle.
 */
typedef struct MkMatrix MkMatrix;

/*
 Opaque morphism handle.
 */
typedef struct MkMorphism MkMorphism;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failing call on this thread; empty after a success.
 The pointer stays valid until the next call on this thread.
 */
const char *mk_last_error(void);

/*
 # Safety
 `s` must be null or a string returned by this library.
 */
void mk_string_free(char *s);

/*
 Parses `a->ab; b->ba` or the JSON object form.

 # Safety
 `text_in` must be a NUL-terminated string, `out` a valid pointer.
 */
enum MkStatus mk_morphism_parse(const char *text_in, struct MkMorphism **out);

/*
 # Safety
 `m` must be null or a handle from this library, freed at most once.
 */
void mk_morphism_free(struct MkMorphism *m);

/*
 # Safety
 `m` must be a valid handle, `out` a valid pointer.
 */
enum MkStatus mk_morphism_to_string(const struct MkMorphism *m, char **out);

/*
 # Safety
 `m` must be a valid handle, `out` a valid pointer.
 */
enum MkStatus mk_is_reducible(const struct MkMorphism *m, bool *out);

/*
 Full reducibility report as JSON, including the witness split.

 # Safety
 `m` must be a valid handle, `out` a valid pointer.
 */
enum MkStatus mk_reducibility_json(const struct MkMorphism *m, char **out);

/*
 `phi2 ∘ phi1`: `phi1` is applied first.

 # Safety
 Both handles must be valid, `out` a valid pointer.
 */
enum MkStatus mk_compose(const struct MkMorphism *phi2,
                         const struct MkMorphism *phi1,
                         struct MkMorphism **out);

/*
 # Safety
 `m` must be a valid handle, `out` a valid pointer.
 */
enum MkStatus mk_reverse(const struct MkMorphism *m, struct MkMorphism **out);

/*
 Whether `phi = psi2 ∘ mu ∘ psi1` for some `psi1`, `psi2`. When found and
 `witness_json` is not null, the witness is written there as JSON,
 otherwise it is set to null.

 # Safety
 Both handles must be valid, `found` a valid pointer, `witness_json` null
 or a valid pointer.
 */
enum MkStatus mk_is_factor(const struct MkMorphism *mu,
                           const struct MkMorphism *phi,
                           bool *found,
                           char **witness_json);

/*
 Solves `phi = mu ∘ psi1`; `psi1` is set to null when no split exists.

 # Safety
 Both handles must be valid, `psi1` a valid pointer.
 */
enum MkStatus mk_is_left_factor(const struct MkMorphism *mu,
                                const struct MkMorphism *phi,
                                struct MkMorphism **psi1);

/*
 Uniqueness report as JSON.

 # Safety
 `m` must be a valid handle, `out` a valid pointer.
 */
enum MkStatus mk_uniqueness_json(const struct MkMorphism *m, char **out);

/*
 Parses rows separated by `;`, entries by spaces: `8 4; 10 6`.

 # Safety
 `text_in` must be a NUL-terminated string, `out` a valid pointer.
 */
enum MkStatus mk_matrix_parse(const char *text_in, struct MkMatrix **out);

/*
 # Safety
 `p` must be null or a handle from this library, freed at most once.
 */
void mk_matrix_free(struct MkMatrix *p);

/*
 Incidence matrix of a Parikh-positive endomorphism.

 # Safety
 `m` must be a valid handle, `out` a valid pointer.
 */
enum MkStatus mk_incidence(const struct MkMorphism *m, struct MkMatrix **out);

/*
 Rule-based verdict. `details_json`, when not null, receives the rule and
 any witnesses as JSON.

 # Safety
 `p` must be a valid handle, `verdict` a valid pointer, `details_json`
 null or a valid pointer.
 */
enum MkStatus mk_classify_symbolic(const struct MkMatrix *p,
                                   enum MkVerdict *verdict,
                                   char **details_json);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* MORPHKIT_H */
