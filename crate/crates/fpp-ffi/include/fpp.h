#ifndef FPP_H
#define FPP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum FppStatus {
  /**
   * Success.
   */
  FppStatus_Ok = 0,
  /**
   * A computation failed (enumeration did not close, internal error).
   */
  FppStatus_ComputeError = 1,
  /**
   * Malformed input: presentation text, word, or target name.
   */
  FppStatus_InputError = 2,
  /**
   * A configured budget or limit was exceeded.
   */
  FppStatus_BudgetExceeded = 3,
  /**
   * A required pointer argument was null.
   */
  FppStatus_NullArgument = 4,
} FppStatus;

/**
 * A complete coset table. Created by `fpp_cosets`, destroyed by
 * `fpp_coset_table_free`.
 */
typedef struct FppCosetTable FppCosetTable;

/**
 * A finitely presented group. Created by `fpp_presentation_parse`,
 * destroyed by `fpp_presentation_free`.
 */
typedef struct FppPresentation FppPresentation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message for this thread, or null if none. Free the result
 * with `fpp_string_free`.
 */
char *fpp_last_error(void);

/**
 * Free a string returned by this library. Null is a no-op.
 *
 * # Safety
 * `s` must be a pointer previously returned by this library, used at most
 * once.
 */
void fpp_string_free(char *s);

/**
 * Parse `< gens | relators >` text (commutator shorthand `(u, v)` allowed)
 * into a presentation handle written to `out`.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string; `out` must be a valid
 * pointer.
 */
enum FppStatus fpp_presentation_parse(const char *text, struct FppPresentation **out);

/**
 * # Safety
 * `p` must be a handle from `fpp_presentation_parse`, used at most once.
 */
void fpp_presentation_free(struct FppPresentation *p);

/**
 * Number of generators; 0 if `p` is null.
 *
 * # Safety
 * `p` must be null or a valid presentation handle.
 */
uint32_t fpp_presentation_rank(const struct FppPresentation *p);

/**
 * Render the presentation in the native grammar. Free with
 * `fpp_string_free`.
 *
 * # Safety
 * `p` must be null or a valid presentation handle.
 */
char *fpp_presentation_format(const struct FppPresentation *p);

/**
 * Abelianization invariants as a display string like `"Z^2 x Z/6"`,
 * written to `out`. Free with `fpp_string_free`.
 *
 * # Safety
 * `p` must be a valid presentation handle; `out` must be valid.
 */
enum FppStatus fpp_abelianization(const struct FppPresentation *p, char **out);

/**
 * First homology of the finite abelian cover (the commutator subgroup),
 * written to `out` as a display string. Free with `fpp_string_free`.
 *
 * # Safety
 * `p` must be a valid presentation handle; `out` must be valid.
 */
enum FppStatus fpp_abelian_cover_h1(const struct FppPresentation *p,
                                    uintptr_t coset_limit,
                                    char **out);

/**
 * Enumerate the cosets of the subgroup generated by `words` (an array of
 * `n_words` NUL-terminated word strings; 0 words = the trivial subgroup).
 * Writes a table handle to `out`.
 *
 * # Safety
 * `p` must be a valid presentation handle; `words` must point to `n_words`
 * valid strings; `out` must be valid.
 */
enum FppStatus fpp_cosets(const struct FppPresentation *p,
                          const char *const *words,
                          uintptr_t n_words,
                          uintptr_t limit,
                          struct FppCosetTable **out);

/**
 * # Safety
 * `t` must be a handle from `fpp_cosets`, used at most once.
 */
void fpp_coset_table_free(struct FppCosetTable *t);

/**
 * Subgroup index; 0 if `t` is null.
 *
 * # Safety
 * `t` must be null or a valid coset table handle.
 */
uint64_t fpp_coset_table_index(const struct FppCosetTable *t);

/**
 * 1 if the subgroup is normal, 0 otherwise (or if `t` is null).
 *
 * # Safety
 * `t` must be null or a valid coset table handle.
 */
int32_t fpp_coset_table_is_normal(const struct FppCosetTable *t);

/**
 * Present the subgroup of `t` on Schreier generators, Tietze-simplified,
 * written to `out` in the native grammar. Free with `fpp_string_free`.
 *
 * # Safety
 * `t` must be a valid coset table handle; `out` must be valid.
 */
enum FppStatus fpp_coset_table_subgroup_presentation(const struct FppCosetTable *t, char **out);

/**
 * Number of conjugacy classes of subgroups of index at most `max_index`,
 * written to `out`.
 *
 * # Safety
 * `p` must be a valid presentation handle; `out` must be valid.
 */
enum FppStatus fpp_low_index_class_count(const struct FppPresentation *p,
                                         uintptr_t max_index,
                                         uint64_t node_budget,
                                         uint64_t *out);

/**
 * Homomorphism and epimorphism counts onto the named catalog target
 * (e.g. "S3", "Q8", "G27", "Z13xsZ4_faithful").
 *
 * # Safety
 * `p` must be a valid presentation handle; `target`, `out_hom`, `out_epi`
 * must be valid.
 */
enum FppStatus fpp_hom_count(const struct FppPresentation *p,
                             const char *target,
                             uint64_t budget,
                             uint64_t *out_hom,
                             uint64_t *out_epi);

/**
 * Distinct-kernel quotient count |Epi| / |Aut| onto the named catalog
 * target, written to `out`.
 *
 * # Safety
 * `p` must be a valid presentation handle; `target` and `out` must be
 * valid.
 */
enum FppStatus fpp_quotient_count(const struct FppPresentation *p,
                                  const char *target,
                                  uint64_t budget,
                                  uint64_t *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* FPP_H */
