/* evalpres: exact-arithmetic toolkit for presented compact metric spaces,
 * induced C*(X) presentations, evaluation functionals, spatial realizations
 * of isometric isomorphisms, and Cantor-space cover refinements.
 *
 * Conventions:
 *  - every function returns an evp_status; results come back through out
 *    parameters;
 *  - all numbers cross the boundary as exact decimal/rational strings
 *    ("num/den"), never as floating point;
 *  - strings returned through char** are heap-allocated; release them with
 *    evp_string_free;
 *  - handles are opaque and freed with their matching *_free function;
 *  - evp_last_error() describes the most recent failure on this thread.
 */

#ifndef EVALPRES_H
#define EVALPRES_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum evp_status {
  EVP_OK = 0,
  EVP_ERR_ORACLE_VIOLATION = 1,
  EVP_ERR_BUDGET_EXHAUSTED = 2,
  EVP_ERR_BAD_MANIFEST = 3,
  EVP_ERR_MISSING_TBF = 4,
  EVP_ERR_MISSING_VARIABLE = 5,
  EVP_ERR_PARSE = 6,
  EVP_ERR_BAD_ARGUMENT = 7,
  EVP_ERR_IO = 8,
  EVP_ERR_UNKNOWN = 99
} evp_status;

typedef struct evp_space evp_space;
typedef struct evp_algebra evp_algebra;
typedef struct evp_point evp_point;
typedef struct evp_map evp_map;

const char* evp_status_name(evp_status status);
const char* evp_last_error(void);
void evp_string_free(char* s);

/* --- Presented spaces ------------------------------------------------- */

/* Labels: unit_interval, cantor_standard, cantor_variant, segments. */
evp_status evp_space_builtin(const char* label, evp_space** out);
void evp_space_free(evp_space* s);
evp_status evp_space_describe(const evp_space* s, size_t sample_points, char** json_out);
/* q with |q - d(p_i, p_j)| <= 2^-prec, as "num/den". */
evp_status evp_space_metric(const evp_space* s, size_t i, size_t j, long prec,
                            char** rational_out);
/* Certified strict diagram entries, one JSON object per line. */
evp_status evp_space_diagram(const evp_space* s, size_t budget, char** jsonl_out);
evp_status evp_space_point_text(const evp_space* s, size_t index, char** out);

/* --- Point names -------------------------------------------------------- */

/* Exact rational member of unit_interval or segments. */
evp_status evp_point_of_rational(const evp_space* s, const char* rational, evp_point** out);
/* JSON array [n0, n1, ...]: index at precision k is the k-th entry; the
 * final entry asserts the named point exactly and answers deeper queries. */
evp_status evp_point_from_json(const evp_space* s, const char* json_array, evp_point** out);
evp_status evp_point_index_at(const evp_point* p, long prec, size_t* index_out);
void evp_point_free(evp_point* p);

/* --- Presented C*-algebras ---------------------------------------------- */

evp_status evp_algebra_induce(const evp_space* s, evp_algebra** out);
/* Manifest: {"label":.., "norm_table":[{"j":..,"k":..,"q":"a/b"},...],
 * "unit_name":[...], "generator_names":[[...],...]} (names optional). */
evp_status evp_algebra_from_manifest(const char* json_text, evp_algebra** out);
/* Opaque copy of an induced presentation with permuted distinguished
 * vectors; carries explicit unit and generator names. */
evp_status evp_algebra_permuted_copy(const evp_algebra* induced, evp_algebra** out);
void evp_algebra_free(evp_algebra* a);
evp_status evp_algebra_describe(const evp_algebra* a, char** json_out);
/* |result - ||p[gens]||| <= 2^-prec. */
evp_status evp_algebra_norm(const evp_algebra* a, const char* poly_text, long prec,
                            char** rational_out);
evp_status evp_algebra_norm_index(const evp_algebra* a, uint64_t index, long prec,
                                  char** rational_out);
/* Segments fixture: norm of p[gens] * Ind_level. */
evp_status evp_algebra_indicator_norm(const evp_algebra* a, const char* poly_text,
                                      unsigned long level, long prec, char** rational_out);
evp_status evp_algebra_diagram(const evp_algebra* a, size_t budget, char** jsonl_out);

/* --- Rational *-polynomials ---------------------------------------------- */

/* Text form: sum of terms "coef*x<j>[*]...", e.g. "3/2*x1*x2* - 1/1*x0". */
evp_status evp_poly_canonical(const char* text, char** canonical_out);
/* Position in the effective enumeration, as a decimal string. */
evp_status evp_poly_index(const char* text, char** index_decimal_out);
evp_status evp_poly_from_index(const char* index_decimal, char** text_out);

/* --- Evaluation ------------------------------------------------------------ */

/* "value ± 2^-prec" with the value printed exactly. */
evp_status evp_eval(const evp_algebra* induced, const char* poly_text, const evp_point* pt,
                    long prec, char** out);

/* --- Computable maps and duality ------------------------------------------- */

/* Labels: identity, one_minus_x, x_squared (unit_interval). */
evp_status evp_map_builtin(const char* label, const evp_space* domain, evp_map** out);
void evp_map_free(evp_map* m);
evp_status evp_map_apply(const evp_map* m, const evp_point* p, long prec, size_t* index_out);

/* Name of f∘psi certified level by level; JSON report with the approximant
 * polynomials per precision. */
evp_status evp_compose(const evp_map* psi, const evp_algebra* a0, const evp_algebra* a1,
                       const char* poly_text, long k_limit, uint64_t budget,
                       char** report_json);

/* Spatial realization of composition by psi, evaluated on the named point;
 * JSON report with the output name prefix and a consistency check. */
evp_status evp_banach_stone(const evp_map* psi, const evp_algebra* a0, const evp_algebra* a1,
                            const evp_point* lambda, long prec, uint64_t budget,
                            char** report_json);

/* vector_spec: "unit", "gen<N>", or "poly:<text>" (a rational vector of the
 * opaque presentation). */
evp_status evp_translate(const evp_algebra* opaque, const evp_algebra* induced,
                         const char* vector_spec, long k_limit, uint64_t budget,
                         char** report_json);

/* --- Cantor cover refinement -------------------------------------------------- */

/* JSONL: one {level, entries:[{sigma, center, radius}]} object per level,
 * plus a trailing {checks: ...} line. */
evp_status evp_cantor_homeo(const evp_space* xc, long depth, char** jsonl_out);

/* --- Acceptance ------------------------------------------------------------------ */

/* criteria_csv: e.g. "1,2,9"; NULL runs everything.  The report is
 * deterministic (no timings). */
evp_status evp_acceptance_run(const char* criteria_csv, char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* EVALPRES_H */
