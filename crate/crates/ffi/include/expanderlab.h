/* C interface to the expanderlab workbench. Generated by cbindgen; do not edit by hand. */

#ifndef EXPANDERLAB_H
#define EXPANDERLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// The call succeeded.
#define EXL_OK 0

// Filesystem or serialization failure.
#define EXL_ERR_IO 1

// Malformed or inconsistent input (bad JSON, NULL pointer, unknown name).
#define EXL_ERR_INVALID 2

// The request exceeds a configured resource budget.
#define EXL_ERR_BUDGET 3

// A constructed object failed its certification check.
#define EXL_ERR_CERTIFICATION 4

// An iterative solver ran out of iterations before reaching tolerance.
#define EXL_ERR_NONCONVERGENCE 5

// An internal invariant was violated; the message holds the panic text.
#define EXL_ERR_PANIC 6

// A generating family: a degree, a list of permutations, and their labels.
typedef struct ExlFamily ExlFamily;

// A graph presented as one vertex map per generator (Cayley or Schreier).
typedef struct ExlGraph ExlGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string. Do not free.
const char *exl_version(void);

// Message for the most recent failure on the calling thread (empty string
// if none). The pointer stays valid until the next failing call on the
// same thread. Do not free.
const char *exl_last_error(void);

// Releases a string returned through a `char**` out parameter.
// NULL is ignored.
//
// # Safety
// `s` must be a pointer previously returned by this library and not yet
// freed.
void exl_string_free(char *s);

// Parses a family from its JSON document (the `family.json` schema:
// kind, degree, elements in cycle notation, labels).
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be a valid pointer.
int32_t exl_family_from_json(const char *json, struct ExlFamily **out);

// Builds a family from an experiment-config JSON document (the same flat
// key set the CLI reads; unknown keys are rejected). An empty document
// `{}` builds the default K=7, d=2 union family on 49 points.
//
// # Safety
// `config_json` must be a NUL-terminated string; `out` must be valid.
int32_t exl_family_from_config_json(const char *config_json, struct ExlFamily **out);

// Serializes the family back to its JSON document.
//
// # Safety
// `family` must be a live handle; `out` must be valid. The returned string
// is released with `exl_string_free`.
int32_t exl_family_to_json(const struct ExlFamily *family, char **out);

// Number of points the family permutes.
//
// # Safety
// `family` must be a live handle; `out` must be valid.
int32_t exl_family_degree(const struct ExlFamily *family, uint64_t *out);

// Number of generators in the family (before inverse closure).
//
// # Safety
// `family` must be a live handle; `out` must be valid.
int32_t exl_family_element_count(const struct ExlFamily *family, uint64_t *out);

// Order of the group the family generates, as a decimal string, computed
// with a full deterministic stabilizer chain.
//
// # Safety
// `family` must be a live handle; `out` must be valid. The returned string
// is released with `exl_string_free`.
int32_t exl_family_order(const struct ExlFamily *family, uint64_t seed, char **out);

// Certifies that the family generates the full target group for its kind:
// the alternating group Alt(n) for even kinds, the symmetric group Sym(n)
// otherwise. Returns `EXL_OK` when the order matches, and
// `EXL_ERR_CERTIFICATION` (with the observed and expected orders in the
// error message) when it does not. `order_out` may be NULL; when given it
// receives the observed order as a decimal string.
//
// # Safety
// `family` must be a live handle. `order_out`, when non-NULL, receives a
// string released with `exl_string_free`.
int32_t exl_family_certify(const struct ExlFamily *family, uint64_t seed, char **order_out);

// Releases a family handle. NULL is ignored.
//
// # Safety
// `family` must be a live handle or NULL; it must not be used afterwards.
void exl_family_free(struct ExlFamily *family);

// Builds the action graph of a family. `kind` is one of
// "schreier_points" (vertices are points), "schreier_tuples" (vertices are
// ordered `tuple_r`-tuples of distinct points), or "cayley" (vertices are
// group elements; bounded by `max_vertices`). Generators are closed under
// inverses before edges are laid down.
//
// # Safety
// `family` must be a live handle; `kind` a NUL-terminated string; `out`
// valid. The graph is released with `exl_graph_free`.
int32_t exl_graph_build(const struct ExlFamily *family,
                        const char *kind,
                        uint64_t tuple_r,
                        uint64_t max_vertices,
                        struct ExlGraph **out);

// Number of vertices in the graph.
//
// # Safety
// `graph` must be a live handle; `out` must be valid.
int32_t exl_graph_vertex_count(const struct ExlGraph *graph, uint64_t *out);

// Second-largest eigenvalue of the normalized adjacency operator.
// `solver` is "auto", "dense", "power", or "lanczos"; "auto" uses the
// dense solver up to its vertex cap and Lanczos beyond it.
//
// # Safety
// `graph` must be a live handle; `solver` a NUL-terminated string; `out`
// must be valid.
int32_t exl_graph_lambda2(const struct ExlGraph *graph,
                          const char *solver,
                          double tol,
                          uint64_t seed,
                          double *out);

// Full spectral report (λ₂, gap, residual, iterations, …) as a JSON
// document identical to the CLI `spectrum.json` result payload.
//
// # Safety
// `graph` must be a live handle; `solver` a NUL-terminated string; `out`
// receives a string released with `exl_string_free`.
int32_t exl_graph_spectrum_json(const struct ExlGraph *graph,
                                const char *solver,
                                double tol,
                                uint64_t seed,
                                char **out);

// Edge-expansion report as JSON: the Cheeger bracket derived from λ₂,
// plus the exact expansion constant and a witness cut when the graph is
// small enough for exhaustive search.
//
// # Safety
// `graph` must be a live handle; `solver` a NUL-terminated string; `out`
// receives a string released with `exl_string_free`.
int32_t exl_graph_expansion_json(const struct ExlGraph *graph,
                                 const char *solver,
                                 double tol,
                                 uint64_t seed,
                                 char **out);

// Releases a graph handle. NULL is ignored.
//
// # Safety
// `graph` must be a live handle or NULL; it must not be used afterwards.
void exl_graph_free(struct ExlGraph *graph);

// Numeric Kazhdan-constant report for the finite group the family
// generates (JSON, identical to the CLI `kazhdan.json` result payload).
// The group order is capped; exceeding the cap is a budget error.
//
// # Safety
// `family` must be a live handle; `out` receives a string released with
// `exl_string_free`.
int32_t exl_kazhdan_json(const struct ExlFamily *family, uint64_t seed, char **out);

// Scans every irreducible character of Sym(n) in the standard scope
// (first row and column at most n − ⌈n^{1/4}⌉, support at least n/2) for
// the exponential decay bound with base max(λ₁/n, λ₁′/n, q) and exponent
// multiplier `c`, and fits the largest exponent the data supports.
// Returns the scan report as JSON.
//
// # Safety
// `out` receives a string released with `exl_string_free`.
int32_t exl_character_scan_json(uint64_t n, double c, double q, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EXPANDERLAB_H */
