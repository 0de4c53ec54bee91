#ifndef LATLAB_H
#define LATLAB_H

/* Generated by cbindgen from the latlab-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call in this interface.
typedef enum latlab_status {
  // The call succeeded.
  LATLAB_STATUS_OK = 0,
  // An internal invariant failed; always a bug, never an input problem.
  LATLAB_STATUS_INTERNAL_ERROR = 1,
  // The input was rejected (malformed JSON, schema violation, bad
  // parameter, precondition failure).
  LATLAB_STATUS_INVALID_INPUT = 2,
  // A required pointer argument was null.
  LATLAB_STATUS_NULL_ARGUMENT = 3,
} latlab_status;

// Opaque lattice handle. Create with [`latlab_lattice_from_json`],
// release with [`latlab_lattice_free`].
typedef struct latlab_lattice latlab_lattice;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the most recent failure on this thread. The pointer
// stays valid until the next failing call on the same thread; never free
// it.
const char *latlab_last_error_message(void);

// Parse a lattice from its JSON document (`{"label": ..., "gram": [[...]]}`).
// On success `*out` owns a new handle.
//
// # Safety
// `json` must be a valid NUL-terminated C string; `out` must be a valid
// pointer to write one pointer through.
enum latlab_status latlab_lattice_from_json(const char *json, struct latlab_lattice **out);

// Release a lattice handle. Null is a no-op.
//
// # Safety
// `lattice` must be a handle from this library, not yet freed.
void latlab_lattice_free(struct latlab_lattice *lattice);

// Rank of the lattice, or 0 on a null handle.
//
// # Safety
// `lattice` must be a live handle from this library.
size_t latlab_lattice_rank(const struct latlab_lattice *lattice);

// Serialize the lattice back to its canonical JSON document.
//
// # Safety
// `lattice` must be a live handle; `out` must be valid to write one
// pointer through. Free the result with [`latlab_string_free`].
enum latlab_status latlab_lattice_to_json(const struct latlab_lattice *lattice, char **out);

// Signed determinant of the Gram matrix as a decimal string.
//
// # Safety
// `lattice` must be a live handle; `out` must be valid to write one
// pointer through. Free the result with [`latlab_string_free`].
enum latlab_status latlab_lattice_det(const struct latlab_lattice *lattice, char **out);

// Divisibility of a vector (comma-separated integers) as a decimal
// string wrapped in JSON: `{"div": ...}`.
//
// # Safety
// `lattice` must be a live handle; `vector` a valid C string; `out`
// valid to write one pointer through. Free the result with
// [`latlab_string_free`].
enum latlab_status latlab_lattice_div_json(const struct latlab_lattice *lattice,
                                           const char *vector,
                                           char **out);

// Gluing report for a sublattice JSON document (`{"ambient": ...,
// "basis": ...}`): group order and invariant factors, the three
// discriminants, and the structural checks.
//
// # Safety
// `sublattice_json` must be a valid C string; `out` valid to write one
// pointer through. Free the result with [`latlab_string_free`].
enum latlab_status latlab_glue_report_json(const char *sublattice_json, char **out);

// Moduli invariants of a Mukai vector on a genus-`genus` surface of
// Picard rank one. `mukai` is comma-separated `r,d,s`. Pass
// `allow_ineffective = true` to skip the effectiveness gate.
//
// # Safety
// `mukai` must be a valid C string; `out` valid to write one pointer
// through. Free the result with [`latlab_string_free`].
enum latlab_status latlab_k3_moduli_json(uint64_t genus,
                                         const char *mukai,
                                         bool allow_ineffective,
                                         char **out);

// Obstruction table comparing the degree-0 and degree-(g-1) Picard
// moduli vectors for every genus in `[g_min, g_max]`, as a JSON array.
//
// # Safety
// `out` must be valid to write one pointer through. Free the result
// with [`latlab_string_free`].
enum latlab_status latlab_k3_counterexample_json(uint64_t g_min, uint64_t g_max, char **out);

// Release a string returned by this library. Null is a no-op.
//
// # Safety
// `s` must have been returned by this library, not yet freed.
void latlab_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* LATLAB_H */
