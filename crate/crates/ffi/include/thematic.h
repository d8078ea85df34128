#ifndef THEMATIC_H
#define THEMATIC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Status codes returned by every fallible call.
typedef enum ThmStatus {
  THM_STATUS_OK = 0,
  THM_STATUS_NULL_POINTER = 1,
  THM_STATUS_INVALID_UTF8 = 2,
  // Malformed JSON, unknown fields, inconsistent shapes in the input.
  THM_STATUS_PARSE_ERROR = 3,
  // Numerical failure: grid too coarse, not unimodular, inconsistent table.
  THM_STATUS_NUMERIC_ERROR = 4,
  // A singular value fell inside the guard band around the level.
  THM_STATUS_AMBIGUOUS_SPECTRUM = 5,
  THM_STATUS_INVALID_CONFIG = 6,
  THM_STATUS_BUFFER_TOO_SMALL = 7,
  THM_STATUS_PANIC = 8,
} ThmStatus;

// Opaque (partial) thematic factorization.
typedef struct ThmBundle ThmBundle;

// Opaque matrix function on the unit circle.
typedef struct ThmSymbol ThmSymbol;

// Grid and tolerance settings. Pass `NULL` wherever a config is accepted to use
// [`thm_config_default`].
typedef struct ThmConfig {
  size_t samples;
  double eq_tol;
  double sv_tol;
  double coeff_tol;
} ThmConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Default settings: 1024 samples, `eq_tol = 1e-9`, `sv_tol = 1e-6`, `coeff_tol = 1e-10`.
struct ThmConfig thm_config_default(void);

// Library version as a static NUL-terminated string.
const char *thm_version(void);

// Message for the last failed call on this thread, or `NULL`. Valid until the
// next call into the library on the same thread.
const char *thm_last_error_message(void);

// Parses a symbol from its JSON form.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum ThmStatus thm_symbol_from_json(const char *json, struct ThmSymbol **out);

// Releases a symbol; `NULL` is ignored.
//
// # Safety
// `symbol` must come from [`thm_symbol_from_json`] and not be used afterwards.
void thm_symbol_free(struct ThmSymbol *symbol);

// # Safety
// `symbol` must be a live handle; `rows` and `cols` must be writable.
enum ThmStatus thm_symbol_shape(const struct ThmSymbol *symbol, size_t *rows, size_t *cols);

// `‖H_Φ‖` at the exact (or automatically grown) truncation order.
//
// # Safety
// `symbol` must be a live handle; `config` may be `NULL`; `out` must be writable.
enum ThmStatus thm_hankel_norm(const struct ThmSymbol *symbol,
                               const struct ThmConfig *config,
                               double *out);

// `ι(H_Φ)`; `*zero_hankel` is set when the Hankel operator vanishes.
//
// # Safety
// `symbol` must be a live handle; `config` may be `NULL`; outputs must be writable.
enum ThmStatus thm_iota(const struct ThmSymbol *symbol,
                        const struct ThmConfig *config,
                        size_t *out,
                        bool *zero_hankel);

// Maximizing dimensions `D(0), D(1), …` at `level`, up to the first zero.
//
// # Safety
// `symbol` must be a live handle; `config` may be `NULL`; `buf` must hold `cap`
// values; `len` must be writable.
enum ThmStatus thm_dim_table(const struct ThmSymbol *symbol,
                             double level,
                             const struct ThmConfig *config,
                             size_t *buf,
                             size_t cap,
                             size_t *len);

// Monotone thematic indices at level `‖H_Φ‖`, nonincreasing.
//
// # Safety
// As for [`thm_dim_table`].
enum ThmStatus thm_recover_indices(const struct ThmSymbol *symbol,
                                   const struct ThmConfig *config,
                                   size_t *buf,
                                   size_t cap,
                                   size_t *len);

// Full `analyze` report as a JSON string, to be released with [`thm_string_free`].
//
// # Safety
// `symbol` must be a live handle; `config` may be `NULL`; `out` must be writable.
enum ThmStatus thm_analyze_json(const struct ThmSymbol *symbol,
                                const struct ThmConfig *config,
                                char **out);

// Releases a string returned by the library; `NULL` is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void thm_string_free(char *s);

// Parses a factor bundle from its JSON form.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum ThmStatus thm_bundle_from_json(const char *json, struct ThmBundle **out);

// Releases a bundle; `NULL` is ignored.
//
// # Safety
// `bundle` must come from [`thm_bundle_from_json`] and not be used afterwards.
void thm_bundle_free(struct ThmBundle *bundle);

// Composes the bundle into a new symbol handle.
//
// # Safety
// `bundle` must be a live handle; `out` must be writable.
enum ThmStatus thm_bundle_compose(const struct ThmBundle *bundle, struct ThmSymbol **out);

// Verifies the bundle against `symbol`. A failed verification is reported
// through `*ok = false` with status `THM_OK`; the failing checks are available
// through [`thm_last_error_message`].
//
// # Safety
// Handles must be live; `config` may be `NULL`; `ok` must be writable.
enum ThmStatus thm_bundle_verify(const struct ThmBundle *bundle,
                                 const struct ThmSymbol *symbol,
                                 const struct ThmConfig *config,
                                 bool *ok);

// Thematic indices `ind T_{u_j}` of the bundle in slot order.
//
// # Safety
// `bundle` must be a live handle; `config` may be `NULL`; `buf` must hold `cap`
// values; `len` must be writable.
enum ThmStatus thm_bundle_indices(const struct ThmBundle *bundle,
                                  const struct ThmConfig *config,
                                  int64_t *buf,
                                  size_t cap,
                                  size_t *len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* THEMATIC_H */
