#ifndef DRWLOG_H
#define DRWLOG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible function.
typedef enum DrwlogStatus {
  DRWLOG_STATUS_OK = 0,
  DRWLOG_STATUS_NULL_POINTER = 1,
  DRWLOG_STATUS_INVALID_UTF8 = 2,
  DRWLOG_STATUS_PARSE = 3,
  DRWLOG_STATUS_INVALID_MODEL = 4,
  DRWLOG_STATUS_CONFIG = 5,
  DRWLOG_STATUS_SIZE_CLAMP = 6,
  DRWLOG_STATUS_NOT_IN_LOG_PART = 7,
  DRWLOG_STATUS_NO_REFINEMENT = 8,
  DRWLOG_STATUS_INTERNAL = 9,
  DRWLOG_STATUS_PANIC = 10,
} DrwlogStatus;

// Opaque local model.
typedef struct DrwlogModel DrwlogModel;

// Opaque verification report.
typedef struct DrwlogReport DrwlogReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. Valid until the next failing call
// on the same thread; do not free it.
const char *drwlog_last_error(void);

// Library version as a static string.
const char *drwlog_version(void);

// Builds a local model `A = Div(T_1…T_e)`, `B = Σ r_i Div(T_i)` in `r_len` variables.
//
// # Safety
// `r` must point to `r_len` readable `u32`s and `out` must be a valid pointer to write to.
enum DrwlogStatus drwlog_model_new(uint32_t p,
                                   uint32_t n,
                                   size_t e,
                                   size_t f,
                                   size_t g,
                                   const uint32_t *r,
                                   size_t r_len,
                                   uint32_t precision,
                                   struct DrwlogModel **out);

// Releases a model. Null is ignored.
//
// # Safety
// `model` must come from [`drwlog_model_new`] and not be used afterwards.
void drwlog_model_free(struct DrwlogModel *model);

// Runs one suite (`"thm1"`, `"decompose"`, `"lemma3"`, `"appendixB"`, `"appendixC"`,
// `"compare"`, `"bgk"`, `"thm2"`, `"cor1"`) on `model` for `q`-forms. For `lemma3` the report
// of the first failing cell is returned, or of the last cell when all pass.
//
// # Safety
// `model` must be a live handle, `suite` a nul-terminated string and `out` writable.
enum DrwlogStatus drwlog_verify(const struct DrwlogModel *model,
                                const char *suite,
                                size_t q,
                                uint64_t seed,
                                struct DrwlogReport **out);

// Whether every non-informational check of the report passed.
//
// # Safety
// `report` must be a live handle.
bool drwlog_report_passed(const struct DrwlogReport *report);

// Writes the compared dimensions.
//
// # Safety
// `report` must be a live handle; `lhs` and `rhs` must be writable.
enum DrwlogStatus drwlog_report_dims(const struct DrwlogReport *report, size_t *lhs, size_t *rhs);

// The report as JSON (schema 1). Free the string with [`drwlog_string_free`].
//
// # Safety
// `report` must be a live handle and `out` writable.
enum DrwlogStatus drwlog_report_json(const struct DrwlogReport *report, char **out);

// Releases a report. Null is ignored.
//
// # Safety
// `report` must come from [`drwlog_verify`] and not be used afterwards.
void drwlog_report_free(struct DrwlogReport *report);

// Factors a log form written in the expression language, e.g. `dlog(1+T1^2)`, into a sum of
// `dlog` products. Free the result with [`drwlog_string_free`].
//
// # Safety
// `model` must be a live handle, `form` a nul-terminated string and `out` writable.
enum DrwlogStatus drwlog_decompose(const struct DrwlogModel *model, const char *form, char **out);

// Runs a TOML scenario config. Writes the JSON report array to `out` and the CLI exit code
// (0 pass, 1 failure, 3 size clamp) to `exit_code`. Reports carry no timings.
//
// # Safety
// `config` must be a nul-terminated string; `out` and `exit_code` must be writable.
enum DrwlogStatus drwlog_run_config(const char *config, char **out, int32_t *exit_code);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void drwlog_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DRWLOG_H */
