#ifndef SVGFORGE_H
#define SVGFORGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum SvgfStatus {
  SVGF_STATUS_OK = 0,
  SVGF_STATUS_NULL_ARGUMENT = 1,
  SVGF_STATUS_INVALID_UTF8 = 2,
  SVGF_STATUS_PARSE_ERROR = 3,
  SVGF_STATUS_NORMALIZE_ERROR = 4,
  SVGF_STATUS_SERIALIZE_ERROR = 5,
  SVGF_STATUS_INVALID_ARGUMENT = 6,
  SVGF_STATUS_PANIC = 7,
} SvgfStatus;

typedef enum SvgfColorCategory {
  SVGF_COLOR_CATEGORY_MONOCHROME = 0,
  SVGF_COLOR_CATEGORY_MULTICOLOR = 1,
} SvgfColorCategory;

typedef enum SvgfLevel {
  SVGF_LEVEL_MONOCOLOR_EASY = 0,
  SVGF_LEVEL_MONOCOLOR_DIFFICULT = 1,
  SVGF_LEVEL_MULTICOLOR_EASY = 2,
  SVGF_LEVEL_MULTICOLOR_DIFFICULT = 3,
  SVGF_LEVEL_OUT_OF_RANGE = 4,
} SvgfLevel;

typedef enum SvgfSemantics {
  // Saturates at beta once the generated count reaches the reference.
  SVGF_SEMANTICS_PROSE_CONSISTENT = 0,
  // `max(beta, beta * exp(-gamma * (N - N_gt)))` taken literally.
  SVGF_SEMANTICS_LITERAL_FORMULA = 1,
} SvgfSemantics;

// A normalized document.
typedef struct SvgfDocument SvgfDocument;

typedef struct SvgfClassification {
  enum SvgfColorCategory color_category;
  enum SvgfLevel level;
  uint64_t command_count;
  uint64_t path_count;
} SvgfClassification;

typedef struct SvgfReward {
  double integrity;
  double match_reward;
  double total;
  uint64_t n_generated;
  uint64_t n_reference;
} SvgfReward;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses and normalizes `svg`, storing a new handle in `*out`.
//
// # Safety
// `svg` must be a NUL-terminated string and `out` a valid pointer.
enum SvgfStatus svgf_normalize(const char *svg, struct SvgfDocument **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `doc` must come from [`svgf_normalize`] and not have been freed.
void svgf_document_free(struct SvgfDocument *doc);

// Canonical SVG text of a document, released with [`svgf_string_free`].
//
// # Safety
// `doc` must be a live handle and `out` a valid pointer.
enum SvgfStatus svgf_document_serialize(const struct SvgfDocument *doc, char **out);

// # Safety
// `s` must come from this library and not have been freed. Null is ignored.
void svgf_string_free(char *s);

// # Safety
// `doc` must be a live handle and `out` a valid pointer.
enum SvgfStatus svgf_document_classify(const struct SvgfDocument *doc,
                                       struct SvgfClassification *out);

// 1 if `svg` parses and normalizes to a non-empty document, else 0.
//
// # Safety
// `svg` must be null or a NUL-terminated string.
uint8_t svgf_integrity(const char *svg);

// Integrity plus path-count matching reward of `generated` against `reference`.
//
// `semantics` is an [`SvgfSemantics`] value.
//
// # Safety
// `generated` and `reference` must be NUL-terminated strings and `out` a valid pointer.
enum SvgfStatus svgf_reward(const char *generated,
                            const char *reference,
                            double alpha,
                            double beta,
                            double gamma,
                            uint32_t semantics,
                            struct SvgfReward *out);

// Message of the last failure on this thread, or null.
//
// The pointer stays valid until the next failing call on the same thread.
const char *svgf_last_error(void);

// Library version as a static string.
const char *svgf_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SVGFORGE_H */
