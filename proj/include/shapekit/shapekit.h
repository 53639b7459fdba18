/* SPDX-License-Identifier: Apache-2.0 */
/* Copyright (C) 2026 shapekit contributors */
#ifndef SHAPEKIT_SHAPEKIT_H
#define SHAPEKIT_SHAPEKIT_H

/*
 * C interface to shapekit.
 *
 * Every fallible function returns SK_OK (0) or an error code; details for the
 * most recent failure on the calling thread are available from
 * sk_last_error(). Matrices are dense row-major double arrays. Strings
 * returned through char** are owned by the caller and released with
 * sk_string_free().
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(SHAPEKIT_BUILDING)
#define SK_API __declspec(dllexport)
#else
#define SK_API __declspec(dllimport)
#endif
#else
#define SK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* ---- status ---------------------------------------------------------- */

enum {
  SK_OK = 0,
  SK_ERR_EMPTY_INPUT = 1,
  SK_ERR_INVALID_COUNT = 2,
  SK_ERR_INVALID_CONFIG = 3,
  SK_ERR_DEGENERATE_FEATURE = 4,
  SK_ERR_INVALID_COST = 5,
  SK_ERR_PARSE = 6,
  SK_ERR_INVALID_BOX = 7,
  SK_ERR_INVALID_POSE = 8,
  SK_ERR_EMPTY_VIEW = 9,
  SK_ERR_SCHEMA = 10,
  SK_ERR_CONSISTENCY = 11,
  SK_ERR_JUDGE_UNAVAILABLE = 12,
  SK_ERR_IO = 13,
  SK_ERR_NULL_POINTER = 100,
  SK_ERR_BUFFER_TOO_SMALL = 101,
  SK_ERR_OUT_OF_MEMORY = 102,
  SK_ERR_UNKNOWN = 199
};

/* Stable name of a status code ("InvalidBox", "NullPointer", ...). */
SK_API const char* sk_error_name(int code);
/* Message of the last failure on this thread; "" after a success. */
SK_API const char* sk_last_error(void);
SK_API const char* sk_version(void);
SK_API void sk_string_free(char* s);
SK_API void sk_buffer_free(uint8_t* data);

/* ---- point clouds ---------------------------------------------------- */

typedef struct sk_cloud sk_cloud_t;

enum { SK_CLOUD_TEXT = 0, SK_CLOUD_PCB1 = 1 };

/* xyz holds n*3 values; rgb is NULL or n*3 values. */
SK_API int sk_cloud_create(const double* xyz, size_t n, const double* rgb, sk_cloud_t** out);
SK_API int sk_cloud_load(const char* path, sk_cloud_t** out);
SK_API int sk_cloud_save(const sk_cloud_t* cloud, const char* path, int format);
SK_API int sk_cloud_serialize(const sk_cloud_t* cloud, int format, uint8_t** data, size_t* size);
SK_API void sk_cloud_free(sk_cloud_t* cloud);
SK_API int sk_cloud_size(const sk_cloud_t* cloud, size_t* n);
SK_API int sk_cloud_has_colors(const sk_cloud_t* cloud, int* has_colors);
/* Copies n*3 values; capacity counts doubles. */
SK_API int sk_cloud_points(const sk_cloud_t* cloud, double* xyz, size_t capacity);
SK_API int sk_cloud_colors(const sk_cloud_t* cloud, double* rgb, size_t capacity);
SK_API int sk_cloud_normalize(const sk_cloud_t* cloud, sk_cloud_t** out);

/* ---- sampling and grouping ------------------------------------------ */

/* indices receives n_seeds entries. */
SK_API int sk_fps(const sk_cloud_t* cloud, size_t n_seeds, size_t start_index, size_t* indices);
/* members receives n_seeds*k indices (centroid first in each row);
 * relative is NULL or receives n_seeds*k*3 centered offsets. */
SK_API int sk_knn_group(const sk_cloud_t* cloud, const size_t* seeds, size_t n_seeds, size_t k,
                        size_t* members, double* relative);
SK_API int sk_chamfer(const sk_cloud_t* a, const sk_cloud_t* b, double* distance);

/* ---- corruption ------------------------------------------------------ */

enum { SK_SINGLE_VIEW = 0, SK_JITTER = 1, SK_ROTATE = 2, SK_AUGMENT = 3 };

typedef struct sk_corruption_spec {
  int kind;
  double sigma;
  double theta;
  double fov_deg;
  double camera_distance;
  uint32_t bins;
  double scale_min;
  double scale_max;
  double translate;
  uint64_t seed;
} sk_corruption_spec;

SK_API int sk_corruption_spec_default(int kind, sk_corruption_spec* spec);
SK_API int sk_corruption_kind_from_name(const char* name, int* kind);
/* kept is NULL or has room for the input size; it receives the ascending
 * input indices present in the output (all of them unless single view). */
SK_API int sk_corrupt(const sk_cloud_t* cloud, const sk_corruption_spec* spec, sk_cloud_t** out,
                      size_t* kept, size_t* n_kept);

/* ---- matching -------------------------------------------------------- */

/* views and queries are n*dim; cost receives n*n values of -cos. */
SK_API int sk_cosine_cost(const double* views, const double* queries, size_t n, size_t dim,
                          double* cost);
/* Square n*n cost; sigma receives n columns; total may be NULL. */
SK_API int sk_hungarian(const double* cost, size_t n, size_t* sigma, double* total);
/* grad is NULL or receives n*dim values (d loss / d queries). */
SK_API int sk_alignment_loss(const double* views, const double* queries, size_t n, size_t dim,
                             const size_t* sigma, double* loss, double* grad);

/* Reads a feature or cost matrix from whitespace text (one row per line)
 * or from a WB01 file holding a single rank-2 tensor. *data is row-major
 * and released with sk_matrix_free(). */
SK_API int sk_matrix_load(const char* path, double** data, size_t* rows, size_t* cols);
SK_API void sk_matrix_free(double* data);

/* ---- oriented boxes -------------------------------------------------- */

/* corners are 8*3 doubles. Boxes built from a pose use the canonical order
 * (corner i has sign bits x=4, y=2, z=1); parsed boxes keep the text order. */
SK_API int sk_box_parse(const char* text, double* corners);
SK_API int sk_box_format(const double* corners, char** text);
SK_API int sk_box_from_pose(const double* center, const double* half_extents,
                            const double* rotation, double* corners);
SK_API int sk_box_fit_pose(const double* corners, double* center, double* half_extents,
                           double* rotation);
SK_API int sk_box_iou(const double* a, const double* b, double* iou);

typedef struct sk_reg_summary {
  double accuracy;
  size_t hits;
  size_t total;
  size_t unusable_predictions;
} sk_reg_summary;

/* ious and hits are NULL or hold n entries; unusable predictions score 0. */
SK_API int sk_reg_accuracy(const char* const* predictions, const char* const* ground_truth,
                           size_t n, double threshold, sk_reg_summary* summary, double* ious,
                           int* hits);

/* ---- encoder --------------------------------------------------------- */

enum { SK_VARIANT_S = 0, SK_VARIANT_B = 1, SK_VARIANT_L = 2, SK_VARIANT_CUSTOM = 3 };
enum { SK_MASK_NONE = 0, SK_MASK_RANDOM = 1, SK_MASK_CAUSAL = 2 };

typedef struct sk_encoder_config {
  int variant;
  size_t layers;
  size_t hidden;
  size_t mlp;
  size_t heads;
  int mask_mode;
  double mask_ratio;
  size_t num_image_queries;
  int include_text_query;
  size_t prompt_length;
  size_t projector_out;
  size_t point_mlp_hidden;
  size_t projector_hidden1;
  size_t projector_hidden2;
} sk_encoder_config;

SK_API int sk_encoder_config_for_variant(int variant, sk_encoder_config* config);
SK_API int sk_variant_from_name(const char* name, int* variant);
SK_API int sk_mask_mode_from_name(const char* name, int* mode);

typedef struct sk_weights sk_weights_t;

SK_API int sk_weights_generate(const sk_encoder_config* config, uint64_t seed, sk_weights_t** out);
SK_API int sk_weights_load(const char* path, sk_weights_t** out);
SK_API int sk_weights_save(const sk_weights_t* weights, const char* path);
SK_API void sk_weights_free(sk_weights_t* weights);

typedef struct sk_encode_options {
  size_t n_seeds;
  size_t k;
  size_t start_index;
  uint64_t mask_seed;
} sk_encode_options;

SK_API void sk_encode_options_default(sk_encode_options* options);

typedef struct sk_bundle sk_bundle_t;

enum {
  SK_SEG_PROMPT_APE = 0,
  SK_SEG_APE = 1,
  SK_SEG_PROMPT_LOCAL = 2,
  SK_SEG_LOCAL = 3,
  SK_SEG_PROMPT_GLOBAL = 4,
  SK_SEG_GLOBAL = 5
};

SK_API int sk_encode(const sk_cloud_t* cloud, const sk_weights_t* weights,
                     const sk_encoder_config* config, const sk_encode_options* options,
                     sk_bundle_t** out);
SK_API void sk_bundle_free(sk_bundle_t* bundle);
SK_API int sk_bundle_shape(const sk_bundle_t* bundle, int segment, size_t* rows, size_t* cols);
/* capacity counts doubles. */
SK_API int sk_bundle_copy(const sk_bundle_t* bundle, int segment, double* out, size_t capacity);
/* Concatenation of all six segments in order. With out == NULL only the
 * shape is reported. */
SK_API int sk_bundle_assemble(const sk_bundle_t* bundle, double* out, size_t capacity, size_t* rows,
                              size_t* cols);

/* ---- evaluation ------------------------------------------------------ */

enum { SK_JUDGE_STUB = 0, SK_JUDGE_HTTP = 1 };
enum { SK_REPORT_JSON = 0, SK_REPORT_MARKDOWN = 1 };

typedef struct sk_eval_options {
  int judge;
  unsigned k_rounds;
  unsigned max_in_flight;
  unsigned max_retries;
  unsigned backoff_ms;
  uint64_t seed;
  /* HTTP judge settings; NULL falls back to JUDGE_ENDPOINT, JUDGE_MODEL
   * and JUDGE_API_KEY. */
  const char* endpoint;
  const char* model;
  const char* api_key;
  unsigned timeout_ms;
} sk_eval_options;

SK_API void sk_eval_options_default(sk_eval_options* options);
/* Ingests a JSON-lines file, scores it and renders the report. warnings is
 * NULL or receives newline-separated diagnostics (possibly empty). */
SK_API int sk_eval_run(const char* path, const sk_eval_options* options, int format, char** report,
                       size_t* n_unscored, char** warnings);
/* Re-renders a JSON report produced by sk_eval_run. */
SK_API int sk_report_render(const char* report_json, int format, char** out);
/* accuracy receives n_ks values. */
SK_API int sk_zeroshot_topk(const double* shapes, size_t n_shapes, const double* classes,
                            size_t n_classes, size_t dim, const size_t* labels, const size_t* ks,
                            size_t n_ks, double* accuracy);

#ifdef __cplusplus
}
#endif

#endif /* SHAPEKIT_SHAPEKIT_H */
