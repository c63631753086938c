/* Copyright 2026 The streamloop authors.
 * SPDX-License-Identifier: Apache-2.0
 *
 * C API of the streamloop shared library.
 *
 * Conventions:
 *   - Every fallible function returns an sl_status; SL_OK is 0. On failure the
 *     thread-local message from sl_last_error() describes the problem and all
 *     output parameters are left untouched.
 *   - Objects are opaque handles created by the library and released with the
 *     matching *_free function. Passing NULL to a *_free is a no-op.
 *   - Values are 64-bit floats with NaN encoding missing data. Timestamps are
 *     signed 64-bit nanoseconds since the Unix epoch.
 */

#ifndef STREAMLOOP_H_
#define STREAMLOOP_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sl_status {
  SL_OK = 0,
  SL_ERR_PARAM = 1,       /* invalid parameter value */
  SL_ERR_SHAPE = 2,       /* incompatible shapes */
  SL_ERR_EMPTY = 3,       /* empty input where data is required */
  SL_ERR_ORDERING = 4,    /* unsorted or duplicate timestamps */
  SL_ERR_CONSISTENCY = 5, /* schedule/data mismatch */
  SL_ERR_RANGE = 6,       /* index or code out of range */
  SL_ERR_NUMERIC = 7,     /* non-finite value where a finite one is required */
  SL_ERR_PARSE = 8,       /* malformed textual input */
  SL_ERR_UNKNOWN = 9
} sl_status;

/* Message for the most recent failure on this thread; valid until the next
 * failing call. Never NULL. */
const char* sl_last_error(void);
const char* sl_status_name(sl_status status);

/* ------------------------------------------------------------------ series */

/* A series is a timestamped sequence of rows sharing one shape. */
typedef struct sl_series sl_series;

/* Rows are row-major: data[i*row_width + j]. row_width == 1 creates scalar
 * rows, row_width > 1 vector rows. Timestamps must be strictly increasing. */
sl_status sl_series_create(const int64_t* timestamps, size_t len, size_t row_width,
                           const double* data, sl_series** out);
void sl_series_free(sl_series* s);

size_t sl_series_len(const sl_series* s);
size_t sl_series_row_width(const sl_series* s);
/* rank 0/1/2 with dims (d0, d1); scalar rows report d0 = d1 = 0. */
void sl_series_row_dims(const sl_series* s, int* rank, size_t* d0, size_t* d1);
const int64_t* sl_series_timestamps(const sl_series* s);
const double* sl_series_data(const sl_series* s);

/* -------------------------------------------------------------- transforms */

typedef struct sl_transform sl_transform;
typedef struct sl_state sl_state; /* (params, state) snapshot of a fold */

/* Builds a transform from a one-line spec such as "ewma alpha=0.5 adjust=true"
 * or "lag k=2". See the README for the full catalog. */
sl_status sl_transform_parse(const char* spec, sl_transform** out);

/* outer after inner. */
sl_status sl_transform_compose(const sl_transform* outer, const sl_transform* inner,
                               sl_transform** out);
void sl_transform_free(sl_transform* t);

/* Folds the transform over the input, threading state from init(seed, shape).
 * The output series keeps the input timestamps. final_state may be NULL when
 * the caller does not need to resume. */
sl_status sl_unroll(const sl_transform* t, uint64_t seed, const sl_series* input,
                    sl_series** output, sl_state** final_state);

/* Continues a fold from a saved snapshot. */
sl_status sl_unroll_resume(const sl_transform* t, const sl_state* from, const sl_series* input,
                           sl_series** output, sl_state** final_state);
void sl_state_free(sl_state* s);

/* ---------------------------------------------------------- stream syncing */

typedef struct sl_schedule sl_schedule;

typedef struct sl_stream_spec {
  const char* name;
  const int64_t* timestamps; /* non-decreasing; duplicates allowed */
  size_t len;
  int64_t latency_ns; /* event at ts becomes visible at ts + latency */
  size_t window;      /* 0 = forward fill, > 0 = buffer of that many events */
} sl_stream_spec;

/* Timestamp-only trace pass; guarantees no schedule entry references an event
 * later than the local step it is attached to. */
sl_status sl_sync_trace(const int64_t* local_timestamps, size_t local_len,
                        const sl_stream_spec* streams, size_t n_streams, sl_schedule** out);

/* Materializes merged rows: local row, then per stream the forward-filled row
 * or `window` stacked rows (oldest first, NaN-padded). streams[i] must carry
 * the payload of the i-th spec passed to sl_sync_trace. */
sl_status sl_sync_execute(const sl_schedule* schedule, const sl_series* local,
                          const sl_series* const* streams, size_t n_streams, sl_series** merged);

/* Schedule serialization (CSV, format documented in the README). The returned
 * string is released with sl_string_free. */
sl_status sl_schedule_to_csv(const sl_schedule* schedule, char** out);
sl_status sl_schedule_from_csv(const char* text, sl_schedule** out);
void sl_schedule_free(sl_schedule* s);
void sl_string_free(char* s);

/* ---------------------------------------------------------------- timecodec */

/* Splits a timestamp into an arithmetic high half and an unsigned low half:
 * value = hi * 2^32 + lo, exact for every 64-bit value. */
void sl_time_encode(int64_t ns, int32_t* hi, uint32_t* lo);
int64_t sl_time_decode(int32_t hi, uint32_t lo);

typedef struct sl_label_table sl_label_table;

/* Sorted-rank string coding: vocabulary is the sorted distinct inputs, one
 * code per input position. */
sl_status sl_label_encode(const char* const* strings, size_t n, sl_label_table** out);
size_t sl_label_table_vocab_size(const sl_label_table* t);
size_t sl_label_table_len(const sl_label_table* t);
const char* sl_label_table_vocab(const sl_label_table* t, size_t i);
size_t sl_label_table_code(const sl_label_table* t, size_t i);
/* Decoded string for position i (vocabulary[codes[i]]). */
sl_status sl_label_decode(const sl_label_table* t, size_t i, const char** out);
void sl_label_table_free(sl_label_table* t);

/* --------------------------------------------------------------------- rng */

/* Splittable counter-based generator; every draw is a pure function of
 * (key, counter). */
uint64_t sl_rng_split(uint64_t key, uint64_t stream);
double sl_rng_uniform(uint64_t key, uint64_t counter); /* [0, 1) */
double sl_rng_normal(uint64_t key, uint64_t counter);  /* standard normal */

/* ------------------------------------------------------------- learn loops */

/* Runs the online linear-regression experiment against an environment whose
 * true weights flip sign at flip_step (flip_step == steps disables the flip).
 * The record series has step-indexed timestamps 0..steps-1 and rows
 *   [loss, regret, w_hat_1..dim, w_star_1..dim, reward].
 * Deterministic per seed. */
sl_status sl_online_regression_run(uint64_t seed, size_t dim, size_t steps, size_t flip_step,
                                   double noise_std, double learning_rate, sl_series** record);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* STREAMLOOP_H_ */
