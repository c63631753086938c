// Copyright 2026 The streamloop authors.
// SPDX-License-Identifier: Apache-2.0

#include "streamloop/streamloop.h"

#include <cstring>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "streamloop/factory.hpp"
#include "streamloop/learnloop.hpp"
#include "streamloop/modules.hpp"
#include "streamloop/rng.hpp"
#include "streamloop/sync.hpp"
#include "streamloop/timecodec.hpp"
#include "streamloop/transform.hpp"

struct sl_series {
  streamloop::Sequence seq;
};

struct sl_transform {
  streamloop::TransformPtr t;
};

struct sl_state {
  streamloop::TensorMap params;
  streamloop::TensorMap state;
};

struct sl_schedule {
  streamloop::sync::Schedule s;
};

struct sl_label_table {
  streamloop::timecodec::LabelTable t;
};

namespace {

thread_local std::string g_last_error = "ok";

sl_status code_of(streamloop::Errc c) {
  using streamloop::Errc;
  switch (c) {
    case Errc::param: return SL_ERR_PARAM;
    case Errc::shape: return SL_ERR_SHAPE;
    case Errc::empty_input: return SL_ERR_EMPTY;
    case Errc::ordering: return SL_ERR_ORDERING;
    case Errc::consistency: return SL_ERR_CONSISTENCY;
    case Errc::range: return SL_ERR_RANGE;
    case Errc::numeric: return SL_ERR_NUMERIC;
    case Errc::parse: return SL_ERR_PARSE;
    default: return SL_ERR_UNKNOWN;
  }
}

template <typename F>
sl_status guarded(F&& f) {
  try {
    f();
    return SL_OK;
  } catch (const streamloop::Error& e) {
    g_last_error = e.what();
    return code_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SL_ERR_UNKNOWN;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SL_ERR_UNKNOWN;
  }
}

sl_status param_error(const char* message) {
  g_last_error = message;
  return SL_ERR_PARAM;
}

}  // namespace

extern "C" {

const char* sl_last_error(void) { return g_last_error.c_str(); }

const char* sl_status_name(sl_status status) {
  switch (status) {
    case SL_OK: return "ok";
    case SL_ERR_PARAM: return "param";
    case SL_ERR_SHAPE: return "shape";
    case SL_ERR_EMPTY: return "empty";
    case SL_ERR_ORDERING: return "ordering";
    case SL_ERR_CONSISTENCY: return "consistency";
    case SL_ERR_RANGE: return "range";
    case SL_ERR_NUMERIC: return "numeric";
    case SL_ERR_PARSE: return "parse";
    default: return "unknown";
  }
}

/* ------------------------------------------------------------------ series */

sl_status sl_series_create(const int64_t* timestamps, size_t len, size_t row_width,
                           const double* data, sl_series** out) {
  if (!out || (!timestamps && len > 0) || (!data && len > 0 && row_width > 0)) {
    return param_error("sl_series_create: null argument");
  }
  if (row_width == 0) return param_error("sl_series_create: row_width must be >= 1");
  return guarded([&] {
    const streamloop::Shape shape =
        row_width == 1 ? streamloop::Shape::scalar() : streamloop::Shape::vector(row_width);
    streamloop::Sequence seq(std::vector<int64_t>(timestamps, timestamps + len), shape,
                             std::vector<double>(data, data + len * row_width));
    *out = new sl_series{std::move(seq)};
  });
}

void sl_series_free(sl_series* s) { delete s; }

size_t sl_series_len(const sl_series* s) { return s ? s->seq.size() : 0; }

size_t sl_series_row_width(const sl_series* s) { return s ? s->seq.row_width() : 0; }

void sl_series_row_dims(const sl_series* s, int* rank, size_t* d0, size_t* d1) {
  if (!s) return;
  const streamloop::Shape& shape = s->seq.row_shape();
  if (rank) *rank = shape.rank;
  if (d0) *d0 = shape.d0;
  if (d1) *d1 = shape.d1;
}

const int64_t* sl_series_timestamps(const sl_series* s) {
  return s ? s->seq.timestamps().data() : nullptr;
}

const double* sl_series_data(const sl_series* s) { return s ? s->seq.data().data() : nullptr; }

/* -------------------------------------------------------------- transforms */

sl_status sl_transform_parse(const char* spec, sl_transform** out) {
  if (!spec || !out) return param_error("sl_transform_parse: null argument");
  return guarded([&] { *out = new sl_transform{streamloop::make_transform(spec)}; });
}

sl_status sl_transform_compose(const sl_transform* outer, const sl_transform* inner,
                               sl_transform** out) {
  if (!outer || !inner || !out) return param_error("sl_transform_compose: null argument");
  return guarded([&] { *out = new sl_transform{streamloop::compose(outer->t, inner->t)}; });
}

void sl_transform_free(sl_transform* t) { delete t; }

sl_status sl_unroll(const sl_transform* t, uint64_t seed, const sl_series* input,
                    sl_series** output, sl_state** final_state) {
  if (!t || !input || !output) return param_error("sl_unroll: null argument");
  return guarded([&] {
    streamloop::UnrollResult r = streamloop::unroll(*t->t, seed, input->seq);
    *output = new sl_series{std::move(r.output)};
    if (final_state) *final_state = new sl_state{std::move(r.params), std::move(r.state)};
  });
}

sl_status sl_unroll_resume(const sl_transform* t, const sl_state* from, const sl_series* input,
                           sl_series** output, sl_state** final_state) {
  if (!t || !from || !input || !output) return param_error("sl_unroll_resume: null argument");
  return guarded([&] {
    streamloop::UnrollResult r =
        streamloop::unroll_resume(*t->t, from->params, from->state, input->seq);
    *output = new sl_series{std::move(r.output)};
    if (final_state) *final_state = new sl_state{std::move(r.params), std::move(r.state)};
  });
}

void sl_state_free(sl_state* s) { delete s; }

/* ---------------------------------------------------------- stream syncing */

sl_status sl_sync_trace(const int64_t* local_timestamps, size_t local_len,
                        const sl_stream_spec* streams, size_t n_streams, sl_schedule** out) {
  if (!out || (!local_timestamps && local_len > 0) || (!streams && n_streams > 0)) {
    return param_error("sl_sync_trace: null argument");
  }
  return guarded([&] {
    std::vector<streamloop::sync::StreamSpec> specs;
    specs.reserve(n_streams);
    for (size_t i = 0; i < n_streams; ++i) {
      const sl_stream_spec& s = streams[i];
      streamloop::require(s.timestamps != nullptr || s.len == 0, streamloop::Errc::param,
                          "sl_sync_trace: null stream timestamps");
      streamloop::sync::StreamSpec spec;
      spec.name = s.name ? s.name : ("stream" + std::to_string(i));
      spec.timestamps.assign(s.timestamps, s.timestamps + s.len);
      spec.latency_ns = s.latency_ns;
      spec.mode = s.window == 0 ? streamloop::sync::Mode::forward_fill
                                : streamloop::sync::Mode::window;
      spec.window = s.window;
      specs.push_back(std::move(spec));
    }
    streamloop::sync::Schedule schedule = streamloop::sync::trace(
        std::vector<int64_t>(local_timestamps, local_timestamps + local_len), specs);
    *out = new sl_schedule{std::move(schedule)};
  });
}

sl_status sl_sync_execute(const sl_schedule* schedule, const sl_series* local,
                          const sl_series* const* streams, size_t n_streams, sl_series** merged) {
  if (!schedule || !local || !merged || (!streams && n_streams > 0)) {
    return param_error("sl_sync_execute: null argument");
  }
  return guarded([&] {
    streamloop::require(n_streams == schedule->s.plans().size(), streamloop::Errc::consistency,
                        "sl_sync_execute: stream count does not match schedule");
    std::vector<streamloop::Sequence> data;
    data.reserve(n_streams);
    for (size_t i = 0; i < n_streams; ++i) {
      streamloop::require(streams[i] != nullptr, streamloop::Errc::param,
                          "sl_sync_execute: null stream series");
      data.push_back(streams[i]->seq);
    }
    *merged = new sl_series{streamloop::sync::execute(schedule->s, local->seq, data)};
  });
}

sl_status sl_schedule_to_csv(const sl_schedule* schedule, char** out) {
  if (!schedule || !out) return param_error("sl_schedule_to_csv: null argument");
  return guarded([&] {
    const std::string text = schedule->s.to_csv();
    char* buf = new char[text.size() + 1];
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out = buf;
  });
}

sl_status sl_schedule_from_csv(const char* text, sl_schedule** out) {
  if (!text || !out) return param_error("sl_schedule_from_csv: null argument");
  return guarded(
      [&] { *out = new sl_schedule{streamloop::sync::Schedule::from_csv(text)}; });
}

void sl_schedule_free(sl_schedule* s) { delete s; }

void sl_string_free(char* s) { delete[] s; }

/* --------------------------------------------------------------- timecodec */

void sl_time_encode(int64_t ns, int32_t* hi, uint32_t* lo) {
  const streamloop::timecodec::EncodedTime e = streamloop::timecodec::encode_time(ns);
  if (hi) *hi = e.hi;
  if (lo) *lo = e.lo;
}

int64_t sl_time_decode(int32_t hi, uint32_t lo) {
  return streamloop::timecodec::decode_time({hi, lo});
}

sl_status sl_label_encode(const char* const* strings, size_t n, sl_label_table** out) {
  if (!out || (!strings && n > 0)) return param_error("sl_label_encode: null argument");
  return guarded([&] {
    std::vector<std::string> in;
    in.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      streamloop::require(strings[i] != nullptr, streamloop::Errc::param,
                          "sl_label_encode: null string");
      in.emplace_back(strings[i]);
    }
    *out = new sl_label_table{streamloop::timecodec::label_encode(in)};
  });
}

size_t sl_label_table_vocab_size(const sl_label_table* t) {
  return t ? t->t.vocabulary.size() : 0;
}

size_t sl_label_table_len(const sl_label_table* t) { return t ? t->t.codes.size() : 0; }

const char* sl_label_table_vocab(const sl_label_table* t, size_t i) {
  if (!t || i >= t->t.vocabulary.size()) return nullptr;
  return t->t.vocabulary[i].c_str();
}

size_t sl_label_table_code(const sl_label_table* t, size_t i) {
  return t && i < t->t.codes.size() ? t->t.codes[i] : static_cast<size_t>(-1);
}

sl_status sl_label_decode(const sl_label_table* t, size_t i, const char** out) {
  if (!t || !out) return param_error("sl_label_decode: null argument");
  return guarded([&] {
    streamloop::require(i < t->t.codes.size(), streamloop::Errc::range,
                        "sl_label_decode: position out of range");
    const size_t code = t->t.codes[i];
    streamloop::require(code < t->t.vocabulary.size(), streamloop::Errc::range,
                        "sl_label_decode: code out of range");
    *out = t->t.vocabulary[code].c_str();
  });
}

void sl_label_table_free(sl_label_table* t) { delete t; }

/* --------------------------------------------------------------------- rng */

uint64_t sl_rng_split(uint64_t key, uint64_t stream) {
  return streamloop::Rng(key).split(stream).key();
}

double sl_rng_uniform(uint64_t key, uint64_t counter) {
  return streamloop::Rng(key).uniform(counter);
}

double sl_rng_normal(uint64_t key, uint64_t counter) {
  return streamloop::Rng(key).normal(counter);
}

/* ------------------------------------------------------------- learn loops */

sl_status sl_online_regression_run(uint64_t seed, size_t dim, size_t steps, size_t flip_step,
                                   double noise_std, double learning_rate, sl_series** record) {
  if (!record) return param_error("sl_online_regression_run: null argument");
  return guarded([&] {
    streamloop::learnloop::ExperimentConfig config;
    config.seed = seed;
    config.dim = dim;
    config.steps = steps;
    config.flip_step = flip_step;
    config.noise_std = noise_std;
    config.learning_rate = learning_rate;
    const streamloop::learnloop::RunRecord run =
        streamloop::learnloop::nonstationary_regression_experiment(config);

    const size_t width = 3 + 2 * dim;
    std::vector<int64_t> ts(steps);
    std::vector<double> rows(steps * width);
    for (size_t t = 0; t < steps; ++t) {
      ts[t] = static_cast<int64_t>(t);
      double* row = rows.data() + t * width;
      row[0] = run.loss[t];
      row[1] = run.regret[t];
      for (size_t i = 0; i < dim; ++i) row[2 + i] = run.weights[t * dim + i];
      for (size_t i = 0; i < dim; ++i) row[2 + dim + i] = run.true_weights[t * dim + i];
      row[2 + 2 * dim] = run.reward[t];
    }
    *record = new sl_series{streamloop::Sequence(
        std::move(ts), streamloop::Shape::vector(width), std::move(rows))};
  });
}

} /* extern "C" */
