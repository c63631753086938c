// Copyright 2026 The streamloop authors.
// SPDX-License-Identifier: Apache-2.0
//
// Brute-force reference implementations used as oracles by the unit and
// acceptance suites. Everything here recomputes results directly from raw
// prefixes (O(t) per step, O(t^2) per sequence) and stays independent of the
// incremental implementations in src/.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "streamloop/learnloop.hpp"
#include "streamloop/modules.hpp"

namespace oracle {

inline constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Exact NaN-aware equality: equal values (covers +-0) or both NaN.
inline bool exact_eq(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
  return a == b;
}

inline bool close_eq(double a, double b, double abs_tol) {
  if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
  return std::fabs(a - b) <= abs_tol;
}

// ----------------------------------------------------------------- EW family
//
// Weight of valid observation i in the prefix [0..t]:
//   adjust=true,  ignore_na=false: (1-alpha)^(t-i)          (rows decay)
//   adjust=true,  ignore_na=true : (1-alpha)^(#valid after i)
//   adjust=false: by valid rank j among m valid entries:
//                 first entry (1-alpha)^(m-1), later ones alpha*(1-alpha)^(m-1-j)
// A NaN row emits: the weighted value so far (adjust=true), the held value
// (adjust=false, ignore_na=true) or NaN (adjust=false, ignore_na=false).

struct EwWeights {
  std::vector<std::size_t> index;
  std::vector<double> weight;
};

inline EwWeights ew_weights(std::size_t t, const streamloop::EwSpec& spec,
                            const std::function<bool(std::size_t)>& valid) {
  EwWeights w;
  for (std::size_t i = 0; i <= t; ++i) {
    if (valid(i)) w.index.push_back(i);
  }
  const double r = 1.0 - spec.alpha;
  const std::size_t m = w.index.size();
  w.weight.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    if (spec.adjust) {
      if (spec.ignore_na) {
        w.weight[j] = std::pow(r, static_cast<double>(m - 1 - j));
      } else {
        w.weight[j] = std::pow(r, static_cast<double>(t - w.index[j]));
      }
    } else {
      w.weight[j] = j == 0 ? std::pow(r, static_cast<double>(m - 1))
                           : spec.alpha * std::pow(r, static_cast<double>(m - 1 - j));
    }
  }
  return w;
}

inline double ewma_at(std::span<const double> x, std::size_t t, const streamloop::EwSpec& spec) {
  const bool valid_t = !std::isnan(x[t]);
  if (!spec.adjust && !valid_t) {
    if (!spec.ignore_na) return kNan;  // emits NaN once, resumes on next valid row
  }
  const EwWeights w = ew_weights(t, spec, [&](std::size_t i) { return !std::isnan(x[i]); });
  double sw = 0.0, swx = 0.0;
  for (std::size_t j = 0; j < w.index.size(); ++j) {
    sw += w.weight[j];
    swx += w.weight[j] * x[w.index[j]];
  }
  return sw > 0.0 ? swx / sw : kNan;
}

inline double ew_second_moment(const EwWeights& w,
                               const std::function<double(std::size_t)>& dev_x,
                               const std::function<double(std::size_t)>& dev_y) {
  double sw = 0.0, swsq = 0.0, sdev = 0.0;
  for (std::size_t j = 0; j < w.index.size(); ++j) {
    sw += w.weight[j];
    swsq += w.weight[j] * w.weight[j];
    sdev += w.weight[j] * dev_x(w.index[j]) * dev_y(w.index[j]);
  }
  if (sw <= 0.0) return kNan;
  const double denom = sw - swsq / sw;
  return denom > 0.0 ? sdev / denom : kNan;
}

inline double ewmvar_at(std::span<const double> x, std::size_t t, const streamloop::EwSpec& spec) {
  const bool valid_t = !std::isnan(x[t]);
  if (!spec.adjust && !valid_t && !spec.ignore_na) return kNan;
  const EwWeights w = ew_weights(t, spec, [&](std::size_t i) { return !std::isnan(x[i]); });
  double sw = 0.0, swx = 0.0;
  for (std::size_t j = 0; j < w.index.size(); ++j) {
    sw += w.weight[j];
    swx += w.weight[j] * x[w.index[j]];
  }
  if (sw <= 0.0) return kNan;
  const double mu = swx / sw;
  const auto dev = [&](std::size_t i) { return x[i] - mu; };
  return ew_second_moment(w, dev, dev);
}

inline double ewmcov_at(std::span<const double> x, std::span<const double> y, std::size_t t,
                        const streamloop::EwSpec& spec) {
  const auto valid = [&](std::size_t i) { return !std::isnan(x[i]) && !std::isnan(y[i]); };
  if (!spec.adjust && !valid(t) && !spec.ignore_na) return kNan;
  const EwWeights w = ew_weights(t, spec, valid);
  double sw = 0.0, swx = 0.0, swy = 0.0;
  for (std::size_t j = 0; j < w.index.size(); ++j) {
    sw += w.weight[j];
    swx += w.weight[j] * x[w.index[j]];
    swy += w.weight[j] * y[w.index[j]];
  }
  if (sw <= 0.0) return kNan;
  const double mx = swx / sw;
  const double my = swy / sw;
  return ew_second_moment(
      w, [&](std::size_t i) { return x[i] - mx; }, [&](std::size_t i) { return y[i] - my; });
}

// ------------------------------------------------------------ exact operators

inline std::vector<double> lag_series(std::span<const double> x, std::size_t k) {
  std::vector<double> out(x.size(), kNan);
  for (std::size_t t = k; t < x.size(); ++t) out[t] = x[t - k];
  return out;
}

inline std::vector<double> diff_series(std::span<const double> x, std::size_t k) {
  std::vector<double> out(x.size(), kNan);
  for (std::size_t t = k; t < x.size(); ++t) out[t] = x[t] - x[t - k];
  return out;
}

inline std::vector<double> pct_change_series(std::span<const double> x, std::size_t k) {
  std::vector<double> out(x.size(), kNan);
  for (std::size_t t = k; t < x.size(); ++t) {
    out[t] = x[t - k] == 0.0 ? kNan : x[t] / x[t - k] - 1.0;
  }
  return out;
}

// Row t of buffer(n): the last n inputs, oldest first, NaN-padded in front.
inline std::vector<double> buffer_row(std::span<const double> x, std::size_t t, std::size_t n) {
  std::vector<double> row(n, kNan);
  for (std::size_t j = 0; j < n; ++j) {
    const std::ptrdiff_t idx = static_cast<std::ptrdiff_t>(t) - static_cast<std::ptrdiff_t>(n) +
                               1 + static_cast<std::ptrdiff_t>(j);
    if (idx >= 0) row[j] = x[static_cast<std::size_t>(idx)];
  }
  return row;
}

// Summed oldest to newest, like the implementation, so comparisons can be
// bit-exact.
inline std::vector<double> rolling_mean_series(std::span<const double> x, std::size_t length,
                                               std::size_t min_periods) {
  std::vector<double> out(x.size(), kNan);
  for (std::size_t t = 0; t < x.size(); ++t) {
    const std::size_t lo = t + 1 >= length ? t + 1 - length : 0;
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = lo; i <= t; ++i) {
      if (!std::isnan(x[i])) {
        sum += x[i];
        ++count;
      }
    }
    if (count >= min_periods) out[t] = sum / static_cast<double>(count);
  }
  return out;
}

// update_on_event with a scalar payload: replays the inner reference on the
// payloads of the events seen so far.
inline std::vector<double> update_on_event_series(
    std::span<const double> events, std::span<const double> payload, double initial,
    const std::function<std::vector<double>(std::span<const double>)>& inner_reference) {
  std::vector<double> out(events.size(), initial);
  std::vector<double> fired;
  for (std::size_t t = 0; t < events.size(); ++t) {
    if (!std::isnan(events[t]) && events[t] != 0.0) fired.push_back(payload[t]);
    if (!fired.empty()) out[t] = inner_reference(fired).back();
  }
  return out;
}

// Per-step OHLC recomputed from the segment start. Steps before the first
// reset form an implicit segment whose open is NaN.
inline std::vector<std::array<double, 4>> ohlc_series(std::span<const double> values,
                                                      const std::vector<bool>& resets) {
  std::vector<std::array<double, 4>> out(values.size());
  for (std::size_t t = 0; t < values.size(); ++t) {
    std::optional<std::size_t> seg_start;
    for (std::size_t s = 0; s <= t; ++s) {
      if (resets[s]) seg_start = s;
    }
    const std::size_t lo = seg_start.value_or(0);
    double high = kNan, low = kNan;
    for (std::size_t i = lo; i <= t; ++i) {
      high = std::fmax(high, values[i]);
      low = std::fmin(low, values[i]);
    }
    out[t] = {seg_start ? values[*seg_start] : kNan, high, low, values[t]};
  }
  return out;
}

// -------------------------------------------------------------------- sync

inline std::optional<std::size_t> ffill_index_at(std::span<const std::int64_t> local,
                                                 std::span<const std::int64_t> stream,
                                                 std::int64_t latency, std::size_t t) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    if (stream[i] + latency <= local[t]) best = i;
  }
  return best;
}

struct WindowRef {
  std::vector<std::size_t> claimed;  // admissible events before truncation
  std::vector<std::size_t> kept;     // after keeping the newest `window`
};

inline WindowRef window_at(std::span<const std::int64_t> local, std::span<const std::int64_t> stream,
                           std::int64_t latency, std::size_t window, std::size_t t) {
  WindowRef ref;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const std::int64_t visible = stream[i] + latency;
    const bool after_prev = t == 0 || visible > local[t - 1];
    if (after_prev && visible <= local[t]) ref.claimed.push_back(i);
  }
  const std::size_t keep = std::min(window, ref.claimed.size());
  ref.kept.assign(ref.claimed.end() - static_cast<std::ptrdiff_t>(keep), ref.claimed.end());
  return ref;
}

// -------------------------------------------------------------- learn loops

struct SgdTrace {
  std::vector<double> prediction;
  std::vector<double> loss;
  std::vector<double> weights_before;  // row-major steps x dim
};

// Explicit SGD loop over (x, y) pairs with squared loss, mirroring the
// documented update w <- w - lr * 2 (w.x - y) x.
inline SgdTrace sgd_loop(std::span<const double> xs, std::span<const double> ys, std::size_t dim,
                         double lr, std::vector<double> w) {
  SgdTrace trace;
  const std::size_t steps = ys.size();
  for (std::size_t t = 0; t < steps; ++t) {
    std::span<const double> x = xs.subspan(t * dim, dim);
    double p = 0.0;
    for (std::size_t i = 0; i < dim; ++i) p += w[i] * x[i];
    trace.prediction.push_back(p);
    trace.loss.push_back((p - ys[t]) * (p - ys[t]));
    trace.weights_before.insert(trace.weights_before.end(), w.begin(), w.end());
    const double e = p - ys[t];
    for (std::size_t i = 0; i < dim; ++i) w[i] -= lr * 2.0 * e * x[i];
  }
  return trace;
}

// Central finite differences of loss(predict(w, x), y) in w.
inline std::vector<double> finite_diff_grad(const streamloop::learnloop::SupervisedModel& model,
                                            std::vector<double> w, std::span<const double> x,
                                            double y) {
  std::vector<double> g(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double h = 1e-6 * std::max(1.0, std::fabs(w[i]));
    const double keep = w[i];
    w[i] = keep + h;
    const double up = model.loss(model.predict(w, x), y);
    w[i] = keep - h;
    const double down = model.loss(model.predict(w, x), y);
    w[i] = keep;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

}  // namespace oracle
