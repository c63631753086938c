// Copyright 2026 The streamloop authors.
// SPDX-License-Identifier: Apache-2.0

#include "streamloop/modules.hpp"

#include <cmath>
#include <utility>

namespace streamloop {

namespace {

// History-keeping operators stack k copies of the input row: scalar inputs
// keep a vector[k], vector[d] inputs a matrix[k x d]. Oldest row first.
Shape stacked_shape(const Shape& row, std::size_t k) {
  switch (row.rank) {
    case 0: return Shape::vector(k);
    case 1: return Shape::matrix(k, row.d0);
    default:
      fail(Errc::shape, "history operators support scalar or vector rows, got " + row.str());
  }
}

// Drops the oldest row and appends x at the end.
void shift_in(Tensor& hist, const Tensor& x) {
  auto h = hist.values();
  const std::size_t w = x.size();
  const std::size_t n = h.size() / w;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = 0; j < w; ++j) h[i * w + j] = h[(i + 1) * w + j];
  }
  auto xv = x.values();
  for (std::size_t j = 0; j < w; ++j) h[(n - 1) * w + j] = xv[j];
}

Tensor oldest_row(const Tensor& hist, const Shape& row_shape) {
  auto h = hist.values();
  return Tensor(row_shape, std::vector<double>(h.begin(), h.begin() + row_shape.size()));
}

const Tensor& state_at(const TensorMap& state, const std::string& key) {
  auto it = state.find(key);
  require(it != state.end(), Errc::consistency, "missing state entry '" + key + "'");
  return it->second;
}

class BufferT final : public Transform {
 public:
  explicit BufferT(std::size_t n) : n_(n) { require(n_ >= 1, Errc::param, "buffer: n must be >= 1"); }

  std::string name() const override { return "buffer"; }
  Shape output_shape(const Shape& input) const override { return stacked_shape(input, n_); }

  InitResult init(std::uint64_t, const Shape& input) const override {
    InitResult r;
    r.state.emplace("buf", Tensor::nans(stacked_shape(input, n_)));
    return r;
  }

  ApplyResult apply(const TensorMap&, TensorMap state, const Tensor& input) const override {
    Tensor buf = state_at(state, "buf");
    shift_in(buf, input);
    state.insert_or_assign("buf", buf);
    return ApplyResult{std::move(buf), std::move(state)};
  }

 private:
  std::size_t n_;
};

// Base for lag/diff/pct_change: holds the last k inputs and combines the
// current input with input[t-k].
class KHistoryT : public Transform {
 public:
  KHistoryT(std::string kind, std::size_t k) : kind_(std::move(kind)), k_(k) {
    require(k_ >= 1, Errc::param, kind_ + ": k must be >= 1");
  }

  std::string name() const override { return kind_; }
  Shape output_shape(const Shape& input) const override {
    stacked_shape(input, k_);  // validates rank
    return input;
  }

  InitResult init(std::uint64_t, const Shape& input) const override {
    InitResult r;
    r.state.emplace("buf", Tensor::nans(stacked_shape(input, k_)));
    return r;
  }

  ApplyResult apply(const TensorMap&, TensorMap state, const Tensor& input) const override {
    Tensor buf = state_at(state, "buf");
    Tensor delayed = oldest_row(buf, input.shape());
    shift_in(buf, input);
    state.insert_or_assign("buf", std::move(buf));
    Tensor out = input;
    auto o = out.values();
    auto d = delayed.values();
    auto x = input.values();
    for (std::size_t j = 0; j < o.size(); ++j) o[j] = combine(x[j], d[j]);
    return ApplyResult{std::move(out), std::move(state)};
  }

 protected:
  virtual double combine(double current, double delayed) const = 0;

 private:
  std::string kind_;
  std::size_t k_;
};

class LagT final : public KHistoryT {
 public:
  explicit LagT(std::size_t k) : KHistoryT("lag", k) {}

 protected:
  double combine(double, double delayed) const override { return delayed; }
};

class DiffT final : public KHistoryT {
 public:
  explicit DiffT(std::size_t k) : KHistoryT("diff", k) {}

 protected:
  double combine(double current, double delayed) const override { return current - delayed; }
};

class PctChangeT final : public KHistoryT {
 public:
  explicit PctChangeT(std::size_t k) : KHistoryT("pct_change", k) {}

 protected:
  double combine(double current, double delayed) const override {
    if (delayed == 0.0) return kNan;  // keep the NaN-as-missing convention total
    return current / delayed - 1.0;
  }
};

class RollingMeanT final : public Transform {
 public:
  explicit RollingMeanT(WindowSpec w) : length_(w.length), min_periods_(w.effective_min_periods()) {
    require(length_ >= 1, Errc::param, "rolling_mean: length must be >= 1");
    require(min_periods_ >= 1 && min_periods_ <= length_, Errc::param,
            "rolling_mean: need 1 <= min_periods <= length");
  }

  std::string name() const override { return "rolling_mean"; }
  Shape output_shape(const Shape& input) const override {
    stacked_shape(input, length_);
    return input;
  }

  InitResult init(std::uint64_t, const Shape& input) const override {
    InitResult r;
    r.state.emplace("win", Tensor::nans(stacked_shape(input, length_)));
    return r;
  }

  ApplyResult apply(const TensorMap&, TensorMap state, const Tensor& input) const override {
    Tensor win = state_at(state, "win");
    shift_in(win, input);
    Tensor out = input;
    auto o = out.values();
    auto h = win.values();
    const std::size_t w = input.size();
    // Summed oldest to newest so results match a direct window recomputation
    // bit for bit.
    for (std::size_t j = 0; j < w; ++j) {
      double sum = 0.0;
      std::size_t count = 0;
      for (std::size_t i = 0; i < length_; ++i) {
        const double v = h[i * w + j];
        if (!std::isnan(v)) {
          sum += v;
          ++count;
        }
      }
      o[j] = count >= min_periods_ ? sum / static_cast<double>(count) : kNan;
    }
    state.insert_or_assign("win", std::move(win));
    return ApplyResult{std::move(out), std::move(state)};
  }

 private:
  std::size_t length_;
  std::size_t min_periods_;
};

void validate_ew(const EwSpec& spec, const char* what) {
  require(std::isfinite(spec.alpha) && spec.alpha > 0.0 && spec.alpha <= 1.0, Errc::param,
          std::string(what) + ": alpha must be in (0, 1]");
}

class EwmaT final : public Transform {
 public:
  explicit EwmaT(EwSpec spec) : spec_(spec) { validate_ew(spec_, "ewma"); }

  std::string name() const override { return "ewma"; }
  Shape output_shape(const Shape& input) const override { return input; }

  InitResult init(std::uint64_t, const Shape& input) const override {
    InitResult r;
    if (spec_.adjust) {
      r.state.emplace("num", Tensor::full(input, 0.0));
      r.state.emplace("den", Tensor::full(input, 0.0));
    } else {
      r.state.emplace("mean", Tensor::nans(input));
    }
    return r;
  }

  ApplyResult apply(const TensorMap&, TensorMap state, const Tensor& input) const override {
    const double r = 1.0 - spec_.alpha;
    Tensor out = input;
    auto o = out.values();
    auto x = input.values();
    if (spec_.adjust) {
      Tensor num = state_at(state, "num");
      Tensor den = state_at(state, "den");
      auto nv = num.values();
      auto dv = den.values();
      for (std::size_t j = 0; j < o.size(); ++j) {
        if (!std::isnan(x[j])) {
          nv[j] = nv[j] * r + x[j];
          dv[j] = dv[j] * r + 1.0;
        } else if (!spec_.ignore_na) {
          nv[j] *= r;
          dv[j] *= r;
        }
        o[j] = dv[j] > 0.0 ? nv[j] / dv[j] : kNan;
      }
      state.insert_or_assign("num", std::move(num));
      state.insert_or_assign("den", std::move(den));
    } else {
      Tensor mean = state_at(state, "mean");
      auto mv = mean.values();
      for (std::size_t j = 0; j < o.size(); ++j) {
        if (!std::isnan(x[j])) {
          mv[j] = std::isnan(mv[j]) ? x[j] : spec_.alpha * x[j] + r * mv[j];
          o[j] = mv[j];
        } else {
          o[j] = spec_.ignore_na ? mv[j] : kNan;
        }
      }
      state.insert_or_assign("mean", std::move(mean));
    }
    return ApplyResult{std::move(out), std::move(state)};
  }

 private:
  EwSpec spec_;
};

// Shared weighted-moment update for variance/covariance. Aggregates: total
// weight s0, total squared weight s0sq, weighted means, and the weighted
// (co)moment. Debiased estimate = comoment / (s0 - s0sq/s0).
struct EwMoments {
  double s0 = 0.0;
  double s0sq = 0.0;
};

class EwmVarT final : public Transform {
 public:
  explicit EwmVarT(EwSpec spec) : spec_(spec) { validate_ew(spec_, "ewmvar"); }

  std::string name() const override { return "ewmvar"; }
  Shape output_shape(const Shape& input) const override { return input; }

  InitResult init(std::uint64_t, const Shape& input) const override {
    InitResult r;
    for (const char* key : {"s0", "s0sq", "mean", "m2"}) {
      r.state.emplace(key, Tensor::full(input, 0.0));
    }
    return r;
  }

  ApplyResult apply(const TensorMap&, TensorMap state, const Tensor& input) const override {
    const double r = 1.0 - spec_.alpha;
    Tensor s0 = state_at(state, "s0");
    Tensor s0sq = state_at(state, "s0sq");
    Tensor mean = state_at(state, "mean");
    Tensor m2 = state_at(state, "m2");
    Tensor out = input;
    auto o = out.values();
    auto x = input.values();
    auto s0v = s0.values();
    auto sqv = s0sq.values();
    auto mv = mean.values();
    auto m2v = m2.values();
    for (std::size_t j = 0; j < o.size(); ++j) {
      const bool valid = !std::isnan(x[j]);
      bool emit_nan_once = false;
      if (spec_.adjust) {
        if (valid || !spec_.ignore_na) {
          s0v[j] *= r;
          sqv[j] *= r * r;
          m2v[j] *= r;
        }
        if (valid) add(s0v[j], sqv[j], mv[j], m2v[j], 1.0, x[j]);
      } else {
        if (valid) {
          double a = spec_.alpha;
          if (s0v[j] == 0.0) {
            a = 1.0;  // first observation carries full weight
          } else {
            s0v[j] *= r;
            sqv[j] *= r * r;
            m2v[j] *= r;
          }
          add(s0v[j], sqv[j], mv[j], m2v[j], a, x[j]);
        } else {
          emit_nan_once = !spec_.ignore_na;
        }
      }
      const double denom = s0v[j] > 0.0 ? s0v[j] - sqv[j] / s0v[j] : 0.0;
      const double var = denom > 0.0 ? std::max(0.0, m2v[j] / denom) : kNan;
      o[j] = emit_nan_once ? kNan : var;
    }
    state.insert_or_assign("s0", std::move(s0));
    state.insert_or_assign("s0sq", std::move(s0sq));
    state.insert_or_assign("mean", std::move(mean));
    state.insert_or_assign("m2", std::move(m2));
    return ApplyResult{std::move(out), std::move(state)};
  }

 private:
  static void add(double& s0, double& s0sq, double& mean, double& m2, double a, double x) {
    const double s0_new = s0 + a;
    const double delta = x - mean;
    mean += (a / s0_new) * delta;
    m2 += a * delta * (x - mean);
    s0sq += a * a;
    s0 = s0_new;
  }

  EwSpec spec_;
};

class EwmCovT final : public Transform {
 public:
  explicit EwmCovT(EwSpec spec) : spec_(spec) { validate_ew(spec_, "ewmcov"); }

  std::string name() const override { return "ewmcov"; }

  Shape output_shape(const Shape& input) const override {
    require(input.rank == 1 && input.d0 == 2, Errc::shape,
            "ewmcov: input must be a pair of scalars, got " + input.str());
    return Shape::scalar();
  }

  InitResult init(std::uint64_t, const Shape& input) const override {
    output_shape(input);
    InitResult r;
    for (const char* key : {"s0", "s0sq", "mean_x", "mean_y", "c"}) {
      r.state.emplace(key, Tensor(0.0));
    }
    return r;
  }

  ApplyResult apply(const TensorMap&, TensorMap state, const Tensor& input) const override {
    const double r = 1.0 - spec_.alpha;
    double s0 = state_at(state, "s0").scalar();
    double s0sq = state_at(state, "s0sq").scalar();
    double mx = state_at(state, "mean_x").scalar();
    double my = state_at(state, "mean_y").scalar();
    double c = state_at(state, "c").scalar();
    const double x = input[0];
    const double y = input[1];
    const bool valid = !std::isnan(x) && !std::isnan(y);
    bool emit_nan_once = false;
    if (spec_.adjust) {
      if (valid || !spec_.ignore_na) {
        s0 *= r;
        s0sq *= r * r;
        c *= r;
      }
      if (valid) add(s0, s0sq, mx, my, c, 1.0, x, y);
    } else {
      if (valid) {
        double a = spec_.alpha;
        if (s0 == 0.0) {
          a = 1.0;
        } else {
          s0 *= r;
          s0sq *= r * r;
          c *= r;
        }
        add(s0, s0sq, mx, my, c, a, x, y);
      } else {
        emit_nan_once = !spec_.ignore_na;
      }
    }
    const double denom = s0 > 0.0 ? s0 - s0sq / s0 : 0.0;
    const double cov = denom > 0.0 ? c / denom : kNan;
    state.insert_or_assign("s0", Tensor(s0));
    state.insert_or_assign("s0sq", Tensor(s0sq));
    state.insert_or_assign("mean_x", Tensor(mx));
    state.insert_or_assign("mean_y", Tensor(my));
    state.insert_or_assign("c", Tensor(c));
    return ApplyResult{Tensor(emit_nan_once ? kNan : cov), std::move(state)};
  }

 private:
  static void add(double& s0, double& s0sq, double& mx, double& my, double& c, double a, double x,
                  double y) {
    const double s0_new = s0 + a;
    const double dx = x - mx;
    mx += (a / s0_new) * dx;
    const double dy = y - my;
    my += (a / s0_new) * dy;
    c += a * dx * (y - my);
    s0sq += a * a;
    s0 = s0_new;
  }

  EwSpec spec_;
};

class UpdateOnEventT final : public Transform {
 public:
  UpdateOnEventT(TransformPtr inner, Tensor initial_output)
      : inner_(std::move(inner)), initial_(std::move(initial_output)) {
    require(inner_ != nullptr, Errc::param, "update_on_event: null inner transform");
  }

  std::string name() const override { return "update_on_event"; }

  Shape output_shape(const Shape& input) const override {
    const Shape out = inner_->output_shape(payload_shape(input));
    require(out == initial_.shape(), Errc::shape,
            "update_on_event: initial output is " + initial_.shape().str() +
                " but inner produces " + out.str());
    return out;
  }

  InitResult init(std::uint64_t seed, const Shape& input) const override {
    output_shape(input);
    InitResult in = inner_->init(seed, payload_shape(input));
    InitResult r;
    r.params = namespaced("inner/", in.params);
    r.state = namespaced("inner/", in.state);
    r.state.emplace("held", initial_);
    return r;
  }

  ApplyResult apply(const TensorMap& params, TensorMap state, const Tensor& input) const override {
    const double flag = input[0];
    const bool event = !std::isnan(flag) && flag != 0.0;
    Tensor held = state_at(state, "held");
    if (event) {
      ApplyResult in = inner_->apply(sub_map(params, "inner/"), sub_map(state, "inner/"),
                                     payload(input));
      held = std::move(in.output);
      for (auto it = state.begin(); it != state.end();) {
        it = it->first.starts_with("inner/") ? state.erase(it) : std::next(it);
      }
      merge_namespaced(state, "inner/", std::move(in.state));
    }
    state.insert_or_assign("held", held);
    return ApplyResult{std::move(held), std::move(state)};
  }

 private:
  static Shape payload_shape(const Shape& input) {
    require(input.rank == 1 && input.d0 >= 2, Errc::shape,
            "update_on_event: input must be [event, payload...], got " + input.str());
    return input.d0 == 2 ? Shape::scalar() : Shape::vector(input.d0 - 1);
  }

  Tensor payload(const Tensor& input) const {
    auto v = input.values();
    return Tensor(payload_shape(input.shape()), std::vector<double>(v.begin() + 1, v.end()));
  }

  TransformPtr inner_;
  Tensor initial_;
};

class TrailingOhlcT final : public Transform {
 public:
  TrailingOhlcT() : open_(update_on_event(identity(), Tensor(kNan))) {}

  std::string name() const override { return "trailing_ohlc"; }

  Shape output_shape(const Shape& input) const override {
    require(input == Shape::vector(2), Errc::shape,
            "trailing_ohlc: input must be [reset_event, value], got " + input.str());
    return Shape::vector(4);
  }

  InitResult init(std::uint64_t seed, const Shape& input) const override {
    output_shape(input);
    InitResult open = open_->init(seed, input);
    InitResult r;
    r.params = namespaced("open/", open.params);
    r.state = namespaced("open/", open.state);
    r.state.emplace("high", Tensor(kNan));
    r.state.emplace("low", Tensor(kNan));
    return r;
  }

  ApplyResult apply(const TensorMap& params, TensorMap state, const Tensor& input) const override {
    const double flag = input[0];
    const bool reset = !std::isnan(flag) && flag != 0.0;
    const double value = input[1];

    ApplyResult open = open_->apply(sub_map(params, "open/"), sub_map(state, "open/"), input);
    double high = state_at(state, "high").scalar();
    double low = state_at(state, "low").scalar();
    if (reset) {
      high = value;
      low = value;
    } else {
      high = std::fmax(high, value);  // fmax/fmin skip NaN operands
      low = std::fmin(low, value);
    }

    for (auto it = state.begin(); it != state.end();) {
      it = it->first.starts_with("open/") ? state.erase(it) : std::next(it);
    }
    merge_namespaced(state, "open/", std::move(open.state));
    state.insert_or_assign("high", Tensor(high));
    state.insert_or_assign("low", Tensor(low));
    return ApplyResult{Tensor::vector({open.output.scalar(), high, low, value}), std::move(state)};
  }

 private:
  TransformPtr open_;
};

}  // namespace

TransformPtr buffer(std::size_t n) { return std::make_shared<BufferT>(n); }
TransformPtr lag(std::size_t k) { return std::make_shared<LagT>(k); }
TransformPtr diff(std::size_t k) { return std::make_shared<DiffT>(k); }
TransformPtr pct_change(std::size_t k) { return std::make_shared<PctChangeT>(k); }
TransformPtr rolling_mean(WindowSpec w) { return std::make_shared<RollingMeanT>(w); }
TransformPtr ewma(EwSpec spec) { return std::make_shared<EwmaT>(spec); }
TransformPtr ewm_var(EwSpec spec) { return std::make_shared<EwmVarT>(spec); }
TransformPtr ewm_cov(EwSpec spec) { return std::make_shared<EwmCovT>(spec); }

TransformPtr update_on_event(TransformPtr inner, Tensor initial_output) {
  return std::make_shared<UpdateOnEventT>(std::move(inner), std::move(initial_output));
}

TransformPtr trailing_ohlc() { return std::make_shared<TrailingOhlcT>(); }

Sequence trailing_ohlc_series(const Sequence& values, const std::vector<bool>& reset_events) {
  require(values.row_shape() == Shape::scalar(), Errc::shape,
          "trailing_ohlc_series: values must be scalar rows");
  require(values.size() == reset_events.size(), Errc::consistency,
          "trailing_ohlc_series: reset events not aligned to values");
  std::vector<double> rows;
  rows.reserve(values.size() * 2);
  for (std::size_t i = 0; i < values.size(); ++i) {
    rows.push_back(reset_events[i] ? 1.0 : 0.0);
    rows.push_back(values.data()[i]);
  }
  Sequence input(values.timestamps(), Shape::vector(2), std::move(rows));
  return unroll(*trailing_ohlc(), 0, input).output;
}

}  // namespace streamloop
