// Copyright 2026 The streamloop authors.
// SPDX-License-Identifier: Apache-2.0

#include "streamloop/transform.hpp"

#include <algorithm>
#include <utility>

namespace streamloop {

Sequence::Sequence(std::vector<std::int64_t> timestamps, Shape row_shape, std::vector<double> data)
    : timestamps_(std::move(timestamps)), row_shape_(row_shape), data_(std::move(data)) {
  require(data_.size() == timestamps_.size() * row_shape_.size(), Errc::consistency,
          "sequence data size does not match timestamps * row size");
  for (std::size_t i = 1; i < timestamps_.size(); ++i) {
    require(timestamps_[i - 1] < timestamps_[i], Errc::ordering,
            "sequence timestamps must be strictly increasing (position " + std::to_string(i) + ")");
  }
}

Sequence Sequence::scalars(std::vector<std::int64_t> timestamps, std::vector<double> values) {
  return Sequence(std::move(timestamps), Shape::scalar(), std::move(values));
}

Sequence Sequence::from_rows(std::vector<std::int64_t> timestamps, const std::vector<Tensor>& rows) {
  require(timestamps.size() == rows.size(), Errc::consistency,
          "row count does not match timestamp count");
  Shape shape = rows.empty() ? Shape::scalar() : rows[0].shape();
  std::vector<double> data;
  data.reserve(rows.size() * shape.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require(rows[i].shape() == shape, Errc::shape,
            "row " + std::to_string(i) + " has shape " + rows[i].shape().str() +
                ", expected " + shape.str());
    data.insert(data.end(), rows[i].values().begin(), rows[i].values().end());
  }
  return Sequence(std::move(timestamps), shape, std::move(data));
}

Tensor Sequence::row(std::size_t i) const {
  auto v = row_values(i);
  return Tensor(row_shape_, std::vector<double>(v.begin(), v.end()));
}

Sequence Sequence::slice(std::size_t begin, std::size_t end) const {
  require(begin <= end && end <= size(), Errc::range, "sequence slice out of range");
  std::vector<std::int64_t> ts(timestamps_.begin() + begin, timestamps_.begin() + end);
  const std::size_t w = row_shape_.size();
  std::vector<double> data(data_.begin() + begin * w, data_.begin() + end * w);
  return Sequence(std::move(ts), row_shape_, std::move(data));
}

namespace {

UnrollResult run_fold(const Transform& t, TensorMap params, TensorMap state, const Sequence& input) {
  require(!input.empty(), Errc::empty_input, "unroll: empty input sequence");
  const Shape out_shape = t.output_shape(input.row_shape());
  std::vector<double> out_data;
  out_data.reserve(input.size() * out_shape.size());
  for (std::size_t i = 0; i < input.size(); ++i) {
    ApplyResult step = t.apply(params, std::move(state), input.row(i));
    require(step.output.shape() == out_shape, Errc::shape,
            t.name() + ": apply produced " + step.output.shape().str() + ", expected " +
                out_shape.str());
    out_data.insert(out_data.end(), step.output.values().begin(), step.output.values().end());
    state = std::move(step.state);
  }
  Sequence output(input.timestamps(), out_shape, std::move(out_data));
  return UnrollResult{std::move(output), std::move(params), std::move(state)};
}

}  // namespace

UnrollResult unroll(const Transform& t, std::uint64_t seed, const Sequence& input) {
  require(!input.empty(), Errc::empty_input, "unroll: empty input sequence");
  InitResult init = t.init(seed, input.row_shape());
  return run_fold(t, std::move(init.params), std::move(init.state), input);
}

UnrollResult unroll_resume(const Transform& t, const TensorMap& params, const TensorMap& state,
                           const Sequence& input) {
  return run_fold(t, params, state, input);
}

TensorMap namespaced(const std::string& prefix, const TensorMap& m) {
  TensorMap out;
  for (const auto& [k, v] : m) out.emplace(prefix + k, v);
  return out;
}

TensorMap sub_map(const TensorMap& m, const std::string& prefix) {
  TensorMap out;
  for (auto it = m.lower_bound(prefix); it != m.end(); ++it) {
    if (it->first.compare(0, prefix.size(), prefix) != 0) break;
    out.emplace(it->first.substr(prefix.size()), it->second);
  }
  return out;
}

void merge_namespaced(TensorMap& dst, const std::string& prefix, TensorMap src) {
  for (auto& [k, v] : src) dst.insert_or_assign(prefix + k, std::move(v));
}

namespace {

class Composite final : public Transform {
 public:
  Composite(TransformPtr outer, TransformPtr inner)
      : outer_(std::move(outer)), inner_(std::move(inner)) {}

  std::string name() const override { return outer_->name() + "." + inner_->name(); }

  Shape output_shape(const Shape& input) const override {
    return outer_->output_shape(inner_->output_shape(input));
  }

  InitResult init(std::uint64_t seed, const Shape& input) const override {
    const Shape mid = inner_->output_shape(input);
    InitResult in = inner_->init(seed, input);
    InitResult out = outer_->init(seed, mid);
    InitResult r;
    r.params = namespaced("inner/", in.params);
    merge_namespaced(r.params, "outer/", std::move(out.params));
    r.state = namespaced("inner/", in.state);
    merge_namespaced(r.state, "outer/", std::move(out.state));
    return r;
  }

  ApplyResult apply(const TensorMap& params, TensorMap state, const Tensor& input) const override {
    ApplyResult mid = inner_->apply(sub_map(params, "inner/"), sub_map(state, "inner/"), input);
    ApplyResult out =
        outer_->apply(sub_map(params, "outer/"), sub_map(state, "outer/"), mid.output);
    TensorMap next;
    merge_namespaced(next, "inner/", std::move(mid.state));
    merge_namespaced(next, "outer/", std::move(out.state));
    return ApplyResult{std::move(out.output), std::move(next)};
  }

 private:
  TransformPtr outer_;
  TransformPtr inner_;
};

class Identity final : public Transform {
 public:
  std::string name() const override { return "identity"; }
  Shape output_shape(const Shape& input) const override { return input; }
  InitResult init(std::uint64_t, const Shape&) const override { return {}; }
  ApplyResult apply(const TensorMap&, TensorMap state, const Tensor& input) const override {
    return ApplyResult{input, std::move(state)};
  }
};

class Select final : public Transform {
 public:
  Select(std::size_t begin, std::size_t end) : begin_(begin), end_(end) {
    require(begin_ < end_, Errc::param, "select: empty range");
  }

  std::string name() const override { return "select"; }

  Shape output_shape(const Shape& input) const override {
    require(input.rank == 1 && end_ <= input.d0, Errc::shape,
            "select: need vector input covering [" + std::to_string(begin_) + ", " +
                std::to_string(end_) + "), got " + input.str());
    return end_ - begin_ == 1 ? Shape::scalar() : Shape::vector(end_ - begin_);
  }

  InitResult init(std::uint64_t, const Shape&) const override { return {}; }

  ApplyResult apply(const TensorMap&, TensorMap state, const Tensor& input) const override {
    const Shape out_shape = output_shape(input.shape());
    std::vector<double> v(input.values().begin() + static_cast<std::ptrdiff_t>(begin_),
                          input.values().begin() + static_cast<std::ptrdiff_t>(end_));
    return ApplyResult{Tensor(out_shape, std::move(v)), std::move(state)};
  }

 private:
  std::size_t begin_;
  std::size_t end_;
};

}  // namespace

TransformPtr compose(TransformPtr outer, TransformPtr inner) {
  require(outer != nullptr && inner != nullptr, Errc::param, "compose: null transform");
  return std::make_shared<Composite>(std::move(outer), std::move(inner));
}

TransformPtr identity() { return std::make_shared<Identity>(); }

TransformPtr select(std::size_t begin, std::size_t end) {
  return std::make_shared<Select>(begin, end);
}

}  // namespace streamloop
