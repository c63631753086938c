// Copyright 2026 The streamloop authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "streamloop/tensor.hpp"

namespace streamloop {

struct InitResult {
  TensorMap params;
  TensorMap state;
};

struct ApplyResult {
  Tensor output;
  TensorMap state;
};

// A stateful transform is a pair of pure functions:
//
//   init(seed, input_shape)          -> (params, state)
//   apply(params, state, input)      -> (output, next state)
//
// apply must be referentially transparent: identical (params, state, input)
// always yield identical results. State is threaded by the caller; transforms
// themselves are immutable descriptions and safe to share across threads.
// apply takes its state by value so the driver can move the threaded map in.
class Transform {
 public:
  virtual ~Transform() = default;

  virtual std::string name() const = 0;

  // Output shape for a given input shape; throws Errc::shape when the input
  // shape is unsupported. Lets compositions be validated before any data flows.
  virtual Shape output_shape(const Shape& input) const = 0;

  virtual InitResult init(std::uint64_t seed, const Shape& input) const = 0;

  virtual ApplyResult apply(const TensorMap& params, TensorMap state, const Tensor& input) const = 0;
};

using TransformPtr = std::shared_ptr<const Transform>;

// Timestamped rows sharing one shape. Timestamps are signed nanoseconds since
// the Unix epoch and strictly increasing.
class Sequence {
 public:
  Sequence() : row_shape_(Shape::scalar()) {}

  Sequence(std::vector<std::int64_t> timestamps, Shape row_shape, std::vector<double> data);

  // Convenience constructors used heavily by tests and the CLI.
  static Sequence scalars(std::vector<std::int64_t> timestamps, std::vector<double> values);
  static Sequence from_rows(std::vector<std::int64_t> timestamps, const std::vector<Tensor>& rows);

  std::size_t size() const { return timestamps_.size(); }
  bool empty() const { return timestamps_.empty(); }
  const Shape& row_shape() const { return row_shape_; }
  std::size_t row_width() const { return row_shape_.size(); }

  const std::vector<std::int64_t>& timestamps() const { return timestamps_; }
  const std::vector<double>& data() const { return data_; }

  Tensor row(std::size_t i) const;
  std::span<const double> row_values(std::size_t i) const {
    return std::span<const double>(data_).subspan(i * row_shape_.size(), row_shape_.size());
  }

  // Rows [begin, end) with their timestamps; used by split/resume tests.
  Sequence slice(std::size_t begin, std::size_t end) const;

  bool operator==(const Sequence&) const = default;

 private:
  std::vector<std::int64_t> timestamps_;
  Shape row_shape_;
  std::vector<double> data_;
};

struct UnrollResult {
  Sequence output;
  TensorMap params;
  TensorMap state;  // state after the last step; feed to unroll_resume to continue
};

// Folds a transform over a sequence, threading state left to right from
// init(seed, row_shape). Output keeps the input timestamps. Only outputs and
// the final state are exposed; intermediate states stay internal.
UnrollResult unroll(const Transform& t, std::uint64_t seed, const Sequence& input);

// Continues a fold from a saved (params, state) snapshot.
UnrollResult unroll_resume(const Transform& t, const TensorMap& params, const TensorMap& state,
                           const Sequence& input);

// outer after inner. Params and state of the two halves are kept disjoint by
// prefixing keys with "inner/" and "outer/".
TransformPtr compose(TransformPtr outer, TransformPtr inner);

// Stateless pass-through.
TransformPtr identity();

// Stateless slice of a vector input: emits elements [begin, end). end == begin+1
// yields a scalar output.
TransformPtr select(std::size_t begin, std::size_t end);

// Key namespacing helpers shared by composite transforms.
TensorMap namespaced(const std::string& prefix, const TensorMap& m);
TensorMap sub_map(const TensorMap& m, const std::string& prefix);
void merge_namespaced(TensorMap& dst, const std::string& prefix, TensorMap src);

}  // namespace streamloop
