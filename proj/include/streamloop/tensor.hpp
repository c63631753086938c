// Copyright 2026 The streamloop authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "streamloop/error.hpp"

namespace streamloop {

inline constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Shapes are rank 0 (scalar), 1 (vector) or 2 (matrix of stacked rows).
struct Shape {
  int rank = 0;
  std::size_t d0 = 0;
  std::size_t d1 = 0;

  static Shape scalar() { return {0, 0, 0}; }
  static Shape vector(std::size_t n) { return {1, n, 0}; }
  static Shape matrix(std::size_t rows, std::size_t cols) { return {2, rows, cols}; }

  std::size_t size() const {
    switch (rank) {
      case 0: return 1;
      case 1: return d0;
      default: return d0 * d1;
    }
  }

  bool operator==(const Shape&) const = default;

  std::string str() const {
    switch (rank) {
      case 0: return "scalar";
      case 1: return "vector[" + std::to_string(d0) + "]";
      default: return "matrix[" + std::to_string(d0) + "x" + std::to_string(d1) + "]";
    }
  }
};

// Dense rank<=2 tensor of doubles. NaN encodes missing data throughout.
class Tensor {
 public:
  Tensor() : shape_(Shape::scalar()), v_(1, kNan) {}
  explicit Tensor(double x) : shape_(Shape::scalar()), v_(1, x) {}
  Tensor(Shape shape, std::vector<double> values) : shape_(shape), v_(std::move(values)) {
    require(v_.size() == shape_.size(), Errc::shape,
            "tensor data size " + std::to_string(v_.size()) + " does not match " + shape_.str());
  }

  static Tensor full(Shape shape, double x) { return Tensor(shape, std::vector<double>(shape.size(), x)); }
  static Tensor nans(Shape shape) { return full(shape, kNan); }
  static Tensor vector(std::vector<double> values) {
    const std::size_t n = values.size();
    return Tensor(Shape::vector(n), std::move(values));
  }

  const Shape& shape() const { return shape_; }
  std::size_t size() const { return v_.size(); }

  double scalar() const {
    require(shape_.rank == 0, Errc::shape, "expected scalar, got " + shape_.str());
    return v_[0];
  }

  double& operator[](std::size_t i) { return v_[i]; }
  double operator[](std::size_t i) const { return v_[i]; }
  double& at(std::size_t i, std::size_t j) { return v_[i * shape_.d1 + j]; }
  double at(std::size_t i, std::size_t j) const { return v_[i * shape_.d1 + j]; }

  std::span<const double> values() const { return v_; }
  std::span<double> values() { return v_; }

  bool operator==(const Tensor&) const = default;

 private:
  Shape shape_;
  std::vector<double> v_;
};

// Params and State are both named tensor maps; Params stay fixed across an
// unroll while State is threaded from step to step.
using TensorMap = std::map<std::string, Tensor>;

}  // namespace streamloop
