// Copyright 2026 The streamloop authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "streamloop/transform.hpp"

namespace testutil {

inline std::vector<double> random_values(std::mt19937_64& rng, std::size_t n,
                                         double nan_fraction = 0.0) {
  std::uniform_real_distribution<double> value(-5.0, 5.0);
  std::uniform_real_distribution<double> gap(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = gap(rng) < nan_fraction ? streamloop::kNan : value(rng);
  return v;
}

inline std::vector<std::int64_t> increasing_timestamps(std::mt19937_64& rng, std::size_t n,
                                                       std::int64_t start = 0) {
  std::uniform_int_distribution<std::int64_t> gap(1, 20);
  std::vector<std::int64_t> ts(n);
  std::int64_t t = start;
  for (auto& v : ts) {
    t += gap(rng);
    v = t;
  }
  return ts;
}

inline streamloop::Sequence scalar_seq(const std::vector<double>& values) {
  std::vector<std::int64_t> ts(values.size());
  for (std::size_t i = 0; i < ts.size(); ++i) ts[i] = static_cast<std::int64_t>(i + 1);
  return streamloop::Sequence::scalars(ts, values);
}

// Unrolls a transform over scalar rows and returns the scalar outputs.
inline std::vector<double> run_scalars(const streamloop::Transform& t,
                                       const std::vector<double>& values,
                                       std::uint64_t seed = 0) {
  const streamloop::UnrollResult r = streamloop::unroll(t, seed, scalar_seq(values));
  return {r.output.data().begin(), r.output.data().end()};
}

// Builds a sequence of [a_i, b_i] pair rows.
inline streamloop::Sequence pair_seq(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<std::int64_t> ts(a.size());
  std::vector<double> rows;
  rows.reserve(2 * a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ts[i] = static_cast<std::int64_t>(i + 1);
    rows.push_back(a[i]);
    rows.push_back(b[i]);
  }
  return streamloop::Sequence(ts, streamloop::Shape::vector(2), rows);
}

}  // namespace testutil
