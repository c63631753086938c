// Copyright 2026 The streamloop authors.
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "streamloop/factory.hpp"
#include "streamloop/modules.hpp"
#include "streamloop/transform.hpp"
#include "testutil.hpp"

using namespace streamloop;

namespace {

void check_exact(const std::vector<double>& got, const std::vector<double>& want) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    CAPTURE(i);
    CHECK(oracle::exact_eq(got[i], want[i]));
  }
}

// The operator catalog as spec strings, reused by the generic contract tests.
const std::vector<std::string> kCatalog = {
    "identity",
    "buffer n=3",
    "lag k=2",
    "diff k=1",
    "pct_change k=1",
    "rolling_mean window=4 min_periods=2",
    "ewma alpha=0.3 adjust=true ignore_na=false",
    "ewma alpha=0.3 adjust=false ignore_na=true",
    "ewmvar alpha=0.6 adjust=true ignore_na=true",
    "update_on_event inner=rolling_mean window=2 min_periods=1 initial=nan",
    "trailing_ohlc",
};

Sequence catalog_input(const std::string& spec, std::mt19937_64& rng, std::size_t n) {
  if (spec.starts_with("update_on_event") || spec.starts_with("trailing_ohlc")) {
    std::vector<double> events(n), payload = testutil::random_values(rng, n, 0.1);
    std::uniform_int_distribution<int> coin(0, 1);
    for (auto& e : events) e = coin(rng);
    return testutil::pair_seq(events, payload);
  }
  return testutil::scalar_seq(testutil::random_values(rng, n, 0.1));
}

}  // namespace

TEST_CASE("unroll applies a transform over a sequence") {
  check_exact(testutil::run_scalars(*identity(), {1.0, 2.0, 3.0}), {1.0, 2.0, 3.0});
  check_exact(testutil::run_scalars(*lag(1), {1.0, 2.0, 3.0}), {kNan, 1.0, 2.0});
  const auto out = testutil::run_scalars(*ewma({.alpha = 0.5, .adjust = true}), {1.0, 2.0});
  REQUIRE(out.size() == 2);
  CHECK(out[0] == doctest::Approx(1.0).epsilon(1e-12));
  // Frozen from the brute-force weighted-sum oracle: (2 + 0.5*1) / 1.5.
  CHECK(out[1] == doctest::Approx(1.6666666666666667).epsilon(1e-12));
  const std::vector<double> x = {1.0, 2.0};
  CHECK(out[1] == doctest::Approx(oracle::ewma_at(x, 1, {.alpha = 0.5, .adjust = true})));
}

TEST_CASE("unroll keeps the input timestamps") {
  Sequence in = Sequence::scalars({5, 9, 12}, {1.0, 2.0, 3.0});
  const UnrollResult r = unroll(*diff(1), 0, in);
  CHECK(r.output.timestamps() == in.timestamps());
}

TEST_CASE("unroll rejects empty input") {
  Sequence empty;
  CHECK_THROWS_AS(unroll(*identity(), 0, empty), Error);
  try {
    unroll(*identity(), 0, empty);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::empty_input);
  }
}

TEST_CASE("sequences validate shape and ordering") {
  CHECK_THROWS_AS(Sequence::from_rows({1, 2}, {Tensor(1.0), Tensor::vector({1.0, 2.0})}), Error);
  try {
    Sequence::from_rows({1, 2}, {Tensor(1.0), Tensor::vector({1.0, 2.0})});
  } catch (const Error& e) {
    CHECK(e.code() == Errc::shape);
  }
  CHECK_THROWS_AS(Sequence::scalars({3, 2}, {1.0, 2.0}), Error);
  CHECK_THROWS_AS(Sequence::scalars({2, 2}, {1.0, 2.0}), Error);
  try {
    Sequence::scalars({2, 2}, {1.0, 2.0});
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ordering);
  }
}

TEST_CASE("unroll is deterministic") {
  std::mt19937_64 rng(7);
  const auto values = testutil::random_values(rng, 64, 0.1);
  for (const auto& spec : kCatalog) {
    CAPTURE(spec);
    std::mt19937_64 data_rng(11);
    const Sequence in = catalog_input(spec, data_rng, 64);
    const TransformPtr t = make_transform(spec);
    const UnrollResult a = unroll(*t, 42, in);
    const UnrollResult b = unroll(*t, 42, in);
    CHECK(a.output == b.output);
    CHECK(a.state == b.state);
  }
}

TEST_CASE("apply is pure: same state and input give the same result") {
  const TransformPtr t = ewma({.alpha = 0.4, .adjust = true});
  InitResult init = t->init(0, Shape::scalar());
  const ApplyResult first = t->apply(init.params, init.state, Tensor(2.0));
  const ApplyResult again = t->apply(init.params, init.state, Tensor(2.0));
  CHECK(first.output == again.output);
  CHECK(first.state == again.state);
}

TEST_CASE("prefix property: streaming equals offline for every catalog transform") {
  for (const auto& spec : kCatalog) {
    CAPTURE(spec);
    std::mt19937_64 rng(101);
    const Sequence in = catalog_input(spec, rng, 48);
    const TransformPtr t = make_transform(spec);
    const UnrollResult full = unroll(*t, 9, in);
    for (std::size_t k : {std::size_t{1}, std::size_t{17}, in.size()}) {
      const UnrollResult head = unroll(*t, 9, in.slice(0, k));
      CHECK(head.output == full.output.slice(0, k));
    }
  }
}

TEST_CASE("state threading: split and resume reproduces the unsplit run") {
  for (const auto& spec : kCatalog) {
    CAPTURE(spec);
    std::mt19937_64 rng(303);
    const Sequence in = catalog_input(spec, rng, 48);
    const TransformPtr t = make_transform(spec);
    const UnrollResult full = unroll(*t, 5, in);
    std::uniform_int_distribution<std::size_t> cut(1, in.size() - 1);
    for (int trial = 0; trial < 4; ++trial) {
      const std::size_t k = cut(rng);
      const UnrollResult head = unroll(*t, 5, in.slice(0, k));
      const UnrollResult tail = unroll_resume(*t, head.params, head.state, in.slice(k, in.size()));
      CHECK(head.output == full.output.slice(0, k));
      CHECK(tail.output == full.output.slice(k, in.size()));
      CHECK(tail.state == full.state);
    }
  }
}

TEST_CASE("compose runs inner then outer") {
  check_exact(testutil::run_scalars(*compose(identity(), identity()), {3.0, 1.0}), {3.0, 1.0});
  // diff(1) after lag(1) on [1,2,3]: lag gives [NaN,1,2], diff of that is [NaN,NaN,1].
  check_exact(testutil::run_scalars(*compose(diff(1), lag(1)), {1.0, 2.0, 3.0}),
              {kNan, kNan, 1.0});
}

TEST_CASE("compose namespaces both state maps") {
  const TransformPtr c = compose(diff(2), lag(1));
  const InitResult init = c->init(0, Shape::scalar());
  REQUIRE(init.state.size() == 2);
  CHECK(init.state.contains("inner/buf"));
  CHECK(init.state.contains("outer/buf"));

  const TransformPtr nested = compose(compose(identity(), diff(1)), lag(1));
  const InitResult nested_init = nested->init(0, Shape::scalar());
  CHECK(nested_init.state.contains("inner/buf"));
  CHECK(nested_init.state.contains("outer/inner/buf"));
}

TEST_CASE("compose rejects incompatible shapes") {
  // ewmcov needs pair rows but buffer(3) on scalars emits vector[3].
  const TransformPtr bad = compose(ewm_cov({.alpha = 0.5}), buffer(3));
  CHECK_THROWS_AS(unroll(*bad, 0, testutil::scalar_seq({1.0, 2.0})), Error);
  try {
    unroll(*bad, 0, testutil::scalar_seq({1.0, 2.0}));
  } catch (const Error& e) {
    CHECK(e.code() == Errc::shape);
  }
}

TEST_CASE("select slices vector rows") {
  Sequence in = testutil::pair_seq({1.0, 3.0}, {2.0, 4.0});
  const UnrollResult r = unroll(*select(1, 2), 0, in);
  CHECK(r.output.row_shape() == Shape::scalar());
  check_exact({r.output.data().begin(), r.output.data().end()}, {2.0, 4.0});
  CHECK_THROWS_AS(unroll(*select(1, 3), 0, in), Error);
}

TEST_CASE("transform specs parse and validate") {
  CHECK_THROWS_AS(make_transform("ewma alpha=1.5"), Error);
  CHECK_THROWS_AS(make_transform("nosuch x=1"), Error);
  CHECK_THROWS_AS(make_transform("ewma alpha=0.5 bogus=1"), Error);
  CHECK_THROWS_AS(make_transform("lag k=zero"), Error);
  CHECK_THROWS_AS(make_transform(""), Error);
  CHECK(make_transform("update_on_event inner=ewma alpha=0.5 initial=nan") != nullptr);
}
