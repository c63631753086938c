// Copyright 2026 The streamloop authors.
// SPDX-License-Identifier: Apache-2.0

#include <limits>
#include <random>

#include "doctest.h"
#include "streamloop/error.hpp"
#include "streamloop/timecodec.hpp"

using namespace streamloop::timecodec;

TEST_CASE("encode_time splits into arithmetic high and unsigned low words") {
  CHECK(encode_time(0) == EncodedTime{0, 0});
  CHECK(encode_time((1ll << 32) + 5) == EncodedTime{1, 5});
  CHECK(encode_time(-1) == EncodedTime{-1, 4294967295u});
}

TEST_CASE("decode_time inverts encode_time") {
  CHECK(decode_time({0, 0}) == 0);
  CHECK(decode_time({1, 5}) == (1ll << 32) + 5);
  CHECK(decode_time({-1, 4294967295u}) == -1);
}

TEST_CASE("time codec round-trips boundary and random values") {
  const std::int64_t boundaries[] = {std::numeric_limits<std::int64_t>::min(), -1, 0, 1,
                                     std::numeric_limits<std::int64_t>::max()};
  for (std::int64_t v : boundaries) CHECK(decode_time(encode_time(v)) == v);

  std::mt19937_64 rng(79);
  for (int i = 0; i < 100000; ++i) {
    const auto v = static_cast<std::int64_t>(rng());
    CHECK(decode_time(encode_time(v)) == v);
  }
}

TEST_CASE("encoding is monotone under (hi, lo) lexicographic order") {
  std::mt19937_64 rng(83);
  for (int i = 0; i < 100000; ++i) {
    const auto a = static_cast<std::int64_t>(rng());
    const auto b = static_cast<std::int64_t>(rng());
    const EncodedTime ea = encode_time(a);
    const EncodedTime eb = encode_time(b);
    const bool lex_less = ea.hi < eb.hi || (ea.hi == eb.hi && ea.lo < eb.lo);
    CHECK(lex_less == (a < b));
  }
}

TEST_CASE("label codec uses sorted ranks") {
  const LabelTable t = label_encode({"b", "a", "b"});
  CHECK(t.vocabulary == std::vector<std::string>{"a", "b"});
  CHECK(t.codes == std::vector<std::size_t>{1, 0, 1});
  CHECK(label_decode(t) == std::vector<std::string>{"b", "a", "b"});

  CHECK(label_encode({}).vocabulary.empty());
  CHECK(label_encode({}).codes.empty());

  const LabelTable single = label_encode({"x"});
  CHECK(single.vocabulary == std::vector<std::string>{"x"});
  CHECK(single.codes == std::vector<std::size_t>{0});
}

TEST_CASE("label codec round-trips randomized lists") {
  std::mt19937_64 rng(89);
  std::uniform_int_distribution<std::size_t> len(0, 40);
  std::uniform_int_distribution<int> chr('a', 'f');
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> strings(len(rng));
    for (auto& s : strings) {
      const std::size_t n = len(rng) % 6;
      for (std::size_t i = 0; i < n; ++i) s.push_back(static_cast<char>(chr(rng)));
    }
    CHECK(label_decode(label_encode(strings)) == strings);
  }
}

TEST_CASE("label_decode rejects out-of-range codes") {
  LabelTable t = label_encode({"a", "b"});
  t.codes.push_back(7);
  CHECK_THROWS_AS(label_decode(t), streamloop::Error);
  try {
    label_decode(t);
  } catch (const streamloop::Error& e) {
    CHECK(e.code() == streamloop::Errc::range);
  }
}

TEST_CASE("sorted-rank coding is order independent") {
  const LabelTable a = label_encode({"pear", "apple", "pear", "fig"});
  const LabelTable b = label_encode({"fig", "pear", "apple", "pear"});
  CHECK(a.vocabulary == b.vocabulary);
}
