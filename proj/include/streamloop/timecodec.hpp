// Copyright 2026 The streamloop authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace streamloop {
namespace timecodec {

// A 64-bit nanosecond timestamp split into two 32-bit words so numeric kernels
// limited to 32-bit integers can carry it losslessly. hi is the arithmetic
// high half (signed), lo the low half (unsigned): value = hi * 2^32 + lo.
// Ordering is preserved under (hi, lo) lexicographic comparison.
struct EncodedTime {
  std::int32_t hi = 0;
  std::uint32_t lo = 0;

  bool operator==(const EncodedTime&) const = default;
};

EncodedTime encode_time(std::int64_t ns);
std::int64_t decode_time(EncodedTime e);

// Sorted-rank string coding: vocabulary is the sorted set of distinct inputs,
// codes[i] is the rank of input[i]. Deterministic regardless of input order.
struct LabelTable {
  std::vector<std::string> vocabulary;
  std::vector<std::size_t> codes;

  bool operator==(const LabelTable&) const = default;
};

LabelTable label_encode(const std::vector<std::string>& strings);

// Inverse of label_encode; throws Errc::range on an out-of-range code.
std::vector<std::string> label_decode(const LabelTable& table);

}  // namespace timecodec
}  // namespace streamloop
