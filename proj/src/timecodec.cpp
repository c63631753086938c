// Copyright 2026 The streamloop authors.
// SPDX-License-Identifier: Apache-2.0

#include "streamloop/timecodec.hpp"

#include <algorithm>
#include <cstring>

#include "streamloop/error.hpp"

namespace streamloop {
namespace timecodec {

EncodedTime encode_time(std::int64_t ns) {
  EncodedTime e;
  e.hi = static_cast<std::int32_t>(ns >> 32);  // arithmetic shift: keeps the sign
  e.lo = static_cast<std::uint32_t>(static_cast<std::uint64_t>(ns) & 0xFFFFFFFFull);
  return e;
}

std::int64_t decode_time(EncodedTime e) {
  const std::uint64_t hi = static_cast<std::uint64_t>(static_cast<std::uint32_t>(e.hi));
  return static_cast<std::int64_t>((hi << 32) | e.lo);
}

LabelTable label_encode(const std::vector<std::string>& strings) {
  LabelTable table;
  table.vocabulary = strings;
  std::sort(table.vocabulary.begin(), table.vocabulary.end());
  table.vocabulary.erase(std::unique(table.vocabulary.begin(), table.vocabulary.end()),
                         table.vocabulary.end());
  table.codes.reserve(strings.size());
  for (const std::string& s : strings) {
    const auto it = std::lower_bound(table.vocabulary.begin(), table.vocabulary.end(), s);
    table.codes.push_back(static_cast<std::size_t>(it - table.vocabulary.begin()));
  }
  return table;
}

std::vector<std::string> label_decode(const LabelTable& table) {
  std::vector<std::string> out;
  out.reserve(table.codes.size());
  for (std::size_t code : table.codes) {
    require(code < table.vocabulary.size(), Errc::range,
            "label code " + std::to_string(code) + " out of range for vocabulary of " +
                std::to_string(table.vocabulary.size()));
    out.push_back(table.vocabulary[code]);
  }
  return out;
}

}  // namespace timecodec
}  // namespace streamloop
