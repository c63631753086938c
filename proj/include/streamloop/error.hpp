// Copyright 2026 The streamloop authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace streamloop {

// Error taxonomy shared by the C++ core and the C API status codes.
enum class Errc {
  param = 1,        // invalid operator/experiment parameter
  shape = 2,        // incompatible tensor shapes
  empty_input = 3,  // operation requires a nonempty sequence
  ordering = 4,     // timestamps unsorted or duplicated where forbidden
  consistency = 5,  // schedule/data mismatch and similar structural errors
  range = 6,        // index or code out of range
  numeric = 7,      // non-finite value where a finite one is required
  parse = 8,        // malformed text input (specs, schedules, CSV)
  unknown = 9,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, Errc code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace streamloop
