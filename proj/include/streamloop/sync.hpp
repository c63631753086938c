// Copyright 2026 The streamloop authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "streamloop/transform.hpp"

namespace streamloop {
namespace sync {

enum class Mode { forward_fill, window };

// A secondary event stream to be aligned onto the local stream. An event with
// timestamp ts becomes visible at local time ts + latency_ns. Local timestamps
// must be strictly increasing; secondary timestamps may contain duplicates
// (ties keep their original order) but must never decrease.
struct StreamSpec {
  std::string name;
  std::vector<std::int64_t> timestamps;
  std::int64_t latency_ns = 0;
  Mode mode = Mode::forward_fill;
  std::size_t window = 0;  // buffer size, window mode only
};

struct FfillCell {
  std::optional<std::size_t> index;  // greatest admissible index, if any
};

struct WindowCell {
  std::size_t lo = 0;  // retained index range [lo, hi)
  std::size_t hi = 0;
  std::size_t overflow = 0;  // oldest events dropped to fit the buffer

  std::size_t count() const { return hi - lo; }
};

// Per-stream access plan produced by trace(). Every referenced index i
// satisfies timestamps[i] + latency <= local_t: the schedule alone guarantees
// causality before any payload is touched.
struct StreamPlan {
  std::string name;
  Mode mode = Mode::forward_fill;
  std::size_t window = 0;
  std::size_t stream_len = 0;  // length of the secondary stream it was traced from
  std::int64_t latency_ns = 0;
  std::vector<FfillCell> ffill;    // one per local step, forward-fill mode
  std::vector<WindowCell> windows;  // one per local step, window mode
};

class Schedule {
 public:
  Schedule() = default;
  Schedule(std::size_t local_steps, std::vector<StreamPlan> plans)
      : local_steps_(local_steps), plans_(std::move(plans)) {}

  std::size_t local_steps() const { return local_steps_; }
  const std::vector<StreamPlan>& plans() const { return plans_; }

  // Flat CSV dump: one record per (step, stream) with columns
  //   step,stream,kind,lo,hi,pad,overflow
  // preceded by `#stream` metadata lines. Stable format; see README.
  std::string to_csv() const;
  static Schedule from_csv(const std::string& text);

  bool operator==(const Schedule&) const = default;

 private:
  std::size_t local_steps_ = 0;
  std::vector<StreamPlan> plans_;
};

bool operator==(const FfillCell&, const FfillCell&);
bool operator==(const WindowCell&, const WindowCell&);
bool operator==(const StreamPlan&, const StreamPlan&);

// Timestamp-only pass computing the access schedule.
//
// Forward fill: index[t] = max{ i : ts_i + latency <= local_t }, none if no
// admissible event exists yet.
//
// Window(n): the events claimed at step t are those with
// prev_local_t < ts_i + latency <= local_t (prev_local_0 = -infinity, so step
// 0 sees all history). When more than n events fall in one step the oldest are
// dropped and counted in `overflow`; shorter windows are front-padded with
// NaN rows at execution time.
Schedule trace(const std::vector<std::int64_t>& local, const std::vector<StreamSpec>& streams);

// Materializes merged rows: the local row, then per stream either the
// forward-filled row (NaN row when none) or `window` stacked rows, oldest
// first, NaN-padded at the front. Rows are flattened to one vector.
Sequence execute(const Schedule& schedule, const Sequence& local_data,
                 const std::vector<Sequence>& stream_data);

std::size_t merged_row_width(const Schedule& schedule, std::size_t local_width,
                             const std::vector<std::size_t>& stream_widths);

struct SyncStream {
  StreamSpec spec;
  Sequence data;
};

// trace + execute + unroll in one call.
UnrollResult synchronized_unroll(const Transform& t, std::uint64_t seed, const Sequence& local_data,
                                 const std::vector<SyncStream>& streams);

}  // namespace sync
}  // namespace streamloop
