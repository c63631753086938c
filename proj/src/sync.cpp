// Copyright 2026 The streamloop authors.
// SPDX-License-Identifier: Apache-2.0

#include "streamloop/sync.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace streamloop {
namespace sync {

bool operator==(const FfillCell& a, const FfillCell& b) { return a.index == b.index; }
bool operator==(const WindowCell& a, const WindowCell& b) {
  return a.lo == b.lo && a.hi == b.hi && a.overflow == b.overflow;
}
bool operator==(const StreamPlan& a, const StreamPlan& b) {
  return a.name == b.name && a.mode == b.mode && a.window == b.window &&
         a.stream_len == b.stream_len && a.latency_ns == b.latency_ns && a.ffill == b.ffill &&
         a.windows == b.windows;
}

namespace {

void check_local(const std::vector<std::int64_t>& local) {
  for (std::size_t i = 1; i < local.size(); ++i) {
    require(local[i - 1] != local[i], Errc::ordering,
            "local timestamps contain a duplicate at position " + std::to_string(i));
    require(local[i - 1] < local[i], Errc::ordering,
            "local timestamps must be strictly increasing (position " + std::to_string(i) + ")");
  }
}

void check_stream(const StreamSpec& spec) {
  for (std::size_t i = 1; i < spec.timestamps.size(); ++i) {
    require(spec.timestamps[i - 1] <= spec.timestamps[i], Errc::ordering,
            "stream '" + spec.name + "' timestamps decrease at position " + std::to_string(i));
  }
  require(spec.latency_ns >= 0, Errc::param, "stream '" + spec.name + "': negative latency");
  if (spec.mode == Mode::window) {
    require(spec.window >= 1, Errc::param,
            "stream '" + spec.name + "': window mode needs buffer size >= 1");
  }
}

// Event i becomes visible at timestamps[i] + latency. Saturating add keeps the
// comparison meaningful near the int64 edge.
std::int64_t visible_at(std::int64_t ts, std::int64_t latency) {
  if (ts > 0 && latency > std::numeric_limits<std::int64_t>::max() - ts) {
    return std::numeric_limits<std::int64_t>::max();
  }
  return ts + latency;
}

}  // namespace

Schedule trace(const std::vector<std::int64_t>& local, const std::vector<StreamSpec>& streams) {
  check_local(local);
  std::vector<StreamPlan> plans;
  plans.reserve(streams.size());
  for (const StreamSpec& spec : streams) {
    check_stream(spec);
    StreamPlan plan;
    plan.name = spec.name;
    plan.mode = spec.mode;
    plan.window = spec.mode == Mode::window ? spec.window : 0;
    plan.stream_len = spec.timestamps.size();
    plan.latency_ns = spec.latency_ns;
    std::size_t cursor = 0;  // first event not yet admissible / not yet claimed
    if (spec.mode == Mode::forward_fill) {
      plan.ffill.reserve(local.size());
      for (std::int64_t t : local) {
        while (cursor < spec.timestamps.size() &&
               visible_at(spec.timestamps[cursor], spec.latency_ns) <= t) {
          ++cursor;
        }
        FfillCell cell;
        if (cursor > 0) cell.index = cursor - 1;  // greatest admissible index
        plan.ffill.push_back(cell);
      }
    } else {
      plan.windows.reserve(local.size());
      for (std::int64_t t : local) {
        const std::size_t claim_lo = cursor;
        while (cursor < spec.timestamps.size() &&
               visible_at(spec.timestamps[cursor], spec.latency_ns) <= t) {
          ++cursor;
        }
        WindowCell cell;
        cell.hi = cursor;
        const std::size_t claimed = cursor - claim_lo;
        if (claimed > spec.window) {
          cell.overflow = claimed - spec.window;  // oldest claimed events are dropped
          cell.lo = cursor - spec.window;
        } else {
          cell.lo = claim_lo;
        }
        plan.windows.push_back(cell);
      }
    }
    plans.push_back(std::move(plan));
  }
  return Schedule(local.size(), std::move(plans));
}

std::size_t merged_row_width(const Schedule& schedule, std::size_t local_width,
                             const std::vector<std::size_t>& stream_widths) {
  require(stream_widths.size() == schedule.plans().size(), Errc::consistency,
          "stream width count does not match schedule");
  std::size_t w = local_width;
  for (std::size_t s = 0; s < stream_widths.size(); ++s) {
    const StreamPlan& plan = schedule.plans()[s];
    w += plan.mode == Mode::forward_fill ? stream_widths[s] : plan.window * stream_widths[s];
  }
  return w;
}

Sequence execute(const Schedule& schedule, const Sequence& local_data,
                 const std::vector<Sequence>& stream_data) {
  require(local_data.size() == schedule.local_steps(), Errc::consistency,
          "local data length does not match schedule");
  require(stream_data.size() == schedule.plans().size(), Errc::consistency,
          "stream data count does not match schedule");
  std::vector<std::size_t> widths;
  widths.reserve(stream_data.size());
  for (std::size_t s = 0; s < stream_data.size(); ++s) {
    const StreamPlan& plan = schedule.plans()[s];
    require(stream_data[s].size() == plan.stream_len, Errc::consistency,
            "stream '" + plan.name + "' data length does not match schedule");
    widths.push_back(stream_data[s].row_width());
  }

  const std::size_t out_w = merged_row_width(schedule, local_data.row_width(), widths);
  std::vector<double> data(schedule.local_steps() * out_w, kNan);
  for (std::size_t t = 0; t < schedule.local_steps(); ++t) {
    double* row = data.data() + t * out_w;
    std::size_t offset = 0;
    auto local_row = local_data.row_values(t);
    std::copy(local_row.begin(), local_row.end(), row);
    offset += local_row.size();
    for (std::size_t s = 0; s < schedule.plans().size(); ++s) {
      const StreamPlan& plan = schedule.plans()[s];
      const std::size_t w = widths[s];
      if (plan.mode == Mode::forward_fill) {
        if (plan.ffill[t].index) {
          auto r = stream_data[s].row_values(*plan.ffill[t].index);
          std::copy(r.begin(), r.end(), row + offset);
        }
        offset += w;
      } else {
        const WindowCell& cell = plan.windows[t];
        // Oldest first, NaN padding in front of the filled tail.
        const std::size_t pad = plan.window - cell.count();
        for (std::size_t i = cell.lo; i < cell.hi; ++i) {
          auto r = stream_data[s].row_values(i);
          std::copy(r.begin(), r.end(), row + offset + (pad + (i - cell.lo)) * w);
        }
        offset += plan.window * w;
      }
    }
  }
  return Sequence(local_data.timestamps(), Shape::vector(out_w), std::move(data));
}

UnrollResult synchronized_unroll(const Transform& t, std::uint64_t seed, const Sequence& local_data,
                                 const std::vector<SyncStream>& streams) {
  std::vector<StreamSpec> specs;
  std::vector<Sequence> data;
  specs.reserve(streams.size());
  data.reserve(streams.size());
  for (const SyncStream& s : streams) {
    require(s.spec.timestamps.size() == s.data.size(), Errc::consistency,
            "stream '" + s.spec.name + "': spec and data lengths differ");
    specs.push_back(s.spec);
    data.push_back(s.data);
  }
  if (streams.empty()) return unroll(t, seed, local_data);
  Schedule schedule = trace(local_data.timestamps(), specs);
  return unroll(t, seed, execute(schedule, local_data, data));
}

// Schedule CSV: `#stream` metadata lines describing each traced stream, a
// header, then one record per (step, stream). Empty lo/hi for a forward-fill
// miss. Example:
//
//   #streamloop-schedule v1
//   #local,3
//   #stream,air,ffill,0,4,1000
//   step,stream,kind,lo,hi,pad,overflow
//   0,air,ffill,2,,,
std::string Schedule::to_csv() const {
  std::ostringstream out;
  out << "#streamloop-schedule v1\n";
  out << "#local," << local_steps_ << '\n';
  for (const StreamPlan& p : plans_) {
    out << "#stream," << p.name << ',' << (p.mode == Mode::forward_fill ? "ffill" : "window")
        << ',' << p.window << ',' << p.stream_len << ',' << p.latency_ns << '\n';
  }
  out << "step,stream,kind,lo,hi,pad,overflow\n";
  for (std::size_t t = 0; t < local_steps_; ++t) {
    for (const StreamPlan& p : plans_) {
      out << t << ',' << p.name << ',';
      if (p.mode == Mode::forward_fill) {
        out << "ffill,";
        if (p.ffill[t].index) out << *p.ffill[t].index;
        out << ",,,";
      } else {
        const WindowCell& c = p.windows[t];
        out << "window," << c.lo << ',' << c.hi << ',' << (p.window - c.count()) << ','
            << c.overflow;
      }
      out << '\n';
    }
  }
  return out.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (ch != '\r') {
      field.push_back(ch);
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

std::size_t parse_size(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    require(pos == s.size(), Errc::parse, std::string("schedule csv: bad ") + what + " '" + s + "'");
    return static_cast<std::size_t>(v);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(Errc::parse, std::string("schedule csv: bad ") + what + " '" + s + "'");
  }
}

}  // namespace

Schedule Schedule::from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  require(std::getline(in, line) && split_csv_line(line)[0] == "#streamloop-schedule v1",
          Errc::parse, "schedule csv: missing #streamloop-schedule v1 marker");
  require(std::getline(in, line) && line.starts_with("#local,"), Errc::parse,
          "schedule csv: missing #local line");
  const std::size_t local_steps = parse_size(split_csv_line(line)[1], "local step count");

  std::vector<StreamPlan> plans;
  std::size_t header_pos = 0;
  while (std::getline(in, line)) {
    if (!line.starts_with("#stream,")) {
      header_pos = 1;
      break;
    }
    auto f = split_csv_line(line);
    require(f.size() == 6, Errc::parse, "schedule csv: bad #stream line");
    StreamPlan p;
    p.name = f[1];
    require(f[2] == "ffill" || f[2] == "window", Errc::parse,
            "schedule csv: unknown mode '" + f[2] + "'");
    p.mode = f[2] == "ffill" ? Mode::forward_fill : Mode::window;
    p.window = parse_size(f[3], "window");
    p.stream_len = parse_size(f[4], "stream length");
    try {
      p.latency_ns = std::stoll(f[5]);
    } catch (const std::exception&) {
      fail(Errc::parse, "schedule csv: bad latency '" + f[5] + "'");
    }
    plans.push_back(std::move(p));
  }
  require(header_pos == 1 && line == "step,stream,kind,lo,hi,pad,overflow", Errc::parse,
          "schedule csv: missing record header");

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = split_csv_line(line);
    require(f.size() == 7, Errc::parse, "schedule csv: record needs 7 fields");
    const std::size_t step = parse_size(f[0], "step");
    require(step < local_steps, Errc::parse, "schedule csv: step beyond #local count");
    auto plan = std::find_if(plans.begin(), plans.end(),
                             [&](const StreamPlan& p) { return p.name == f[1]; });
    require(plan != plans.end(), Errc::parse, "schedule csv: unknown stream '" + f[1] + "'");
    if (f[2] == "ffill") {
      require(plan->mode == Mode::forward_fill, Errc::parse,
              "schedule csv: record kind does not match stream mode");
      FfillCell cell;
      if (!f[3].empty()) cell.index = parse_size(f[3], "index");
      require(plan->ffill.size() == step, Errc::parse, "schedule csv: records out of order");
      plan->ffill.push_back(cell);
    } else if (f[2] == "window") {
      require(plan->mode == Mode::window, Errc::parse,
              "schedule csv: record kind does not match stream mode");
      WindowCell cell;
      cell.lo = parse_size(f[3], "lo");
      cell.hi = parse_size(f[4], "hi");
      cell.overflow = parse_size(f[6], "overflow");
      require(cell.lo <= cell.hi && cell.hi - cell.lo <= plan->window, Errc::parse,
              "schedule csv: window range exceeds buffer");
      require(parse_size(f[5], "pad") == plan->window - (cell.hi - cell.lo), Errc::parse,
              "schedule csv: pad does not match range");
      require(plan->windows.size() == step, Errc::parse, "schedule csv: records out of order");
      plan->windows.push_back(cell);
    } else {
      fail(Errc::parse, "schedule csv: unknown kind '" + f[2] + "'");
    }
  }
  for (const StreamPlan& p : plans) {
    const std::size_t n = p.mode == Mode::forward_fill ? p.ffill.size() : p.windows.size();
    require(n == local_steps, Errc::parse, "schedule csv: stream '" + p.name + "' is missing steps");
  }
  return Schedule(local_steps, std::move(plans));
}

}  // namespace sync
}  // namespace streamloop
