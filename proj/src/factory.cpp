// Copyright 2026 The streamloop authors.
// SPDX-License-Identifier: Apache-2.0

#include "streamloop/factory.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "streamloop/modules.hpp"

namespace streamloop {

namespace {

struct OpSpec {
  std::string name;
  std::map<std::string, std::string> args;
};

OpSpec parse_spec(const std::string& text) {
  std::istringstream in(text);
  OpSpec spec;
  require(static_cast<bool>(in >> spec.name), Errc::parse, "empty transform spec");
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    require(eq != std::string::npos && eq > 0, Errc::parse,
            "transform spec: expected key=value, got '" + token + "'");
    const std::string key = token.substr(0, eq);
    require(!spec.args.contains(key), Errc::parse, "transform spec: duplicate key '" + key + "'");
    spec.args.emplace(key, token.substr(eq + 1));
  }
  return spec;
}

std::string take(OpSpec& spec, const std::string& key, const std::string& fallback) {
  auto it = spec.args.find(key);
  if (it == spec.args.end()) return fallback;
  std::string v = it->second;
  spec.args.erase(it);
  return v;
}

double take_double(OpSpec& spec, const std::string& key, double fallback) {
  const std::string v = take(spec, key, "");
  if (v.empty()) return fallback;
  if (v == "nan" || v == "NaN") return kNan;
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    require(pos == v.size(), Errc::parse, spec.name + ": bad number for " + key + ": '" + v + "'");
    return x;
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(Errc::parse, spec.name + ": bad number for " + key + ": '" + v + "'");
  }
}

std::size_t take_size(OpSpec& spec, const std::string& key, std::size_t fallback) {
  const std::string v = take(spec, key, "");
  if (v.empty()) return fallback;
  try {
    std::size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    require(pos == v.size() && v[0] != '-', Errc::parse,
            spec.name + ": bad integer for " + key + ": '" + v + "'");
    return static_cast<std::size_t>(x);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(Errc::parse, spec.name + ": bad integer for " + key + ": '" + v + "'");
  }
}

bool take_bool(OpSpec& spec, const std::string& key, bool fallback) {
  const std::string v = take(spec, key, "");
  if (v.empty()) return fallback;
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  fail(Errc::parse, spec.name + ": bad boolean for " + key + ": '" + v + "' (use true/false)");
}

EwSpec take_ew(OpSpec& spec) {
  EwSpec ew;
  ew.alpha = take_double(spec, "alpha", ew.alpha);
  ew.adjust = take_bool(spec, "adjust", ew.adjust);
  ew.ignore_na = take_bool(spec, "ignore_na", ew.ignore_na);
  return ew;
}

TransformPtr build(OpSpec spec);

TransformPtr build_update_on_event(OpSpec spec) {
  const std::string inner_name = take(spec, "inner", "");
  require(!inner_name.empty(), Errc::parse, "update_on_event: missing inner=<name>");
  const double initial = take_double(spec, "initial", kNan);
  OpSpec inner = std::move(spec);  // remaining keys belong to the inner transform
  inner.name = inner_name;
  return update_on_event(build(std::move(inner)), Tensor(initial));
}

TransformPtr build(OpSpec spec) {
  TransformPtr t;
  if (spec.name == "identity") {
    t = identity();
  } else if (spec.name == "buffer") {
    t = buffer(take_size(spec, "n", 0));
  } else if (spec.name == "lag") {
    t = lag(take_size(spec, "k", 0));
  } else if (spec.name == "diff") {
    t = diff(take_size(spec, "k", 0));
  } else if (spec.name == "pct_change") {
    t = pct_change(take_size(spec, "k", 0));
  } else if (spec.name == "rolling_mean") {
    WindowSpec w;
    w.length = take_size(spec, "window", 0);
    w.min_periods = take_size(spec, "min_periods", 0);
    t = rolling_mean(w);
  } else if (spec.name == "ewma") {
    t = ewma(take_ew(spec));
  } else if (spec.name == "ewmvar") {
    t = ewm_var(take_ew(spec));
  } else if (spec.name == "ewmcov") {
    t = ewm_cov(take_ew(spec));
  } else if (spec.name == "update_on_event") {
    return build_update_on_event(std::move(spec));  // consumes the leftovers itself
  } else if (spec.name == "trailing_ohlc") {
    t = trailing_ohlc();
  } else {
    fail(Errc::parse, "unknown transform '" + spec.name + "'");
  }
  if (!spec.args.empty()) {
    fail(Errc::parse, spec.name + ": unknown parameter '" + spec.args.begin()->first + "'");
  }
  return t;
}

}  // namespace

TransformPtr make_transform(const std::string& spec) { return build(parse_spec(spec)); }

}  // namespace streamloop
