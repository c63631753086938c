// Copyright 2026 The streamloop authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "streamloop/transform.hpp"

namespace streamloop {

// Builds a transform from a one-line textual spec, the same format used by
// pipeline config files and the C API:
//
//   identity
//   buffer n=3
//   lag k=1
//   diff k=1
//   pct_change k=1
//   rolling_mean window=20 min_periods=5
//   ewma alpha=0.5 adjust=true ignore_na=false
//   ewmvar alpha=0.5 adjust=true ignore_na=false
//   ewmcov alpha=0.5 adjust=true ignore_na=false
//   update_on_event inner=<name> initial=<float|nan> <inner params...>
//   trailing_ohlc
//
// Unknown names or parameters raise Errc::parse / Errc::param.
TransformPtr make_transform(const std::string& spec);

}  // namespace streamloop
