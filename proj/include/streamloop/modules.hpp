// Copyright 2026 The streamloop authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "streamloop/transform.hpp"

namespace streamloop {

// Exponentially weighted smoothing parameters.
//
// With adjust=true the output at step t is the normalized weighted sum
//     sum_i w_i x_{t-i} / sum_i w_i,   w_i = (1-alpha)^i
// over the observations seen so far. With adjust=false it is the recursion
//     m_0 = x_0,  m_t = alpha x_t + (1-alpha) m_{t-1}.
//
// NaN handling:
//   adjust=true,  ignore_na=true : NaN rows are skipped entirely; weights count
//                                  valid observations only. NaN rows emit the
//                                  held value.
//   adjust=true,  ignore_na=false: weights count rows, so a NaN row decays the
//                                  history. The mean emitted on a NaN row is
//                                  unchanged; variance/covariance shift because
//                                  the debiasing factor sees the decay.
//   adjust=false, either         : a NaN row never touches the running value.
//                                  ignore_na=true emits the held value on the
//                                  NaN row, ignore_na=false emits NaN once and
//                                  resumes on the next valid row.
//
// Output is NaN until the first valid observation (EWMA) or until the
// debiasing denominator becomes positive (EWMVar/EWMCov need two effective
// observations).
struct EwSpec {
  double alpha = 0.5;     // in (0, 1]
  bool adjust = true;
  bool ignore_na = false;
};

struct WindowSpec {
  std::size_t length = 1;
  std::size_t min_periods = 0;  // 0 = default to length

  std::size_t effective_min_periods() const { return min_periods == 0 ? length : min_periods; }
};

// Last n inputs stacked oldest first, NaN-padded at the front until n inputs
// have arrived. Scalar input -> vector[n], vector[d] input -> matrix[n x d].
TransformPtr buffer(std::size_t n);

// output[t] = input[t-k]; the first k outputs are NaN. Element-wise.
TransformPtr lag(std::size_t k);

// output[t] = input[t] - input[t-k]; NaN-propagating. Element-wise.
TransformPtr diff(std::size_t k);

// output[t] = input[t] / input[t-k] - 1; a zero denominator yields NaN rather
// than an infinity. Element-wise.
TransformPtr pct_change(std::size_t k);

// Mean of the non-NaN values among the last `length` inputs (including the
// current one) once at least min_periods of them are valid, else NaN.
// Element-wise. The window is rescanned per step so results match a direct
// recomputation bit for bit.
TransformPtr rolling_mean(WindowSpec w);

// Exponentially weighted mean / debiased variance. Element-wise.
TransformPtr ewma(EwSpec spec);
TransformPtr ewm_var(EwSpec spec);

// Exponentially weighted debiased covariance of a pair input (vector[2]).
// ewm_cov on rows (x, x) equals ewm_var on x.
TransformPtr ewm_cov(EwSpec spec);

// Freezes an inner transform between events. Input is [event, payload...]:
// element 0 is the event flag (nonzero = event; NaN counts as no event), the
// remaining elements are the payload (scalar when a single element). On an
// event the inner transform advances and its output becomes the held output;
// otherwise the inner state is untouched and the held output is re-emitted.
// Before the first event the held output is `initial_output`.
TransformPtr update_on_event(TransformPtr inner, Tensor initial_output);

// Trailing open/high/low/close over segments delimited by reset events.
// Input rows are [reset_event, value]; output rows are [open, high, low,
// close]. Open is held through update_on_event (NaN before the first reset),
// high/low are running fmax/fmin accumulators restarted on each reset, close
// is the current value.
TransformPtr trailing_ohlc();

// Convenience driver for the OHLC transform over parallel value/reset lists.
Sequence trailing_ohlc_series(const Sequence& values, const std::vector<bool>& reset_events);

}  // namespace streamloop
