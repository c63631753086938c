// Copyright 2026 The streamloop authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "streamloop/transform.hpp"

namespace streamloop {
namespace learnloop {

// A supervised model is three plain functions; grad must be the analytic
// gradient of loss(predict(w, x), y) in w (checked against finite differences
// in the test suite).
struct SupervisedModel {
  std::function<double(std::span<const double> w, std::span<const double> x)> predict;
  std::function<double(double prediction, double target)> loss;
  std::function<std::vector<double>(std::span<const double> w, std::span<const double> x,
                                    double target)>
      grad;
};

// Linear predictor with squared loss: predict = w.x, loss = (p - y)^2,
// grad = 2 (p - y) x.
SupervisedModel linear_model();

// SGD learner as a stateful transform. Input rows are [x_0..x_{d-1}, y];
// output rows are [prediction, loss, w_0..w_{d-1}] where the prediction and
// the emitted weights use the pre-update state; the updated weights
// w - learning_rate * grad live in the transform state, so plain unroll drives
// the whole learning run.
TransformPtr online_supervised_learner(SupervisedModel model, double learning_rate,
                                       std::vector<double> initial_weights);

// One step of a Gym-style loop. The agent maps an observation to an action;
// the environment maps [raw observation, action] to [reward, next
// observation]. The agent always sees the previous step's observation (a
// one-step lag held in the loop state), starting from initial_observation.
// Output rows are [reward, action..., observation...].
TransformPtr gym_feedback(TransformPtr agent, TransformPtr env, Tensor initial_observation);

struct LoopOutput {
  double reward = 0.0;
  std::vector<double> action;
  std::vector<double> observation;
  std::map<std::string, double> diagnostics;
};

LoopOutput unpack_loop_output(std::span<const double> row, std::size_t action_dim,
                              std::size_t obs_dim);

struct ExperimentConfig {
  std::uint64_t seed = 42;
  std::size_t dim = 3;
  std::size_t steps = 4000;
  std::size_t flip_step = 2000;  // may equal steps: degenerate single-regime run
  double noise_std = 0.1;
  double learning_rate = 0.01;
};

// Per-step record of the non-stationary regression run. weights and
// true_weights are row-major steps x dim.
struct RunRecord {
  ExperimentConfig config;
  std::vector<double> loss;
  std::vector<double> regret;  // cumulative loss
  std::vector<double> reward;
  std::vector<double> weights;
  std::vector<double> true_weights;

  std::span<const double> weights_at(std::size_t step) const {
    return std::span<const double>(weights).subspan(step * config.dim, config.dim);
  }
  std::span<const double> true_weights_at(std::size_t step) const {
    return std::span<const double>(true_weights).subspan(step * config.dim, config.dim);
  }

  // CSV columns: step,loss,regret,w_hat_1..d,w_star_1..d,reward
  void to_csv(std::ostream& out) const;
};

// Online linear regression against an environment whose true weights flip sign
// at flip_step. Features are standard normal draws, labels carry Gaussian
// noise, the agent is an online_supervised_learner over linear_model(), and
// the loop runs through gym_feedback. Fully deterministic per seed.
RunRecord nonstationary_regression_experiment(const ExperimentConfig& config);

}  // namespace learnloop
}  // namespace streamloop
