// Copyright 2026 The streamloop authors.
// SPDX-License-Identifier: Apache-2.0

#include "streamloop/learnloop.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <utility>

#include "streamloop/rng.hpp"

namespace streamloop {
namespace learnloop {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), Errc::shape,
          "dot: dimension mismatch (" + std::to_string(a.size()) + " vs " +
              std::to_string(b.size()) + ")");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

class OnlineLearnerT final : public Transform {
 public:
  OnlineLearnerT(SupervisedModel model, double learning_rate, std::vector<double> w0)
      : model_(std::move(model)), lr_(learning_rate), w0_(std::move(w0)) {
    require(model_.predict && model_.loss && model_.grad, Errc::param,
            "online_supervised_learner: model functions must all be set");
    require(std::isfinite(lr_) && lr_ >= 0.0, Errc::param,
            "online_supervised_learner: learning rate must be finite and >= 0");
    require(!w0_.empty(), Errc::param, "online_supervised_learner: empty initial weights");
  }

  std::string name() const override { return "online_supervised_learner"; }

  // Input [x_1..x_d, y] -> output [prediction, loss, w_1..w_d].
  Shape output_shape(const Shape& input) const override {
    require(input == Shape::vector(w0_.size() + 1), Errc::shape,
            "online_supervised_learner: expected vector[" + std::to_string(w0_.size() + 1) +
                "] rows of (x, y), got " + input.str());
    return Shape::vector(2 + w0_.size());
  }

  InitResult init(std::uint64_t, const Shape& input) const override {
    output_shape(input);
    InitResult r;
    r.state.emplace("w", Tensor::vector(w0_));
    return r;
  }

  ApplyResult apply(const TensorMap&, TensorMap state, const Tensor& input) const override {
    const std::size_t d = w0_.size();
    Tensor w = state.at("w");
    auto wv = w.values();
    const auto x = input.values().first(d);
    const double y = input[d];

    const double prediction = model_.predict(wv, x);
    const double loss = model_.loss(prediction, y);

    std::vector<double> out(2 + d);
    out[0] = prediction;
    out[1] = loss;
    std::copy(wv.begin(), wv.end(), out.begin() + 2);  // pre-update weights

    const std::vector<double> g = model_.grad(wv, x, y);
    require(g.size() == d, Errc::shape, "online_supervised_learner: gradient has wrong dimension");
    for (std::size_t i = 0; i < d; ++i) {
      require(std::isfinite(g[i]), Errc::numeric,
              "online_supervised_learner: non-finite gradient component");
      wv[i] -= lr_ * g[i];
    }
    state.insert_or_assign("w", std::move(w));
    return ApplyResult{Tensor::vector(std::move(out)), std::move(state)};
  }

 private:
  SupervisedModel model_;
  double lr_;
  std::vector<double> w0_;
};

class GymFeedbackT final : public Transform {
 public:
  GymFeedbackT(TransformPtr agent, TransformPtr env, Tensor initial_observation)
      : agent_(std::move(agent)), env_(std::move(env)), obs0_(std::move(initial_observation)) {
    require(agent_ != nullptr && env_ != nullptr, Errc::param, "gym_feedback: null transform");
  }

  std::string name() const override { return "gym_feedback"; }

  Shape output_shape(const Shape& raw) const override {
    const Shape action = agent_->output_shape(obs0_.shape());
    const Shape env_in = Shape::vector(raw.size() + action.size());
    const Shape env_out = env_->output_shape(env_in);
    require(env_out == Shape::vector(1 + obs0_.size()), Errc::shape,
            "gym_feedback: environment must emit [reward, observation...] of vector[" +
                std::to_string(1 + obs0_.size()) + "], got " + env_out.str());
    return Shape::vector(1 + action.size() + obs0_.size());
  }

  InitResult init(std::uint64_t seed, const Shape& raw) const override {
    output_shape(raw);
    const Rng rng(seed);
    InitResult agent = agent_->init(rng.split(1).key(), obs0_.shape());
    InitResult env = env_->init(rng.split(2).key(),
                                Shape::vector(raw.size() + agent_->output_shape(obs0_.shape()).size()));
    InitResult r;
    r.params = namespaced("agent/", agent.params);
    merge_namespaced(r.params, "env/", std::move(env.params));
    r.state = namespaced("agent/", agent.state);
    merge_namespaced(r.state, "env/", std::move(env.state));
    r.state.emplace("obs", obs0_);  // one-step observation lag lives here
    return r;
  }

  ApplyResult apply(const TensorMap& params, TensorMap state, const Tensor& raw) const override {
    const Tensor obs_prev = state.at("obs");

    // Action from the previous observation, never from raw_t.
    ApplyResult agent =
        agent_->apply(sub_map(params, "agent/"), sub_map(state, "agent/"), obs_prev);

    std::vector<double> env_in;
    env_in.reserve(raw.size() + agent.output.size());
    env_in.insert(env_in.end(), raw.values().begin(), raw.values().end());
    env_in.insert(env_in.end(), agent.output.values().begin(), agent.output.values().end());
    ApplyResult env = env_->apply(sub_map(params, "env/"), sub_map(state, "env/"),
                                  Tensor::vector(std::move(env_in)));

    auto env_out = env.output.values();
    std::vector<double> obs_next(env_out.begin() + 1, env_out.end());
    std::vector<double> out;
    out.reserve(1 + agent.output.size() + obs_next.size());
    out.push_back(env_out[0]);  // reward
    out.insert(out.end(), agent.output.values().begin(), agent.output.values().end());
    out.insert(out.end(), obs_next.begin(), obs_next.end());

    TensorMap next;
    merge_namespaced(next, "agent/", std::move(agent.state));
    merge_namespaced(next, "env/", std::move(env.state));
    next.emplace("obs", Tensor(obs0_.shape(), std::move(obs_next)));
    return ApplyResult{Tensor::vector(std::move(out)), std::move(next)};
  }

 private:
  TransformPtr agent_;
  TransformPtr env_;
  Tensor obs0_;
};

// Environment of the regression study: holds the true weights, flips their
// sign at flip_step, and scores the agent's weight estimate against a fresh
// noisy label each step. Input [x_1..x_d, w_hat_1..w_hat_d], output
// [reward, x_1..x_d, y].
class NonstationaryLinearEnvT final : public Transform {
 public:
  NonstationaryLinearEnvT(std::vector<double> true_weights, std::size_t flip_step,
                          double noise_std, std::uint64_t noise_key)
      : wstar_(std::move(true_weights)),
        flip_step_(flip_step),
        noise_std_(noise_std),
        noise_(noise_key) {}

  std::string name() const override { return "nonstationary_linear_env"; }

  Shape output_shape(const Shape& input) const override {
    const std::size_t d = wstar_.size();
    require(input == Shape::vector(2 * d), Errc::shape,
            "nonstationary_linear_env: expected vector[" + std::to_string(2 * d) + "], got " +
                input.str());
    return Shape::vector(1 + d + 1);
  }

  InitResult init(std::uint64_t, const Shape& input) const override {
    output_shape(input);
    InitResult r;
    r.state.emplace("step", Tensor(0.0));
    return r;
  }

  ApplyResult apply(const TensorMap&, TensorMap state, const Tensor& input) const override {
    const std::size_t d = wstar_.size();
    const auto t = static_cast<std::uint64_t>(state.at("step").scalar());
    const auto x = input.values().first(d);
    const auto w_hat = input.values().subspan(d, d);

    const double sign = t < flip_step_ ? 1.0 : -1.0;
    double y = noise_std_ * noise_.normal(t);
    for (std::size_t i = 0; i < d; ++i) y += sign * wstar_[i] * x[i];

    const double prediction = dot(w_hat, x);
    const double reward = -(prediction - y) * (prediction - y);

    std::vector<double> out;
    out.reserve(2 + d);
    out.push_back(reward);
    out.insert(out.end(), x.begin(), x.end());
    out.push_back(y);
    state.insert_or_assign("step", Tensor(static_cast<double>(t + 1)));
    return ApplyResult{Tensor::vector(std::move(out)), std::move(state)};
  }

 private:
  std::vector<double> wstar_;
  std::size_t flip_step_;
  double noise_std_;
  Rng noise_;
};

}  // namespace

SupervisedModel linear_model() {
  SupervisedModel m;
  m.predict = [](std::span<const double> w, std::span<const double> x) { return dot(w, x); };
  m.loss = [](double prediction, double target) {
    const double e = prediction - target;
    return e * e;
  };
  m.grad = [](std::span<const double> w, std::span<const double> x, double target) {
    const double e = dot(w, x) - target;
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = 2.0 * e * x[i];
    return g;
  };
  return m;
}

TransformPtr online_supervised_learner(SupervisedModel model, double learning_rate,
                                       std::vector<double> initial_weights) {
  return std::make_shared<OnlineLearnerT>(std::move(model), learning_rate,
                                          std::move(initial_weights));
}

TransformPtr gym_feedback(TransformPtr agent, TransformPtr env, Tensor initial_observation) {
  return std::make_shared<GymFeedbackT>(std::move(agent), std::move(env),
                                        std::move(initial_observation));
}

LoopOutput unpack_loop_output(std::span<const double> row, std::size_t action_dim,
                              std::size_t obs_dim) {
  require(row.size() == 1 + action_dim + obs_dim, Errc::consistency,
          "loop row width does not match action/observation dims");
  LoopOutput out;
  out.reward = row[0];
  out.action.assign(row.begin() + 1, row.begin() + 1 + action_dim);
  out.observation.assign(row.begin() + 1 + action_dim, row.end());
  return out;
}

RunRecord nonstationary_regression_experiment(const ExperimentConfig& config) {
  require(config.dim >= 1, Errc::param, "experiment: dim must be >= 1");
  require(config.steps >= 1, Errc::param, "experiment: steps must be >= 1");
  require(config.flip_step >= 1 && config.flip_step <= config.steps, Errc::param,
          "experiment: need 1 <= flip_step <= steps");
  require(std::isfinite(config.noise_std) && config.noise_std >= 0.0, Errc::param,
          "experiment: noise_std must be finite and >= 0");
  require(std::isfinite(config.learning_rate) && config.learning_rate >= 0.0, Errc::param,
          "experiment: learning_rate must be finite and >= 0");

  const std::size_t d = config.dim;
  const Rng root(config.seed);
  const Rng feature_rng = root.split(1);
  const Rng weight_rng = root.split(2);
  const Rng noise_rng = root.split(3);

  std::vector<double> wstar(d);
  for (std::size_t i = 0; i < d; ++i) wstar[i] = 2.0 * weight_rng.uniform(i) - 1.0;

  std::vector<std::int64_t> ts(config.steps);
  std::vector<double> features(config.steps * d);
  for (std::size_t t = 0; t < config.steps; ++t) {
    ts[t] = static_cast<std::int64_t>(t);
    for (std::size_t i = 0; i < d; ++i) {
      features[t * d + i] = feature_rng.normal(static_cast<std::uint64_t>(t) * d + i);
    }
  }
  const Sequence raw(std::move(ts), Shape::vector(d), std::move(features));

  // Agent: the learner over (x, y) pairs, acting through its current weights.
  TransformPtr agent = compose(
      select(2, 2 + d), online_supervised_learner(linear_model(), config.learning_rate,
                                                  std::vector<double>(d, 0.0)));
  TransformPtr env = std::make_shared<NonstationaryLinearEnvT>(wstar, config.flip_step,
                                                               config.noise_std, noise_rng.key());
  // Initial observation x = 0, y = 0: the first learner step has zero gradient.
  TransformPtr loop =
      gym_feedback(std::move(agent), std::move(env), Tensor::full(Shape::vector(d + 1), 0.0));

  const UnrollResult run = unroll(*loop, config.seed, raw);

  RunRecord record;
  record.config = config;
  record.loss.resize(config.steps);
  record.regret.resize(config.steps);
  record.reward.resize(config.steps);
  record.weights.resize(config.steps * d);
  record.true_weights.resize(config.steps * d);
  double cumulative = 0.0;
  const std::size_t action_dim = d;
  for (std::size_t t = 0; t < config.steps; ++t) {
    const LoopOutput out = unpack_loop_output(run.output.row_values(t), action_dim, d + 1);
    record.reward[t] = out.reward;
    record.loss[t] = -out.reward;
    cumulative += record.loss[t];
    record.regret[t] = cumulative;
    const double sign = t < config.flip_step ? 1.0 : -1.0;
    for (std::size_t i = 0; i < d; ++i) {
      record.weights[t * d + i] = out.action[i];
      record.true_weights[t * d + i] = sign * wstar[i];
    }
  }
  return record;
}

void RunRecord::to_csv(std::ostream& out) const {
  const std::size_t d = config.dim;
  out << "step,loss,regret";
  for (std::size_t i = 1; i <= d; ++i) out << ",w_hat_" << i;
  for (std::size_t i = 1; i <= d; ++i) out << ",w_star_" << i;
  out << ",reward\n";
  char buf[64];
  const auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << ',' << buf;
  };
  for (std::size_t t = 0; t < loss.size(); ++t) {
    out << t;
    put(loss[t]);
    put(regret[t]);
    for (std::size_t i = 0; i < d; ++i) put(weights[t * d + i]);
    for (std::size_t i = 0; i < d; ++i) put(true_weights[t * d + i]);
    put(reward[t]);
    out << '\n';
  }
}

}  // namespace learnloop
}  // namespace streamloop
