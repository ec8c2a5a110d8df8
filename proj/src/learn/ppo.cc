// Copyright 2026 The Boardpush Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "boardpush/learn/ppo.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>

#include "absl/strings/str_cat.h"

namespace boardpush::learn {

void TransitionBatch::Resize(int envs, int steps, int obs_size, int action_size) {
  n_envs = envs;
  horizon = steps;
  obs_dim = obs_size;
  action_dim = action_size;
  const size_t n = static_cast<size_t>(envs) * steps;
  raw_obs.assign(n * obs_size, 0.0);
  obs.assign(n * obs_size, 0.0);
  action.assign(n * action_size, 0.0);
  log_prob.assign(n, 0.0);
  reward.assign(n, 0.0);
  value.assign(n, 0.0);
  done.assign(n, 0);
  bootstrap.assign(envs, 0.0);
}

uint64_t TransitionBatch::Hash() const {
  uint64_t h = 1469598103934665603ull;
  auto mix = [&h](uint64_t x) {
    h ^= x;
    h *= 1099511628211ull;
  };
  for (const std::vector<double>* v :
       {&raw_obs, &obs, &action, &log_prob, &reward, &value, &bootstrap}) {
    for (double x : *v) mix(std::bit_cast<uint64_t>(x));
  }
  for (uint8_t d : done) mix(d);
  return h;
}

void Gae(std::span<const double> reward, std::span<const double> value,
         std::span<const uint8_t> done, std::span<const double> bootstrap, int n_envs,
         int horizon, double gamma, double lambda, std::span<double> advantage,
         std::span<double> returns) {
  for (int e = 0; e < n_envs; ++e) {
    double next_value = bootstrap[e];
    double next_advantage = 0.0;
    for (int t = horizon - 1; t >= 0; --t) {
      const size_t i = static_cast<size_t>(t) * n_envs + e;
      const double live = done[i] ? 0.0 : 1.0;
      const double delta = reward[i] + gamma * live * next_value - value[i];
      next_advantage = delta + gamma * lambda * live * next_advantage;
      advantage[i] = next_advantage;
      returns[i] = next_advantage + value[i];
      next_value = value[i];
    }
  }
}

absl::Status ValidatePpoConfig(const PpoConfig& cfg) {
  if (!(cfg.clip > 0.0)) return absl::InvalidArgumentError("train.clip must be > 0");
  if (cfg.epochs < 1) return absl::InvalidArgumentError("train.epochs must be >= 1");
  if (cfg.minibatches < 1) return absl::InvalidArgumentError("train.minibatches must be >= 1");
  if (!(cfg.gamma > 0.0 && cfg.gamma <= 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat("train.gamma must lie in (0, 1] (got ", cfg.gamma, ")"));
  }
  if (!(cfg.lambda > 0.0 && cfg.lambda <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("train.lambda must lie in (0, 1] (got ", cfg.lambda, ")"));
  }
  if (!(cfg.value_coef >= 0.0) || !(cfg.entropy_coef >= 0.0)) {
    return absl::InvalidArgumentError("train loss coefficients must be >= 0");
  }
  if (!(cfg.max_grad_norm > 0.0)) {
    return absl::InvalidArgumentError("train.max_grad_norm must be > 0");
  }
  return absl::OkStatus();
}

void AdamState::Reset(size_t n) {
  m.assign(n, 0.0);
  v.assign(n, 0.0);
  step = 0;
}

void AdamState::Step(std::span<double> params, std::span<const double> grad, double lr) {
  ++step;
  const double c1 = 1.0 - std::pow(beta1, static_cast<double>(step));
  const double c2 = 1.0 - std::pow(beta2, static_cast<double>(step));
  for (size_t i = 0; i < params.size(); ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
    params[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps);
  }
}

LossTerms LossAndGradient(const ActorCritic& policy, const Minibatch& batch,
                          const PpoConfig& cfg, std::span<double> grad) {
  const int b = static_cast<int>(batch.obs.cols());
  const int na = policy.action_dim();
  const std::span<const double> params(policy.params());
  std::fill(grad.begin(), grad.end(), 0.0);
  LossTerms loss;

  Mlp::Tape actor_tape;
  Eigen::MatrixXd u;
  policy.actor().Forward(policy.actor_params(), batch.obs, &u, &actor_tape);
  Eigen::VectorXd log_std(na);
  for (int j = 0; j < na; ++j) log_std[j] = policy.log_std(j);
  const Eigen::ArrayXd inv_var = (-2.0 * log_std.array()).exp();

  Eigen::MatrixXd d_u(na, b);
  Eigen::VectorXd d_log_std = Eigen::VectorXd::Zero(na);
  const double norm = 0.5 * std::log(2.0 * std::numbers::pi);
  for (int i = 0; i < b; ++i) {
    double log_prob = 0.0;
    Eigen::VectorXd tanh_u(na);
    Eigen::VectorXd diff(na);
    for (int j = 0; j < na; ++j) {
      tanh_u[j] = std::tanh(u(j, i) + policy.offset()[j]);
      const double mean = policy.center()[j] + policy.half_range()[j] * tanh_u[j];
      diff[j] = batch.action(j, i) - mean;
      log_prob += -0.5 * diff[j] * diff[j] * inv_var[j] - log_std[j] - norm;
    }
    const double log_ratio = log_prob - batch.log_prob[i];
    const double ratio = std::exp(log_ratio);
    const double adv = batch.advantage[i];
    const double clipped = std::clamp(ratio, 1.0 - cfg.clip, 1.0 + cfg.clip);
    const double surr1 = ratio * adv;
    const double surr2 = clipped * adv;
    loss.policy -= std::min(surr1, surr2) / b;
    loss.kl += (ratio - 1.0 - log_ratio) / b;
    if (std::abs(ratio - 1.0) > cfg.clip) loss.clip_fraction += 1.0 / b;
    // d(loss)/d(log_prob); the clipped branch carries no gradient.
    const double g = surr1 <= surr2 ? -ratio * adv / b : 0.0;
    for (int j = 0; j < na; ++j) {
      const double d_mean = g * diff[j] * inv_var[j];
      d_u(j, i) = d_mean * policy.half_range()[j] * (1.0 - tanh_u[j] * tanh_u[j]);
      d_log_std[j] += g * (diff[j] * diff[j] * inv_var[j] - 1.0);
    }
  }
  policy.actor().Backward(policy.actor_params(), actor_tape, d_u,
                          grad.subspan(0, policy.actor().num_params()));

  loss.entropy = log_std.sum() + na * (norm + 0.5);
  for (int j = 0; j < na; ++j) {
    const double raw = params[policy.log_std_offset() + j];
    // The clamp is flat outside its range.
    const bool inside = raw >= kMinLogStd && raw <= kMaxLogStd;
    grad[policy.log_std_offset() + j] = inside ? d_log_std[j] - cfg.entropy_coef : 0.0;
  }

  Mlp::Tape critic_tape;
  Eigen::MatrixXd v;
  policy.critic().Forward(policy.critic_params(), batch.obs, &v, &critic_tape);
  const Eigen::RowVectorXd err = v.row(0) - batch.returns.transpose();
  loss.value = 0.5 * err.squaredNorm() / b;
  const Eigen::MatrixXd d_v = (cfg.value_coef / b) * err;
  policy.critic().Backward(policy.critic_params(), critic_tape, d_v,
                           grad.subspan(policy.critic_offset(), policy.critic().num_params()));

  loss.total = loss.policy + cfg.value_coef * loss.value - cfg.entropy_coef * loss.entropy;
  return loss;
}

PpoStats PpoUpdate(const TransitionBatch& batch, const PpoConfig& cfg, double lr,
                   std::mt19937_64& rng, ActorCritic* policy, AdamState* adam) {
  const int n = batch.size();
  const int od = batch.obs_dim;
  const int ad = batch.action_dim;
  std::vector<double> advantage(n);
  std::vector<double> returns(n);
  Gae(batch.reward, batch.value, batch.done, batch.bootstrap, batch.n_envs, batch.horizon,
      cfg.gamma, cfg.lambda, advantage, returns);
  Eigen::Map<Eigen::VectorXd> adv(advantage.data(), n);
  const double mean = adv.mean();
  const double spread = std::sqrt((adv.array() - mean).square().mean());
  // A single sample has no spread to normalize by.
  if (n > 1) adv.array() = (adv.array() - mean) / (spread + 1e-8);

  const int per = std::max(1, n / cfg.minibatches);
  std::vector<int> order(n);
  std::vector<double> grad(policy->params().size());
  PpoStats stats;
  int steps = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (int start = 0; start + per <= n; start += per) {
      Minibatch mb;
      mb.obs.resize(od, per);
      mb.action.resize(ad, per);
      mb.log_prob.resize(per);
      mb.advantage.resize(per);
      mb.returns.resize(per);
      for (int k = 0; k < per; ++k) {
        const int i = order[start + k];
        mb.obs.col(k) = Eigen::Map<const Eigen::VectorXd>(&batch.obs[size_t(i) * od], od);
        mb.action.col(k) = Eigen::Map<const Eigen::VectorXd>(&batch.action[size_t(i) * ad], ad);
        mb.log_prob[k] = batch.log_prob[i];
        mb.advantage[k] = advantage[i];
        mb.returns[k] = returns[i];
      }
      const LossTerms loss = LossAndGradient(*policy, mb, cfg, grad);
      const double norm = Eigen::Map<const Eigen::VectorXd>(grad.data(), grad.size()).norm();
      if (!std::isfinite(loss.total) || !std::isfinite(norm)) {
        stats.finite = false;
        return stats;
      }
      if (norm > cfg.max_grad_norm) {
        const double scale = cfg.max_grad_norm / norm;
        for (double& g : grad) g *= scale;
      }
      adam->Step(policy->params(), grad, lr);
      policy->ClampLogStd();
      stats.policy_loss += loss.policy;
      stats.value_loss += loss.value;
      stats.entropy += loss.entropy;
      stats.kl += loss.kl;
      stats.clip_fraction += loss.clip_fraction;
      stats.grad_norm += norm;
      ++steps;
    }
  }
  if (steps > 0) {
    for (double* x : {&stats.policy_loss, &stats.value_loss, &stats.entropy, &stats.kl,
                      &stats.clip_fraction, &stats.grad_norm}) {
      *x /= steps;
    }
  }
  return stats;
}

}  // namespace boardpush::learn
