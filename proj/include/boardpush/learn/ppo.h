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

// Transition storage, advantage estimation and the clipped-surrogate update.

#ifndef BOARDPUSH_LEARN_PPO_H_
#define BOARDPUSH_LEARN_PPO_H_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "absl/status/status.h"
#include "boardpush/learn/policy.h"

namespace boardpush::learn {

// Time-major storage: sample (t, e) lives at row t * n_envs + e.
struct TransitionBatch {
  int n_envs = 0;
  int horizon = 0;
  int obs_dim = 0;
  int action_dim = 0;
  std::vector<double> raw_obs;     // as returned by the environment
  std::vector<double> obs;         // normalized, as seen by the policy
  std::vector<double> action;      // sampled targets before clamping
  std::vector<double> log_prob;
  std::vector<double> reward;
  std::vector<double> value;
  std::vector<uint8_t> done;
  std::vector<double> bootstrap;   // value of each env's final observation

  void Resize(int envs, int steps, int obs_size, int action_size);
  int size() const { return n_envs * horizon; }
  // Digest over every array, bit for bit.
  uint64_t Hash() const;
};

// Generalized advantage estimation over a time-major layout; a done flag at
// (t, e) stops bootstrapping from t + 1. Advantages are unnormalized.
void Gae(std::span<const double> reward, std::span<const double> value,
         std::span<const uint8_t> done, std::span<const double> bootstrap, int n_envs,
         int horizon, double gamma, double lambda, std::span<double> advantage,
         std::span<double> returns);

struct PpoConfig {
  double clip = 0.2;
  int epochs = 4;
  int minibatches = 8;
  double value_coef = 0.5;
  double entropy_coef = 0.0;
  double max_grad_norm = 0.5;
  double gamma = 0.99;
  double lambda = 0.95;
};

absl::Status ValidatePpoConfig(const PpoConfig& cfg);

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  int64_t step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  void Reset(size_t n);
  void Step(std::span<double> params, std::span<const double> grad, double lr);
};

// Samples of one gradient step, one per column.
struct Minibatch {
  Eigen::MatrixXd obs;        // obs_dim x B, normalized
  Eigen::MatrixXd action;     // action_dim x B
  Eigen::VectorXd log_prob;   // behavior policy
  Eigen::VectorXd advantage;  // normalized
  Eigen::VectorXd returns;
};

struct LossTerms {
  double total = 0.0;
  double policy = 0.0;
  double value = 0.0;
  double entropy = 0.0;
  double kl = 0.0;  // k3 estimate of KL(old || new)
  double clip_fraction = 0.0;
};

// Loss of a minibatch; grad (sized like params) receives its gradient.
LossTerms LossAndGradient(const ActorCritic& policy, const Minibatch& batch,
                          const PpoConfig& cfg, std::span<double> grad);

struct PpoStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double kl = 0.0;
  double clip_fraction = 0.0;
  double grad_norm = 0.0;
  bool finite = true;
};

// Epochs x minibatches of clipped-surrogate steps on batch-normalized
// advantages (left as is for a single sample). The normalizer is not
// touched. On a non-finite loss the update stops early with finite = false.
PpoStats PpoUpdate(const TransitionBatch& batch, const PpoConfig& cfg, double lr,
                   std::mt19937_64& rng, ActorCritic* policy, AdamState* adam);

}  // namespace boardpush::learn

#endif  // BOARDPUSH_LEARN_PPO_H_
