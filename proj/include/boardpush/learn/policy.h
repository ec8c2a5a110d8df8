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

// Actor-critic policy: Gaussian over position targets with tanh-squashed
// means and a state-independent standard deviation.

#ifndef BOARDPUSH_LEARN_POLICY_H_
#define BOARDPUSH_LEARN_POLICY_H_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "boardpush/env/environment.h"
#include "boardpush/learn/mlp.h"

namespace boardpush::learn {

inline constexpr double kMinLogStd = -5.0;
inline constexpr double kMaxLogStd = 1.0;

// Running per-dimension mean and variance of observations.
class ObsNormalizer {
 public:
  static constexpr double kClip = 10.0;

  ObsNormalizer() = default;
  explicit ObsNormalizer(int dim);

  int dim() const { return static_cast<int>(mean_.size()); }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::VectorXd& var() const { return var_; }
  double count() const { return count_; }
  void Set(const Eigen::VectorXd& mean, const Eigen::VectorXd& var, double count);

  // Merges a batch of samples, one per column.
  void Update(const Eigen::Ref<const Eigen::MatrixXd>& samples);
  void Normalize(std::span<const double> obs, std::span<double> out) const;
  // Order-sensitive digest of the statistics.
  uint64_t Checksum() const;

 private:
  Eigen::VectorXd mean_;
  Eigen::VectorXd var_;
  double count_ = 0.0;
};

struct PolicyShape {
  int obs_dim = 0;
  int action_dim = 0;
  std::vector<int> hidden = {256, 256};
};

class ActorCritic {
 public:
  ActorCritic(const PolicyShape& shape, const env::ActionSpace& space);

  const PolicyShape& shape() const { return shape_; }
  const Mlp& actor() const { return actor_; }
  const Mlp& critic() const { return critic_; }
  int action_dim() const { return shape_.action_dim; }

  // [actor | log_std | critic]
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }
  std::span<const double> actor_params() const;
  std::span<const double> critic_params() const;
  int log_std_offset() const { return actor_.num_params(); }
  int critic_offset() const { return actor_.num_params() + shape_.action_dim; }
  // Clamped to [kMinLogStd, kMaxLogStd].
  double log_std(int i) const;
  void ClampLogStd();

  ObsNormalizer& normalizer() { return normalizer_; }
  const ObsNormalizer& normalizer() const { return normalizer_; }

  void Initialize(uint64_t seed, double init_log_std);

  // Squashing of the actor output u: center + half * tanh(u + offset).
  const Eigen::VectorXd& center() const { return center_; }
  const Eigen::VectorXd& half_range() const { return half_; }
  const Eigen::VectorXd& offset() const { return offset_; }

  // Mean action and value of one normalized observation.
  void Evaluate(std::span<const double> nobs, std::span<double> mean, double* value) const;
  double LogProb(std::span<const double> mean, std::span<const double> action) const;

 private:
  PolicyShape shape_;
  Mlp actor_;
  Mlp critic_;
  std::vector<double> params_;
  ObsNormalizer normalizer_;
  Eigen::VectorXd center_;
  Eigen::VectorXd half_;
  Eigen::VectorXd offset_;
};

// Log density of a diagonal Gaussian.
double GaussianLogProb(std::span<const double> mean, std::span<const double> log_std,
                       std::span<const double> x);

}  // namespace boardpush::learn

#endif  // BOARDPUSH_LEARN_POLICY_H_
