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

#include "boardpush/learn/policy.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cassert>
#include <cmath>
#include <numbers>
#include <random>

#include "boardpush/env/skate_env.h"

namespace boardpush::learn {
namespace {

std::vector<int> Layers(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> sizes = {in};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(out);
  return sizes;
}

}  // namespace

ObsNormalizer::ObsNormalizer(int dim)
    : mean_(Eigen::VectorXd::Zero(dim)), var_(Eigen::VectorXd::Ones(dim)) {}

void ObsNormalizer::Set(const Eigen::VectorXd& mean, const Eigen::VectorXd& var, double count) {
  mean_ = mean;
  var_ = var;
  count_ = count;
}

void ObsNormalizer::Update(const Eigen::Ref<const Eigen::MatrixXd>& samples) {
  const double n = static_cast<double>(samples.cols());
  if (n == 0.0) return;
  const Eigen::VectorXd batch_mean = samples.rowwise().mean();
  const Eigen::VectorXd batch_var =
      (samples.colwise() - batch_mean).array().square().rowwise().mean();
  // Parallel-variance merge.
  const double total = count_ + n;
  const Eigen::VectorXd delta = batch_mean - mean_;
  mean_ += delta * (n / total);
  const Eigen::VectorXd m2 =
      var_ * count_ + batch_var * n + delta.array().square().matrix() * (count_ * n / total);
  var_ = m2 / total;
  count_ = total;
}

void ObsNormalizer::Normalize(std::span<const double> obs, std::span<double> out) const {
  for (int i = 0; i < dim(); ++i) {
    const double z = (obs[i] - mean_[i]) / std::sqrt(var_[i] + 1e-8);
    out[i] = std::clamp(z, -kClip, kClip);
  }
}

uint64_t ObsNormalizer::Checksum() const {
  uint64_t h = 1469598103934665603ull;
  auto mix = [&h](double x) {
    h ^= std::bit_cast<uint64_t>(x);
    h *= 1099511628211ull;
  };
  for (int i = 0; i < dim(); ++i) {
    mix(mean_[i]);
    mix(var_[i]);
  }
  mix(count_);
  return h;
}

ActorCritic::ActorCritic(const PolicyShape& shape, const env::ActionSpace& space)
    : shape_(shape),
      actor_(Layers(shape.obs_dim, shape.hidden, shape.action_dim)),
      critic_(Layers(shape.obs_dim, shape.hidden, 1)),
      params_(actor_.num_params() + shape.action_dim + critic_.num_params(), 0.0),
      normalizer_(shape.obs_dim) {
  const int n = shape.action_dim;
  center_.resize(n);
  half_.resize(n);
  offset_.resize(n);
  for (int i = 0; i < n; ++i) {
    center_[i] = 0.5 * (space.high[i] + space.low[i]);
    half_[i] = 0.5 * (space.high[i] - space.low[i]);
    const double s = (space.nominal[i] - center_[i]) / half_[i];
    offset_[i] = std::atanh(std::clamp(s, -0.999, 0.999));
  }
  assert(n <= 64);
}

std::span<const double> ActorCritic::actor_params() const {
  return std::span<const double>(params_).subspan(0, actor_.num_params());
}

std::span<const double> ActorCritic::critic_params() const {
  return std::span<const double>(params_).subspan(critic_offset(), critic_.num_params());
}

double ActorCritic::log_std(int i) const {
  return std::clamp(params_[log_std_offset() + i], kMinLogStd, kMaxLogStd);
}

void ActorCritic::ClampLogStd() {
  for (int i = 0; i < shape_.action_dim; ++i) {
    double& s = params_[log_std_offset() + i];
    s = std::clamp(s, kMinLogStd, kMaxLogStd);
  }
}

void ActorCritic::Initialize(uint64_t seed, double init_log_std) {
  std::mt19937_64 rng = env::MakeRng(seed, 0x706f6c696379ull);
  std::span<double> all(params_);
  actor_.Initialize(all.subspan(0, actor_.num_params()), rng, 0.01);
  for (int i = 0; i < shape_.action_dim; ++i) params_[log_std_offset() + i] = init_log_std;
  critic_.Initialize(all.subspan(critic_offset(), critic_.num_params()), rng, 1.0);
  ClampLogStd();
}

void ActorCritic::Evaluate(std::span<const double> nobs, std::span<double> mean,
                           double* value) const {
  actor_.Forward(actor_params(), nobs, mean);
  for (int i = 0; i < shape_.action_dim; ++i) {
    mean[i] = center_[i] + half_[i] * std::tanh(mean[i] + offset_[i]);
  }
  if (value != nullptr) critic_.Forward(critic_params(), nobs, std::span<double>(value, 1));
}

double ActorCritic::LogProb(std::span<const double> mean, std::span<const double> action) const {
  std::array<double, 64> ls;
  for (int i = 0; i < shape_.action_dim; ++i) ls[i] = log_std(i);
  return GaussianLogProb(mean, std::span<const double>(ls.data(), shape_.action_dim), action);
}

double GaussianLogProb(std::span<const double> mean, std::span<const double> log_std,
                       std::span<const double> x) {
  double lp = 0.0;
  for (size_t i = 0; i < mean.size(); ++i) {
    const double z = (x[i] - mean[i]) * std::exp(-log_std[i]);
    lp += -0.5 * z * z - log_std[i] - 0.5 * std::log(2.0 * std::numbers::pi);
  }
  return lp;
}

}  // namespace boardpush::learn
