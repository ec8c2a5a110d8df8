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

// Parallel rollout over a fixed set of environments.

#ifndef BOARDPUSH_LEARN_ROLLOUT_H_
#define BOARDPUSH_LEARN_ROLLOUT_H_

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "boardpush/env/environment.h"
#include "boardpush/learn/policy.h"
#include "boardpush/learn/ppo.h"

namespace boardpush::learn {

// Seeds derived from a root seed for environment i.
uint64_t EnvResetSeed(uint64_t root, int i);
std::mt19937_64 ActionNoiseRng(uint64_t root, int i);

struct EpisodeRecord {
  double ret = 0.0;
  int length = 0;
  double tracking_error = 0.0;  // mean over the episode's steps
};

struct RolloutStats {
  std::vector<EpisodeRecord> episodes;  // completed, in env then time order
  std::vector<double> term_sums;        // per reward term, over all steps
  double tracking_sum = 0.0;
  int64_t steps = 0;
};

// Environments plus their per-instance episode bookkeeping. Instance i only
// ever draws from its own streams.
class VecEnv {
 public:
  VecEnv(std::vector<std::unique_ptr<env::Environment>> envs, uint64_t seed);

  int size() const { return static_cast<int>(slots_.size()); }
  int obs_dim() const { return slots_.front().env->obs_dim(); }
  int action_dim() const { return slots_.front().env->action_dim(); }
  env::Environment& env(int i) { return *slots_[i].env; }
  std::span<const double> obs(int i) const { return slots_[i].obs; }

 private:
  friend TransitionBatch Rollout(VecEnv& envs, const ActorCritic& policy, int horizon,
                                 int workers, RolloutStats* stats);

  struct Slot {
    std::unique_ptr<env::Environment> env;
    std::vector<double> obs;
    std::mt19937_64 rng;
    std::normal_distribution<double> normal;
    double ep_return = 0.0;
    int ep_length = 0;
    double ep_tracking = 0.0;
  };
  std::vector<Slot> slots_;
};

// Steps every environment horizon times with sampled actions, resetting
// finished episodes. The result does not depend on the worker count.
TransitionBatch Rollout(VecEnv& envs, const ActorCritic& policy, int horizon, int workers,
                        RolloutStats* stats);

}  // namespace boardpush::learn

#endif  // BOARDPUSH_LEARN_ROLLOUT_H_
