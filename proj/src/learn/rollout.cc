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

#include "boardpush/learn/rollout.h"

#include <algorithm>
#include <cmath>
#include <thread>
#include <utility>

#include "boardpush/env/skate_env.h"

namespace boardpush::learn {
namespace {

constexpr uint64_t kNoiseStream = 0x6e6f697365000000ull;

struct WorkerStats {
  std::vector<std::vector<EpisodeRecord>> episodes;  // per env
  std::vector<std::vector<double>> term_sums;        // per env
  std::vector<double> tracking;                      // per env
};

}  // namespace

uint64_t EnvResetSeed(uint64_t root, int i) {
  std::mt19937_64 rng = env::MakeRng(root, static_cast<uint64_t>(i));
  return rng();
}

std::mt19937_64 ActionNoiseRng(uint64_t root, int i) {
  return env::MakeRng(root, kNoiseStream + static_cast<uint64_t>(i));
}

VecEnv::VecEnv(std::vector<std::unique_ptr<env::Environment>> envs, uint64_t seed) {
  slots_.resize(envs.size());
  for (size_t i = 0; i < envs.size(); ++i) {
    Slot& s = slots_[i];
    s.env = std::move(envs[i]);
    s.obs.assign(s.env->obs_dim(), 0.0);
    s.rng = ActionNoiseRng(seed, static_cast<int>(i));
    s.env->Reset(EnvResetSeed(seed, static_cast<int>(i)), s.obs);
  }
}

TransitionBatch Rollout(VecEnv& envs, const ActorCritic& policy, int horizon, int workers,
                        RolloutStats* stats) {
  const int n = envs.size();
  const int od = envs.obs_dim();
  const int ad = envs.action_dim();
  const int terms = static_cast<int>(envs.env(0).TermNames().size());
  TransitionBatch batch;
  batch.Resize(n, horizon, od, ad);
  WorkerStats ws;
  ws.episodes.resize(n);
  ws.term_sums.assign(n, std::vector<double>(terms, 0.0));
  ws.tracking.assign(n, 0.0);

  auto run = [&](int lo, int hi) {
    std::vector<double> nobs(od);
    std::vector<double> mean(ad);
    std::vector<double> action(ad);
    for (int t = 0; t < horizon; ++t) {
      for (int e = lo; e < hi; ++e) {
        VecEnv::Slot& s = envs.slots_[e];
        const size_t row = static_cast<size_t>(t) * n + e;
        policy.normalizer().Normalize(s.obs, nobs);
        double value = 0.0;
        policy.Evaluate(nobs, mean, &value);
        for (int j = 0; j < ad; ++j) action[j] = mean[j] + std::exp(policy.log_std(j)) * s.normal(s.rng);
        std::copy(s.obs.begin(), s.obs.end(), batch.raw_obs.begin() + row * od);
        std::copy(nobs.begin(), nobs.end(), batch.obs.begin() + row * od);
        std::copy(action.begin(), action.end(), batch.action.begin() + row * ad);
        batch.log_prob[row] = policy.LogProb(mean, action);
        batch.value[row] = value;

        const env::StepOutcome out = s.env->Step(action, s.obs);
        batch.reward[row] = out.reward;
        batch.done[row] = out.done ? 1 : 0;
        const double tracking = s.env->TrackingError();
        const std::span<const double> step_terms = s.env->LastTerms();
        for (int k = 0; k < terms; ++k) ws.term_sums[e][k] += step_terms[k];
        ws.tracking[e] += tracking;
        s.ep_return += out.reward;
        s.ep_tracking += tracking;
        ++s.ep_length;
        if (out.done) {
          ws.episodes[e].push_back({s.ep_return, s.ep_length, s.ep_tracking / s.ep_length});
          s.ep_return = 0.0;
          s.ep_tracking = 0.0;
          s.ep_length = 0;
          s.env->ResetNext(s.obs);
        }
      }
    }
    for (int e = lo; e < hi; ++e) {
      policy.normalizer().Normalize(envs.slots_[e].obs, nobs);
      policy.Evaluate(nobs, mean, &batch.bootstrap[e]);
    }
  };

  const int count = std::clamp(workers, 1, n);
  if (count == 1) {
    run(0, n);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < count; ++w) {
      const int lo = static_cast<int>(static_cast<int64_t>(n) * w / count);
      const int hi = static_cast<int>(static_cast<int64_t>(n) * (w + 1) / count);
      threads.emplace_back(run, lo, hi);
    }
    for (std::thread& th : threads) th.join();
  }

  if (stats != nullptr) {
    *stats = RolloutStats();
    stats->term_sums.assign(terms, 0.0);
    for (int e = 0; e < n; ++e) {
      stats->episodes.insert(stats->episodes.end(), ws.episodes[e].begin(), ws.episodes[e].end());
      for (int k = 0; k < terms; ++k) stats->term_sums[k] += ws.term_sums[e][k];
      stats->tracking_sum += ws.tracking[e];
    }
    stats->steps = static_cast<int64_t>(n) * horizon;
  }
  return batch;
}

}  // namespace boardpush::learn
