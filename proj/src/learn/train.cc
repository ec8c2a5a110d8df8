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

#include "boardpush/learn/train.h"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "boardpush/env/skate_env.h"
#include "boardpush/learn/checkpoint.h"
#include "boardpush/learn/policy.h"
#include "boardpush/learn/rollout.h"

namespace boardpush::learn {
namespace {

namespace fs = std::filesystem;

constexpr uint64_t kLearnerStream = 0x6c6561726e6572ull;

std::string CheckpointPath(const fs::path& dir, int64_t update) {
  return (dir / absl::StrFormat("update_%06d.bpck", update)).string();
}

absl::Status Save(const fs::path& dir, const Checkpoint& ckpt, std::string* written) {
  const std::string path = CheckpointPath(dir, ckpt.update);
  if (absl::Status s = SaveCheckpoint(path, ckpt); !s.ok()) return s;
  if (absl::Status s = SaveCheckpoint((dir / "latest.bpck").string(), ckpt); !s.ok()) return s;
  *written = path;
  return absl::OkStatus();
}

// Keeps metrics lines up to and including update 'last'.
absl::Status TruncateMetrics(const fs::path& file, int64_t last) {
  std::ifstream in(file);
  if (!in) return absl::OkStatus();
  std::string kept;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const nlohmann::json row = nlohmann::json::parse(line, nullptr, false);
    if (row.is_discarded() || !row.contains("update")) continue;
    if (row["update"].get<int64_t>() <= last) kept += line + "\n";
  }
  in.close();
  std::ofstream out(file, std::ios::trunc);
  out << kept;
  return out ? absl::OkStatus() : absl::UnavailableError(absl::StrCat("cannot rewrite ", file.string()));
}

double Finite(double x) { return std::isfinite(x) ? x : 0.0; }

}  // namespace

absl::Status ValidateTrainConfig(const TrainConfig& cfg) {
  if (cfg.n_envs < 1) return absl::InvalidArgumentError("train.n_envs must be >= 1");
  if (cfg.total_steps < 0) return absl::InvalidArgumentError("train.total_steps must be >= 0");
  if (cfg.horizon < 1) return absl::InvalidArgumentError("train.horizon must be >= 1");
  if (!(cfg.lr >= 0.0)) return absl::InvalidArgumentError("train.lr must be >= 0");
  if (cfg.hidden.empty()) return absl::InvalidArgumentError("train.hidden must not be empty");
  for (int h : cfg.hidden) {
    if (h < 1) return absl::InvalidArgumentError("train.hidden widths must be >= 1");
  }
  if (!(cfg.init_log_std >= kMinLogStd && cfg.init_log_std <= kMaxLogStd)) {
    return absl::InvalidArgumentError("train.init_log_std must lie in [-5, 1]");
  }
  if (cfg.checkpoint_every < 1) {
    return absl::InvalidArgumentError("train.checkpoint_every must be >= 1");
  }
  if (cfg.workers < 1) return absl::InvalidArgumentError("train.workers must be >= 1");
  if (cfg.ppo.minibatches > cfg.n_envs * cfg.horizon) {
    return absl::InvalidArgumentError("train.minibatches exceeds the batch size");
  }
  return ValidatePpoConfig(cfg.ppo);
}

int64_t NumUpdates(const TrainConfig& cfg) {
  const int64_t per = static_cast<int64_t>(cfg.n_envs) * cfg.horizon;
  return (cfg.total_steps + per - 1) / per;
}

absl::StatusOr<TrainResult> Train(const TrainConfig& cfg, const EnvFactory& factory,
                                  const TrainOptions& options) {
  if (absl::Status s = ValidateTrainConfig(cfg); !s.ok()) return s;
  const fs::path run_dir(options.run_dir);
  const fs::path ckpt_dir = run_dir / "checkpoints";
  std::error_code ec;
  fs::create_directories(ckpt_dir, ec);
  if (ec) return absl::UnavailableError(absl::StrCat("cannot create ", ckpt_dir.string()));

  std::vector<std::unique_ptr<env::Environment>> envs;
  for (int i = 0; i < cfg.n_envs; ++i) {
    absl::StatusOr<std::unique_ptr<env::Environment>> e = factory();
    if (!e.ok()) return e.status();
    envs.push_back(*std::move(e));
  }
  const env::Environment& probe = *envs.front();
  const std::vector<std::string_view> term_names(probe.TermNames().begin(),
                                                 probe.TermNames().end());
  ActorCritic policy({probe.obs_dim(), probe.action_dim(), cfg.hidden}, probe.action_space());
  policy.Initialize(cfg.seed, cfg.init_log_std);
  AdamState adam;
  adam.Reset(policy.params().size());

  TrainResult result;
  const fs::path metrics_path = run_dir / "metrics.jsonl";
  const fs::path throughput_path = run_dir / "throughput.jsonl";
  if (!options.resume_from.empty()) {
    absl::StatusOr<Checkpoint> ckpt = LoadCheckpoint(options.resume_from);
    if (!ckpt.ok()) return ckpt.status();
    if (absl::Status s = RestorePolicy(*ckpt, &policy); !s.ok()) return s;
    if (ckpt->adam.m.size() != policy.params().size()) {
      return absl::FailedPreconditionError("checkpoint optimizer state does not match");
    }
    adam = ckpt->adam;
    result.updates = ckpt->update;
    result.env_steps = ckpt->env_steps;
    result.last_checkpoint = options.resume_from;
    if (absl::Status s = TruncateMetrics(metrics_path, result.updates); !s.ok()) return s;
    if (absl::Status s = TruncateMetrics(throughput_path, result.updates); !s.ok()) return s;
  } else {
    std::ofstream(metrics_path, std::ios::trunc);
    std::ofstream(throughput_path, std::ios::trunc);
    const Checkpoint initial = MakeCheckpoint(policy, adam, 0, 0, options.config);
    if (absl::Status s = Save(ckpt_dir, initial, &result.last_checkpoint); !s.ok()) return s;
  }

  // A resumed run draws fresh streams keyed by its starting update.
  const uint64_t stream_seed = cfg.seed + 0x9e3779b97f4a7c15ull * result.updates;
  VecEnv vec(std::move(envs), stream_seed);
  std::mt19937_64 learner_rng = env::MakeRng(stream_seed, kLearnerStream);

  std::ofstream metrics(metrics_path, std::ios::app);
  std::ofstream throughput(throughput_path, std::ios::app);
  const int64_t num_updates = NumUpdates(cfg);
  const int64_t per_update = static_cast<int64_t>(cfg.n_envs) * cfg.horizon;
  int64_t done_here = 0;
  while (result.updates < num_updates &&
         (options.max_updates < 0 || done_here < options.max_updates)) {
    const auto t0 = std::chrono::steady_clock::now();
    RolloutStats stats;
    const TransitionBatch batch = Rollout(vec, policy, cfg.horizon, cfg.workers, &stats);
    const auto t1 = std::chrono::steady_clock::now();
    policy.normalizer().Update(
        Eigen::Map<const Eigen::MatrixXd>(batch.raw_obs.data(), batch.obs_dim, batch.size()));
    const double lr =
        cfg.lr_decay ? cfg.lr * (1.0 - static_cast<double>(result.updates) / num_updates) : cfg.lr;
    const PpoStats ppo = PpoUpdate(batch, cfg.ppo, lr, learner_rng, &policy, &adam);
    const auto t2 = std::chrono::steady_clock::now();
    if (!ppo.finite) {
      return absl::AbortedError(absl::StrCat("non-finite loss at update ", result.updates + 1,
                                             "; last good checkpoint: ", result.last_checkpoint));
    }
    ++result.updates;
    ++done_here;
    result.env_steps += per_update;

    nlohmann::json row;
    row["update"] = result.updates;
    row["env_steps"] = result.env_steps;
    row["episodes"] = stats.episodes.size();
    double ret = 0.0;
    double len = 0.0;
    for (const EpisodeRecord& e : stats.episodes) {
      ret += e.ret;
      len += e.length;
    }
    const double n_ep = static_cast<double>(stats.episodes.size());
    row["mean_return"] = n_ep > 0 ? nlohmann::json(ret / n_ep) : nlohmann::json(nullptr);
    row["mean_episode_length"] = n_ep > 0 ? nlohmann::json(len / n_ep) : nlohmann::json(nullptr);
    row["mean_step_reward"] =
        Eigen::Map<const Eigen::VectorXd>(batch.reward.data(), batch.size()).mean();
    row["tracking_error"] = stats.tracking_sum / stats.steps;
    nlohmann::json terms = nlohmann::json::object();
    for (size_t k = 0; k < term_names.size(); ++k) {
      terms[std::string(term_names[k])] = stats.term_sums[k] / stats.steps;
    }
    row["reward_terms"] = terms;
    row["policy_loss"] = Finite(ppo.policy_loss);
    row["value_loss"] = Finite(ppo.value_loss);
    row["entropy"] = ppo.entropy;
    row["kl"] = ppo.kl;
    row["clip_fraction"] = ppo.clip_fraction;
    row["grad_norm"] = ppo.grad_norm;
    row["lr"] = lr;
    metrics << row.dump() << "\n" << std::flush;

    const double rollout_s = std::chrono::duration<double>(t1 - t0).count();
    const double update_s = std::chrono::duration<double>(t2 - t1).count();
    throughput << nlohmann::json({{"update", result.updates},
                                  {"rollout_seconds", rollout_s},
                                  {"update_seconds", update_s},
                                  {"env_steps_per_s", per_update / rollout_s},
                                  {"workers", cfg.workers}})
                      .dump()
               << "\n"
               << std::flush;

    if (result.updates % cfg.checkpoint_every == 0 || result.updates == num_updates) {
      const Checkpoint ckpt =
          MakeCheckpoint(policy, adam, result.updates, result.env_steps, options.config);
      if (absl::Status s = Save(ckpt_dir, ckpt, &result.last_checkpoint); !s.ok()) return s;
    }
  }
  return result;
}

}  // namespace boardpush::learn
