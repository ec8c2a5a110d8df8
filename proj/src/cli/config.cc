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

#include "boardpush/cli/config.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <thread>
#include <utility>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "boardpush/common/json_reader.h"

namespace boardpush::cli {
namespace {

using nlohmann::json;

template <size_t N>
json PerJoint(const std::array<double, N>& values) {
  json out = json::object();
  for (int j = 0; j < model::kLegJoints; ++j) out[std::string(model::kLegJointNames[j])] = values[j];
  return out;
}

template <size_t N>
void ReadPerJoint(JsonReader reader, std::array<double, N>* values) {
  for (int j = 0; j < model::kLegJoints; ++j) {
    reader.Read(std::string(model::kLegJointNames[j]), &(*values)[j]);
  }
  reader.CheckUnknown();
}

json EnvJson(const env::EnvConfig& e) {
  return {{"max_steps", e.max_steps},
          {"decimation", e.decimation},
          {"dt", e.dt},
          {"min_pelvis_height", e.min_pelvis_height},
          {"max_pelvis_tilt", e.max_pelvis_tilt},
          {"max_foot_deck_distance", e.max_foot_deck_distance},
          {"joint_noise", e.joint_noise},
          {"base_noise", e.base_noise},
          {"left_knee_bend", e.left_knee_bend},
          {"kp", PerJoint(e.kp)},
          {"kd", PerJoint(e.kd)},
          {"command_min", e.command_min},
          {"command_max", e.command_max},
          {"fixed_command", e.fixed_command ? json(*e.fixed_command) : json(nullptr)},
          {"contact", {{"k_c", e.contact.k_c}, {"b_c", e.contact.b_c}, {"v_eps", e.contact.v_eps}}},
          {"gravity", e.gravity}};
}

void ReadEnv(JsonReader r, env::EnvConfig* e, const json& object) {
  r.Read("max_steps", &e->max_steps);
  r.Read("decimation", &e->decimation);
  r.Read("dt", &e->dt);
  r.Read("min_pelvis_height", &e->min_pelvis_height);
  r.Read("max_pelvis_tilt", &e->max_pelvis_tilt);
  r.Read("max_foot_deck_distance", &e->max_foot_deck_distance);
  r.Read("joint_noise", &e->joint_noise);
  r.Read("base_noise", &e->base_noise);
  r.Read("left_knee_bend", &e->left_knee_bend);
  ReadPerJoint(r.Child("kp"), &e->kp);
  ReadPerJoint(r.Child("kd"), &e->kd);
  r.Read("command_min", &e->command_min);
  r.Read("command_max", &e->command_max);
  if (object.is_object() && object.contains("fixed_command") && !object["fixed_command"].is_null()) {
    double v = 0.0;
    r.Read("fixed_command", &v);
    e->fixed_command = v;
  } else {
    r.Ignore("fixed_command");
  }
  JsonReader contact = r.Child("contact");
  contact.Read("k_c", &e->contact.k_c);
  contact.Read("b_c", &e->contact.b_c);
  contact.Read("v_eps", &e->contact.v_eps);
  contact.CheckUnknown();
  r.Read("gravity", &e->gravity);
  r.CheckUnknown();
}

void ReadReward(JsonReader r, rewards::RewardConfig* c) {
  r.Read("sigma", &c->sigma);
  r.Read("f_min", &c->f_min);
  JsonReader weights = r.Child("weights");
  for (int i = 0; i < rewards::kNumTerms; ++i) {
    weights.Read(std::string(rewards::kTermNames[i]), &c->weights[i]);
  }
  weights.CheckUnknown();
  r.CheckUnknown();
}

void ReadGait(JsonReader r, gait::GaitSchedule* g) {
  r.Read("t_double", &g->t_double);
  r.Read("t_single", &g->t_single);
  r.Read("smooth_width", &g->smooth_width);
  r.CheckUnknown();
}

json ToyJson(const env::ToyConfig& t) {
  return {{"force_scale", t.force_scale}, {"episode_steps", t.episode_steps},
          {"decimation", t.decimation},   {"dt", t.dt},
          {"sigma", t.sigma},             {"command_min", t.command_min},
          {"command_max", t.command_max}};
}

void ReadToy(JsonReader r, env::ToyConfig* t) {
  r.Read("force_scale", &t->force_scale);
  r.Read("episode_steps", &t->episode_steps);
  r.Read("decimation", &t->decimation);
  r.Read("dt", &t->dt);
  r.Read("sigma", &t->sigma);
  r.Read("command_min", &t->command_min);
  r.Read("command_max", &t->command_max);
  r.CheckUnknown();
}

json TrainJson(const learn::TrainConfig& t) {
  return {{"n_envs", t.n_envs},
          {"total_steps", t.total_steps},
          {"horizon", t.horizon},
          {"gamma", t.ppo.gamma},
          {"lambda", t.ppo.lambda},
          {"clip", t.ppo.clip},
          {"epochs", t.ppo.epochs},
          {"minibatches", t.ppo.minibatches},
          {"lr", t.lr},
          {"lr_decay", t.lr_decay},
          {"entropy_coef", t.ppo.entropy_coef},
          {"value_coef", t.ppo.value_coef},
          {"max_grad_norm", t.ppo.max_grad_norm},
          {"hidden", t.hidden},
          {"init_log_std", t.init_log_std},
          {"checkpoint_every", t.checkpoint_every}};
}

void ReadTrain(JsonReader r, learn::TrainConfig* t, int* workers) {
  r.Read("n_envs", &t->n_envs);
  r.Read("total_steps", &t->total_steps);
  r.Read("horizon", &t->horizon);
  r.Read("gamma", &t->ppo.gamma);
  r.Read("lambda", &t->ppo.lambda);
  r.Read("clip", &t->ppo.clip);
  r.Read("epochs", &t->ppo.epochs);
  r.Read("minibatches", &t->ppo.minibatches);
  r.Read("lr", &t->lr);
  r.Read("lr_decay", &t->lr_decay);
  r.Read("entropy_coef", &t->ppo.entropy_coef);
  r.Read("value_coef", &t->ppo.value_coef);
  r.Read("max_grad_norm", &t->ppo.max_grad_norm);
  r.Read("hidden", &t->hidden);
  r.Read("init_log_std", &t->init_log_std);
  r.Read("checkpoint_every", &t->checkpoint_every);
  r.Read("workers", workers);
  r.CheckUnknown();
}

}  // namespace

json ToJson(const RunConfig& cfg) {
  json train = TrainJson(cfg.train);
  train["workers"] = cfg.workers;
  return {{"task", cfg.task},
          {"seed", cfg.seed},
          {"run_dir", cfg.run_dir},
          {"model", model::ToJson(cfg.spec.model)},
          {"env", EnvJson(cfg.spec.env)},
          {"reward", rewards::ToJson(cfg.spec.reward)},
          {"gait", gait::ToJson(cfg.spec.gait)},
          {"toy", ToyJson(cfg.toy)},
          {"train", train}};
}

absl::StatusOr<RunConfig> RunConfigFromJson(const json& object) {
  RunConfig cfg;
  JsonReader root(object, "");
  root.Read("task", &cfg.task);
  root.Read("seed", &cfg.seed);
  root.Read("run_dir", &cfg.run_dir);
  root.Ignore("model");
  const json empty = json::object();
  const json& sub = [&](const char* key) -> const json& {
    return object.is_object() && object.contains(key) ? object.at(key) : empty;
  }("env");
  ReadEnv(root.Child("env"), &cfg.spec.env, sub);
  ReadReward(root.Child("reward"), &cfg.spec.reward);
  ReadGait(root.Child("gait"), &cfg.spec.gait);
  ReadToy(root.Child("toy"), &cfg.toy);
  ReadTrain(root.Child("train"), &cfg.train, &cfg.workers);
  root.CheckUnknown();
  absl::Status status = root.Finish();
  if (object.is_object() && object.contains("model")) {
    absl::StatusOr<model::ModelParams> params = model::ModelParamsFromJson(object.at("model"));
    if (params.ok()) {
      cfg.spec.model = *params;
    } else {
      const std::string message = absl::StrCat("model.", params.status().message());
      status = status.ok() ? absl::InvalidArgumentError(message)
                           : absl::InvalidArgumentError(absl::StrCat(status.message(), "; ", message));
    }
  }
  if (!status.ok()) return status;
  cfg.train.seed = cfg.seed;
  return cfg;
}

absl::Status ValidateRunConfig(const RunConfig& cfg) {
  if (cfg.task != "skate" && cfg.task != "toy") {
    return absl::InvalidArgumentError(
        absl::StrCat("task: expected \"skate\" or \"toy\" (got \"", cfg.task, "\")"));
  }
  if (cfg.workers < 0) return absl::InvalidArgumentError("train.workers must be >= 0");
  if (absl::Status s = env::ValidateTask(cfg.spec); !s.ok()) return s;
  if (absl::Status s = env::ValidateToyConfig(cfg.toy); !s.ok()) return s;
  learn::TrainConfig train = cfg.train;
  train.workers = 1;
  return learn::ValidateTrainConfig(train);
}

absl::StatusOr<json> ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open config file ", path));
  json object = json::parse(in, nullptr, false);
  if (object.is_discarded()) {
    return absl::InvalidArgumentError(absl::StrCat(path, ": not valid JSON"));
  }
  return object;
}

absl::Status ApplyOverride(const std::string& assignment, json* object) {
  const size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("override '", assignment, "': expected dotted.key=value"));
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  json* node = object;
  for (absl::string_view part : absl::StrSplit(key, '.')) {
    if (part.empty()) {
      return absl::InvalidArgumentError(absl::StrCat("override '", assignment, "': empty key"));
    }
    if (node->is_null()) *node = json::object();
    if (!node->is_object()) {
      return absl::InvalidArgumentError(
          absl::StrCat("override '", assignment, "': '", part, "' is not inside an object"));
    }
    node = &(*node)[std::string(part)];
  }
  *node = std::move(value);
  return absl::OkStatus();
}

absl::StatusOr<RunConfig> LoadRunConfig(const std::string& path,
                                        const std::vector<std::string>& overrides) {
  absl::StatusOr<json> object = ReadJsonFile(path);
  if (!object.ok()) return object.status();
  for (const std::string& o : overrides) {
    if (absl::Status s = ApplyOverride(o, &*object); !s.ok()) return s;
  }
  absl::StatusOr<RunConfig> cfg = RunConfigFromJson(*object);
  if (!cfg.ok()) return cfg.status();
  if (absl::Status s = ValidateRunConfig(*cfg); !s.ok()) return s;
  return cfg;
}

int ResolveWorkers(int requested) {
  int workers = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(workers, 1);
  if (const char* cap = std::getenv("BOARDPUSH_THREADS")) {
    int limit = 0;
    if (absl::SimpleAtoi(cap, &limit) && limit > 0) workers = std::min(workers, limit);
  }
  return workers;
}

learn::EnvFactory MakeEnvFactory(const RunConfig& cfg) {
  if (cfg.task == "toy") {
    const model::ModelParams params = cfg.spec.model;
    const env::ToyConfig toy = cfg.toy;
    return [params, toy]() -> absl::StatusOr<std::unique_ptr<env::Environment>> {
      absl::StatusOr<std::unique_ptr<env::DeckToyEnv>> e = env::DeckToyEnv::Create(params, toy);
      if (!e.ok()) return e.status();
      return std::unique_ptr<env::Environment>(*std::move(e));
    };
  }
  auto spec = std::make_shared<const env::TaskSpec>(cfg.spec);
  return [spec]() -> absl::StatusOr<std::unique_ptr<env::Environment>> {
    absl::StatusOr<std::unique_ptr<env::SkateEnv>> e = env::SkateEnv::Create(spec);
    if (!e.ok()) return e.status();
    return std::unique_ptr<env::Environment>(*std::move(e));
  };
}

}  // namespace boardpush::cli
