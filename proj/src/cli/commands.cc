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

#include "boardpush/cli/commands.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "boardpush/cli/config.h"
#include "boardpush/cli/svg.h"
#include "boardpush/cli/trajectory.h"
#include "boardpush/env/skate_env.h"
#include "boardpush/learn/checkpoint.h"
#include "boardpush/learn/policy.h"
#include "boardpush/learn/rollout.h"
#include "boardpush/learn/train.h"
#include "boardpush/model/model.h"

namespace boardpush::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

absl::Status WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.close();
  if (!out) return absl::InternalError(absl::StrCat("cannot write ", path.string()));
  return absl::OkStatus();
}

absl::Status EnsureDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) return absl::InternalError(absl::StrCat("cannot create ", dir.string(), ": ", ec.message()));
  return absl::OkStatus();
}

void PrintTree(const model::KinematicTree& tree, const char* name, std::ostream& out) {
  out << absl::StrFormat("%s: %d bodies, %d joints, nq=%d, nv=%d, mass=%.4f kg\n", name,
                         tree.bodies.size(), tree.joints.size(), tree.nq, tree.nv,
                         tree.TotalMass());
}

json NullIfNan(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

int CmdModelCheck(const std::string& path, std::ostream& out, std::ostream& err) {
  model::ModelParams params;
  if (!path.empty()) {
    absl::StatusOr<json> object = ReadJsonFile(path);
    if (!object.ok()) {
      err << "error: " << object.status().message() << "\n";
      return kExitInvalidInput;
    }
    absl::StatusOr<model::ModelParams> parsed = model::ModelParamsFromJson(*object);
    if (!parsed.ok()) {
      err << "error: " << parsed.status().message() << "\n";
      return kExitInvalidInput;
    }
    params = *parsed;
  }
  if (absl::Status s = model::ValidateParams(params); !s.ok()) {
    err << "error: " << s.message() << "\n";
    return kExitInvalidInput;
  }
  absl::StatusOr<model::KinematicTree> robot = model::BuildRobotTree(params);
  absl::StatusOr<model::KinematicTree> board = model::BuildSkateboardTree(params);
  if (!robot.ok() || !board.ok()) {
    err << "error: " << (robot.ok() ? board.status() : robot.status()).message() << "\n";
    return kExitInvalidInput;
  }
  std::vector<std::string> problems = model::ValidateTree(*robot);
  for (std::string& p : model::ValidateTree(*board)) problems.push_back(std::move(p));
  for (const std::string& p : problems) err << "error: " << p << "\n";
  if (!problems.empty()) return kExitInvalidInput;
  PrintTree(*robot, "robot", out);
  PrintTree(*board, "skateboard", out);
  out << "ok\n";
  return kExitOk;
}

int CmdTrain(const TrainArgs& args, std::ostream& out, std::ostream& err) {
  if (args.config.empty()) {
    err << "error: --config is required\n";
    return kExitInvalidInput;
  }
  absl::StatusOr<RunConfig> cfg = LoadRunConfig(args.config, args.overrides);
  if (!cfg.ok()) {
    err << "error: " << cfg.status().message() << "\n";
    return kExitInvalidInput;
  }
  if (!args.run_dir.empty()) cfg->run_dir = args.run_dir;
  const json resolved = ToJson(*cfg);
  learn::TrainConfig train = cfg->train;
  train.workers = ResolveWorkers(cfg->workers);

  const fs::path run_dir = cfg->run_dir;
  if (absl::Status s = EnsureDir(run_dir); !s.ok()) {
    err << "error: " << s.message() << "\n";
    return kExitFailure;
  }
  if (absl::Status s = WriteText(run_dir / "run.json", resolved.dump(2) + "\n"); !s.ok()) {
    err << "error: " << s.message() << "\n";
    return kExitFailure;
  }

  learn::TrainOptions options;
  options.run_dir = run_dir.string();
  options.resume_from = args.resume;
  options.config = resolved;
  out << absl::StrFormat("training %s: %d envs, %d updates, %d workers -> %s\n", cfg->task,
                         train.n_envs, learn::NumUpdates(train), train.workers,
                         run_dir.string());
  absl::StatusOr<learn::TrainResult> result = learn::Train(train, MakeEnvFactory(*cfg), options);
  if (!result.ok()) {
    err << "error: " << result.status().message() << "\n";
    switch (result.status().code()) {
      case absl::StatusCode::kAborted:
        return kExitAborted;
      case absl::StatusCode::kFailedPrecondition:
        return kExitMismatch;
      case absl::StatusCode::kInvalidArgument:
      case absl::StatusCode::kNotFound:
        return kExitInvalidInput;
      default:
        return kExitFailure;
    }
  }
  out << absl::StrFormat("done: %d updates, %d env steps, checkpoint %s\n", result->updates,
                         result->env_steps, result->last_checkpoint);
  return kExitOk;
}

int CmdEval(const EvalArgs& args, std::ostream& out, std::ostream& err) {
  double command = 0.0;
  if (!absl::SimpleAtod(args.command, &command) || !std::isfinite(command)) {
    err << "error: --command must be a number, got '" << args.command << "'\n";
    return kExitInvalidInput;
  }
  if (args.episodes < 0 || args.record_episodes < 0) {
    err << "error: episode counts must be >= 0\n";
    return kExitInvalidInput;
  }
  absl::StatusOr<learn::Checkpoint> ckpt = learn::LoadCheckpoint(args.checkpoint);
  if (!ckpt.ok()) {
    err << "error: " << ckpt.status().message() << "\n";
    return kExitInvalidInput;
  }

  absl::StatusOr<RunConfig> cfg;
  if (!args.config.empty()) {
    cfg = LoadRunConfig(args.config, args.overrides);
  } else {
    json object = ckpt->config.is_object() ? ckpt->config : json::object();
    absl::Status applied = absl::OkStatus();
    for (const std::string& o : args.overrides) {
      applied.Update(ApplyOverride(o, &object));
    }
    cfg = applied.ok() ? RunConfigFromJson(object) : absl::StatusOr<RunConfig>(applied);
    if (cfg.ok()) {
      if (absl::Status s = ValidateRunConfig(*cfg); !s.ok()) cfg = s;
    }
  }
  if (!cfg.ok()) {
    err << "error: " << cfg.status().message() << "\n";
    return kExitInvalidInput;
  }
  if (cfg->task != "skate") {
    err << "error: eval runs the skate task, config has task '" << cfg->task << "'\n";
    return kExitInvalidInput;
  }
  cfg->spec.env.fixed_command = command;
  if (absl::Status s = env::ValidateTask(cfg->spec); !s.ok()) {
    err << "error: " << s.message() << "\n";
    return kExitInvalidInput;
  }
  auto spec = std::make_shared<const env::TaskSpec>(cfg->spec);
  absl::StatusOr<std::unique_ptr<env::SkateEnv>> created = env::SkateEnv::Create(spec);
  if (!created.ok()) {
    err << "error: " << created.status().message() << "\n";
    return kExitInvalidInput;
  }
  env::SkateEnv& skate = **created;

  learn::PolicyShape shape{skate.obs_dim(), skate.action_dim(), cfg->train.hidden};
  learn::ActorCritic policy(shape, skate.action_space());
  if (absl::Status s = learn::RestorePolicy(*ckpt, &policy); !s.ok()) {
    err << "error: " << s.message() << "\n";
    return s.code() == absl::StatusCode::kFailedPrecondition ? kExitMismatch : kExitFailure;
  }

  const fs::path out_dir = !args.out_dir.empty()
                               ? fs::path(args.out_dir)
                               : fs::path(args.checkpoint).parent_path() / "eval";
  if (absl::Status s = EnsureDir(out_dir); !s.ok()) {
    err << "error: " << s.message() << "\n";
    return kExitFailure;
  }
  std::ofstream jsonl(out_dir / "trajectory.jsonl", std::ios::trunc);
  std::ofstream csv(out_dir / "trajectory.csv", std::ios::trunc);
  csv << absl::StrJoin(CsvColumns(), ",") << "\n";

  std::vector<double> obs(skate.obs_dim());
  std::vector<double> nobs(skate.obs_dim());
  std::vector<double> action(skate.action_dim());
  json per_episode = json::array();
  int64_t steps = 0;
  double tracking_sum = 0.0;
  double slip_sum = 0.0;
  int64_t phase_hits = 0;
  double return_sum = 0.0;
  for (int ep = 0; ep < args.episodes; ++ep) {
    skate.Reset(learn::EnvResetSeed(args.seed, ep), obs);
    const bool record = ep < args.record_episodes;
    double ep_return = 0.0;
    double ep_tracking = 0.0;
    int ep_steps = 0;
    env::Termination reason = env::Termination::kNone;
    while (reason == env::Termination::kNone) {
      policy.normalizer().Normalize(obs, nobs);
      policy.Evaluate(nobs, action, nullptr);
      const env::StepOutcome o = skate.Step(action, obs);
      reason = o.done ? o.reason : env::Termination::kNone;
      ++ep_steps;
      ep_return += o.reward;
      const rewards::BodySignals sig = env::ExtractSignals(skate.world(), skate.state());
      const double err_x = std::abs(command - sig.v_deck_xy.x());
      ep_tracking += err_x;
      slip_sum += skate.breakdown().terms[rewards::kFootSlip];
      const bool loaded = sig.foot_force[0] > spec->reward.f_min;
      const bool expected = skate.clock().ExpectedContact(gait::Foot::kLeft) >= 0.5;
      phase_hits += loaded == expected ? 1 : 0;
      if (record) {
        json frame = env::FrameJson(skate, reason);
        frame["episode"] = ep;
        jsonl << frame.dump() << "\n";
        absl::StatusOr<std::string> row = CsvRow(frame);
        if (row.ok()) csv << *row << "\n";
      }
    }
    steps += ep_steps;
    tracking_sum += ep_tracking;
    return_sum += ep_return;
    per_episode.push_back({{"episode", ep},
                           {"length", ep_steps},
                           {"return", ep_return},
                           {"mean_tracking_error", ep_tracking / ep_steps},
                           {"termination", std::string(env::TerminationName(reason))}});
  }
  jsonl.close();
  csv.close();

  const double n = static_cast<double>(steps);
  const double nan = std::nan("");
  json report = {
      {"header",
       {{"checkpoint", args.checkpoint},
        {"update", ckpt->update},
        {"command", args.command},
        {"command_v_x", command},
        {"episodes", args.episodes},
        {"seed", args.seed}}},
      {"mean_tracking_error", NullIfNan(steps > 0 ? tracking_sum / n : nan)},
      {"mean_episode_length",
       NullIfNan(args.episodes > 0 ? n / args.episodes : nan)},
      {"phase_adherence", NullIfNan(steps > 0 ? phase_hits / n : nan)},
      {"foot_slip_rms", NullIfNan(steps > 0 ? std::sqrt(slip_sum / n) : nan)},
      {"mean_return", NullIfNan(args.episodes > 0 ? return_sum / args.episodes : nan)},
      {"per_episode", per_episode}};
  if (absl::Status s = WriteText(out_dir / "eval_report.json", report.dump(2) + "\n"); !s.ok()) {
    err << "error: " << s.message() << "\n";
    return kExitFailure;
  }
  out << report.dump(2) << "\n";
  return kExitOk;
}

int CmdReplay(const ReplayArgs& args, std::ostream& out, std::ostream& err) {
  absl::StatusOr<std::vector<json>> frames = ReadTrajectory(args.trajectory);
  if (!frames.ok()) {
    err << "error: " << frames.status().message() << "\n";
    return kExitInvalidInput;
  }
  if (frames->empty()) err << "warning: " << args.trajectory << " has no frames\n";
  const fs::path out_dir = !args.out_dir.empty() ? fs::path(args.out_dir)
                                                 : fs::path(args.trajectory).parent_path();
  if (absl::Status s = EnsureDir(out_dir.empty() ? fs::path(".") : out_dir); !s.ok()) {
    err << "error: " << s.message() << "\n";
    return kExitFailure;
  }

  // Episodes are laid end to end on one time axis.
  Series deck_vx{"deck v_x", {}, {}};
  Series cmd_vx{"command v_x", {}, {}};
  std::vector<Series> terms;
  for (std::string_view name : rewards::kTermNames) terms.push_back({std::string(name), {}, {}});
  terms.push_back({"total", {}, {}});
  Series expected{"expected left contact", {}, {}};
  Series actual{"actual left contact", {}, {}};

  struct EpisodeSummary {
    int steps = 0;
    double deck_vx = 0.0;
    double command = 0.0;
    double tracking = 0.0;
    double ret = 0.0;
    int phase_hits = 0;
    std::string termination = "none";
  };
  std::map<int, EpisodeSummary> episodes;
  double offset = 0.0;
  double last_t = 0.0;
  int last_episode = -1;
  for (const json& f : *frames) {
    const int ep = f.value("episode", 0);
    const double t = f["t"].get<double>();
    if (last_episode >= 0 && ep != last_episode) offset += last_t;
    last_episode = ep;
    last_t = t;
    const double x = offset + t;
    const double vx = f["v_board"][0].get<double>();
    const double cmd = f["command"].empty() ? 0.0 : f["command"][0].get<double>();
    deck_vx.x.push_back(x);
    deck_vx.y.push_back(vx);
    cmd_vx.x.push_back(x);
    cmd_vx.y.push_back(cmd);
    for (size_t k = 0; k < rewards::kTermNames.size(); ++k) {
      terms[k].x.push_back(x);
      terms[k].y.push_back(f["reward"][std::string(rewards::kTermNames[k])].get<double>());
    }
    const double total = f["reward"].value("total", 0.0);
    terms.back().x.push_back(x);
    terms.back().y.push_back(total);
    const double exp_left = f["expected_contact"].empty() ? 0.0 : f["expected_contact"][0].get<double>();
    const bool act_left = !f["contact"].empty() && f["contact"][0].get<bool>();
    expected.x.push_back(x);
    expected.y.push_back(exp_left);
    actual.x.push_back(x);
    actual.y.push_back(act_left ? 1.0 : 0.0);

    EpisodeSummary& s = episodes[ep];
    ++s.steps;
    s.deck_vx += vx;
    s.command = cmd;
    s.tracking += std::abs(cmd - vx);
    s.ret += total;
    s.phase_hits += act_left == (exp_left >= 0.5) ? 1 : 0;
    s.termination = f.value("termination", std::string("none"));
  }

  std::string summary =
      "episode,steps,mean_deck_v_x,command_v_x,mean_tracking_error,return,phase_adherence,"
      "termination\n";
  for (const auto& [ep, s] : episodes) {
    absl::StrAppendFormat(&summary, "%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%s\n", ep, s.steps,
                          s.deck_vx / s.steps, s.command, s.tracking / s.steps, s.ret,
                          static_cast<double>(s.phase_hits) / s.steps, s.termination);
  }

  const std::pair<const char*, std::string> files[] = {
      {"deck_velocity.svg",
       LinePlot("Deck forward velocity", "t [s]", "m/s", {deck_vx, cmd_vx})},
      {"reward_terms.svg", LinePlot("Reward terms (unweighted)", "t [s]", "value", terms)},
      {"phase_contact.svg",
       LinePlot("Left foot: expected vs actual contact", "t [s]", "indicator",
                {expected, actual})},
      {"summary.csv", summary}};
  for (const auto& [name, text] : files) {
    if (absl::Status s = WriteText(out_dir / name, text); !s.ok()) {
      err << "error: " << s.message() << "\n";
      return kExitFailure;
    }
    out << (out_dir / name).string() << "\n";
  }
  return kExitOk;
}

}  // namespace boardpush::cli
