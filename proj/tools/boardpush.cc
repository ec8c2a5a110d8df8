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

// boardpush: model check, train, eval and replay.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "boardpush/cli/commands.h"

int main(int argc, char** argv) {
  namespace cli = boardpush::cli;
  CLI::App app{"Humanoid skateboarding simulator and trainer"};
  app.require_subcommand(1);

  CLI::App* model = app.add_subcommand("model", "Model parameter tools");
  model->require_subcommand(1);
  std::string model_file;
  CLI::App* check = model->add_subcommand("check", "Validate a model parameter file");
  check->add_option("file", model_file, "Model JSON (defaults when omitted)");

  cli::TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "Train a policy");
  train->add_option("--config", train_args.config, "Run config JSON")->required();
  train->add_option("--set", train_args.overrides, "Override, dotted.key=value");
  train->add_option("--run-dir", train_args.run_dir, "Run directory");
  train->add_option("--resume", train_args.resume, "Checkpoint to resume from");

  cli::EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "Evaluate a checkpoint");
  eval->add_option("checkpoint", eval_args.checkpoint, "Checkpoint file")->required();
  eval->add_option("--episodes", eval_args.episodes, "Episodes to run")->capture_default_str();
  eval->add_option("--command", eval_args.command, "Forward deck velocity, m/s")
      ->capture_default_str();
  eval->add_option("--config", eval_args.config, "Run config (default: from checkpoint)");
  eval->add_option("--set", eval_args.overrides, "Override, dotted.key=value");
  eval->add_option("--out", eval_args.out_dir, "Output directory");
  eval->add_option("--record", eval_args.record_episodes, "Episodes written to trajectory files")
      ->capture_default_str();
  eval->add_option("--seed", eval_args.seed, "Reset seed")->capture_default_str();

  cli::ReplayArgs replay_args;
  CLI::App* replay = app.add_subcommand("replay", "Plot a trajectory JSONL file");
  replay->add_option("trajectory", replay_args.trajectory, "trajectory.jsonl")->required();
  replay->add_option("--out", replay_args.out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitInvalidInput;
  }

  if (*check) return cli::CmdModelCheck(model_file, std::cout, std::cerr);
  if (*train) return cli::CmdTrain(train_args, std::cout, std::cerr);
  if (*eval) return cli::CmdEval(eval_args, std::cout, std::cerr);
  if (*replay) return cli::CmdReplay(replay_args, std::cout, std::cerr);
  return cli::kExitFailure;
}
