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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/str_split.h"
#include "boardpush/cli/commands.h"
#include "boardpush/cli/config.h"
#include "boardpush/cli/svg.h"
#include "boardpush/cli/trajectory.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "json.hpp"

namespace boardpush::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ::testing::HasSubstr;

std::string TempDir(const std::string& name) {
  const fs::path dir = fs::path(::testing::TempDir()) / ("cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void WriteFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

// A small skate run: tiny network, few envs, short horizon.
std::string SmallConfig(const std::string& dir) {
  const json cfg = {{"task", "skate"},
                    {"seed", 7},
                    {"train",
                     {{"n_envs", 4},
                      {"horizon", 16},
                      {"hidden", {16, 16}},
                      {"total_steps", 256},
                      {"checkpoint_every", 2}}}};
  const std::string path = dir + "/cfg.json";
  WriteFile(path, cfg.dump(2));
  return path;
}

struct CmdResult {
  int code;
  std::string out;
  std::string err;
};

CmdResult Train(const TrainArgs& args) {
  std::ostringstream out, err;
  const int code = CmdTrain(args, out, err);
  return {code, out.str(), err.str()};
}

CmdResult Eval(const EvalArgs& args) {
  std::ostringstream out, err;
  const int code = CmdEval(args, out, err);
  return {code, out.str(), err.str()};
}

CmdResult Replay(const ReplayArgs& args) {
  std::ostringstream out, err;
  const int code = CmdReplay(args, out, err);
  return {code, out.str(), err.str()};
}

TEST(ConfigTest, DefaultsRoundTrip) {
  const RunConfig defaults;
  absl::StatusOr<RunConfig> parsed = RunConfigFromJson(ToJson(defaults));
  ASSERT_TRUE(parsed.ok()) << parsed.status();
  EXPECT_EQ(ToJson(*parsed), ToJson(defaults));
  EXPECT_TRUE(ValidateRunConfig(*parsed).ok());
}

TEST(ConfigTest, ShippedConfigsLoad) {
  for (const char* name : {"default.json", "toy.json"}) {
    absl::StatusOr<RunConfig> cfg =
        LoadRunConfig(std::string(BOARDPUSH_SOURCE_DIR) + "/configs/" + name, {});
    EXPECT_TRUE(cfg.ok()) << name << ": " << cfg.status();
  }
}

TEST(ConfigTest, UnknownKeyNamesPath) {
  absl::StatusOr<RunConfig> cfg = RunConfigFromJson({{"env", {{"kp", {{"elbow", 3.0}}}}}});
  ASSERT_FALSE(cfg.ok());
  EXPECT_THAT(std::string(cfg.status().message()), HasSubstr("env.kp.elbow"));
}

TEST(ConfigTest, OverrideParsesJsonOrString) {
  json object = json::object();
  ASSERT_TRUE(ApplyOverride("train.total_steps=1000", &object).ok());
  ASSERT_TRUE(ApplyOverride("train.hidden=[8,8]", &object).ok());
  ASSERT_TRUE(ApplyOverride("task=toy", &object).ok());
  EXPECT_EQ(object["train"]["total_steps"], 1000);
  EXPECT_EQ(object["train"]["hidden"], json({8, 8}));
  EXPECT_EQ(object["task"], "toy");
  EXPECT_FALSE(ApplyOverride("no_equals_sign", &object).ok());
}

TEST(ConfigTest, InvalidValueIsFieldLevel) {
  const std::string dir = TempDir("invalid");
  TrainArgs args{SmallConfig(dir), {"env.dt=-1"}, dir + "/run", ""};
  const CmdResult run = Train(args);
  EXPECT_EQ(run.code, kExitInvalidInput);
  EXPECT_THAT(run.err, HasSubstr("env.dt"));
}

TEST(ConfigTest, WorkersCappedByEnvironment) {
  setenv("BOARDPUSH_THREADS", "2", 1);
  EXPECT_EQ(ResolveWorkers(8), 2);
  EXPECT_EQ(ResolveWorkers(1), 1);
  unsetenv("BOARDPUSH_THREADS");
  EXPECT_EQ(ResolveWorkers(8), 8);
}

TEST(ModelCheckTest, DefaultsAndBadFile) {
  std::ostringstream out, err;
  EXPECT_EQ(CmdModelCheck("", out, err), kExitOk);
  EXPECT_THAT(out.str(), HasSubstr("nq=19"));
  EXPECT_THAT(out.str(), HasSubstr("nq=9"));

  const std::string dir = TempDir("model");
  WriteFile(dir + "/bad.json", R"({"schema": 1, "robot": {"thigh_length": -0.1}})");
  std::ostringstream out2, err2;
  EXPECT_EQ(CmdModelCheck(dir + "/bad.json", out2, err2), kExitInvalidInput);
  EXPECT_THAT(err2.str(), HasSubstr("thigh_length"));
}

TEST(TrainCommandTest, MissingConfigExits2) {
  const CmdResult run = Train({"/nonexistent/cfg.json", {}, "", ""});
  EXPECT_EQ(run.code, kExitInvalidInput);
}

TEST(TrainCommandTest, ShortRunWritesArtifacts) {
  const std::string dir = TempDir("short");
  const CmdResult run = Train({SmallConfig(dir), {"train.total_steps=1000"}, dir + "/run", ""});
  ASSERT_EQ(run.code, kExitOk) << run.err;
  EXPECT_TRUE(fs::exists(dir + "/run/run.json"));
  EXPECT_TRUE(fs::exists(dir + "/run/checkpoints/latest.bpck"));
  const std::string metrics = ReadFile(dir + "/run/metrics.jsonl");
  EXPECT_FALSE(metrics.empty());
  const json resolved = json::parse(ReadFile(dir + "/run/run.json"));
  EXPECT_EQ(resolved["train"]["total_steps"], 1000);
}

TEST(TrainCommandTest, SameConfigAndSeedGiveIdenticalMetrics) {
  const std::string dir = TempDir("determinism");
  const std::string cfg = SmallConfig(dir);
  ASSERT_EQ(Train({cfg, {}, dir + "/a", ""}).code, kExitOk);
  ASSERT_EQ(Train({cfg, {"train.workers=3"}, dir + "/b", ""}).code, kExitOk);
  // The resolved config alone reproduces the run.
  ASSERT_EQ(Train({dir + "/a/run.json", {}, dir + "/c", ""}).code, kExitOk);
  const std::string a = ReadFile(dir + "/a/metrics.jsonl");
  ASSERT_FALSE(a.empty());
  EXPECT_EQ(a, ReadFile(dir + "/b/metrics.jsonl"));
  EXPECT_EQ(a, ReadFile(dir + "/c/metrics.jsonl"));
}

class EvalCommandTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new std::string(TempDir("eval"));
    const CmdResult run = Train({SmallConfig(*dir_), {"train.total_steps=64"}, *dir_ + "/run", ""});
    ASSERT_EQ(run.code, kExitOk) << run.err;
  }
  static void TearDownTestSuite() { delete dir_; }
  static std::string Checkpoint() { return *dir_ + "/run/checkpoints/latest.bpck"; }
  static std::string* dir_;
};
std::string* EvalCommandTest::dir_ = nullptr;

TEST_F(EvalCommandTest, ReportAndTrajectories) {
  EvalArgs args;
  args.checkpoint = Checkpoint();
  args.episodes = 2;
  args.command = "0.4";
  args.out_dir = *dir_ + "/eval";
  const CmdResult run = Eval(args);
  ASSERT_EQ(run.code, kExitOk) << run.err;
  const json report = json::parse(ReadFile(args.out_dir + "/eval_report.json"));
  EXPECT_EQ(report["header"]["command"], "0.4");
  EXPECT_EQ(report["header"]["episodes"], 2);
  EXPECT_EQ(report["per_episode"].size(), 2u);
  for (const char* key :
       {"mean_tracking_error", "mean_episode_length", "phase_adherence", "foot_slip_rms"}) {
    ASSERT_TRUE(report[key].is_number()) << key;
  }
  EXPECT_GE(report["phase_adherence"].get<double>(), 0.0);
  EXPECT_LE(report["phase_adherence"].get<double>(), 1.0);

  // Every frame carries the commanded velocity; one CSV row per frame.
  std::ifstream jsonl(args.out_dir + "/trajectory.jsonl");
  std::string line;
  int frames = 0;
  while (std::getline(jsonl, line)) {
    const json frame = json::parse(line);
    EXPECT_DOUBLE_EQ(frame["command"][0].get<double>(), 0.4);
    ++frames;
  }
  const double mean_length = report["mean_episode_length"].get<double>();
  EXPECT_EQ(frames, static_cast<int>(mean_length * 2));
  const std::vector<std::string> rows =
      absl::StrSplit(ReadFile(args.out_dir + "/trajectory.csv"), '\n', absl::SkipEmpty());
  ASSERT_EQ(static_cast<int>(rows.size()), frames + 1);
  const std::vector<std::string> header = absl::StrSplit(rows[0], ',');
  EXPECT_EQ(header, CsvColumns());

  // Deterministic policy and seeds: a second run reproduces the report.
  args.out_dir = *dir_ + "/eval2";
  ASSERT_EQ(Eval(args).code, kExitOk);
  EXPECT_EQ(ReadFile(args.out_dir + "/eval_report.json"),
            ReadFile(*dir_ + "/eval/eval_report.json"));
}

TEST_F(EvalCommandTest, ZeroEpisodesGiveEmptyReport) {
  EvalArgs args;
  args.checkpoint = Checkpoint();
  args.episodes = 0;
  args.out_dir = *dir_ + "/eval0";
  ASSERT_EQ(Eval(args).code, kExitOk);
  const json report = json::parse(ReadFile(args.out_dir + "/eval_report.json"));
  EXPECT_TRUE(report["per_episode"].empty());
  EXPECT_TRUE(report["mean_tracking_error"].is_null());
}

TEST_F(EvalCommandTest, ArchitectureMismatchExits4) {
  EvalArgs args;
  args.checkpoint = Checkpoint();
  args.overrides = {"train.hidden=[32]"};
  args.out_dir = *dir_ + "/eval_mismatch";
  const CmdResult run = Eval(args);
  EXPECT_EQ(run.code, kExitMismatch);
  EXPECT_THAT(run.err, HasSubstr("architecture mismatch"));
}

TEST_F(EvalCommandTest, BadCommandRejected) {
  EvalArgs args;
  args.checkpoint = Checkpoint();
  args.command = "fast";
  EXPECT_EQ(Eval(args).code, kExitInvalidInput);
}

TEST_F(EvalCommandTest, ReplayWritesPlotsAndSummary) {
  EvalArgs args;
  args.checkpoint = Checkpoint();
  args.episodes = 1;
  args.out_dir = *dir_ + "/eval_replay";
  ASSERT_EQ(Eval(args).code, kExitOk);
  const std::string out = *dir_ + "/replay";
  const CmdResult run = Replay({args.out_dir + "/trajectory.jsonl", out});
  ASSERT_EQ(run.code, kExitOk) << run.err;
  for (const char* name : {"deck_velocity.svg", "reward_terms.svg", "phase_contact.svg"}) {
    const std::string svg = ReadFile(fs::path(out) / name);
    EXPECT_THAT(svg, HasSubstr("<svg")) << name;
    EXPECT_THAT(svg, HasSubstr("<polyline")) << name;
  }
  const std::vector<std::string> rows =
      absl::StrSplit(ReadFile(fs::path(out) / "summary.csv"), '\n', absl::SkipEmpty());
  EXPECT_EQ(rows.size(), 2u);
}

TEST_F(EvalCommandTest, TruncatedLineIsNamed) {
  EvalArgs args;
  args.checkpoint = Checkpoint();
  args.episodes = 1;
  args.out_dir = *dir_ + "/eval_trunc";
  ASSERT_EQ(Eval(args).code, kExitOk);
  std::ifstream in(args.out_dir + "/trajectory.jsonl");
  std::string first, second;
  std::getline(in, first);
  std::getline(in, second);
  const std::string path = *dir_ + "/truncated.jsonl";
  WriteFile(path, first + "\n" + second.substr(0, second.size() / 2) + "\n");
  const CmdResult run = Replay({path, *dir_ + "/replay_trunc"});
  EXPECT_EQ(run.code, kExitInvalidInput);
  EXPECT_THAT(run.err, HasSubstr(":2:"));
}

TEST(ReplayCommandTest, EmptyTrajectoryWarns) {
  const std::string dir = TempDir("empty");
  WriteFile(dir + "/empty.jsonl", "");
  const CmdResult run = Replay({dir + "/empty.jsonl", dir + "/out"});
  EXPECT_EQ(run.code, kExitOk);
  EXPECT_THAT(run.err, HasSubstr("warning"));
  for (const char* name : {"deck_velocity.svg", "reward_terms.svg", "phase_contact.svg",
                           "summary.csv"}) {
    EXPECT_TRUE(fs::exists(fs::path(dir) / "out" / name)) << name;
  }
  EXPECT_THAT(ReadFile(fs::path(dir) / "out" / "deck_velocity.svg"), HasSubstr("no data"));
}

TEST(TrajectoryTest, ColumnOrder) {
  const std::vector<std::string>& c = CsvColumns();
  ASSERT_EQ(c.size(), 1u + 19 + 18 + 9 + 8 + 12 + 11 + 3);
  EXPECT_EQ(c[0], "t");
  EXPECT_EQ(c[1], "q0");
  EXPECT_EQ(c[19], "q18");
  EXPECT_EQ(c[20], "v0");
  EXPECT_EQ(c[38], "deck_q0");
  EXPECT_EQ(c[47], "deck_v0");
  EXPECT_EQ(c[55], "action0");
  EXPECT_EQ(c[66], "action11");
  EXPECT_EQ(c[67], "deck_lin_track");
  EXPECT_EQ(c[c.size() - 3], "reward_total");
}

TEST(TrajectoryTest, MissingFieldRejected) {
  json frame = {{"t", 0.0}, {"q", std::vector<double>(19)}};
  EXPECT_FALSE(ValidateFrame(frame).ok());
  EXPECT_FALSE(CsvRow(frame).ok());
}

TEST(SvgTest, ScalesIntoPlotArea) {
  const std::string svg = LinePlot("t", "x", "y", {{"a", {0, 1, 2}, {0, 2, 1}}});
  EXPECT_THAT(svg, HasSubstr("<polyline"));
  EXPECT_THAT(svg, HasSubstr(">a</text>"));
  EXPECT_THAT(svg, ::testing::Not(HasSubstr("no data")));
}

}  // namespace
}  // namespace boardpush::cli
