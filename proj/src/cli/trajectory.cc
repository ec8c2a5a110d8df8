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

#include "boardpush/cli/trajectory.h"

#include <fstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "boardpush/rewards/rewards.h"

namespace boardpush::cli {
namespace {

struct Block {
  const char* key;
  const char* prefix;
  int size;
};

constexpr Block kBlocks[] = {{"q", "q", 19},
                             {"v", "v", 18},
                             {"q_board", "deck_q", 9},
                             {"v_board", "deck_v", 8},
                             {"action", "action", 12}};

std::string Number(double x) { return absl::StrCat(x); }

}  // namespace

const std::vector<std::string>& CsvColumns() {
  static const std::vector<std::string> columns = [] {
    std::vector<std::string> c = {"t"};
    for (const Block& b : kBlocks) {
      for (int i = 0; i < b.size; ++i) c.push_back(absl::StrCat(b.prefix, i));
    }
    for (std::string_view name : rewards::kTermNames) c.emplace_back(name);
    c.push_back("reward_total");
    c.push_back("episode");
    c.push_back("termination");
    return c;
  }();
  return columns;
}

absl::Status ValidateFrame(const nlohmann::json& frame) {
  if (!frame.is_object()) return absl::InvalidArgumentError("frame is not an object");
  if (!frame.contains("t") || !frame["t"].is_number()) {
    return absl::InvalidArgumentError("missing number 't'");
  }
  for (const Block& b : kBlocks) {
    if (!frame.contains(b.key) || !frame[b.key].is_array() ||
        static_cast<int>(frame[b.key].size()) != b.size) {
      return absl::InvalidArgumentError(
          absl::StrCat("field '", b.key, "' must be an array of ", b.size, " numbers"));
    }
  }
  if (!frame.contains("reward") || !frame["reward"].is_object()) {
    return absl::InvalidArgumentError("missing object 'reward'");
  }
  for (std::string_view name : rewards::kTermNames) {
    if (!frame["reward"].contains(std::string(name))) {
      return absl::InvalidArgumentError(absl::StrCat("reward lacks term '", std::string(name), "'"));
    }
  }
  for (const char* key : {"command", "expected_contact", "contact"}) {
    if (!frame.contains(key) || !frame[key].is_array()) {
      return absl::InvalidArgumentError(absl::StrCat("missing array '", key, "'"));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<std::string> CsvRow(const nlohmann::json& frame) {
  if (absl::Status s = ValidateFrame(frame); !s.ok()) return s;
  std::vector<std::string> cells = {Number(frame["t"].get<double>())};
  try {
    for (const Block& b : kBlocks) {
      for (const nlohmann::json& x : frame[b.key]) cells.push_back(Number(x.get<double>()));
    }
    for (std::string_view name : rewards::kTermNames) {
      cells.push_back(Number(frame["reward"][std::string(name)].get<double>()));
    }
    cells.push_back(Number(frame["reward"].value("total", 0.0)));
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("non-numeric value: ", e.what()));
  }
  cells.push_back(absl::StrCat(frame.value("episode", 0)));
  cells.push_back(frame.value("termination", std::string("none")));
  return absl::StrJoin(cells, ",");
}

absl::StatusOr<std::vector<nlohmann::json>> ReadTrajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open trajectory ", path));
  std::vector<nlohmann::json> frames;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json frame = nlohmann::json::parse(line, nullptr, false);
    if (frame.is_discarded()) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ":", number, ": malformed or truncated JSON line"));
    }
    if (absl::Status s = ValidateFrame(frame); !s.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(path, ":", number, ": ", s.message()));
    }
    frames.push_back(std::move(frame));
  }
  return frames;
}

}  // namespace boardpush::cli
