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

#include "boardpush/learn/checkpoint.h"

#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace boardpush::learn {
namespace {

constexpr char kMagic[4] = {'B', 'P', 'C', 'K'};

void PutU32(uint32_t x, std::string* out) {
  for (int i = 0; i < 4; ++i) out->push_back(static_cast<char>((x >> (8 * i)) & 0xff));
}

uint32_t GetU32(const unsigned char* p) {
  return uint32_t{p[0]} | uint32_t{p[1]} << 8 | uint32_t{p[2]} << 16 | uint32_t{p[3]} << 24;
}

struct Array {
  const char* name;
  std::span<const double> data;
};

}  // namespace

Checkpoint MakeCheckpoint(const ActorCritic& policy, const AdamState& adam, int64_t update,
                          int64_t env_steps, const nlohmann::json& config) {
  Checkpoint c;
  c.shape = policy.shape();
  c.params = policy.params();
  c.obs_mean = policy.normalizer().mean();
  c.obs_var = policy.normalizer().var();
  c.obs_count = policy.normalizer().count();
  c.adam = adam;
  c.update = update;
  c.env_steps = env_steps;
  c.config = config;
  return c;
}

absl::Status SaveCheckpoint(const std::string& path, const Checkpoint& ckpt) {
  const std::vector<Array> arrays = {
      {"params", ckpt.params},
      {"obs_mean", {ckpt.obs_mean.data(), static_cast<size_t>(ckpt.obs_mean.size())}},
      {"obs_var", {ckpt.obs_var.data(), static_cast<size_t>(ckpt.obs_var.size())}},
      {"adam_m", ckpt.adam.m},
      {"adam_v", ckpt.adam.v}};
  nlohmann::json header = {{"obs_dim", ckpt.shape.obs_dim},
                           {"action_dim", ckpt.shape.action_dim},
                           {"hidden", ckpt.shape.hidden},
                           {"obs_count", ckpt.obs_count},
                           {"adam_step", ckpt.adam.step},
                           {"update", ckpt.update},
                           {"env_steps", ckpt.env_steps},
                           {"config", ckpt.config}};
  size_t offset = 0;
  nlohmann::json list = nlohmann::json::array();
  for (const Array& a : arrays) {
    list.push_back({{"name", a.name}, {"dtype", "f32"}, {"shape", {a.data.size()}},
                    {"offset", offset}});
    offset += 4 * a.data.size();
  }
  header["arrays"] = list;
  const std::string text = header.dump();

  std::string blob(kMagic, 4);
  PutU32(kCheckpointSchema, &blob);
  PutU32(static_cast<uint32_t>(text.size()), &blob);
  blob += text;
  for (const Array& a : arrays) {
    for (double x : a.data) PutU32(std::bit_cast<uint32_t>(static_cast<float>(x)), &blob);
  }

  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return absl::UnavailableError(absl::StrCat("cannot write ", tmp));
    out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
    if (!out) return absl::UnavailableError(absl::StrCat("write failed: ", tmp));
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) return absl::UnavailableError(absl::StrCat("cannot rename to ", path, ": ", ec.message()));
  return absl::OkStatus();
}

absl::StatusOr<Checkpoint> LoadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open checkpoint ", path));
  const std::string blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto* bytes = reinterpret_cast<const unsigned char*>(blob.data());
  if (blob.size() < 12 || std::memcmp(blob.data(), kMagic, 4) != 0) {
    return absl::InvalidArgumentError(absl::StrCat(path, ": not a BPCK checkpoint"));
  }
  const uint32_t schema = GetU32(bytes + 4);
  if (schema != kCheckpointSchema) {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": unsupported checkpoint schema ", schema));
  }
  const uint32_t header_len = GetU32(bytes + 8);
  if (blob.size() < 12 + size_t{header_len}) {
    return absl::InvalidArgumentError(absl::StrCat(path, ": truncated header"));
  }
  Checkpoint c;
  try {
    const nlohmann::json header = nlohmann::json::parse(blob.substr(12, header_len));
    c.shape.obs_dim = header.at("obs_dim").get<int>();
    c.shape.action_dim = header.at("action_dim").get<int>();
    c.shape.hidden = header.at("hidden").get<std::vector<int>>();
    c.obs_count = header.at("obs_count").get<double>();
    c.adam.step = header.at("adam_step").get<int64_t>();
    c.update = header.at("update").get<int64_t>();
    c.env_steps = header.at("env_steps").get<int64_t>();
    c.config = header.at("config");
    const size_t data_start = 12 + size_t{header_len};
    for (const nlohmann::json& a : header.at("arrays")) {
      const std::string name = a.at("name").get<std::string>();
      const size_t count = a.at("shape").at(0).get<size_t>();
      const size_t offset = data_start + a.at("offset").get<size_t>();
      if (a.at("dtype").get<std::string>() != "f32" || offset + 4 * count > blob.size()) {
        return absl::InvalidArgumentError(absl::StrCat(path, ": bad array '", name, "'"));
      }
      std::vector<double> values(count);
      for (size_t i = 0; i < count; ++i) {
        values[i] = std::bit_cast<float>(GetU32(bytes + offset + 4 * i));
      }
      if (name == "params") {
        c.params = std::move(values);
      } else if (name == "obs_mean") {
        c.obs_mean = Eigen::Map<Eigen::VectorXd>(values.data(), count);
      } else if (name == "obs_var") {
        c.obs_var = Eigen::Map<Eigen::VectorXd>(values.data(), count);
      } else if (name == "adam_m") {
        c.adam.m = std::move(values);
      } else if (name == "adam_v") {
        c.adam.v = std::move(values);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat(path, ": malformed header: ", e.what()));
  }
  return c;
}

absl::Status RestorePolicy(const Checkpoint& ckpt, ActorCritic* policy) {
  const PolicyShape& want = policy->shape();
  if (ckpt.shape.obs_dim != want.obs_dim || ckpt.shape.action_dim != want.action_dim ||
      ckpt.shape.hidden != want.hidden) {
    return absl::FailedPreconditionError(absl::StrCat(
        "architecture mismatch: checkpoint ", ckpt.shape.obs_dim, " -> [",
        absl::StrJoin(ckpt.shape.hidden, ","), "] -> ", ckpt.shape.action_dim, ", expected ",
        want.obs_dim, " -> [", absl::StrJoin(want.hidden, ","), "] -> ", want.action_dim));
  }
  if (ckpt.params.size() != policy->params().size() ||
      ckpt.obs_mean.size() != want.obs_dim || ckpt.obs_var.size() != want.obs_dim) {
    return absl::FailedPreconditionError("checkpoint array sizes do not match the architecture");
  }
  policy->params() = ckpt.params;
  policy->normalizer().Set(ckpt.obs_mean, ckpt.obs_var, ckpt.obs_count);
  return absl::OkStatus();
}

}  // namespace boardpush::learn
