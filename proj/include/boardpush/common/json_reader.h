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

#ifndef BOARDPUSH_COMMON_JSON_READER_H_
#define BOARDPUSH_COMMON_JSON_READER_H_

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "json.hpp"

namespace boardpush {

// Reads optional fields out of a JSON object into pre-defaulted values.
// Type mismatches and unknown keys are collected as field-level errors
// ("reward.sigma: expected number") and reported together by Finish().
class JsonReader {
 public:
  JsonReader(const nlohmann::json& object, std::string path)
      : JsonReader(object, std::move(path), std::make_shared<std::vector<std::string>>()) {}

  template <typename T>
  void Read(const std::string& key, T* out) {
    seen_.insert(key);
    if (!object_.is_object() || !object_.contains(key)) return;
    try {
      *out = object_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      errors_->push_back(Path(key) + ": expected " + TypeName<T>());
    }
  }

  // Reader for a nested object. Missing objects read as empty.
  JsonReader Child(const std::string& key) {
    seen_.insert(key);
    static const nlohmann::json kEmpty = nlohmann::json::object();
    if (!object_.is_object() || !object_.contains(key)) {
      return JsonReader(kEmpty, Path(key), errors_);
    }
    if (!object_.at(key).is_object()) {
      errors_->push_back(Path(key) + ": expected object");
      return JsonReader(kEmpty, Path(key), errors_);
    }
    return JsonReader(object_.at(key), Path(key), errors_);
  }

  // Marks keys as consumed without reading them.
  void Ignore(const std::string& key) { seen_.insert(key); }

  void AddError(const std::string& key, const std::string& message) {
    errors_->push_back(Path(key) + ": " + message);
  }

  // Flags keys this reader never consumed.
  void CheckUnknown() {
    if (!object_.is_object()) {
      errors_->push_back((path_.empty() ? std::string("<root>") : path_) + ": expected object");
      return;
    }
    for (const auto& item : object_.items()) {
      if (!seen_.count(item.key())) errors_->push_back(Path(item.key()) + ": unknown field");
    }
  }

  absl::Status Finish() const {
    if (errors_->empty()) return absl::OkStatus();
    std::string message;
    for (const auto& e : *errors_) {
      if (!message.empty()) message += "; ";
      message += e;
    }
    return absl::InvalidArgumentError(message);
  }

 private:
  JsonReader(const nlohmann::json& object, std::string path,
             std::shared_ptr<std::vector<std::string>> errors)
      : object_(object), path_(std::move(path)), errors_(std::move(errors)) {}

  std::string Path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  template <typename T>
  static const char* TypeName() {
    if constexpr (std::is_same_v<T, bool>) {
      return "boolean";
    } else if constexpr (std::is_arithmetic_v<T>) {
      return "number";
    } else if constexpr (std::is_same_v<T, std::string>) {
      return "string";
    } else {
      return "array";
    }
  }

  const nlohmann::json& object_;
  std::string path_;
  std::shared_ptr<std::vector<std::string>> errors_;
  std::set<std::string> seen_;
};

}  // namespace boardpush

#endif  // BOARDPUSH_COMMON_JSON_READER_H_
