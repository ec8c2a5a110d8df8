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

#include "boardpush/gait/gait.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "absl/strings/str_cat.h"

namespace boardpush::gait {

absl::Status ValidateSchedule(const GaitSchedule& s) {
  if (!(s.t_double > 0.0) || !std::isfinite(s.t_double)) {
    return absl::InvalidArgumentError(
        absl::StrCat("gait.t_double must be > 0 (got ", s.t_double, ")"));
  }
  if (!(s.t_single > 0.0) || !std::isfinite(s.t_single)) {
    return absl::InvalidArgumentError(
        absl::StrCat("gait.t_single must be > 0 (got ", s.t_single, ")"));
  }
  const double limit = 0.5 * std::min(s.t_double, s.t_single);
  if (!(s.smooth_width >= 0.0 && s.smooth_width < limit)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "gait.smooth_width must lie in [0, ", limit, ") (got ", s.smooth_width, ")"));
  }
  return absl::OkStatus();
}

GaitClock::GaitClock(const GaitSchedule& schedule, double phase_time)
    : schedule_(schedule), phase_time_(0.0) {
  phase_time_ = Advance(phase_time).phase_time_;
}

GaitClock GaitClock::Advance(double dt) const {
  GaitClock next = *this;
  const double cycle = schedule_.cycle();
  double phase = std::fmod(phase_time_ + dt, cycle);
  if (phase < 0.0) phase += cycle;
  if (phase >= cycle) phase = 0.0;
  next.phase_time_ = phase;
  return next;
}

double GaitClock::ExpectedContact(Foot foot) const {
  if (foot == Foot::kRight) return 1.0;
  const double w = schedule_.smooth_width;
  const double cycle = schedule_.cycle();
  const double p = phase_time_;
  const double to_lift = p - schedule_.t_double;
  const double to_wrap = p < 0.5 * cycle ? p : p - cycle;
  if (std::abs(to_lift) < w) return 0.5 - 0.5 * to_lift / w;
  if (std::abs(to_wrap) < w) return 0.5 + 0.5 * to_wrap / w;
  return p < schedule_.t_double ? 1.0 : 0.0;
}

std::array<double, 2> GaitClock::Features() const {
  const double angle = 2.0 * std::numbers::pi * phase_time_ / schedule_.cycle();
  return {std::sin(angle), std::cos(angle)};
}

nlohmann::json ToJson(const GaitSchedule& s) {
  return {{"t_double", s.t_double}, {"t_single", s.t_single}, {"smooth_width", s.smooth_width}};
}

}  // namespace boardpush::gait
