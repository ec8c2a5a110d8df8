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

// Cyclic gait phase clock: double support (left foot pushing on the ground,
// right foot on the deck) followed by single support with the left foot in
// swing.

#ifndef BOARDPUSH_GAIT_GAIT_H_
#define BOARDPUSH_GAIT_GAIT_H_

#include <array>

#include "absl/status/status.h"
#include "json.hpp"

namespace boardpush::gait {

struct GaitSchedule {
  double t_double = 0.75;
  double t_single = 1.0;
  double smooth_width = 0.05;  // half-width of the indicator ramps

  double cycle() const { return t_double + t_single; }
};

absl::Status ValidateSchedule(const GaitSchedule& schedule);

enum class Foot { kLeft, kRight };

class GaitClock {
 public:
  explicit GaitClock(const GaitSchedule& schedule = GaitSchedule(), double phase_time = 0.0);

  double phase_time() const { return phase_time_; }
  const GaitSchedule& schedule() const { return schedule_; }

  // phase <- (phase + dt) mod cycle, dt >= 0.
  GaitClock Advance(double dt) const;

  // Expected contact in [0, 1]. The right foot is always expected on the
  // deck; the left foot is expected down during double support, with linear
  // ramps of width 2 * smooth_width centered on both transitions.
  double ExpectedContact(Foot foot) const;

  // (sin, cos) of the phase angle.
  std::array<double, 2> Features() const;

 private:
  GaitSchedule schedule_;
  double phase_time_;
};

nlohmann::json ToJson(const GaitSchedule& schedule);

}  // namespace boardpush::gait

#endif  // BOARDPUSH_GAIT_GAIT_H_
