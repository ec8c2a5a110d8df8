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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

namespace boardpush::gait {
namespace {

TEST(GaitClockTest, AdvanceExamples) {
  EXPECT_DOUBLE_EQ(GaitClock().Advance(0.3).phase_time(), 0.3);
  EXPECT_NEAR(GaitClock(GaitSchedule(), 1.70).Advance(0.10).phase_time(), 0.05, 1e-12);
  const GaitClock c(GaitSchedule(), 0.42);
  EXPECT_EQ(c.Advance(0.0).phase_time(), c.phase_time());
}

TEST(GaitClockTest, AdvanceComposes) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const GaitClock c(GaitSchedule(), u(rng));
    const double a = u(rng);
    const double b = u(rng);
    const double lhs = c.Advance(a).Advance(b).phase_time();
    const double rhs = c.Advance(a + b).phase_time();
    const double diff = std::abs(lhs - rhs);
    EXPECT_LT(std::min(diff, 1.75 - diff), 1e-12);
  }
}

TEST(GaitClockTest, ExpectedContactExamples) {
  const GaitSchedule s;
  EXPECT_EQ(GaitClock(s, 0.3).ExpectedContact(Foot::kLeft), 1.0);
  EXPECT_EQ(GaitClock(s, 1.2).ExpectedContact(Foot::kLeft), 0.0);
  EXPECT_EQ(GaitClock(s, 1.2).ExpectedContact(Foot::kRight), 1.0);
  EXPECT_DOUBLE_EQ(GaitClock(s, s.t_double).ExpectedContact(Foot::kLeft), 0.5);
}

TEST(GaitClockTest, LeftIndicatorIntegratesToDoubleSupport) {
  const GaitSchedule s;
  const int n = 175000;
  double integral = 0.0;
  for (int i = 0; i < n; ++i) {
    const double p = (i + 0.5) * s.cycle() / n;
    integral += GaitClock(s, p).ExpectedContact(Foot::kLeft) * s.cycle() / n;
  }
  EXPECT_NEAR(integral, s.t_double, 2.0 * s.smooth_width);
  EXPECT_NEAR(integral, s.t_double, 1e-6);
}

TEST(GaitClockTest, FeatureExamples) {
  const GaitSchedule s;
  const auto f0 = GaitClock(s, 0.0).Features();
  EXPECT_EQ(f0[0], 0.0);
  EXPECT_EQ(f0[1], 1.0);
  const auto f1 = GaitClock(s, s.cycle() / 4).Features();
  EXPECT_NEAR(f1[0], 1.0, 1e-15);
  EXPECT_NEAR(f1[1], 0.0, 1e-15);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, s.cycle());
  for (int i = 0; i < 100; ++i) {
    const auto f = GaitClock(s, u(rng)).Features();
    EXPECT_NEAR(f[0] * f[0] + f[1] * f[1], 1.0, 1e-15);
  }
}

TEST(GaitScheduleTest, Validation) {
  EXPECT_TRUE(ValidateSchedule(GaitSchedule()).ok());
  EXPECT_FALSE(ValidateSchedule({.t_double = 0.0}).ok());
  EXPECT_FALSE(ValidateSchedule({.t_single = -1.0}).ok());
  EXPECT_FALSE(ValidateSchedule({.smooth_width = 0.4}).ok());
}

}  // namespace
}  // namespace boardpush::gait
