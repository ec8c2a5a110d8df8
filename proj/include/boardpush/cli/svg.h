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

// Minimal SVG line plots.

#ifndef BOARDPUSH_CLI_SVG_H_
#define BOARDPUSH_CLI_SVG_H_

#include <string>
#include <vector>

namespace boardpush::cli {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// A plot with axes, min/max tick labels and a legend. Without data only the
// frame and a "no data" note are drawn.
std::string LinePlot(const std::string& title, const std::string& x_label,
                     const std::string& y_label, const std::vector<Series>& series);

}  // namespace boardpush::cli

#endif  // BOARDPUSH_CLI_SVG_H_
