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

// Fully connected network with ELU hidden layers and a linear output layer,
// evaluated over a flat parameter vector owned by the caller.

#ifndef BOARDPUSH_LEARN_MLP_H_
#define BOARDPUSH_LEARN_MLP_H_

#include <random>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace boardpush::learn {

class Mlp {
 public:
  // Layer widths from input to output; at least two entries.
  explicit Mlp(std::vector<int> sizes);

  const std::vector<int>& sizes() const { return sizes_; }
  int in() const { return sizes_.front(); }
  int out() const { return sizes_.back(); }
  int num_params() const { return num_params_; }

  // Per layer: weights (out x in, column-major) followed by biases.
  int weight_offset(int layer) const { return offsets_[layer]; }

  // Normal weights with std gain / sqrt(fan_in), sqrt(2) on hidden layers and
  // output_gain on the last; zero biases.
  void Initialize(std::span<double> params, std::mt19937_64& rng, double output_gain) const;

  // Single sample.
  void Forward(std::span<const double> params, std::span<const double> x,
               std::span<double> y) const;

  // Activations of a batch forward pass, kept for Backward.
  struct Tape {
    std::vector<Eigen::MatrixXd> pre;   // pre-activations per layer
    std::vector<Eigen::MatrixXd> post;  // post[0] is the input
  };

  // Batch of column samples x (in x B) to y (out x B).
  void Forward(std::span<const double> params, const Eigen::MatrixXd& x, Eigen::MatrixXd* y,
               Tape* tape) const;

  // Accumulates d(sum of dy . y)/d(params) into grad; optionally the input
  // gradient.
  void Backward(std::span<const double> params, const Tape& tape, const Eigen::MatrixXd& dy,
                std::span<double> grad, Eigen::MatrixXd* dx = nullptr) const;

 private:
  std::vector<int> sizes_;
  std::vector<int> offsets_;
  int num_params_ = 0;
};

}  // namespace boardpush::learn

#endif  // BOARDPUSH_LEARN_MLP_H_
