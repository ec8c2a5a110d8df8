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

#include "boardpush/learn/mlp.h"

#include <cassert>
#include <cmath>
#include <utility>

namespace boardpush::learn {
namespace {

using ConstMatrixMap = Eigen::Map<const Eigen::MatrixXd>;
using ConstVectorMap = Eigen::Map<const Eigen::VectorXd>;
using MatrixMap = Eigen::Map<Eigen::MatrixXd>;
using VectorMap = Eigen::Map<Eigen::VectorXd>;

double Elu(double x) { return x > 0.0 ? x : std::expm1(x); }
double EluSlope(double x) { return x > 0.0 ? 1.0 : std::exp(x); }

}  // namespace

Mlp::Mlp(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  assert(sizes_.size() >= 2);
  for (size_t l = 0; l + 1 < sizes_.size(); ++l) {
    offsets_.push_back(num_params_);
    num_params_ += sizes_[l + 1] * sizes_[l] + sizes_[l + 1];
  }
}

void Mlp::Initialize(std::span<double> params, std::mt19937_64& rng, double output_gain) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  const int layers = static_cast<int>(sizes_.size()) - 1;
  for (int l = 0; l < layers; ++l) {
    const int fan_in = sizes_[l];
    const int fan_out = sizes_[l + 1];
    const double gain = l + 1 == layers ? output_gain : std::sqrt(2.0);
    const double scale = gain / std::sqrt(static_cast<double>(fan_in));
    double* w = params.data() + offsets_[l];
    for (int i = 0; i < fan_out * fan_in; ++i) w[i] = scale * normal(rng);
    for (int i = 0; i < fan_out; ++i) w[fan_out * fan_in + i] = 0.0;
  }
}

void Mlp::Forward(std::span<const double> params, std::span<const double> x,
                  std::span<double> y) const {
  Eigen::VectorXd h = ConstVectorMap(x.data(), in());
  const int layers = static_cast<int>(sizes_.size()) - 1;
  for (int l = 0; l < layers; ++l) {
    const int fan_in = sizes_[l];
    const int fan_out = sizes_[l + 1];
    const double* p = params.data() + offsets_[l];
    Eigen::VectorXd z = ConstVectorMap(p + fan_out * fan_in, fan_out);
    z.noalias() += ConstMatrixMap(p, fan_out, fan_in) * h;
    if (l + 1 < layers) z = z.unaryExpr(&Elu);
    h = std::move(z);
  }
  VectorMap(y.data(), out()) = h;
}

void Mlp::Forward(std::span<const double> params, const Eigen::MatrixXd& x, Eigen::MatrixXd* y,
                  Tape* tape) const {
  const int layers = static_cast<int>(sizes_.size()) - 1;
  tape->pre.resize(layers);
  tape->post.resize(layers + 1);
  tape->post[0] = x;
  for (int l = 0; l < layers; ++l) {
    const int fan_in = sizes_[l];
    const int fan_out = sizes_[l + 1];
    const double* p = params.data() + offsets_[l];
    Eigen::MatrixXd& z = tape->pre[l];
    z.noalias() = ConstMatrixMap(p, fan_out, fan_in) * tape->post[l];
    z.colwise() += ConstVectorMap(p + fan_out * fan_in, fan_out);
    tape->post[l + 1] = l + 1 < layers ? z.unaryExpr(&Elu).eval() : z;
  }
  *y = tape->post[layers];
}

void Mlp::Backward(std::span<const double> params, const Tape& tape, const Eigen::MatrixXd& dy,
                   std::span<double> grad, Eigen::MatrixXd* dx) const {
  const int layers = static_cast<int>(sizes_.size()) - 1;
  Eigen::MatrixXd delta = dy;
  for (int l = layers - 1; l >= 0; --l) {
    const int fan_in = sizes_[l];
    const int fan_out = sizes_[l + 1];
    if (l + 1 < layers) delta.array() *= tape.pre[l].unaryExpr(&EluSlope).array();
    double* g = grad.data() + offsets_[l];
    MatrixMap(g, fan_out, fan_in).noalias() += delta * tape.post[l].transpose();
    VectorMap(g + fan_out * fan_in, fan_out) += delta.rowwise().sum();
    if (l > 0 || dx != nullptr) {
      const ConstMatrixMap w(params.data() + offsets_[l], fan_out, fan_in);
      Eigen::MatrixXd next = w.transpose() * delta;
      delta = std::move(next);
    }
  }
  if (dx != nullptr) *dx = std::move(delta);
}

}  // namespace boardpush::learn
