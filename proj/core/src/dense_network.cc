// Copyright 2026 The uposi Authors.
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

#include "uposi/dense_network.h"

#include <cmath>
#include <string>

#include "uposi/error.h"

namespace uposi {

DenseNetwork::DenseNetwork(std::vector<int> layer_dims, double dropout_rate)
    : layer_dims_(std::move(layer_dims)), dropout_rate_(dropout_rate) {
  if (layer_dims_.size() < 2) {
    throw ConfigError("a dense network needs at least two layer dims");
  }
  for (int d : layer_dims_) {
    if (d <= 0) throw ConfigError("layer dims must be positive");
  }
  if (!(dropout_rate_ >= 0.0 && dropout_rate_ < 1.0)) {
    throw ConfigError("dropout rate must lie in [0, 1)");
  }
  for (size_t l = 0; l + 1 < layer_dims_.size(); ++l) {
    weights_.push_back(Matrix::Zero(layer_dims_[l + 1], layer_dims_[l]));
    biases_.push_back(Vector::Zero(layer_dims_[l + 1]));
  }
}

void DenseNetwork::Initialize(RandomSource& rng, double output_scale) {
  for (int l = 0; l < num_layers(); ++l) {
    const double limit = 1.0 / std::sqrt(static_cast<double>(layer_dims_[l]));
    const double scale = (l + 1 == num_layers()) ? output_scale : 1.0;
    Matrix& w = weights_[l];
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      for (Eigen::Index i = 0; i < w.rows(); ++i) {
        w(i, j) = scale * rng.Uniform(-limit, limit);
      }
    }
    biases_[l].setZero();
  }
}

int DenseNetwork::num_params() const {
  int n = 0;
  for (int l = 0; l < num_layers(); ++l) {
    n += static_cast<int>(weights_[l].size() + biases_[l].size());
  }
  return n;
}

Vector DenseNetwork::Forward(const Vector& input, Mode mode, RandomSource* rng,
                             ForwardTape* tape) const {
  return ForwardBatch(input, mode, rng, tape).col(0);
}

Matrix DenseNetwork::ForwardBatch(const Matrix& inputs, Mode mode,
                                  RandomSource* rng, ForwardTape* tape) const {
  if (inputs.rows() != input_dim()) {
    throw DimensionError("network input has dimension " +
                         std::to_string(inputs.rows()) + ", expected " +
                         std::to_string(input_dim()));
  }
  if (!inputs.allFinite()) {
    throw NumericError("non-finite network input");
  }
  const bool dropout = mode == Mode::kTrain && dropout_rate_ > 0.0;
  if (dropout && rng == nullptr) {
    throw ConfigError("training-mode dropout requires a random source");
  }
  if (tape != nullptr) {
    tape->input = inputs;
    tape->activations.clear();
    tape->masks.clear();
  }
  const double keep_scale = 1.0 / (1.0 - dropout_rate_);
  Matrix h = inputs;
  for (int l = 0; l < num_layers(); ++l) {
    Matrix z = weights_[l] * h;
    z.colwise() += biases_[l];
    if (l + 1 == num_layers()) return z;
    Matrix a = z.array().tanh().matrix();
    if (dropout) {
      Matrix mask(a.rows(), a.cols());
      for (Eigen::Index j = 0; j < mask.cols(); ++j) {
        for (Eigen::Index i = 0; i < mask.rows(); ++i) {
          mask(i, j) = rng->Bernoulli(dropout_rate_) ? 0.0 : keep_scale;
        }
      }
      h = a.cwiseProduct(mask);
      if (tape != nullptr) tape->masks.push_back(std::move(mask));
    } else {
      h = a;
    }
    if (tape != nullptr) tape->activations.push_back(std::move(a));
  }
  return h;  // unreachable: num_layers() >= 1
}

NetworkGradients DenseNetwork::Backward(const ForwardTape& tape,
                                        const Matrix& output_grads) const {
  if (tape.empty()) {
    throw Error("backward pass requested without a recorded forward pass");
  }
  if (output_grads.rows() != output_dim() ||
      output_grads.cols() != tape.input.cols()) {
    throw DimensionError("output gradient shape does not match the tape");
  }
  const bool masked = !tape.masks.empty();
  NetworkGradients grads;
  grads.params.resize(num_params());
  // Offsets of each layer's block in the flat vector.
  std::vector<int> offset(num_layers());
  int k = 0;
  for (int l = 0; l < num_layers(); ++l) {
    offset[l] = k;
    k += static_cast<int>(weights_[l].size() + biases_[l].size());
  }
  Matrix delta = output_grads;
  for (int l = num_layers() - 1; l >= 0; --l) {
    Matrix prev;
    if (l == 0) {
      prev = tape.input;
    } else if (masked) {
      prev = tape.activations[l - 1].cwiseProduct(tape.masks[l - 1]);
    } else {
      prev = tape.activations[l - 1];
    }
    const Eigen::Index wsize = weights_[l].size();
    Eigen::Map<Matrix>(grads.params.data() + offset[l], weights_[l].rows(),
                       weights_[l].cols()) = delta * prev.transpose();
    grads.params.segment(offset[l] + wsize, biases_[l].size()) =
        delta.rowwise().sum();
    Matrix back = weights_[l].transpose() * delta;
    if (l == 0) {
      grads.inputs = std::move(back);
    } else {
      const Matrix& a = tape.activations[l - 1];
      if (masked) back = back.cwiseProduct(tape.masks[l - 1]);
      delta = back.cwiseProduct((1.0 - a.array().square()).matrix());
    }
  }
  return grads;
}

Matrix DenseNetwork::Jvp(const ForwardTape& tape,
                         const Vector& direction) const {
  if (tape.empty()) {
    throw Error("Jvp requested without a recorded forward pass");
  }
  if (direction.size() != num_params()) {
    throw DimensionError("Jvp direction has size " +
                         std::to_string(direction.size()) + ", expected " +
                         std::to_string(num_params()));
  }
  const bool masked = !tape.masks.empty();
  const Eigen::Index n = tape.input.cols();
  Matrix dh = Matrix::Zero(input_dim(), n);
  int k = 0;
  for (int l = 0; l < num_layers(); ++l) {
    const Eigen::Index rows = weights_[l].rows();
    const Eigen::Index cols = weights_[l].cols();
    Eigen::Map<const Matrix> dw(direction.data() + k, rows, cols);
    k += static_cast<int>(rows * cols);
    Eigen::Map<const Vector> db(direction.data() + k, rows);
    k += static_cast<int>(rows);
    Matrix prev;
    if (l == 0) {
      prev = tape.input;
    } else if (masked) {
      prev = tape.activations[l - 1].cwiseProduct(tape.masks[l - 1]);
    } else {
      prev = tape.activations[l - 1];
    }
    Matrix dz = dw * prev;
    if (l > 0) dz.noalias() += weights_[l] * dh;
    dz.colwise() += db;
    if (l + 1 == num_layers()) return dz;
    const Matrix& a = tape.activations[l];
    dh = dz.cwiseProduct((1.0 - a.array().square()).matrix());
    if (masked) dh = dh.cwiseProduct(tape.masks[l]);
  }
  return dh;  // unreachable
}

Vector DenseNetwork::GetParams() const {
  Vector out(num_params());
  Eigen::Index k = 0;
  for (int l = 0; l < num_layers(); ++l) {
    const Eigen::Index ws = weights_[l].size();
    out.segment(k, ws) = Eigen::Map<const Vector>(weights_[l].data(), ws);
    k += ws;
    out.segment(k, biases_[l].size()) = biases_[l];
    k += biases_[l].size();
  }
  return out;
}

void DenseNetwork::SetParams(const Vector& params) {
  if (params.size() != num_params()) {
    throw DimensionError("parameter vector has size " +
                         std::to_string(params.size()) + ", expected " +
                         std::to_string(num_params()));
  }
  Eigen::Index k = 0;
  for (int l = 0; l < num_layers(); ++l) {
    const Eigen::Index ws = weights_[l].size();
    Eigen::Map<Vector>(weights_[l].data(), ws) = params.segment(k, ws);
    k += ws;
    biases_[l] = params.segment(k, biases_[l].size());
    k += biases_[l].size();
  }
}

Adam::Adam(int num_params, double learning_rate, double beta1, double beta2,
           double eps)
    : learning_rate_(learning_rate),
      beta1_(beta1),
      beta2_(beta2),
      eps_(eps),
      m_(Vector::Zero(num_params)),
      v_(Vector::Zero(num_params)) {}

void Adam::Step(Vector& params, const Vector& grad) {
  if (grad.size() != m_.size() || params.size() != m_.size()) {
    throw DimensionError("Adam step with mismatched parameter size");
  }
  ++step_;
  m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
  v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(step_));
  params.array() -= learning_rate_ * (m_.array() / c1) /
                    ((v_.array() / c2).sqrt() + eps_);
}

}  // namespace uposi
