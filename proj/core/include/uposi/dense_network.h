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

#ifndef UPOSI_DENSE_NETWORK_H_
#define UPOSI_DENSE_NETWORK_H_

#include <vector>

#include "uposi/random.h"
#include "uposi/types.h"

namespace uposi {

enum class Mode { kTrain, kEval };

// Intermediate values of one batched forward pass, consumed by Backward()
// and Jvp(). Samples are stored column-wise.
struct ForwardTape {
  Matrix input;
  // tanh outputs of each hidden layer, before the dropout mask.
  std::vector<Matrix> activations;
  // Inverted-dropout masks (0 or 1/(1-p)); empty in eval mode.
  std::vector<Matrix> masks;

  bool empty() const { return input.size() == 0; }
};

struct NetworkGradients {
  // Gradient w.r.t. the flat parameter vector, summed over the batch.
  Vector params;
  // Gradient w.r.t. each input column.
  Matrix inputs;
};

// Fully connected stack: tanh hidden layers, identity output layer, optional
// inverted dropout after every hidden layer in training mode. All arithmetic
// is double precision.
//
// Flat parameter ordering, layer by layer from the input side: the weight
// matrix (out x in) in column-major order, then the bias vector.
class DenseNetwork {
 public:
  DenseNetwork() = default;
  explicit DenseNetwork(std::vector<int> layer_dims, double dropout_rate = 0.0);

  // Fan-in scaled uniform weights, zero biases; the output layer's weights
  // are additionally multiplied by `output_scale`.
  void Initialize(RandomSource& rng, double output_scale = 1.0);

  const std::vector<int>& layer_dims() const { return layer_dims_; }
  int input_dim() const { return layer_dims_.front(); }
  int output_dim() const { return layer_dims_.back(); }
  int num_layers() const { return static_cast<int>(weights_.size()); }
  int num_params() const;
  double dropout_rate() const { return dropout_rate_; }

  // Single-sample forward pass. `rng` is required in training mode when the
  // dropout rate is non-zero. Throws DimensionError or NumericError.
  Vector Forward(const Vector& input, Mode mode = Mode::kEval,
                 RandomSource* rng = nullptr, ForwardTape* tape = nullptr) const;

  // Batched forward pass over the columns of `inputs`.
  Matrix ForwardBatch(const Matrix& inputs, Mode mode = Mode::kEval,
                      RandomSource* rng = nullptr,
                      ForwardTape* tape = nullptr) const;

  // Reverse-mode gradients of sum_n output_grads(:, n) . output(:, n).
  NetworkGradients Backward(const ForwardTape& tape,
                            const Matrix& output_grads) const;

  // Forward-mode directional derivative of the outputs w.r.t. parameters
  // along `direction` (inputs held fixed), one column per sample.
  Matrix Jvp(const ForwardTape& tape, const Vector& direction) const;

  Vector GetParams() const;
  void SetParams(const Vector& params);

  Matrix& weights(int layer) { return weights_[layer]; }
  const Matrix& weights(int layer) const { return weights_[layer]; }
  Vector& biases(int layer) { return biases_[layer]; }
  const Vector& biases(int layer) const { return biases_[layer]; }

 private:
  std::vector<int> layer_dims_;
  double dropout_rate_ = 0.0;
  std::vector<Matrix> weights_;
  std::vector<Vector> biases_;
};

// Adaptive-moment gradient descent on a flat parameter vector.
class Adam {
 public:
  explicit Adam(int num_params, double learning_rate = 1e-3,
                double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

  // params -= step(grad).
  void Step(Vector& params, const Vector& grad);

 private:
  double learning_rate_;
  double beta1_;
  double beta2_;
  double eps_;
  long step_ = 0;
  Vector m_;
  Vector v_;
};

}  // namespace uposi

#endif  // UPOSI_DENSE_NETWORK_H_
