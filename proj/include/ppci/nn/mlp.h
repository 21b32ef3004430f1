/*
 * Copyright 2026 The PPCI Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Multi-layer perceptron classifier g = h o phi: rectified hidden layers
// (the encoder phi) followed by an affine layer and a softmax (the head h).

#ifndef PPCI_NN_MLP_H_
#define PPCI_NN_MLP_H_

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

namespace ppci::nn {

template <typename Scalar>
class BasicMlp {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using RowMatrix =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  // Batch of inputs, one unit per row.
  using InputRef = Eigen::Ref<const RowMatrix>;

  BasicMlp() = default;
  // Zero-initialized parameters. Throws ConfigError for fewer than two
  // layers or non-positive sizes.
  explicit BasicMlp(std::vector<int> layer_sizes);

  // Weights uniform in +-1/sqrt(fan_in), biases zero. Deterministic in seed.
  static BasicMlp Init(std::vector<int> layer_sizes, uint64_t seed);

  const std::vector<int>& layer_sizes() const { return layer_sizes_; }
  size_t num_layers() const { return weights_.size(); }
  int input_size() const { return layer_sizes_.front(); }
  int output_size() const { return layer_sizes_.back(); }
  // Width of phi(x): the last hidden layer, or the input when there is none.
  int representation_width() const { return layer_sizes_[layer_sizes_.size() - 2]; }

  // Layer l maps layer_sizes[l] to layer_sizes[l+1]; weight(l) has shape
  // (in x out).
  Matrix& weight(size_t l) { return weights_[l]; }
  const Matrix& weight(size_t l) const { return weights_[l]; }
  Vector& bias(size_t l) { return biases_[l]; }
  const Vector& bias(size_t l) const { return biases_[l]; }

  size_t num_parameters() const;
  std::vector<Scalar> Flatten() const;
  void Assign(std::span<const Scalar> flat);

  // Pre-softmax scores, batch x output_size.
  Matrix Logits(const InputRef& inputs) const;
  Matrix Probabilities(const InputRef& inputs) const;
  // phi(x), batch x representation_width.
  Matrix Representation(const InputRef& inputs) const;

  template <typename Other>
  BasicMlp<Other> Cast() const;

  bool operator==(const BasicMlp& other) const;

 private:
  template <typename>
  friend class BasicMlp;

  std::vector<int> layer_sizes_;
  std::vector<Matrix> weights_;
  std::vector<Vector> biases_;
};

using Predictor = BasicMlp<float>;

// Row-wise softmax with max subtraction.
template <typename Derived>
auto Softmax(const Eigen::MatrixBase<Derived>& logits) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out =
      (logits.colwise() - logits.rowwise().maxCoeff()).array().exp().matrix();
  out.array().colwise() /= out.array().rowwise().sum();
  return out;
}

template <typename Scalar>
template <typename Other>
BasicMlp<Other> BasicMlp<Scalar>::Cast() const {
  BasicMlp<Other> out;
  out.layer_sizes_ = layer_sizes_;
  for (size_t l = 0; l < weights_.size(); ++l) {
    out.weights_.push_back(weights_[l].template cast<Other>());
    out.biases_.push_back(biases_[l].template cast<Other>());
  }
  return out;
}

extern template class BasicMlp<float>;
extern template class BasicMlp<double>;

}  // namespace ppci::nn

#endif  // PPCI_NN_MLP_H_
