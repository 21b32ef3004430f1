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

#include "ppci/nn/mlp.h"

#include <cmath>
#include <random>

#include "ppci/common/error.h"
#include "ppci/common/random.h"

namespace ppci::nn {

template <typename Scalar>
BasicMlp<Scalar>::BasicMlp(std::vector<int> layer_sizes)
    : layer_sizes_(std::move(layer_sizes)) {
  if (layer_sizes_.size() < 2) {
    throw ConfigError("a network needs at least input and output layers");
  }
  for (const int size : layer_sizes_) {
    if (size < 1) throw ConfigError("layer sizes must be positive");
  }
  for (size_t l = 0; l + 1 < layer_sizes_.size(); ++l) {
    weights_.push_back(Matrix::Zero(layer_sizes_[l], layer_sizes_[l + 1]));
    biases_.push_back(Vector::Zero(layer_sizes_[l + 1]));
  }
}

template <typename Scalar>
BasicMlp<Scalar> BasicMlp<Scalar>::Init(std::vector<int> layer_sizes,
                                        uint64_t seed) {
  BasicMlp mlp(std::move(layer_sizes));
  RandomEngine rng(DeriveSeed(seed, "init"));
  for (Matrix& w : mlp.weights_) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(w.rows()));
    std::uniform_real_distribution<double> draw(-bound, bound);
    // Column-major fill order, fixed for determinism.
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      for (Eigen::Index i = 0; i < w.rows(); ++i) {
        w(i, j) = static_cast<Scalar>(draw(rng));
      }
    }
  }
  return mlp;
}

template <typename Scalar>
size_t BasicMlp<Scalar>::num_parameters() const {
  size_t count = 0;
  for (size_t l = 0; l < weights_.size(); ++l) {
    count += weights_[l].size() + biases_[l].size();
  }
  return count;
}

template <typename Scalar>
std::vector<Scalar> BasicMlp<Scalar>::Flatten() const {
  std::vector<Scalar> flat;
  flat.reserve(num_parameters());
  for (size_t l = 0; l < weights_.size(); ++l) {
    flat.insert(flat.end(), weights_[l].data(),
                weights_[l].data() + weights_[l].size());
    flat.insert(flat.end(), biases_[l].data(),
                biases_[l].data() + biases_[l].size());
  }
  return flat;
}

template <typename Scalar>
void BasicMlp<Scalar>::Assign(std::span<const Scalar> flat) {
  if (flat.size() != num_parameters()) {
    throw ConfigError("parameter vector has " + std::to_string(flat.size()) +
                      " entries, expected " + std::to_string(num_parameters()));
  }
  size_t offset = 0;
  for (size_t l = 0; l < weights_.size(); ++l) {
    std::copy_n(flat.data() + offset, weights_[l].size(), weights_[l].data());
    offset += weights_[l].size();
    std::copy_n(flat.data() + offset, biases_[l].size(), biases_[l].data());
    offset += biases_[l].size();
  }
}

template <typename Scalar>
typename BasicMlp<Scalar>::Matrix BasicMlp<Scalar>::Representation(
    const InputRef& inputs) const {
  if (inputs.cols() != input_size()) {
    throw DataError("input width " + std::to_string(inputs.cols()) +
                    " does not match network input " +
                    std::to_string(input_size()));
  }
  Matrix activation = inputs;
  for (size_t l = 0; l + 1 < weights_.size(); ++l) {
    Matrix next = activation * weights_[l];
    next.rowwise() += biases_[l].transpose();
    activation = next.cwiseMax(Scalar(0));
  }
  return activation;
}

template <typename Scalar>
typename BasicMlp<Scalar>::Matrix BasicMlp<Scalar>::Logits(
    const InputRef& inputs) const {
  const Matrix phi = Representation(inputs);
  Matrix logits = phi * weights_.back();
  logits.rowwise() += biases_.back().transpose();
  return logits;
}

template <typename Scalar>
typename BasicMlp<Scalar>::Matrix BasicMlp<Scalar>::Probabilities(
    const InputRef& inputs) const {
  return Softmax(Logits(inputs));
}

template <typename Scalar>
bool BasicMlp<Scalar>::operator==(const BasicMlp& other) const {
  if (layer_sizes_ != other.layer_sizes_) return false;
  for (size_t l = 0; l < weights_.size(); ++l) {
    if (weights_[l] != other.weights_[l] || biases_[l] != other.biases_[l]) {
      return false;
    }
  }
  return true;
}

template class BasicMlp<float>;
template class BasicMlp<double>;

}  // namespace ppci::nn
