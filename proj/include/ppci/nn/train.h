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

// Training objectives and Adam optimization for BasicMlp.
//
// Every objective starts from the batch-mean weighted cross-entropy
//   R = (1/B) sum_i w_i CE(g(x_i), y_i).
// vREx adds lambda * Var_e(R_e), the population variance over the
// environments present in the batch of R_e = (1/n_e) sum_{i in e} w_i CE_i.
// IRM (v1) adds lambda * sum_e (dR_e(s)/ds at s=1)^2, where R_e(s) scales the
// logits by a dummy multiplier s. DERM is weighted ERM; its weights come
// from objectives::BuildWeightTable.

#ifndef PPCI_NN_TRAIN_H_
#define PPCI_NN_TRAIN_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ppci/dgp/dataset.h"
#include "ppci/nn/mlp.h"

namespace ppci::nn {

enum class Objective { kErm, kDerm, kVrex, kIrm };

std::string_view ObjectiveName(Objective objective);
Objective ParseObjective(std::string_view name);

struct TrainConfig {
  Objective objective = Objective::kErm;
  double penalty_lambda = 0.0;
  // Column defining environments for vREx/IRM, or "none".
  std::string environment_variable = "w";
  double learning_rate = 1e-4;
  int epochs = 40;
  int batch_size = 32;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.9;
  double adam_eps = 1e-8;
  uint64_t seed = 0;
  std::vector<int> hidden_layers = {256, 256};

  bool uses_environments() const {
    return objective == Objective::kVrex || objective == Objective::kIrm;
  }
  // Throws ConfigError on a non-positive learning rate or batch size,
  // negative epochs or lambda, and penalty objectives without environments.
  void Validate() const;
};

// Borrowed view of a labeled training sample. `features` is row-major
// size() x dim. `environments` is empty or holds one id in 0..E-1 per unit.
struct TrainingSet {
  std::span<const float> features;
  size_t dim = 0;
  std::span<const int> labels;
  std::span<const double> weights;
  std::span<const int> environments;

  size_t size() const { return labels.size(); }
};

template <typename Scalar>
struct Gradients {
  std::vector<typename BasicMlp<Scalar>::Matrix> weights;
  std::vector<typename BasicMlp<Scalar>::Vector> biases;

  std::vector<Scalar> Flatten() const;
};

struct BatchLoss {
  double total = 0.0;
  double risk = 0.0;
  double penalty = 0.0;
};

// Objective value on one batch and, when `gradients` is non-null, its
// gradient with respect to every parameter.
template <typename Scalar>
BatchLoss EvaluateObjective(const BasicMlp<Scalar>& mlp,
                            const typename BasicMlp<Scalar>::InputRef& inputs,
                            std::span<const int> labels,
                            std::span<const Scalar> weights,
                            std::span<const int> environments,
                            Objective objective, double penalty_lambda,
                            Gradients<Scalar>* gradients);

struct TrainHistory {
  std::vector<double> epoch_loss;
};

// Runs cfg.epochs passes of shuffled minibatch Adam from `initial`.
// Throws DataError on inconsistent inputs or empty environments and
// NumericalError when the loss stops being finite.
template <typename Scalar>
BasicMlp<Scalar> TrainNetwork(BasicMlp<Scalar> initial, const TrainingSet& set,
                              const TrainConfig& cfg,
                              TrainHistory* history = nullptr);

// Builds a [2352, hidden..., 10] predictor initialized from cfg.seed and
// trains it on a labeled dataset. Environments come from the column
// cfg.environment_variable when the objective needs them.
Predictor Train(const dgp::Dataset& data, std::span<const double> weights,
                const TrainConfig& cfg, TrainHistory* history = nullptr);

// The layer sizes Train() uses for image data.
std::vector<int> ImageLayerSizes(const TrainConfig& cfg);

// Environment ids for a dataset column ("none" yields an empty vector).
std::vector<int> EnvironmentIds(const dgp::Dataset& data,
                                std::string_view column);

// argmax class per row; ties go to the smallest index.
std::vector<int> Predict(const Predictor& predictor,
                         std::span<const float> features, size_t dim);
std::vector<int> Predict(const Predictor& predictor, const dgp::Dataset& data);

// phi(x) per unit, n x representation_width.
Eigen::MatrixXd Representation(const Predictor& predictor,
                               std::span<const float> features, size_t dim);
Eigen::MatrixXd Representation(const Predictor& predictor,
                               const dgp::Dataset& data);

// Mean weighted cross-entropy per environment id. Throws DataError when an
// id in 0..max has no units.
std::map<int, double> RiskByEnvironment(const Predictor& predictor,
                                        const TrainingSet& set);
std::map<int, double> RiskByEnvironment(const Predictor& predictor,
                                        const dgp::Dataset& data,
                                        std::span<const double> weights,
                                        std::string_view env_variable);

// Population variance of per-environment risks (0 for a single one).
double VrexPenalty(const std::map<int, double>& risks);

// sum_e (dR_e/ds at s=1)^2 over the whole set.
double IrmPenalty(const Predictor& predictor, const TrainingSet& set);

}  // namespace ppci::nn

#endif  // PPCI_NN_TRAIN_H_
