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

#include "ppci/nn/train.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#if defined(__SSE__)
#include <xmmintrin.h>
#endif

#include "ppci/common/error.h"
#include "ppci/common/random.h"

namespace ppci::nn {

namespace {

// Flushes subnormal floats to zero while alive. Late in training the Adam
// moments underflow and subnormal arithmetic runs several times slower.
class FlushDenormals {
 public:
#if defined(__SSE__)
  FlushDenormals() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | 0x8040); }
  ~FlushDenormals() { _mm_setcsr(saved_); }

 private:
  unsigned int saved_;
#endif
};

constexpr Eigen::Index kInferenceChunk = 1024;

using FloatRows = Eigen::Map<const Predictor::RowMatrix>;

void CheckSet(const TrainingSet& set) {
  const size_t n = set.size();
  if (set.dim == 0 || set.features.size() != n * set.dim) {
    throw DataError("feature matrix has " + std::to_string(set.features.size()) +
                    " values for " + std::to_string(n) + " units of width " +
                    std::to_string(set.dim));
  }
  if (set.weights.size() != n) {
    throw DataError("got " + std::to_string(set.weights.size()) +
                    " weights for " + std::to_string(n) + " units");
  }
  for (const double w : set.weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw DataError("sample weights must be finite and nonnegative");
    }
  }
  if (!set.environments.empty() && set.environments.size() != n) {
    throw DataError("got " + std::to_string(set.environments.size()) +
                    " environment ids for " + std::to_string(n) + " units");
  }
}

// Number of environments after checking that ids 0..E-1 are all populated.
int CountEnvironments(std::span<const int> environments) {
  if (environments.empty()) return 1;
  const int max_id = *std::max_element(environments.begin(), environments.end());
  std::vector<size_t> counts(max_id + 1, 0);
  for (const int e : environments) {
    if (e < 0) throw DataError("environment ids must be nonnegative");
    ++counts[e];
  }
  for (int e = 0; e <= max_id; ++e) {
    if (counts[e] == 0) {
      throw DataError("environment " + std::to_string(e) + " has no units");
    }
  }
  return max_id + 1;
}

void CheckWidth(const Predictor& predictor, std::span<const float> features,
                size_t dim) {
  if (dim != static_cast<size_t>(predictor.input_size())) {
    throw DataError("inputs have width " + std::to_string(dim) +
                    ", predictor expects " +
                    std::to_string(predictor.input_size()));
  }
  if (dim == 0 || features.size() % dim != 0) {
    throw DataError("feature buffer is not a whole number of rows");
  }
}

// Per-unit cross-entropy and (p - e_y) . z, evaluated in chunks.
struct UnitStats {
  std::vector<double> ce;
  std::vector<double> score;
};

UnitStats ComputeUnitStats(const Predictor& predictor, const TrainingSet& set) {
  CheckWidth(predictor, set.features, set.dim);
  const Eigen::Index n = static_cast<Eigen::Index>(set.size());
  UnitStats stats{std::vector<double>(n), std::vector<double>(n)};
  for (Eigen::Index start = 0; start < n; start += kInferenceChunk) {
    const Eigen::Index rows = std::min(kInferenceChunk, n - start);
    FloatRows chunk(set.features.data() + start * set.dim, rows, set.dim);
    const Eigen::MatrixXd logits = predictor.Logits(chunk).cast<double>();
    const Eigen::MatrixXd prob = Softmax(logits);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const int y = set.labels[start + r];
      if (y < 0 || y >= logits.cols()) {
        throw DataError("label " + std::to_string(y) + " outside output range");
      }
      const double max = logits.row(r).maxCoeff();
      const double lse =
          std::log((logits.row(r).array() - max).exp().sum()) + max;
      stats.ce[start + r] = lse - logits(r, y);
      stats.score[start + r] =
          prob.row(r).dot(logits.row(r)) - logits(r, y);
    }
  }
  return stats;
}

}  // namespace

std::string_view ObjectiveName(Objective objective) {
  switch (objective) {
    case Objective::kErm:
      return "erm";
    case Objective::kDerm:
      return "derm";
    case Objective::kVrex:
      return "vrex";
    case Objective::kIrm:
      return "irm";
  }
  return "erm";
}

Objective ParseObjective(std::string_view name) {
  for (const Objective o :
       {Objective::kErm, Objective::kDerm, Objective::kVrex, Objective::kIrm}) {
    if (name == ObjectiveName(o)) return o;
  }
  throw ConfigError("unknown objective '" + std::string(name) +
                    "' (expected erm, derm, vrex or irm)");
}

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning_rate must be positive");
  }
  if (epochs < 0) throw ConfigError("epochs must be nonnegative");
  if (batch_size < 1) throw ConfigError("batch_size must be at least 1");
  if (!(penalty_lambda >= 0.0) || !std::isfinite(penalty_lambda)) {
    throw ConfigError("penalty_lambda must be finite and nonnegative");
  }
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) ||
      !(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
    throw ConfigError("Adam betas must lie in [0, 1)");
  }
  if (!(adam_eps > 0.0)) throw ConfigError("adam_eps must be positive");
  for (const int h : hidden_layers) {
    if (h < 1) throw ConfigError("hidden layer widths must be positive");
  }
  if (uses_environments() && environment_variable == "none") {
    throw ConfigError(std::string(ObjectiveName(objective)) +
                      " needs an environment_variable");
  }
}

template <typename Scalar>
std::vector<Scalar> Gradients<Scalar>::Flatten() const {
  std::vector<Scalar> flat;
  for (size_t l = 0; l < weights.size(); ++l) {
    flat.insert(flat.end(), weights[l].data(),
                weights[l].data() + weights[l].size());
    flat.insert(flat.end(), biases[l].data(), biases[l].data() + biases[l].size());
  }
  return flat;
}

template <typename Scalar>
BatchLoss EvaluateObjective(const BasicMlp<Scalar>& mlp,
                            const typename BasicMlp<Scalar>::InputRef& inputs,
                            std::span<const int> labels,
                            std::span<const Scalar> weights,
                            std::span<const int> environments,
                            Objective objective, double penalty_lambda,
                            Gradients<Scalar>* gradients) {
  using Matrix = typename BasicMlp<Scalar>::Matrix;
  using Vector = typename BasicMlp<Scalar>::Vector;
  const Eigen::Index batch = inputs.rows();
  if (batch == 0) throw DataError("empty batch");
  if (inputs.cols() != mlp.input_size()) {
    throw DataError("batch width does not match network input");
  }
  if (labels.size() != static_cast<size_t>(batch) ||
      weights.size() != static_cast<size_t>(batch) ||
      (!environments.empty() && environments.size() != static_cast<size_t>(batch))) {
    throw DataError("batch labels, weights and environments must match rows");
  }

  const size_t num_layers = mlp.num_layers();
  std::vector<Matrix> hidden(num_layers - 1);
  Matrix logits;
  for (size_t l = 0; l < num_layers; ++l) {
    Matrix z = l == 0 ? Matrix(inputs * mlp.weight(0))
                      : Matrix(hidden[l - 1] * mlp.weight(l));
    z.rowwise() += mlp.bias(l).transpose();
    if (l + 1 < num_layers) {
      hidden[l] = z.cwiseMax(Scalar(0));
    } else {
      logits = std::move(z);
    }
  }

  const Vector row_max = logits.rowwise().maxCoeff();
  const Matrix shifted = logits.colwise() - row_max;
  const Matrix expd = shifted.array().exp().matrix();
  const Vector sums = expd.rowwise().sum();
  const Matrix prob = (expd.array().colwise() / sums.array()).matrix();

  // residual = p - e_y, the logit gradient of unit cross-entropy.
  Matrix residual = prob;
  std::vector<double> ce(batch);
  double risk = 0.0;
  for (Eigen::Index i = 0; i < batch; ++i) {
    const int y = labels[i];
    if (y < 0 || y >= logits.cols()) {
      throw DataError("label " + std::to_string(y) + " outside output range");
    }
    ce[i] = std::log(static_cast<double>(sums(i))) - shifted(i, y);
    residual(i, y) -= Scalar(1);
    risk += static_cast<double>(weights[i]) * ce[i];
  }
  risk /= static_cast<double>(batch);

  Matrix grad_logits;
  if (gradients != nullptr) {
    grad_logits = residual;
    for (Eigen::Index i = 0; i < batch; ++i) {
      grad_logits.row(i) *= weights[i] / static_cast<Scalar>(batch);
    }
  }

  double penalty = 0.0;
  const bool penalized =
      (objective == Objective::kVrex || objective == Objective::kIrm) &&
      !environments.empty();
  if (penalized) {
    std::map<int, std::vector<Eigen::Index>> groups;
    for (Eigen::Index i = 0; i < batch; ++i) groups[environments[i]].push_back(i);
    const double num_envs = static_cast<double>(groups.size());

    if (objective == Objective::kVrex) {
      std::vector<double> env_risk;
      for (const auto& [env, rows] : groups) {
        double r = 0.0;
        for (const Eigen::Index i : rows) r += static_cast<double>(weights[i]) * ce[i];
        env_risk.push_back(r / static_cast<double>(rows.size()));
      }
      const double origin = env_risk.front();
      for (double& r : env_risk) r -= origin;
      const double mean =
          std::accumulate(env_risk.begin(), env_risk.end(), 0.0) / num_envs;
      size_t k = 0;
      for (const auto& [env, rows] : groups) {
        const double dev = env_risk[k++] - mean;
        penalty += dev * dev / num_envs;
        if (gradients == nullptr) continue;
        const double coeff = penalty_lambda * 2.0 * dev / num_envs /
                             static_cast<double>(rows.size());
        for (const Eigen::Index i : rows) {
          grad_logits.row(i) +=
              static_cast<Scalar>(coeff) * weights[i] * residual.row(i);
        }
      }
    } else {
      for (const auto& [env, rows] : groups) {
        const double n_e = static_cast<double>(rows.size());
        double g = 0.0;
        for (const Eigen::Index i : rows) {
          g += static_cast<double>(weights[i]) *
               static_cast<double>(residual.row(i).dot(logits.row(i)));
        }
        g /= n_e;
        penalty += g * g;
        if (gradients == nullptr) continue;
        const double coeff = penalty_lambda * 2.0 * g / n_e;
        for (const Eigen::Index i : rows) {
          const Scalar pz = prob.row(i).dot(logits.row(i));
          const auto curvature =
              (prob.row(i).array() * (logits.row(i).array() - pz)).matrix();
          grad_logits.row(i) += static_cast<Scalar>(coeff) * weights[i] *
                                (residual.row(i) + curvature);
        }
      }
    }
  }

  const BatchLoss loss{risk + penalty_lambda * penalty, risk, penalty};
  if (gradients == nullptr) return loss;

  gradients->weights.resize(num_layers);
  gradients->biases.resize(num_layers);
  Matrix delta = std::move(grad_logits);
  for (size_t l = num_layers; l-- > 0;) {
    if (l == 0) {
      gradients->weights[0] = inputs.transpose() * delta;
    } else {
      gradients->weights[l] = hidden[l - 1].transpose() * delta;
    }
    gradients->biases[l] = delta.colwise().sum().transpose();
    if (l == 0) break;
    Matrix back = delta * mlp.weight(l).transpose();
    delta = (back.array() * (hidden[l - 1].array() > Scalar(0)).template cast<Scalar>())
                .matrix();
  }
  return loss;
}

template <typename Scalar>
BasicMlp<Scalar> TrainNetwork(BasicMlp<Scalar> initial, const TrainingSet& set,
                              const TrainConfig& cfg, TrainHistory* history) {
  using Matrix = typename BasicMlp<Scalar>::Matrix;
  using Vector = typename BasicMlp<Scalar>::Vector;
  using RowMatrix = typename BasicMlp<Scalar>::RowMatrix;
  cfg.Validate();
  CheckSet(set);
  if (set.dim != static_cast<size_t>(initial.input_size())) {
    throw DataError("training features have width " + std::to_string(set.dim) +
                    ", network expects " + std::to_string(initial.input_size()));
  }
  const size_t n = set.size();
  if (n == 0) throw DataError("training set is empty");
  std::span<const int> environments;
  if (cfg.uses_environments()) {
    if (set.environments.empty()) {
      throw DataError(std::string(ObjectiveName(cfg.objective)) +
                      " training needs environment ids");
    }
    CountEnvironments(set.environments);
    environments = set.environments;
  }

  const FlushDenormals flush;
  BasicMlp<Scalar> mlp = std::move(initial);
  const size_t num_layers = mlp.num_layers();
  std::vector<Matrix> m_w(num_layers), v_w(num_layers);
  std::vector<Vector> m_b(num_layers), v_b(num_layers);
  for (size_t l = 0; l < num_layers; ++l) {
    m_w[l] = v_w[l] = Matrix::Zero(mlp.weight(l).rows(), mlp.weight(l).cols());
    m_b[l] = v_b[l] = Vector::Zero(mlp.bias(l).size());
  }

  const Scalar lr = static_cast<Scalar>(cfg.learning_rate);
  const Scalar beta1 = static_cast<Scalar>(cfg.adam_beta1);
  const Scalar beta2 = static_cast<Scalar>(cfg.adam_beta2);
  const Scalar eps = static_cast<Scalar>(cfg.adam_eps);
  double beta1_power = 1.0;
  double beta2_power = 1.0;

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  RandomEngine shuffle_rng(DeriveSeed(cfg.seed, "shuffle"));
  const size_t batch_cap = static_cast<size_t>(cfg.batch_size);
  RowMatrix batch_x;
  std::vector<int> batch_y;
  std::vector<Scalar> batch_w;
  std::vector<int> batch_e;
  Gradients<Scalar> grads;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double epoch_total = 0.0;
    for (size_t start = 0; start < n; start += batch_cap) {
      const size_t rows = std::min(batch_cap, n - start);
      batch_x.resize(rows, set.dim);
      batch_y.resize(rows);
      batch_w.resize(rows);
      batch_e.resize(environments.empty() ? 0 : rows);
      for (size_t r = 0; r < rows; ++r) {
        const size_t i = order[start + r];
        const float* src = set.features.data() + i * set.dim;
        for (size_t c = 0; c < set.dim; ++c) {
          batch_x(r, c) = static_cast<Scalar>(src[c]);
        }
        batch_y[r] = set.labels[i];
        batch_w[r] = static_cast<Scalar>(set.weights[i]);
        if (!environments.empty()) batch_e[r] = environments[i];
      }
      const BatchLoss loss = EvaluateObjective<Scalar>(
          mlp, batch_x, batch_y, batch_w, batch_e, cfg.objective,
          cfg.penalty_lambda, &grads);
      if (!std::isfinite(loss.total)) {
        throw NumericalError("training loss became non-finite in epoch " +
                             std::to_string(epoch) + " (objective " +
                             std::string(ObjectiveName(cfg.objective)) + ")");
      }
      epoch_total += loss.total * static_cast<double>(rows);

      beta1_power *= cfg.adam_beta1;
      beta2_power *= cfg.adam_beta2;
      const Scalar correction1 = static_cast<Scalar>(1.0 - beta1_power);
      const Scalar correction2 = static_cast<Scalar>(1.0 - beta2_power);
      const auto step = [&](auto& param, auto& m, auto& v, const auto& g) {
        m = beta1 * m + (Scalar(1) - beta1) * g;
        v = beta2 * v + (Scalar(1) - beta2) * g.cwiseProduct(g);
        param.array() -= lr * (m.array() / correction1) /
                         ((v.array() / correction2).sqrt() + eps);
      };
      for (size_t l = 0; l < num_layers; ++l) {
        step(mlp.weight(l), m_w[l], v_w[l], grads.weights[l]);
        step(mlp.bias(l), m_b[l], v_b[l], grads.biases[l]);
      }
    }
    if (history != nullptr) {
      history->epoch_loss.push_back(epoch_total / static_cast<double>(n));
    }
  }
  return mlp;
}

std::vector<int> ImageLayerSizes(const TrainConfig& cfg) {
  std::vector<int> sizes = {dgp::kImageSize};
  sizes.insert(sizes.end(), cfg.hidden_layers.begin(), cfg.hidden_layers.end());
  sizes.push_back(10);
  return sizes;
}

std::vector<int> EnvironmentIds(const dgp::Dataset& data,
                                std::string_view column) {
  if (column == "none") return {};
  const std::span<const uint8_t> values = data.column(column);
  return std::vector<int>(values.begin(), values.end());
}

Predictor Train(const dgp::Dataset& data, std::span<const double> weights,
                const TrainConfig& cfg, TrainHistory* history) {
  cfg.Validate();
  const std::vector<int> environments =
      cfg.uses_environments() ? EnvironmentIds(data, cfg.environment_variable)
                              : std::vector<int>{};
  TrainingSet set;
  set.features = data.images();
  set.dim = dgp::kImageSize;
  set.labels = data.labels();
  set.weights = weights;
  set.environments = environments;
  return TrainNetwork(Predictor::Init(ImageLayerSizes(cfg), cfg.seed), set, cfg,
                      history);
}

std::vector<int> Predict(const Predictor& predictor,
                         std::span<const float> features, size_t dim) {
  CheckWidth(predictor, features, dim);
  const Eigen::Index n = static_cast<Eigen::Index>(features.size() / dim);
  std::vector<int> out(n);
  for (Eigen::Index start = 0; start < n; start += kInferenceChunk) {
    const Eigen::Index rows = std::min(kInferenceChunk, n - start);
    FloatRows chunk(features.data() + start * dim, rows, dim);
    const Predictor::Matrix prob = predictor.Probabilities(chunk);
    for (Eigen::Index r = 0; r < rows; ++r) {
      Eigen::Index best = 0;
      for (Eigen::Index k = 1; k < prob.cols(); ++k) {
        if (prob(r, k) > prob(r, best)) best = k;
      }
      out[start + r] = static_cast<int>(best);
    }
  }
  return out;
}

std::vector<int> Predict(const Predictor& predictor, const dgp::Dataset& data) {
  return Predict(predictor, data.images(), dgp::kImageSize);
}

Eigen::MatrixXd Representation(const Predictor& predictor,
                               std::span<const float> features, size_t dim) {
  CheckWidth(predictor, features, dim);
  const Eigen::Index n = static_cast<Eigen::Index>(features.size() / dim);
  Eigen::MatrixXd out(n, predictor.representation_width());
  for (Eigen::Index start = 0; start < n; start += kInferenceChunk) {
    const Eigen::Index rows = std::min(kInferenceChunk, n - start);
    FloatRows chunk(features.data() + start * dim, rows, dim);
    out.middleRows(start, rows) = predictor.Representation(chunk).cast<double>();
  }
  return out;
}

Eigen::MatrixXd Representation(const Predictor& predictor,
                               const dgp::Dataset& data) {
  return Representation(predictor, data.images(), dgp::kImageSize);
}

std::map<int, double> RiskByEnvironment(const Predictor& predictor,
                                        const TrainingSet& set) {
  CheckSet(set);
  CountEnvironments(set.environments);
  const UnitStats stats = ComputeUnitStats(predictor, set);
  std::map<int, double> sums;
  std::map<int, size_t> counts;
  for (size_t i = 0; i < set.size(); ++i) {
    const int env = set.environments.empty() ? 0 : set.environments[i];
    sums[env] += set.weights[i] * stats.ce[i];
    ++counts[env];
  }
  for (auto& [env, sum] : sums) sum /= static_cast<double>(counts[env]);
  return sums;
}

std::map<int, double> RiskByEnvironment(const Predictor& predictor,
                                        const dgp::Dataset& data,
                                        std::span<const double> weights,
                                        std::string_view env_variable) {
  const std::vector<int> environments = EnvironmentIds(data, env_variable);
  TrainingSet set;
  set.features = data.images();
  set.dim = dgp::kImageSize;
  set.labels = data.labels();
  set.weights = weights;
  set.environments = environments;
  return RiskByEnvironment(predictor, set);
}

double VrexPenalty(const std::map<int, double>& risks) {
  if (risks.empty()) return 0.0;
  // Shifted by the first risk so that equal risks give exactly zero.
  const double origin = risks.begin()->second;
  double mean = 0.0;
  for (const auto& [env, r] : risks) mean += r - origin;
  mean /= static_cast<double>(risks.size());
  double var = 0.0;
  for (const auto& [env, r] : risks) var += (r - origin - mean) * (r - origin - mean);
  return var / static_cast<double>(risks.size());
}

double IrmPenalty(const Predictor& predictor, const TrainingSet& set) {
  CheckSet(set);
  CountEnvironments(set.environments);
  const UnitStats stats = ComputeUnitStats(predictor, set);
  std::map<int, double> sums;
  std::map<int, size_t> counts;
  for (size_t i = 0; i < set.size(); ++i) {
    const int env = set.environments.empty() ? 0 : set.environments[i];
    sums[env] += set.weights[i] * stats.score[i];
    ++counts[env];
  }
  double penalty = 0.0;
  for (const auto& [env, sum] : sums) {
    const double g = sum / static_cast<double>(counts[env]);
    penalty += g * g;
  }
  return penalty;
}

template struct Gradients<float>;
template struct Gradients<double>;
template BatchLoss EvaluateObjective<float>(
    const BasicMlp<float>&, const BasicMlp<float>::InputRef&,
    std::span<const int>, std::span<const float>, std::span<const int>,
    Objective, double, Gradients<float>*);
template BatchLoss EvaluateObjective<double>(
    const BasicMlp<double>&, const BasicMlp<double>::InputRef&,
    std::span<const int>, std::span<const double>, std::span<const int>,
    Objective, double, Gradients<double>*);
template BasicMlp<float> TrainNetwork<float>(BasicMlp<float>,
                                             const TrainingSet&,
                                             const TrainConfig&, TrainHistory*);
template BasicMlp<double> TrainNetwork<double>(BasicMlp<double>,
                                               const TrainingSet&,
                                               const TrainConfig&,
                                               TrainHistory*);

}  // namespace ppci::nn
