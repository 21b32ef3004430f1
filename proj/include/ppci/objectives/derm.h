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

// Deconfounding importance weights.
//
// For strata z of the experimental settings Z, the target joint is
//   P*(y, z) = Var(Y|z) / sum_z' Var(Y|z') * 1{y in supp(Y|z)} / |supp(Y|z)|
// and unit i with (y_i, z_i) receives P*(y_i, z_i) / P_hat(y_i, z_i).
// Variances are those of the empirical conditional law (divide by stratum
// size). The per-unit weights are finally scaled to have mean one.

#ifndef PPCI_OBJECTIVES_DERM_H_
#define PPCI_OBJECTIVES_DERM_H_

#include <span>
#include <string>
#include <vector>

#include "ppci/common/stratum.h"
#include "ppci/dgp/dataset.h"

namespace ppci::objectives {

// Dense tables over (stratum s, label index k). Strata follow the
// Stratification numbering; labels() is the sorted pooled support supp(Y).
class WeightTable {
 public:
  size_t num_strata() const { return strata_.num_strata(); }
  size_t num_labels() const { return labels_.size(); }
  size_t num_units() const { return unit_weights_.size(); }
  const Stratification& strata() const { return strata_; }
  const std::vector<int>& labels() const { return labels_; }

  size_t count(int s, int k) const { return counts_[Cell(s, k)]; }
  size_t stratum_size(int s) const { return stratum_size_[s]; }
  double cond_variance(int s) const { return cond_variance_[s]; }
  double z_marginal(int s) const { return z_marginal_[s]; }
  // Labels observed in stratum s, ascending.
  std::vector<int> cond_support(int s) const;
  double joint_empirical(int s, int k) const { return empirical_[Cell(s, k)]; }
  double joint_target(int s, int k) const { return target_[Cell(s, k)]; }
  // P* / P_hat before mean-one scaling; 0 for unobserved cells.
  double raw_weight(int s, int k) const { return raw_weight_[Cell(s, k)]; }
  // raw_weight times the mean-one scale.
  double weight(int s, int k) const { return raw_weight_[Cell(s, k)] * scale_; }
  double scale() const { return scale_; }

  // Index of y in labels(), or -1.
  int label_index(int y) const;

  // One weight per observation, mean one.
  const std::vector<double>& unit_weights() const { return unit_weights_; }

 private:
  friend WeightTable BuildWeightTable(std::span<const int> labels,
                                      const Stratification& strata);
  size_t Cell(int s, int k) const { return s * labels_.size() + k; }

  Stratification strata_;
  std::vector<int> labels_;
  std::vector<size_t> counts_;
  std::vector<size_t> stratum_size_;
  std::vector<double> cond_variance_;
  std::vector<double> z_marginal_;
  std::vector<double> empirical_;
  std::vector<double> target_;
  std::vector<double> raw_weight_;
  std::vector<double> unit_weights_;
  double scale_ = 1.0;
};

// Throws DataError when lengths disagree or n = 0, and when every stratum
// has a constant outcome.
WeightTable BuildWeightTable(std::span<const int> labels,
                             const Stratification& strata);
WeightTable BuildWeightTable(const dgp::Dataset& data,
                             std::span<const std::string> z_columns);

// "t" followed by every covariate in the schema.
std::vector<std::string> DefaultZColumns(const dgp::Dataset& data);

struct SupportViolation {
  int stratum = 0;
  std::string description;
  std::vector<int> missing;
};

struct SupportReport {
  bool full = true;
  std::vector<SupportViolation> violations;
};

// Full support holds when every positive-variance stratum observes every
// pooled label.
SupportReport CheckFullSupport(const WeightTable& table);

// Empirical joint times the weights, renormalized; dense (s, k) layout.
std::vector<double> ReweightedJoint(const WeightTable& table);

// I(Y; Z) in nats for a dense (s, k) joint.
double MutualInformation(std::span<const double> joint, size_t num_strata,
                         size_t num_labels);

// Columns: one per Z component, y, count, cond_variance, target_prob,
// empirical_prob, weight. One row per (stratum, pooled label).
std::string WeightTableCsv(const WeightTable& table);

}  // namespace ppci::objectives

#endif  // PPCI_OBJECTIVES_DERM_H_
