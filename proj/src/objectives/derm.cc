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

#include "ppci/objectives/derm.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include "ppci/common/error.h"

namespace ppci::objectives {

std::vector<int> WeightTable::cond_support(int s) const {
  std::vector<int> support;
  for (size_t k = 0; k < labels_.size(); ++k) {
    if (counts_[Cell(s, k)] > 0) support.push_back(labels_[k]);
  }
  return support;
}

int WeightTable::label_index(int y) const {
  const auto it = std::lower_bound(labels_.begin(), labels_.end(), y);
  if (it == labels_.end() || *it != y) return -1;
  return static_cast<int>(it - labels_.begin());
}

WeightTable BuildWeightTable(std::span<const int> labels,
                             const Stratification& strata) {
  const size_t n = labels.size();
  if (n == 0) throw DataError("cannot build weights from zero observations");
  if (strata.num_units() != n) {
    throw DataError("got " + std::to_string(n) + " labels for " +
                    std::to_string(strata.num_units()) + " stratified units");
  }
  WeightTable table;
  table.strata_ = strata;
  const std::set<int> pooled(labels.begin(), labels.end());
  table.labels_.assign(pooled.begin(), pooled.end());
  const size_t num_strata = strata.num_strata();
  const size_t num_labels = table.labels_.size();
  table.counts_.assign(num_strata * num_labels, 0);
  table.stratum_size_.assign(num_strata, 0);
  for (size_t i = 0; i < n; ++i) {
    const int s = strata.stratum_of(i);
    ++table.counts_[table.Cell(s, table.label_index(labels[i]))];
    ++table.stratum_size_[s];
  }

  table.cond_variance_.assign(num_strata, 0.0);
  double total_variance = 0.0;
  for (size_t s = 0; s < num_strata; ++s) {
    const double size = static_cast<double>(table.stratum_size_[s]);
    double mean = 0.0;
    for (size_t k = 0; k < num_labels; ++k) {
      mean += table.labels_[k] * (table.counts_[table.Cell(s, k)] / size);
    }
    double var = 0.0;
    for (size_t k = 0; k < num_labels; ++k) {
      const double d = table.labels_[k] - mean;
      var += d * d * (table.counts_[table.Cell(s, k)] / size);
    }
    table.cond_variance_[s] = var;
    total_variance += var;
  }
  if (!(total_variance > 0.0)) {
    throw DataError(
        "outcome fully determined by experimental settings: every stratum "
        "has a constant label, so no deconfounding weights exist");
  }

  table.z_marginal_.resize(num_strata);
  table.empirical_.assign(num_strata * num_labels, 0.0);
  table.target_.assign(num_strata * num_labels, 0.0);
  table.raw_weight_.assign(num_strata * num_labels, 0.0);
  for (size_t s = 0; s < num_strata; ++s) {
    table.z_marginal_[s] = table.cond_variance_[s] / total_variance;
    size_t support = 0;
    for (size_t k = 0; k < num_labels; ++k) {
      support += table.counts_[table.Cell(s, k)] > 0;
    }
    for (size_t k = 0; k < num_labels; ++k) {
      const size_t cell = table.Cell(s, k);
      const size_t c = table.counts_[cell];
      table.empirical_[cell] = static_cast<double>(c) / static_cast<double>(n);
      if (c == 0) continue;
      table.target_[cell] = table.z_marginal_[s] / static_cast<double>(support);
      table.raw_weight_[cell] = table.target_[cell] / table.empirical_[cell];
    }
  }

  table.unit_weights_.resize(n);
  double sum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const size_t cell =
        table.Cell(strata.stratum_of(i), table.label_index(labels[i]));
    table.unit_weights_[i] = table.raw_weight_[cell];
    sum += table.unit_weights_[i];
  }
  table.scale_ = static_cast<double>(n) / sum;
  for (double& w : table.unit_weights_) w *= table.scale_;
  return table;
}

WeightTable BuildWeightTable(const dgp::Dataset& data,
                             std::span<const std::string> z_columns) {
  return BuildWeightTable(data.labels(), data.Stratify(z_columns));
}

std::vector<std::string> DefaultZColumns(const dgp::Dataset& data) {
  std::vector<std::string> columns = {"t"};
  for (const std::string& c : data.schema()) {
    if (c != "t") columns.push_back(c);
  }
  return columns;
}

SupportReport CheckFullSupport(const WeightTable& table) {
  SupportReport report;
  for (size_t s = 0; s < table.num_strata(); ++s) {
    if (!(table.cond_variance(s) > 0.0)) continue;
    SupportViolation violation;
    for (size_t k = 0; k < table.num_labels(); ++k) {
      if (table.count(s, k) == 0) violation.missing.push_back(table.labels()[k]);
    }
    if (violation.missing.empty()) continue;
    violation.stratum = static_cast<int>(s);
    violation.description = table.strata().Describe(s);
    report.full = false;
    report.violations.push_back(std::move(violation));
  }
  return report;
}

std::vector<double> ReweightedJoint(const WeightTable& table) {
  const size_t S = table.num_strata();
  const size_t L = table.num_labels();
  std::vector<double> joint(S * L, 0.0);
  double total = 0.0;
  for (size_t s = 0; s < S; ++s) {
    for (size_t k = 0; k < L; ++k) {
      joint[s * L + k] = table.joint_empirical(s, k) * table.weight(s, k);
      total += joint[s * L + k];
    }
  }
  for (double& p : joint) p /= total;
  return joint;
}

double MutualInformation(std::span<const double> joint, size_t num_strata,
                         size_t num_labels) {
  if (joint.size() != num_strata * num_labels) {
    throw DataError("joint table size does not match its dimensions");
  }
  std::vector<double> pz(num_strata, 0.0), py(num_labels, 0.0);
  for (size_t s = 0; s < num_strata; ++s) {
    for (size_t k = 0; k < num_labels; ++k) {
      pz[s] += joint[s * num_labels + k];
      py[k] += joint[s * num_labels + k];
    }
  }
  double mi = 0.0;
  for (size_t s = 0; s < num_strata; ++s) {
    for (size_t k = 0; k < num_labels; ++k) {
      const double p = joint[s * num_labels + k];
      if (p > 0.0) mi += p * std::log(p / (pz[s] * py[k]));
    }
  }
  return mi;
}

std::string WeightTableCsv(const WeightTable& table) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (const std::string& c : table.strata().columns()) out << c << ',';
  out << "y,count,cond_variance,target_prob,empirical_prob,weight\n";
  for (size_t s = 0; s < table.num_strata(); ++s) {
    for (size_t k = 0; k < table.num_labels(); ++k) {
      for (const int v : table.strata().key(s).values) out << v << ',';
      out << table.labels()[k] << ',' << table.count(s, k) << ','
          << table.cond_variance(s) << ',' << table.joint_target(s, k) << ','
          << table.joint_empirical(s, k) << ',' << table.weight(s, k) << '\n';
    }
  }
  return out.str();
}

}  // namespace ppci::objectives
