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

#include "ppci/diagnostics/audit.h"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "ppci/common/error.h"
#include "ppci/common/random.h"

namespace ppci::diagnostics {

const char kTargetAuditLimitation[] =
    "target data carries no outcome labels, so neither calibration nor the "
    "lifting constraint can be checked there; these audits only cover "
    "labeled experiments";

CalibrationReport CalibrationAudit(std::span<const double> y_true,
                                   std::span<const double> y_pred,
                                   const Stratification& strata,
                                   double z_threshold) {
  if (y_true.size() != y_pred.size() || y_true.size() != strata.num_units()) {
    throw DataError("calibration audit inputs have different lengths");
  }
  if (strata.num_strata() == 0) throw DataError("calibration audit needs units");
  if (!(z_threshold > 0.0)) throw ConfigError("z threshold must be positive");
  CalibrationReport report;
  report.z_threshold = z_threshold;
  for (size_t s = 0; s < strata.num_strata(); ++s) {
    const std::vector<size_t>& members = strata.members(s);
    CalibrationRow row;
    row.stratum = strata.key(s);
    row.description = strata.Describe(s);
    row.n = members.size();
    double mean = 0.0;
    for (const size_t i : members) mean += y_true[i] - y_pred[i];
    mean /= static_cast<double>(row.n);
    row.mean_residual = mean;
    if (row.n < 2) {
      row.std_error = std::numeric_limits<double>::quiet_NaN();
      row.z_score = std::numeric_limits<double>::quiet_NaN();
      row.tested = false;
      report.rows.push_back(row);
      continue;
    }
    double ss = 0.0;
    for (const size_t i : members) {
      const double d = y_true[i] - y_pred[i] - mean;
      ss += d * d;
    }
    row.std_error = std::sqrt(ss / (row.n - 1) / row.n);
    if (row.std_error > 0.0) {
      row.z_score = mean / row.std_error;
    } else {
      row.z_score = std::abs(mean) <= 1e-12
                        ? 0.0
                        : std::copysign(std::numeric_limits<double>::infinity(),
                                        mean);
    }
    report.max_abs_z = std::max(report.max_abs_z, std::abs(row.z_score));
    report.global_stat += row.z_score * row.z_score;
    report.rows.push_back(row);
  }
  report.pass = report.max_abs_z <= z_threshold;
  return report;
}

namespace {

// Held-out accuracy of a whitened multinomial logistic probe and of the
// majority guess. `classes` are local stratum indices 0..C-1.
std::pair<double, double> FitProbe(const Eigen::MatrixXd& x_train,
                                   std::span<const int> c_train,
                                   const Eigen::MatrixXd& x_test,
                                   std::span<const int> c_test, int num_classes,
                                   const ProbeConfig& cfg) {
  const Eigen::Index n_train = x_train.rows();
  const Eigen::RowVectorXd mu = x_train.colwise().mean();
  const Eigen::MatrixXd centered = x_train.rowwise() - mu;
  const Eigen::MatrixXd cov =
      centered.transpose() * centered / static_cast<double>(n_train);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  const Eigen::VectorXd& values = eig.eigenvalues();
  const double top = values.size() ? values.maxCoeff() : 0.0;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    if (top > 1e-12 && values(k) > 1e-9 * top) keep.push_back(k);
  }
  Eigen::MatrixXd transform(x_train.cols(), keep.size());
  for (size_t j = 0; j < keep.size(); ++j) {
    transform.col(j) = eig.eigenvectors().col(keep[j]) / std::sqrt(values(keep[j]));
  }
  const Eigen::MatrixXd z_train = centered * transform;
  const Eigen::MatrixXd z_test = (x_test.rowwise() - mu) * transform;

  Eigen::MatrixXd onehot = Eigen::MatrixXd::Zero(n_train, num_classes);
  std::vector<size_t> counts(num_classes, 0);
  for (Eigen::Index i = 0; i < n_train; ++i) {
    onehot(i, c_train[i]) = 1.0;
    ++counts[c_train[i]];
  }
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(z_train.cols(), num_classes);
  Eigen::RowVectorXd b = Eigen::RowVectorXd::Zero(num_classes);
  for (int it = 0; it < cfg.iterations; ++it) {
    Eigen::MatrixXd scores = z_train * w;
    scores.rowwise() += b;
    scores.colwise() -= scores.rowwise().maxCoeff();
    Eigen::MatrixXd p = scores.array().exp().matrix();
    p.array().colwise() /= p.array().rowwise().sum();
    const Eigen::MatrixXd g = (p - onehot) / static_cast<double>(n_train);
    w -= cfg.step_size * (z_train.transpose() * g + cfg.l2 * w);
    b -= cfg.step_size * g.colwise().sum();
  }

  Eigen::MatrixXd test_scores = z_test * w;
  test_scores.rowwise() += b;
  const int majority = static_cast<int>(
      std::max_element(counts.begin(), counts.end()) - counts.begin());
  size_t probe_hits = 0, baseline_hits = 0;
  for (Eigen::Index i = 0; i < z_test.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < num_classes; ++c) {
      if (test_scores(i, c) > test_scores(i, best)) best = c;
    }
    probe_hits += best == c_test[i];
    baseline_hits += majority == c_test[i];
  }
  const double n_test = static_cast<double>(z_test.rows());
  return {probe_hits / n_test, baseline_hits / n_test};
}

}  // namespace

// TODO: also probe the logits. On glyph data the penultimate layer keeps the
// colour channels linearly decodable for every objective, so this saturates.
LiftingReport LiftingProbe(const Eigen::MatrixXd& representations,
                           const Stratification& strata,
                           std::span<const int> labels,
                           const ProbeConfig& config) {
  const size_t n = labels.size();
  if (static_cast<size_t>(representations.rows()) != n ||
      strata.num_units() != n) {
    throw DataError("lifting probe inputs have different lengths");
  }
  if (n == 0) throw DataError("lifting probe needs units");
  if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0)) {
    throw ConfigError("probe train_fraction must lie in (0, 1)");
  }
  std::map<int, std::vector<size_t>> by_label;
  for (size_t i = 0; i < n; ++i) by_label[labels[i]].push_back(i);

  LiftingReport report;
  report.tolerance = config.tolerance;
  double weighted = 0.0;
  for (auto& [y, units] : by_label) {
    LiftingRow row;
    row.y = y;
    row.n = units.size();
    std::map<int, int> local;
    for (const size_t i : units) local.emplace(strata.stratum_of(i), 0);
    row.num_strata = local.size();
    int next = 0;
    for (auto& [s, idx] : local) idx = next++;

    if (row.num_strata < 2 || units.size() < 2) {
      row.probe_accuracy = row.baseline_accuracy = 1.0;
      row.excess = 0.0;
    } else {
      RandomEngine rng(DeriveSeed(config.seed, static_cast<uint64_t>(y)));
      std::shuffle(units.begin(), units.end(), rng);
      const size_t n_train = std::clamp<size_t>(
          static_cast<size_t>(std::lround(config.train_fraction * units.size())),
          1, units.size() - 1);
      const size_t n_test = units.size() - n_train;
      Eigen::MatrixXd x_train(n_train, representations.cols());
      Eigen::MatrixXd x_test(n_test, representations.cols());
      std::vector<int> c_train(n_train), c_test(n_test);
      for (size_t k = 0; k < units.size(); ++k) {
        const size_t i = units[k];
        const int c = local.at(strata.stratum_of(i));
        if (k < n_train) {
          x_train.row(k) = representations.row(i);
          c_train[k] = c;
        } else {
          x_test.row(k - n_train) = representations.row(i);
          c_test[k - n_train] = c;
        }
      }
      std::tie(row.probe_accuracy, row.baseline_accuracy) =
          FitProbe(x_train, c_train, x_test, c_test,
                   static_cast<int>(row.num_strata), config);
      row.excess = row.probe_accuracy - row.baseline_accuracy;
    }
    weighted += row.excess * static_cast<double>(row.n);
    report.rows.push_back(row);
  }
  report.mean_excess = weighted / static_cast<double>(n);
  report.pass = report.mean_excess <= config.tolerance;
  return report;
}

std::string ToJson(const CalibrationReport& report) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const CalibrationRow& r : report.rows) {
    rows.push_back({{"stratum", r.description},
                    {"n", r.n},
                    {"mean_residual", r.mean_residual},
                    {"std_error", r.std_error},
                    {"z_score", r.z_score},
                    {"tested", r.tested}});
  }
  const nlohmann::ordered_json j = {{"rows", rows},
                                    {"max_abs_z", report.max_abs_z},
                                    {"global_stat", report.global_stat},
                                    {"z_threshold", report.z_threshold},
                                    {"pass", report.pass}};
  return j.dump(2);
}

std::string ToCsv(const CalibrationReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "stratum,n,mean_residual,std_error,z_score,tested\n";
  for (const CalibrationRow& r : report.rows) {
    out << '"' << r.description << "\"," << r.n << ',' << r.mean_residual << ','
        << r.std_error << ',' << r.z_score << ',' << (r.tested ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string ToJson(const LiftingReport& report) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const LiftingRow& r : report.rows) {
    rows.push_back({{"y", r.y},
                    {"n", r.n},
                    {"num_strata", r.num_strata},
                    {"probe_accuracy", r.probe_accuracy},
                    {"baseline_accuracy", r.baseline_accuracy},
                    {"excess", r.excess}});
  }
  const nlohmann::ordered_json j = {{"rows", rows},
                                    {"mean_excess", report.mean_excess},
                                    {"tolerance", report.tolerance},
                                    {"pass", report.pass}};
  return j.dump(2);
}

std::string ToCsv(const LiftingReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "y,n,num_strata,probe_accuracy,baseline_accuracy,excess\n";
  for (const LiftingRow& r : report.rows) {
    out << r.y << ',' << r.n << ',' << r.num_strata << ',' << r.probe_accuracy
        << ',' << r.baseline_accuracy << ',' << r.excess << '\n';
  }
  return out.str();
}

}  // namespace ppci::diagnostics
