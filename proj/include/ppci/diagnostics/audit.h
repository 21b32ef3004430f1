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

// Labeled-data audits of an outcome predictor: per-stratum residual tests of
// conditional calibration, and a held-out linear probe measuring how much
// stratum information the representation keeps within each label class.

#ifndef PPCI_DIAGNOSTICS_AUDIT_H_
#define PPCI_DIAGNOSTICS_AUDIT_H_

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ppci/common/stratum.h"

namespace ppci::diagnostics {

struct CalibrationRow {
  StratumKey stratum;
  std::string description;
  size_t n = 0;
  double mean_residual = 0.0;
  // NaN for a single-unit stratum.
  double std_error = 0.0;
  double z_score = 0.0;
  // False when the row cannot take part in the pass decision.
  bool tested = true;
};

struct CalibrationReport {
  std::vector<CalibrationRow> rows;
  double max_abs_z = 0.0;
  double global_stat = 0.0;
  double z_threshold = 3.0;
  bool pass = true;
};

// Residuals y_true - y_pred per stratum. A stratum with zero residual spread
// scores 0 when its mean residual is 0 and infinity otherwise.
CalibrationReport CalibrationAudit(std::span<const double> y_true,
                                   std::span<const double> y_pred,
                                   const Stratification& strata,
                                   double z_threshold = 3.0);

struct ProbeConfig {
  double train_fraction = 0.7;
  double tolerance = 0.05;
  int iterations = 300;
  double step_size = 0.5;
  double l2 = 1e-3;
  uint64_t seed = 0;
};

struct LiftingRow {
  int y = 0;
  size_t n = 0;
  size_t num_strata = 0;
  double probe_accuracy = 0.0;
  double baseline_accuracy = 0.0;
  double excess = 0.0;
};

struct LiftingReport {
  std::vector<LiftingRow> rows;
  // Class-size weighted mean of the excesses.
  double mean_excess = 0.0;
  double tolerance = 0.05;
  bool pass = true;
};

// Within each label class, fits a multinomial logistic probe predicting the
// stratum from whitened representation rows on a random split and compares
// held-out accuracy with always guessing the training-majority stratum.
LiftingReport LiftingProbe(const Eigen::MatrixXd& representations,
                           const Stratification& strata,
                           std::span<const int> labels,
                           const ProbeConfig& config = {});

std::string ToJson(const CalibrationReport& report);
std::string ToCsv(const CalibrationReport& report);
std::string ToJson(const LiftingReport& report);
std::string ToCsv(const LiftingReport& report);

// Printed when an audit of unlabeled target data is requested.
extern const char kTargetAuditLimitation[];

}  // namespace ppci::diagnostics

#endif  // PPCI_DIAGNOSTICS_AUDIT_H_
