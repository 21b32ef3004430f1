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

// Average treatment effect estimators on (possibly imputed) outcomes.
//
// AIPW uses the influence values
//   psi_i = mu(w_i,1) - mu(w_i,0) + t_i/e(w_i) (o_i - mu(w_i,1))
//           - (1-t_i)/(1-e(w_i)) (o_i - mu(w_i,0))
// with tau = mean(psi) and a normal interval from the sample variance of psi.
// Nuisances are cell means over discrete adjustment strata.

#ifndef PPCI_ESTIMATORS_AIPW_H_
#define PPCI_ESTIMATORS_AIPW_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ppci/common/stratum.h"
#include "ppci/dgp/dataset.h"

namespace ppci::estimators {

inline constexpr double kPropensityClip = 0.01;

// Per-stratum nuisance values; index s follows `strata`.
struct NuisanceModels {
  Stratification strata;
  std::vector<double> propensity;
  std::vector<double> mu0;
  std::vector<double> mu1;
  // Cells that had no units and took the per-arm global mean.
  std::vector<bool> mu0_fallback;
  std::vector<bool> mu1_fallback;
  double global_mu0 = 0.0;
  double global_mu1 = 0.0;
  bool randomized = false;
};

// Throws DataError when lengths disagree, an outcome is not finite, or a
// treatment arm is empty.
NuisanceModels FitNuisances(std::span<const double> outcome,
                            std::span<const uint8_t> t,
                            const Stratification& strata, bool randomized);
NuisanceModels FitNuisances(const dgp::Dataset& data,
                            std::span<const double> outcome,
                            std::span<const std::string> adjust_set,
                            bool randomized);

struct Estimate {
  double tau_hat = 0.0;
  double variance_hat = 0.0;
  double se = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  size_t n = 0;
  double alpha = 0.05;
  // AIPW only.
  std::vector<double> influence;
};

// z_{1 - alpha/2}. Throws ConfigError unless 0 < alpha < 1.
double NormalCriticalValue(double alpha);

// `unit_strata[i]` indexes the nuisance arrays.
Estimate Aipw(std::span<const double> outcome, std::span<const uint8_t> t,
              std::span<const int> unit_strata, const NuisanceModels& nuisances,
              double alpha = 0.05);
// Fits nuisances on the same sample, then estimates.
Estimate Aipw(const dgp::Dataset& data, std::span<const double> outcome,
              std::span<const std::string> adjust_set, bool randomized,
              double alpha = 0.05);

// Treated minus control mean with the Welch variance.
Estimate DifferenceInMeans(std::span<const double> outcome,
                           std::span<const uint8_t> t, double alpha = 0.05);

struct EstimateRecord {
  std::string method;
  std::string dgp;
  size_t n = 0;
  double tau_hat = 0.0;
  double se = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double alpha = 0.05;
  uint64_t seed = 0;
};

EstimateRecord MakeRecord(const Estimate& estimate, std::string method,
                          std::string dgp, uint64_t seed);
std::string ToJson(const EstimateRecord& record);
EstimateRecord RecordFromJson(const std::string& text);

std::vector<double> ToOutcomes(std::span<const int> labels);

}  // namespace ppci::estimators

#endif  // PPCI_ESTIMATORS_AIPW_H_
