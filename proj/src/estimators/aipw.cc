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

#include "ppci/estimators/aipw.h"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include "json.hpp"

#include "ppci/common/error.h"

namespace ppci::estimators {

namespace {

void CheckOutcomes(std::span<const double> outcome, std::span<const uint8_t> t) {
  if (outcome.size() != t.size()) {
    throw DataError("got " + std::to_string(outcome.size()) + " outcomes for " +
                    std::to_string(t.size()) + " treatment values");
  }
  for (const double o : outcome) {
    if (!std::isfinite(o)) throw DataError("outcomes must be finite");
  }
  for (const uint8_t v : t) {
    if (v > 1) throw DataError("treatment must be binary");
  }
}

void FillInterval(Estimate* e) {
  const double z = NormalCriticalValue(e->alpha);
  e->se = std::sqrt(e->variance_hat / static_cast<double>(e->n));
  e->ci_low = e->tau_hat - z * e->se;
  e->ci_high = e->tau_hat + z * e->se;
}

}  // namespace

NuisanceModels FitNuisances(std::span<const double> outcome,
                            std::span<const uint8_t> t,
                            const Stratification& strata, bool randomized) {
  CheckOutcomes(outcome, t);
  if (strata.num_units() != t.size()) {
    throw DataError("adjustment strata cover " +
                    std::to_string(strata.num_units()) + " units, expected " +
                    std::to_string(t.size()));
  }
  const size_t n = t.size();
  double sum[2] = {0, 0};
  size_t arm[2] = {0, 0};
  for (size_t i = 0; i < n; ++i) {
    sum[t[i]] += outcome[i];
    ++arm[t[i]];
  }
  if (arm[0] == 0 || arm[1] == 0) {
    throw DataError(std::string("no ") + (arm[1] == 0 ? "treated" : "control") +
                    " units: overlap fails for the whole sample");
  }

  NuisanceModels m;
  m.strata = strata;
  m.randomized = randomized;
  m.global_mu0 = sum[0] / arm[0];
  m.global_mu1 = sum[1] / arm[1];
  const size_t S = strata.num_strata();
  m.propensity.resize(S);
  m.mu0.resize(S);
  m.mu1.resize(S);
  m.mu0_fallback.assign(S, false);
  m.mu1_fallback.assign(S, false);
  const double treated_fraction = static_cast<double>(arm[1]) / n;
  for (size_t s = 0; s < S; ++s) {
    double cell_sum[2] = {0, 0};
    size_t cell_n[2] = {0, 0};
    for (const size_t i : strata.members(s)) {
      cell_sum[t[i]] += outcome[i];
      ++cell_n[t[i]];
    }
    const double e = randomized ? treated_fraction
                                : static_cast<double>(cell_n[1]) /
                                      (cell_n[0] + cell_n[1]);
    m.propensity[s] = std::clamp(e, kPropensityClip, 1.0 - kPropensityClip);
    m.mu0_fallback[s] = cell_n[0] == 0;
    m.mu1_fallback[s] = cell_n[1] == 0;
    m.mu0[s] = cell_n[0] ? cell_sum[0] / cell_n[0] : m.global_mu0;
    m.mu1[s] = cell_n[1] ? cell_sum[1] / cell_n[1] : m.global_mu1;
  }
  return m;
}

NuisanceModels FitNuisances(const dgp::Dataset& data,
                            std::span<const double> outcome,
                            std::span<const std::string> adjust_set,
                            bool randomized) {
  return FitNuisances(outcome, data.column("t"), data.Stratify(adjust_set),
                      randomized);
}

double NormalCriticalValue(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ConfigError("alpha must lie strictly between 0 and 1");
  }
  return boost::math::quantile(boost::math::normal(), 1.0 - alpha / 2.0);
}

Estimate Aipw(std::span<const double> outcome, std::span<const uint8_t> t,
              std::span<const int> unit_strata, const NuisanceModels& nuisances,
              double alpha) {
  CheckOutcomes(outcome, t);
  NormalCriticalValue(alpha);
  const size_t n = t.size();
  if (n < 2) throw DataError("AIPW needs at least two units");
  if (unit_strata.size() != n) {
    throw DataError("stratum index does not cover every unit");
  }
  Estimate est;
  est.n = n;
  est.alpha = alpha;
  est.influence.resize(n);
  const size_t S = nuisances.propensity.size();
  for (size_t i = 0; i < n; ++i) {
    const int s = unit_strata[i];
    if (s < 0 || static_cast<size_t>(s) >= S) {
      throw DataError("unit " + std::to_string(i) + " maps to unknown stratum");
    }
    const double e = nuisances.propensity[s];
    if (!(e > 0.0 && e < 1.0)) {
      throw NumericalError("propensity outside (0, 1)");
    }
    const double mu0 = nuisances.mu0[s];
    const double mu1 = nuisances.mu1[s];
    est.influence[i] = mu1 - mu0 + t[i] / e * (outcome[i] - mu1) -
                       (1 - t[i]) / (1.0 - e) * (outcome[i] - mu0);
  }
  double mean = 0.0;
  for (const double v : est.influence) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (const double v : est.influence) ss += (v - mean) * (v - mean);
  est.tau_hat = mean;
  est.variance_hat = ss / static_cast<double>(n - 1);
  FillInterval(&est);
  return est;
}

Estimate Aipw(const dgp::Dataset& data, std::span<const double> outcome,
              std::span<const std::string> adjust_set, bool randomized,
              double alpha) {
  const NuisanceModels m = FitNuisances(data, outcome, adjust_set, randomized);
  return Aipw(outcome, data.column("t"), m.strata.unit_strata(), m, alpha);
}

Estimate DifferenceInMeans(std::span<const double> outcome,
                           std::span<const uint8_t> t, double alpha) {
  CheckOutcomes(outcome, t);
  NormalCriticalValue(alpha);
  double sum[2] = {0, 0};
  size_t arm[2] = {0, 0};
  for (size_t i = 0; i < t.size(); ++i) {
    sum[t[i]] += outcome[i];
    ++arm[t[i]];
  }
  if (arm[0] == 0 || arm[1] == 0) {
    throw DataError("difference in means needs both arms non-empty");
  }
  const double mean[2] = {sum[0] / arm[0], sum[1] / arm[1]};
  double ss[2] = {0, 0};
  for (size_t i = 0; i < t.size(); ++i) {
    const double d = outcome[i] - mean[t[i]];
    ss[t[i]] += d * d;
  }
  Estimate est;
  est.n = t.size();
  est.alpha = alpha;
  est.tau_hat = mean[1] - mean[0];
  double welch = 0.0;
  for (int a = 0; a < 2; ++a) {
    if (arm[a] > 1) welch += ss[a] / (arm[a] - 1) / arm[a];
  }
  // Stored so that se = sqrt(variance_hat / n) holds as for AIPW.
  est.variance_hat = welch * static_cast<double>(est.n);
  FillInterval(&est);
  return est;
}

EstimateRecord MakeRecord(const Estimate& estimate, std::string method,
                          std::string dgp, uint64_t seed) {
  EstimateRecord r;
  r.method = std::move(method);
  r.dgp = std::move(dgp);
  r.n = estimate.n;
  r.tau_hat = estimate.tau_hat;
  r.se = estimate.se;
  r.ci_low = estimate.ci_low;
  r.ci_high = estimate.ci_high;
  r.alpha = estimate.alpha;
  r.seed = seed;
  return r;
}

std::string ToJson(const EstimateRecord& r) {
  const nlohmann::ordered_json j = {
      {"method", r.method}, {"dgp", r.dgp},         {"n", r.n},
      {"tau_hat", r.tau_hat}, {"se", r.se},         {"ci_low", r.ci_low},
      {"ci_high", r.ci_high}, {"alpha", r.alpha},   {"seed", r.seed}};
  return j.dump();
}

EstimateRecord RecordFromJson(const std::string& text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    EstimateRecord r;
    r.method = j.at("method").get<std::string>();
    r.dgp = j.at("dgp").get<std::string>();
    r.n = j.at("n").get<size_t>();
    r.tau_hat = j.at("tau_hat").get<double>();
    r.se = j.at("se").get<double>();
    r.ci_low = j.at("ci_low").get<double>();
    r.ci_high = j.at("ci_high").get<double>();
    r.alpha = j.at("alpha").get<double>();
    r.seed = j.at("seed").get<uint64_t>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad estimate record: ") + e.what());
  }
}

std::vector<double> ToOutcomes(std::span<const int> labels) {
  return std::vector<double>(labels.begin(), labels.end());
}

}  // namespace ppci::estimators
