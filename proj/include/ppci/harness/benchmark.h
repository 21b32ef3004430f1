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

// Monte Carlo runner: per replication, sample a labeled training experiment
// and unlabeled target experiments, fit each configured predictor, impute
// target outcomes and estimate the effect, next to a reference estimate that
// uses the true target labels.

#ifndef PPCI_HARNESS_BENCHMARK_H_
#define PPCI_HARNESS_BENCHMARK_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "ppci/dgp/dgp_spec.h"
#include "ppci/dgp/idx.h"
#include "ppci/nn/train.h"

namespace ppci::harness {

enum class EstimatorKind { kAipw, kDiffMeans };

struct MethodConfig {
  std::string name;
  nn::TrainConfig train;
};

inline constexpr char kGroundTruthMethod[] = "ground_truth";

struct BenchmarkConfig {
  dgp::DgpSpec train_spec = dgp::DgpSpec::A();
  std::vector<dgp::DgpSpec> target_specs;
  size_t n_train = 10000;
  size_t n_target = 10000;
  int replications = 1;
  std::vector<MethodConfig> methods;
  // Include the reference row computed from true target labels.
  bool ground_truth = true;
  EstimatorKind estimator = EstimatorKind::kAipw;
  std::vector<std::string> adjust_set = {"w"};
  // Settings the deconfounding weights condition on; empty means t plus
  // every covariate.
  std::vector<std::string> z_columns;
  double alpha = 0.05;
  uint64_t base_seed = 0;
  bool diagnostics = true;
  std::string output_path;
  // IDX files for the idx_digits renderer.
  std::string digit_images;
  std::string digit_labels;

  // Throws ConfigError on no replications, no methods and no ground truth,
  // no targets, invalid specs or duplicate method names.
  void Validate() const;
};

BenchmarkConfig ConfigFromJson(const nlohmann::json& j);
BenchmarkConfig LoadConfig(const std::string& path);
dgp::DgpSpec SpecFromJson(const nlohmann::json& j);
nn::TrainConfig TrainConfigFromJson(const nlohmann::json& j);

struct ResultRow {
  int replication = 0;
  std::string dgp;
  std::string method;
  double tau_hat = 0.0;
  double tau_true = 0.0;
  double bias = 0.0;
  double se = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  bool covered = false;
  double train_accuracy = 0.0;
  double calibration_max_z = 0.0;
  double lifting_excess = 0.0;
  // Not serialized; empty unless the replication step failed.
  std::string error;

  // Failed rows carry NaN statistics, which is how they survive a CSV
  // round trip.
  bool failed() const;
};

// Seed of replication r.
uint64_t ReplicationSeed(uint64_t base_seed, int replication);

// One replication's rows in (target, method) order, the reference method
// first within each target.
std::vector<ResultRow> RunReplication(const BenchmarkConfig& cfg,
                                      int replication,
                                      const dgp::DigitBank* bank = nullptr);

using ProgressFn = std::function<void(int replication, int done, int total)>;

// All replications on up to `workers` threads, merged in replication order.
std::vector<ResultRow> RunBenchmark(const BenchmarkConfig& cfg, int workers = 1,
                                    const ProgressFn& progress = nullptr);

std::string ResultsCsv(std::span<const ResultRow> rows);
std::vector<ResultRow> ParseResultsCsv(const std::string& text);

struct SummaryRow {
  std::string dgp;
  std::string method;
  size_t replications = 0;
  size_t failed = 0;
  double mean_bias = 0.0;
  double std_bias = 0.0;
  double coverage_rate = 0.0;
  double mean_se = 0.0;
};

// Groups by (dgp, method) in order of first appearance. Rows with a
// non-finite estimate count as failed and are left out of the statistics.
std::vector<SummaryRow> Summarize(std::span<const ResultRow> rows);
std::string SummaryTable(std::span<const SummaryRow> summary);

}  // namespace ppci::harness

#endif  // PPCI_HARNESS_BENCHMARK_H_
