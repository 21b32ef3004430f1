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

#include "ppci/harness/benchmark.h"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "ppci/common/error.h"
#include "ppci/common/random.h"
#include "ppci/diagnostics/audit.h"
#include "ppci/dgp/sampler.h"
#include "ppci/estimators/aipw.h"
#include "ppci/objectives/derm.h"

namespace ppci::harness {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const char* const kCsvHeader =
    "replication,dgp,method,tau_hat,tau_true,bias,se,ci_low,ci_high,covered,"
    "train_accuracy,calibration_max_z,lifting_excess";

void CheckKeys(const json& j, std::initializer_list<const char*> allowed,
               const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  const std::set<std::string> names(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!names.count(key)) {
      throw ConfigError("unknown field '" + key + "' in " + where);
    }
  }
}

template <typename T>
void Read(const json& j, const char* key, T* out) {
  if (!j.contains(key)) return;
  try {
    *out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

ResultRow BlankRow(int replication, const dgp::DgpSpec& target,
                   const std::string& method) {
  ResultRow row;
  row.replication = replication;
  row.dgp = target.Label();
  row.method = method;
  row.tau_true = dgp::TrueAte(target);
  row.tau_hat = row.bias = row.se = row.ci_low = row.ci_high = kNaN;
  row.train_accuracy = row.calibration_max_z = row.lifting_excess = kNaN;
  return row;
}

void FillEstimate(const estimators::Estimate& e, ResultRow* row) {
  row->tau_hat = e.tau_hat;
  row->bias = e.tau_hat - row->tau_true;
  row->se = e.se;
  row->ci_low = e.ci_low;
  row->ci_high = e.ci_high;
  row->covered = e.ci_low <= row->tau_true && row->tau_true <= e.ci_high;
}

estimators::Estimate EstimateOn(const BenchmarkConfig& cfg,
                                const dgp::DgpSpec& spec,
                                const dgp::Dataset& data,
                                std::span<const double> outcome) {
  if (cfg.estimator == EstimatorKind::kDiffMeans) {
    return estimators::DifferenceInMeans(outcome, data.column("t"), cfg.alpha);
  }
  return estimators::Aipw(data, outcome, cfg.adjust_set, spec.randomized,
                          cfg.alpha);
}

struct FittedMethod {
  std::optional<nn::Predictor> model;
  double train_accuracy = kNaN;
  double calibration_max_z = kNaN;
  double lifting_excess = kNaN;
  std::string error;
};

FittedMethod FitMethod(const BenchmarkConfig& cfg, const MethodConfig& method,
                       const dgp::Dataset& train,
                       std::span<const std::string> z_columns, uint64_t seed) {
  FittedMethod fit;
  try {
    std::vector<double> weights(train.size(), 1.0);
    if (method.train.objective == nn::Objective::kDerm) {
      weights = objectives::BuildWeightTable(train, z_columns).unit_weights();
    }
    nn::TrainConfig tc = method.train;
    // Shared across methods so objectives are compared from the same start.
    tc.seed = DeriveSeed(DeriveSeed(seed, "model"), method.train.seed);
    fit.model = nn::Train(train, weights, tc);
    const std::vector<int> fitted = nn::Predict(*fit.model, train);
    const std::span<const int> labels = train.labels();
    size_t hits = 0;
    for (size_t i = 0; i < labels.size(); ++i) hits += fitted[i] == labels[i];
    fit.train_accuracy = static_cast<double>(hits) / labels.size();
    if (cfg.diagnostics) {
      const Stratification strata = train.Stratify(z_columns);
      const std::vector<double> truth = estimators::ToOutcomes(labels);
      const std::vector<double> pred = estimators::ToOutcomes(fitted);
      fit.calibration_max_z =
          diagnostics::CalibrationAudit(truth, pred, strata).max_abs_z;
      diagnostics::ProbeConfig probe;
      probe.seed = DeriveSeed(seed, "probe");
      fit.lifting_excess =
          diagnostics::LiftingProbe(nn::Representation(*fit.model, train),
                                    strata, labels, probe)
              .mean_excess;
    }
  } catch (const Error& e) {
    fit.model.reset();
    fit.error = e.what();
  }
  return fit;
}

}  // namespace

bool ResultRow::failed() const {
  return !error.empty() || !std::isfinite(tau_hat);
}

void BenchmarkConfig::Validate() const {
  if (replications < 1) throw ConfigError("replications must be at least 1");
  if (methods.empty() && !ground_truth) {
    throw ConfigError("methods must not be empty");
  }
  if (target_specs.empty()) throw ConfigError("target_specs must not be empty");
  if (n_train < 1 || n_target < 1) {
    throw ConfigError("n_train and n_target must be positive");
  }
  train_spec.Validate();
  for (const dgp::DgpSpec& s : target_specs) s.Validate();
  std::set<std::string> names;
  for (const MethodConfig& m : methods) {
    if (m.name.empty() || m.name == kGroundTruthMethod) {
      throw ConfigError("method name '" + m.name + "' is reserved or empty");
    }
    if (!names.insert(m.name).second) {
      throw ConfigError("duplicate method name '" + m.name + "'");
    }
    m.train.Validate();
  }
  estimators::NormalCriticalValue(alpha);
}

dgp::DgpSpec SpecFromJson(const json& j) {
  if (j.is_string()) return dgp::DgpSpec::Named(j.get<std::string>());
  CheckKeys(j, {"preset", "p_w", "p_u", "randomized", "effect", "renderer"},
            "dgp spec");
  dgp::DgpSpec spec;
  if (j.contains("preset")) {
    spec = dgp::DgpSpec::Named(j.at("preset").get<std::string>());
  }
  Read(j, "p_w", &spec.p_w);
  Read(j, "p_u", &spec.p_u);
  Read(j, "randomized", &spec.randomized);
  if (j.contains("effect")) {
    spec.effect = dgp::ParseEffect(j.at("effect").get<std::string>());
  }
  if (j.contains("renderer")) {
    spec.renderer = dgp::ParseRenderer(j.at("renderer").get<std::string>());
  }
  // Overriding the structural parameters leaves the canonical preset.
  if (j.contains("p_w") || j.contains("p_u") || j.contains("randomized") ||
      j.contains("effect")) {
    spec.name = dgp::DgpName::kCustom;
  }
  spec.Validate();
  return spec;
}

nn::TrainConfig TrainConfigFromJson(const json& j) {
  nn::TrainConfig cfg;
  if (j.is_string()) {
    cfg.objective = nn::ParseObjective(j.get<std::string>());
    return cfg;
  }
  CheckKeys(j,
            {"name", "objective", "penalty_lambda", "environment_variable",
             "learning_rate", "epochs", "batch_size", "adam_beta1", "adam_beta2",
             "adam_eps", "seed", "hidden_layers"},
            "method");
  if (j.contains("objective")) {
    cfg.objective = nn::ParseObjective(j.at("objective").get<std::string>());
  }
  Read(j, "penalty_lambda", &cfg.penalty_lambda);
  Read(j, "environment_variable", &cfg.environment_variable);
  Read(j, "learning_rate", &cfg.learning_rate);
  Read(j, "epochs", &cfg.epochs);
  Read(j, "batch_size", &cfg.batch_size);
  Read(j, "adam_beta1", &cfg.adam_beta1);
  Read(j, "adam_beta2", &cfg.adam_beta2);
  Read(j, "adam_eps", &cfg.adam_eps);
  Read(j, "seed", &cfg.seed);
  Read(j, "hidden_layers", &cfg.hidden_layers);
  cfg.Validate();
  return cfg;
}

BenchmarkConfig ConfigFromJson(const json& j) {
  CheckKeys(j,
            {"train_spec", "target_specs", "n_train", "n_target", "replications",
             "methods", "ground_truth", "estimator", "adjust_set", "z_columns",
             "alpha", "base_seed", "diagnostics", "output_path", "digit_images",
             "digit_labels"},
            "benchmark config");
  BenchmarkConfig cfg;
  if (j.contains("train_spec")) cfg.train_spec = SpecFromJson(j.at("train_spec"));
  if (j.contains("target_specs")) {
    for (const json& s : j.at("target_specs")) {
      cfg.target_specs.push_back(SpecFromJson(s));
    }
  }
  Read(j, "n_train", &cfg.n_train);
  Read(j, "n_target", &cfg.n_target);
  Read(j, "replications", &cfg.replications);
  if (!j.contains("methods") || !j.at("methods").is_array() ||
      j.at("methods").empty()) {
    throw ConfigError("methods must be a non-empty list");
  }
  {
    for (const json& m : j.at("methods")) {
      // The reference row can be requested explicitly.
      if ((m.is_string() && m.get<std::string>() == kGroundTruthMethod) ||
          (m.is_object() && m.value("name", "") == kGroundTruthMethod)) {
        cfg.ground_truth = true;
        continue;
      }
      MethodConfig method;
      method.train = TrainConfigFromJson(m);
      method.name = std::string(nn::ObjectiveName(method.train.objective));
      if (m.is_object()) Read(m, "name", &method.name);
      cfg.methods.push_back(std::move(method));
    }
  }
  Read(j, "ground_truth", &cfg.ground_truth);
  if (j.contains("estimator")) {
    const std::string e = j.at("estimator").get<std::string>();
    if (e == "aipw") {
      cfg.estimator = EstimatorKind::kAipw;
    } else if (e == "diff_means" || e == "diff") {
      cfg.estimator = EstimatorKind::kDiffMeans;
    } else {
      throw ConfigError("unknown estimator '" + e + "'");
    }
  }
  Read(j, "adjust_set", &cfg.adjust_set);
  Read(j, "z_columns", &cfg.z_columns);
  Read(j, "alpha", &cfg.alpha);
  Read(j, "base_seed", &cfg.base_seed);
  Read(j, "diagnostics", &cfg.diagnostics);
  Read(j, "output_path", &cfg.output_path);
  Read(j, "digit_images", &cfg.digit_images);
  Read(j, "digit_labels", &cfg.digit_labels);
  cfg.Validate();
  return cfg;
}

BenchmarkConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
  return ConfigFromJson(j);
}

uint64_t ReplicationSeed(uint64_t base_seed, int replication) {
  return base_seed + static_cast<uint64_t>(replication);
}

std::vector<ResultRow> RunReplication(const BenchmarkConfig& cfg,
                                      int replication,
                                      const dgp::DigitBank* bank) {
  const uint64_t seed = ReplicationSeed(cfg.base_seed, replication);
  std::vector<FittedMethod> fits(cfg.methods.size());
  if (!cfg.methods.empty()) {
    try {
      const dgp::Dataset train = dgp::Sample(cfg.train_spec, cfg.n_train,
                                             DeriveSeed(seed, "train"), bank);
      const std::vector<std::string> z_columns =
          cfg.z_columns.empty() ? objectives::DefaultZColumns(train)
                                : cfg.z_columns;
      for (size_t m = 0; m < cfg.methods.size(); ++m) {
        fits[m] = FitMethod(cfg, cfg.methods[m], train, z_columns, seed);
      }
    } catch (const Error& e) {
      for (FittedMethod& f : fits) f.error = e.what();
    }
  }

  std::vector<ResultRow> rows;
  const uint64_t target_root = DeriveSeed(seed, "target");
  for (size_t j = 0; j < cfg.target_specs.size(); ++j) {
    const dgp::DgpSpec& spec = cfg.target_specs[j];
    const size_t first_row = rows.size();
    if (cfg.ground_truth) rows.push_back(BlankRow(replication, spec, kGroundTruthMethod));
    for (const MethodConfig& m : cfg.methods) {
      rows.push_back(BlankRow(replication, spec, m.name));
    }
    try {
      const dgp::Dataset labeled =
          dgp::Sample(spec, cfg.n_target, DeriveSeed(target_root, j), bank);
      const auto [target, sealed] = labeled.SealLabels();
      size_t r = first_row;
      if (cfg.ground_truth) {
        try {
          const std::vector<double> truth =
              estimators::ToOutcomes(sealed.Reveal());
          FillEstimate(EstimateOn(cfg, spec, target, truth), &rows[r]);
        } catch (const Error& e) {
          rows[r].error = e.what();
        }
        ++r;
      }
      for (size_t m = 0; m < cfg.methods.size(); ++m, ++r) {
        const FittedMethod& fit = fits[m];
        rows[r].train_accuracy = fit.train_accuracy;
        rows[r].calibration_max_z = fit.calibration_max_z;
        rows[r].lifting_excess = fit.lifting_excess;
        if (!fit.model) {
          rows[r].error = fit.error;
          continue;
        }
        try {
          const std::vector<double> imputed =
              estimators::ToOutcomes(nn::Predict(*fit.model, target));
          FillEstimate(EstimateOn(cfg, spec, target, imputed), &rows[r]);
        } catch (const Error& e) {
          rows[r].error = e.what();
        }
      }
    } catch (const Error& e) {
      for (size_t r = first_row; r < rows.size(); ++r) rows[r].error = e.what();
    }
  }
  return rows;
}

std::vector<ResultRow> RunBenchmark(const BenchmarkConfig& cfg, int workers,
                                    const ProgressFn& progress) {
  cfg.Validate();
  std::optional<dgp::DigitBank> bank;
  bool needs_bank = cfg.train_spec.renderer == dgp::Renderer::kIdxDigits;
  for (const dgp::DgpSpec& s : cfg.target_specs) {
    needs_bank |= s.renderer == dgp::Renderer::kIdxDigits;
  }
  if (needs_bank) {
    if (cfg.digit_images.empty() || cfg.digit_labels.empty()) {
      throw ConfigError(
          "the idx_digits renderer needs digit_images and digit_labels");
    }
    bank = dgp::LoadDigitBank(cfg.digit_images, cfg.digit_labels);
  }
  const dgp::DigitBank* bank_ptr = bank ? &*bank : nullptr;

  const int total = cfg.replications;
  std::vector<std::vector<ResultRow>> per_rep(total);
  std::atomic<int> next{0};
  std::mutex progress_mutex;
  int done = 0;
  const auto work = [&] {
    for (int r = next++; r < total; r = next++) {
      per_rep[r] = RunReplication(cfg, r, bank_ptr);
      if (progress) {
        std::lock_guard<std::mutex> lock(progress_mutex);
        progress(r, ++done, total);
      }
    }
  };
  const int threads = std::clamp(workers, 1, total);
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  std::vector<ResultRow> rows;
  for (auto& rep : per_rep) {
    for (ResultRow& row : rep) rows.push_back(std::move(row));
  }
  return rows;
}

std::string ResultsCsv(std::span<const ResultRow> rows) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const ResultRow& r : rows) {
    out += std::to_string(r.replication) + ',' + r.dgp + ',' + r.method + ',' +
           FormatDouble(r.tau_hat) + ',' + FormatDouble(r.tau_true) + ',' +
           FormatDouble(r.bias) + ',' + FormatDouble(r.se) + ',' +
           FormatDouble(r.ci_low) + ',' + FormatDouble(r.ci_high) + ',' +
           (r.covered ? "true" : "false") + ',' +
           FormatDouble(r.train_accuracy) + ',' +
           FormatDouble(r.calibration_max_z) + ',' +
           FormatDouble(r.lifting_excess) + '\n';
  }
  return out;
}

std::vector<ResultRow> ParseResultsCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw DataError("results CSV header does not match the expected columns");
  }
  std::vector<ResultRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ',')) f.push_back(cell);
    if (f.size() != 13) {
      throw DataError("results CSV line " + std::to_string(line_no) + " has " +
                      std::to_string(f.size()) + " fields");
    }
    const auto num = [&](const std::string& s) {
      char* end = nullptr;
      const double v = std::strtod(s.c_str(), &end);
      if (end == s.c_str() || *end != '\0') {
        throw DataError("results CSV line " + std::to_string(line_no) +
                        ": bad number '" + s + "'");
      }
      return v;
    };
    ResultRow r;
    r.replication = static_cast<int>(num(f[0]));
    r.dgp = f[1];
    r.method = f[2];
    r.tau_hat = num(f[3]);
    r.tau_true = num(f[4]);
    r.bias = num(f[5]);
    r.se = num(f[6]);
    r.ci_low = num(f[7]);
    r.ci_high = num(f[8]);
    if (f[9] != "true" && f[9] != "false") {
      throw DataError("results CSV line " + std::to_string(line_no) +
                      ": covered must be true or false");
    }
    r.covered = f[9] == "true";
    r.train_accuracy = num(f[10]);
    r.calibration_max_z = num(f[11]);
    r.lifting_excess = num(f[12]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<SummaryRow> Summarize(std::span<const ResultRow> rows) {
  std::vector<SummaryRow> summary;
  std::map<std::pair<std::string, std::string>, size_t> index;
  std::vector<std::vector<const ResultRow*>> groups;
  for (const ResultRow& r : rows) {
    const auto key = std::make_pair(r.dgp, r.method);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, summary.size()).first;
      summary.push_back(SummaryRow{r.dgp, r.method});
      groups.emplace_back();
    }
    groups[it->second].push_back(&r);
  }
  for (size_t g = 0; g < summary.size(); ++g) {
    SummaryRow& s = summary[g];
    double sum = 0.0, se_sum = 0.0;
    size_t covered = 0, ok = 0;
    for (const ResultRow* r : groups[g]) {
      ++s.replications;
      if (r->failed()) {
        ++s.failed;
        continue;
      }
      ++ok;
      sum += r->bias;
      se_sum += r->se;
      covered += r->covered;
    }
    if (ok == 0) {
      s.mean_bias = s.std_bias = s.coverage_rate = s.mean_se = kNaN;
      continue;
    }
    s.mean_bias = sum / ok;
    s.mean_se = se_sum / ok;
    s.coverage_rate = static_cast<double>(covered) / ok;
    double ss = 0.0;
    for (const ResultRow* r : groups[g]) {
      if (!r->failed()) ss += (r->bias - s.mean_bias) * (r->bias - s.mean_bias);
    }
    s.std_bias = ok > 1 ? std::sqrt(ss / (ok - 1)) : kNaN;
  }
  return summary;
}

std::string SummaryTable(std::span<const SummaryRow> summary) {
  std::ostringstream out;
  out << std::left << std::setw(8) << "dgp" << std::setw(16) << "method"
      << std::right << std::setw(6) << "reps" << std::setw(8) << "failed"
      << std::setw(12) << "mean_bias" << std::setw(12) << "std_bias"
      << std::setw(10) << "coverage" << '\n';
  out << std::fixed << std::setprecision(4);
  for (const SummaryRow& s : summary) {
    out << std::left << std::setw(8) << s.dgp << std::setw(16) << s.method
        << std::right << std::setw(6) << s.replications << std::setw(8)
        << s.failed << std::setw(12) << s.mean_bias << std::setw(12)
        << s.std_bias << std::setw(10) << s.coverage_rate << '\n';
  }
  return out.str();
}

}  // namespace ppci::harness
