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

// ppci: command-line front end.
//
//   ppci generate  --dgp B --n 10000 --seed 1 --out b.ppci [--sealed-labels b.labels]
//   ppci train     --data a.ppci --objective derm --out model.ppnn
//   ppci predict   --model model.ppnn --data b.ppci --out b.pred
//   ppci estimate  --data b.ppci --predictions b.pred [--estimator aipw --adjust w]
//   ppci audit     --data a.ppci --model model.ppnn --calibration --lifting
//   ppci benchmark --config bench.json --out results.csv --workers 4

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ppci/common/error.h"
#include "ppci/common/random.h"
#include "ppci/dgp/dataset_io.h"
#include "ppci/dgp/dgp_spec.h"
#include "ppci/dgp/idx.h"
#include "ppci/dgp/sampler.h"
#include "ppci/diagnostics/audit.h"
#include "ppci/estimators/aipw.h"
#include "ppci/harness/benchmark.h"
#include "ppci/nn/checkpoint.h"
#include "ppci/nn/train.h"
#include "ppci/objectives/derm.h"

namespace ppci {
namespace {

using nlohmann::ordered_json;

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw DataError("failed writing " + path);
}

void PrintJson(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

// --- generate ---------------------------------------------------------------

struct GenerateArgs {
  std::string dgp = "A";
  size_t n = 10000;
  uint64_t seed = 0;
  std::string out;
  std::string renderer = "glyph";
  std::string digit_images, digit_labels;
  std::string sealed_labels;
};

int RunGenerate(const GenerateArgs& a) {
  dgp::DgpSpec spec = dgp::DgpSpec::Named(a.dgp);
  spec.renderer = dgp::ParseRenderer(a.renderer);
  std::optional<dgp::DigitBank> bank;
  if (spec.renderer == dgp::Renderer::kIdxDigits) {
    if (a.digit_images.empty() || a.digit_labels.empty()) {
      throw ConfigError("idx_digits renderer needs --digit-images and --digit-labels");
    }
    bank = dgp::LoadDigitBank(a.digit_images, a.digit_labels);
  }
  dgp::Dataset data = dgp::Sample(spec, a.n, a.seed, bank ? &*bank : nullptr);
  if (!a.sealed_labels.empty()) {
    auto [unlabeled, sealed] = data.SealLabels();
    dgp::WriteDataset(a.out, unlabeled);
    dgp::WriteSealedLabels(a.sealed_labels, sealed);
  } else {
    dgp::WriteDataset(a.out, data);
  }
  ordered_json j;
  j["dgp"] = spec.Label();
  j["n"] = a.n;
  j["seed"] = a.seed;
  j["true_ate"] = dgp::TrueAte(spec);
  j["labeled"] = a.sealed_labels.empty();
  PrintJson(j);
  return 0;
}

// --- train ------------------------------------------------------------------

struct TrainArgs {
  std::string data;
  std::string objective = "erm";
  double lambda = 0.0;
  int epochs = 40;
  double lr = 1e-4;
  int batch_size = 32;
  uint64_t seed = 0;
  std::string out;
  std::string env = "w";
  std::vector<int> hidden = {256, 256};
  std::vector<std::string> z_columns;
  std::string weights_csv;
};

int RunTrain(const TrainArgs& a) {
  nn::TrainConfig cfg;
  cfg.objective = nn::ParseObjective(a.objective);
  cfg.penalty_lambda = a.lambda;
  cfg.epochs = a.epochs;
  cfg.learning_rate = a.lr;
  cfg.batch_size = a.batch_size;
  cfg.seed = a.seed;
  cfg.environment_variable = a.env;
  cfg.hidden_layers = a.hidden;
  cfg.Validate();

  const dgp::Dataset data = dgp::ReadDataset(a.data);
  if (!data.has_labels()) throw DataError(a.data + " carries no labels to train on");
  std::vector<double> weights(data.size(), 1.0);
  if (cfg.objective == nn::Objective::kDerm) {
    const std::vector<std::string> z =
        a.z_columns.empty() ? objectives::DefaultZColumns(data) : a.z_columns;
    const objectives::WeightTable table = objectives::BuildWeightTable(data, z);
    const objectives::SupportReport support = objectives::CheckFullSupport(table);
    if (!support.full) {
      std::cerr << "warning: " << support.violations.size()
                << " stratum/strata miss some label values:";
      for (const auto& v : support.violations) std::cerr << " [" << v.description << "]";
      std::cerr << "\n";
    }
    if (!a.weights_csv.empty()) WriteText(a.weights_csv, objectives::WeightTableCsv(table));
    weights = table.unit_weights();
  }

  nn::TrainHistory history;
  const nn::Predictor model = nn::Train(data, weights, cfg, &history);
  nn::SaveCheckpoint(model, a.out);

  const std::vector<int> fitted = nn::Predict(model, data);
  size_t hits = 0;
  for (size_t i = 0; i < fitted.size(); ++i) hits += fitted[i] == data.labels()[i];
  ordered_json j;
  j["objective"] = a.objective;
  j["epochs"] = a.epochs;
  j["final_loss"] = history.epoch_loss.empty() ? NAN : history.epoch_loss.back();
  j["train_accuracy"] = static_cast<double>(hits) / data.size();
  j["out"] = a.out;
  PrintJson(j);
  return 0;
}

// --- predict ----------------------------------------------------------------

int RunPredict(const std::string& model_path, const std::string& data_path,
               const std::string& out) {
  const nn::Predictor model = nn::LoadCheckpoint(model_path);
  const dgp::Dataset data = dgp::ReadDataset(data_path);
  dgp::WriteSealedLabels(out, dgp::SealedLabels(nn::Predict(model, data)));
  std::cerr << "wrote " << data.size() << " predictions to " << out << "\n";
  return 0;
}

// --- estimate ---------------------------------------------------------------

struct EstimateArgs {
  std::string data;
  std::string predictions, labels;
  std::string estimator = "aipw";
  std::vector<std::string> adjust = {"w"};
  bool randomized = false;
  double alpha = 0.05;
  std::string method;
  std::string dgp;
  uint64_t seed = 0;
};

int RunEstimate(const EstimateArgs& a) {
  if (a.predictions.empty() == a.labels.empty()) {
    throw ConfigError("pass exactly one of --predictions or --labels");
  }
  if (a.estimator != "aipw" && a.estimator != "diff") {
    throw ConfigError("unknown estimator '" + a.estimator + "'");
  }
  const dgp::Dataset data = dgp::ReadDataset(a.data);
  const std::string& path = a.predictions.empty() ? a.labels : a.predictions;
  const dgp::SealedLabels outcome_labels = dgp::ReadSealedLabels(path);
  if (outcome_labels.size() != data.size()) {
    throw DataError(path + " holds " + std::to_string(outcome_labels.size()) +
                    " outcomes for " + std::to_string(data.size()) + " units");
  }
  const std::vector<double> outcome = estimators::ToOutcomes(outcome_labels.Reveal());
  const estimators::Estimate est =
      a.estimator == "aipw"
          ? estimators::Aipw(data, outcome, a.adjust, a.randomized, a.alpha)
          : estimators::DifferenceInMeans(outcome, data.column("t"), a.alpha);
  const std::string method =
      !a.method.empty() ? a.method : (a.predictions.empty() ? "labels" : "predictions");
  std::cout << estimators::ToJson(estimators::MakeRecord(est, method, a.dgp, a.seed))
            << "\n";
  return 0;
}

// --- audit ------------------------------------------------------------------

struct AuditArgs {
  std::string data;
  std::string model;
  std::string predictions;
  std::string labels;
  bool calibration = false;
  bool lifting = false;
  std::vector<std::string> z_columns;
  double z_threshold = 3.0;
  double tolerance = 0.05;
  uint64_t seed = 0;
  std::string format = "json";
};

int RunAudit(const AuditArgs& a) {
  if (!a.calibration && !a.lifting) {
    throw ConfigError("choose --calibration, --lifting or both");
  }
  if (a.format != "json" && a.format != "csv") {
    throw ConfigError("unknown format '" + a.format + "'");
  }
  const dgp::Dataset data = dgp::ReadDataset(a.data);
  std::vector<int> truth;
  if (!a.labels.empty()) {
    const auto revealed = dgp::ReadSealedLabels(a.labels).Reveal();
    truth.assign(revealed.begin(), revealed.end());
  } else if (data.has_labels()) {
    truth.assign(data.labels().begin(), data.labels().end());
  } else {
    std::cerr << diagnostics::kTargetAuditLimitation << "\n";
    return ExitCodeFor(ErrorKind::kData);
  }
  if (truth.size() != data.size()) throw DataError("label count does not match dataset");

  const std::vector<std::string> z =
      a.z_columns.empty() ? objectives::DefaultZColumns(data) : a.z_columns;
  const Stratification strata = data.Stratify(z);
  std::optional<nn::Predictor> model;
  if (!a.model.empty()) model = nn::LoadCheckpoint(a.model);

  bool pass = true;
  if (a.calibration) {
    std::vector<int> pred;
    if (!a.predictions.empty()) {
      const auto p = dgp::ReadSealedLabels(a.predictions).Reveal();
      pred.assign(p.begin(), p.end());
    } else if (model) {
      pred = nn::Predict(*model, data);
    } else {
      throw ConfigError("calibration audit needs --model or --predictions");
    }
    if (pred.size() != data.size()) throw DataError("prediction count does not match dataset");
    const diagnostics::CalibrationReport r = diagnostics::CalibrationAudit(
        estimators::ToOutcomes(truth), estimators::ToOutcomes(pred), strata,
        a.z_threshold);
    std::cout << (a.format == "json" ? diagnostics::ToJson(r) : diagnostics::ToCsv(r))
              << "\n";
    pass = pass && r.pass;
  }
  if (a.lifting) {
    if (!model) throw ConfigError("lifting probe needs --model");
    diagnostics::ProbeConfig probe;
    probe.tolerance = a.tolerance;
    probe.seed = a.seed;
    const diagnostics::LiftingReport r = diagnostics::LiftingProbe(
        nn::Representation(*model, data), strata, truth, probe);
    std::cout << (a.format == "json" ? diagnostics::ToJson(r) : diagnostics::ToCsv(r))
              << "\n";
    pass = pass && r.pass;
  }
  std::cerr << "audit " << (pass ? "passed" : "flagged violations") << "\n";
  return 0;
}

// --- benchmark --------------------------------------------------------------

int RunBenchmarkCommand(const std::string& config_path, std::string out,
                        int workers, const std::string& summary_out) {
  harness::BenchmarkConfig cfg = harness::LoadConfig(config_path);
  if (out.empty()) out = cfg.output_path;
  if (workers < 1) throw ConfigError("--workers must be at least 1");
  const std::vector<harness::ResultRow> rows = harness::RunBenchmark(
      cfg, workers, [](int r, int done, int total) {
        std::cerr << "replication " << r << " done (" << done << "/" << total << ")\n";
      });
  const std::string csv = harness::ResultsCsv(rows);
  if (out.empty()) {
    std::cout << csv;
  } else {
    WriteText(out, csv);
  }
  for (const harness::ResultRow& row : rows) {
    if (!row.error.empty()) {
      std::cerr << "rep " << row.replication << " " << row.dgp << "/" << row.method
                << " failed: " << row.error << "\n";
    }
  }
  const std::string table = harness::SummaryTable(harness::Summarize(rows));
  if (!summary_out.empty()) WriteText(summary_out, table);
  (out.empty() ? std::cerr : std::cout) << table;
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"Prediction-powered causal inference toolkit"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Sample a synthetic experiment");
  g->add_option("--dgp", gen.dgp, "Preset A..E")->capture_default_str();
  g->add_option("--n", gen.n, "Number of units")->capture_default_str();
  g->add_option("--seed", gen.seed)->capture_default_str();
  g->add_option("--out", gen.out, "Dataset file")->required();
  g->add_option("--renderer", gen.renderer, "glyph or idx_digits")->capture_default_str();
  g->add_option("--digit-images", gen.digit_images, "IDX image file");
  g->add_option("--digit-labels", gen.digit_labels, "IDX label file");
  g->add_option("--sealed-labels", gen.sealed_labels,
                "Write labels here and leave the dataset unlabeled");

  TrainArgs tr;
  auto* t = app.add_subcommand("train", "Fit an outcome predictor");
  t->add_option("--data", tr.data)->required();
  t->add_option("--objective", tr.objective, "erm, derm, vrex or irm")->capture_default_str();
  t->add_option("--lambda", tr.lambda, "Penalty weight")->capture_default_str();
  t->add_option("--epochs", tr.epochs)->capture_default_str();
  t->add_option("--lr", tr.lr)->capture_default_str();
  t->add_option("--batch-size", tr.batch_size)->capture_default_str();
  t->add_option("--seed", tr.seed)->capture_default_str();
  t->add_option("--out", tr.out, "Checkpoint file")->required();
  t->add_option("--env", tr.env, "Environment column for vrex/irm")->capture_default_str();
  t->add_option("--hidden", tr.hidden, "Hidden layer widths")->delimiter(',')
      ->capture_default_str();
  t->add_option("--z", tr.z_columns, "Stratum columns for derm")->delimiter(',');
  t->add_option("--weights-csv", tr.weights_csv, "Dump the derm weight table");

  std::string model_path, data_path, pred_out;
  auto* p = app.add_subcommand("predict", "Impute outcomes with a trained model");
  p->add_option("--model", model_path)->required();
  p->add_option("--data", data_path)->required();
  p->add_option("--out", pred_out, "IDX label file of predictions")->required();

  EstimateArgs est;
  auto* e = app.add_subcommand("estimate", "Estimate the average treatment effect");
  e->add_option("--data", est.data)->required();
  e->add_option("--predictions", est.predictions, "Imputed outcomes (IDX labels)");
  e->add_option("--labels", est.labels, "Observed outcomes (IDX labels)");
  e->add_option("--estimator", est.estimator, "aipw or diff")->capture_default_str();
  e->add_option("--adjust", est.adjust, "Adjustment columns")->delimiter(',')
      ->capture_default_str();
  e->add_flag("--randomized", est.randomized, "Use the known constant propensity");
  e->add_option("--alpha", est.alpha)->capture_default_str();
  e->add_option("--method", est.method, "Method name for the record");
  e->add_option("--dgp-label", est.dgp, "Experiment name for the record");
  e->add_option("--seed", est.seed, "Seed for the record");

  AuditArgs au;
  auto* a = app.add_subcommand("audit", "Check calibration and lifting on labeled data");
  a->add_option("--data", au.data)->required();
  a->add_option("--model", au.model);
  a->add_option("--predictions", au.predictions);
  a->add_option("--labels", au.labels, "Sealed labels for an unlabeled dataset");
  a->add_flag("--calibration", au.calibration);
  a->add_flag("--lifting", au.lifting);
  a->add_option("--z", au.z_columns, "Stratum columns")->delimiter(',');
  a->add_option("--z-threshold", au.z_threshold)->capture_default_str();
  a->add_option("--tolerance", au.tolerance)->capture_default_str();
  a->add_option("--seed", au.seed, "Probe split seed")->capture_default_str();
  a->add_option("--format", au.format, "json or csv")->capture_default_str();

  std::string config_path, bench_out, summary_out;
  int workers = 1;
  auto* b = app.add_subcommand("benchmark", "Run replicated experiments from a config");
  b->add_option("--config", config_path)->required();
  b->add_option("--out", bench_out, "Results CSV (defaults to output_path)");
  b->add_option("--workers", workers)->capture_default_str();
  b->add_option("--summary", summary_out, "Write the summary table here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? 0 : ExitCodeFor(ErrorKind::kConfig);
  }

  try {
    if (*g) return RunGenerate(gen);
    if (*t) return RunTrain(tr);
    if (*p) return RunPredict(model_path, data_path, pred_out);
    if (*e) return RunEstimate(est);
    if (*a) return RunAudit(au);
    if (*b) return RunBenchmarkCommand(config_path, bench_out, workers, summary_out);
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return ExitCodeFor(err.kind());
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace
}  // namespace ppci

int main(int argc, char** argv) { return ppci::Main(argc, argv); }
