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

// Acceptance runner. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. `--only 1,5,7` restricts the run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ppci/common/error.h"
#include "ppci/common/random.h"
#include "ppci/diagnostics/audit.h"
#include "ppci/dgp/dgp_spec.h"
#include "ppci/dgp/sampler.h"
#include "ppci/estimators/aipw.h"
#include "ppci/harness/benchmark.h"
#include "ppci/nn/mlp.h"
#include "ppci/nn/train.h"
#include "ppci/objectives/derm.h"

namespace ppci {
namespace {

using nlohmann::json;

// Pinned tolerances.
constexpr double kGroundTruthBiasAbc = 0.03;
constexpr double kGroundTruthStdAbc = 0.04;
constexpr double kGroundTruthBiasDe = 0.1;
constexpr int kGroundTruthReps = 50;
constexpr size_t kGroundTruthN = 10000;

constexpr int kCoverageReps = 200;
constexpr size_t kCoverageN = 4000;
constexpr double kCoverageLow = 0.90;
constexpr double kCoverageHigh = 0.99;

constexpr int kRobustReps = 200;
constexpr size_t kRobustN = 4000;
constexpr double kRobustBias = 0.05;

constexpr double kDeconfoundTol = 1e-12;
constexpr double kOracleRelTol = 1e-10;

constexpr int kShiftReps = 20;
constexpr size_t kShiftN = 10000;
constexpr double kErmSoftShiftBias = 0.3;

constexpr double kGradientRelTol = 1e-4;

constexpr int kAuditReps = 50;
constexpr size_t kAuditStratumN = 400;
constexpr double kAuditFlagZ = 10.0;
constexpr double kAuditNullPassRate = 0.90;

struct Outcome {
  bool pass = true;
  std::string summary;
};

void Detail(const char* fmt, auto... args) {
  std::printf("    ");
  std::printf(fmt, args...);
  std::printf("\n");
  std::fflush(stdout);
}

Stratification ByColumn(std::span<const uint8_t> column, const std::string& name) {
  std::vector<StratumKey> keys;
  keys.reserve(column.size());
  for (const uint8_t v : column) keys.push_back({{static_cast<int>(v)}});
  return Stratification({name}, keys);
}

double Mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

// 1 -------------------------------------------------------------------------

Outcome AnalyticAte() {
  const std::vector<std::pair<dgp::DgpSpec, double>> expected = {
      {dgp::DgpSpec::A(), 1.5}, {dgp::DgpSpec::B(), 0.0}, {dgp::DgpSpec::C(), 0.0},
      {dgp::DgpSpec::D(), 1.2}, {dgp::DgpSpec::E(), 0.75}};
  Outcome out;
  std::string values;
  for (const auto& [spec, want] : expected) {
    const double got = dgp::TrueAte(spec);
    out.pass = out.pass && got == want;
    values += spec.Label() + "=" + std::to_string(got).substr(0, 6) + " ";
  }
  out.summary = "true ATE " + values + "(exact)";
  return out;
}

// 2 -------------------------------------------------------------------------

Outcome GroundTruth(int workers) {
  harness::BenchmarkConfig cfg;
  cfg.target_specs = {dgp::DgpSpec::A(), dgp::DgpSpec::B(), dgp::DgpSpec::C(),
                      dgp::DgpSpec::D(), dgp::DgpSpec::E()};
  cfg.n_target = kGroundTruthN;
  cfg.replications = kGroundTruthReps;
  cfg.base_seed = 20260001;
  cfg.ground_truth = true;
  const std::vector<harness::ResultRow> rows = harness::RunBenchmark(cfg, workers);
  Outcome out;
  for (const harness::SummaryRow& s : harness::Summarize(rows)) {
    const bool abc = s.dgp == "A" || s.dgp == "B" || s.dgp == "C";
    const bool ok = s.failed == 0 &&
                    (abc ? std::abs(s.mean_bias) <= kGroundTruthBiasAbc &&
                               s.std_bias <= kGroundTruthStdAbc
                         : std::abs(s.mean_bias) <= kGroundTruthBiasDe);
    Detail("%s: mean bias %+.4f  std %.4f  (%s)%s", s.dgp.c_str(), s.mean_bias,
           s.std_bias,
           abc ? "need |bias|<=0.03, std<=0.04" : "need |bias|<=0.1",
           ok ? "" : "  <-- fails");
    out.pass = out.pass && ok;
  }
  out.summary = "ground-truth AIPW, 50 reps x n=10000 over A-E";
  return out;
}

// 3 -------------------------------------------------------------------------

Outcome Coverage() {
  Outcome out;
  for (const dgp::DgpSpec& spec : {dgp::DgpSpec::A(), dgp::DgpSpec::B(), dgp::DgpSpec::C(),
                                   dgp::DgpSpec::D(), dgp::DgpSpec::E()}) {
    const double truth = dgp::TrueAte(spec);
    int covered = 0;
    for (int r = 0; r < kCoverageReps; ++r) {
      const dgp::Draws d = dgp::SampleDraws(spec, kCoverageN, DeriveSeed(31337, r));
      const std::vector<double> o = estimators::ToOutcomes(d.y);
      const estimators::NuisanceModels m =
          estimators::FitNuisances(o, d.t, ByColumn(d.w, "w"), spec.randomized);
      const estimators::Estimate e =
          estimators::Aipw(o, d.t, m.strata.unit_strata(), m);
      covered += e.ci_low <= truth && truth <= e.ci_high;
    }
    const double rate = static_cast<double>(covered) / kCoverageReps;
    const bool ok = rate >= kCoverageLow && rate <= kCoverageHigh;
    Detail("%s: coverage %.3f", spec.Label().c_str(), rate);
    out.pass = out.pass && ok;
  }
  out.summary = "95% CI coverage in [0.90, 0.99] over 200 reps per spec";
  return out;
}

// 4 -------------------------------------------------------------------------

Outcome DoubleRobustness() {
  std::vector<double> zero_outcome, flat_propensity;
  for (int r = 0; r < kRobustReps; ++r) {
    const dgp::Draws d =
        dgp::SampleDraws(dgp::DgpSpec::B(), kRobustN, DeriveSeed(4242, r));
    const std::vector<double> o = estimators::ToOutcomes(d.y);
    const estimators::NuisanceModels fitted =
        estimators::FitNuisances(o, d.t, ByColumn(d.w, "w"), false);
    const std::span<const int> strata = fitted.strata.unit_strata();

    estimators::NuisanceModels zeroed = fitted;
    std::fill(zeroed.mu0.begin(), zeroed.mu0.end(), 0.0);
    std::fill(zeroed.mu1.begin(), zeroed.mu1.end(), 0.0);
    zeroed.global_mu0 = zeroed.global_mu1 = 0.0;
    zero_outcome.push_back(estimators::Aipw(o, d.t, strata, zeroed).tau_hat);

    // Constant propensity at the pooled treated fraction.
    estimators::NuisanceModels flat = fitted;
    const double treated =
        std::accumulate(d.t.begin(), d.t.end(), 0.0) / static_cast<double>(d.size());
    std::fill(flat.propensity.begin(), flat.propensity.end(),
              std::clamp(treated, estimators::kPropensityClip,
                         1.0 - estimators::kPropensityClip));
    flat_propensity.push_back(estimators::Aipw(o, d.t, strata, flat).tau_hat);
  }
  const double truth = dgp::TrueAte(dgp::DgpSpec::B());
  const double b1 = Mean(zero_outcome) - truth;
  const double b2 = Mean(flat_propensity) - truth;
  Detail("zeroed outcome model: mean bias %+.4f", b1);
  Detail("constant propensity:  mean bias %+.4f", b2);
  Outcome out;
  out.pass = std::abs(b1) <= kRobustBias && std::abs(b2) <= kRobustBias;
  out.summary = "one misspecified nuisance, spec B, 200 reps x n=4000, |bias|<=0.05";
  return out;
}

// 5 -------------------------------------------------------------------------

// Per-unit P*(y, z) / P_hat(y, z) evaluated from unit lists only.
std::vector<double> OracleWeights(const std::vector<int>& y, const std::vector<int>& z) {
  std::map<int, std::vector<int>> by_z;
  for (size_t i = 0; i < y.size(); ++i) by_z[z[i]].push_back(y[i]);
  std::map<int, double> var;
  double total = 0.0;
  for (const auto& [k, ys] : by_z) {
    const double m = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
    double ss = 0.0;
    for (const int v : ys) ss += (v - m) * (v - m);
    var[k] = ss / ys.size();
    total += var[k];
  }
  std::vector<double> w(y.size());
  for (size_t i = 0; i < y.size(); ++i) {
    const std::vector<int>& ys = by_z[z[i]];
    const size_t support = std::set<int>(ys.begin(), ys.end()).size();
    const double target = var[z[i]] / total / support;
    const double empirical =
        std::count(ys.begin(), ys.end(), y[i]) / static_cast<double>(y.size());
    w[i] = target / empirical;
  }
  return w;
}

Outcome Deconfounding() {
  // Small-stratum instances drawn from every specification with z built
  // from one or two of the covariates.
  const std::vector<std::vector<std::string>> z_sets = {
      {"t"}, {"w"}, {"u"}, {"t", "w"}, {"t", "u"}, {"w", "u"}};
  double worst_oracle = 0.0;
  double worst_uniform = 0.0;
  int oracle_cases = 0, full_cases = 0;
  for (const dgp::DgpSpec& spec : {dgp::DgpSpec::A(), dgp::DgpSpec::B(), dgp::DgpSpec::C(),
                                   dgp::DgpSpec::D(), dgp::DgpSpec::E()}) {
    for (int r = 0; r < 40; ++r) {
      const size_t n = r % 2 ? 400 : 3000;
      const dgp::Draws d = dgp::SampleDraws(spec, n, DeriveSeed(777, r));
      for (const auto& z_cols : z_sets) {
        std::vector<int> z(n);
        std::vector<StratumKey> keys(n);
        for (size_t i = 0; i < n; ++i) {
          int code = 0;
          for (const std::string& c : z_cols) {
            const int v = c == "t" ? d.t[i] : c == "w" ? d.w[i] : d.u[i];
            code = 2 * code + v;
            keys[i].values.push_back(v);
          }
          z[i] = code;
        }
        objectives::WeightTable table;
        try {
          table = objectives::BuildWeightTable(d.y, Stratification(z_cols, keys));
        } catch (const DataError&) {
          continue;
        }
        ++oracle_cases;
        const std::vector<double> oracle = OracleWeights(d.y, z);
        for (size_t i = 0; i < n; ++i) {
          const double got = table.unit_weights()[i] / table.scale();
          worst_oracle = std::max(
              worst_oracle, std::abs(got - oracle[i]) / std::max(1.0, std::abs(oracle[i])));
        }
        if (!objectives::CheckFullSupport(table).full) continue;
        ++full_cases;
        const std::vector<double> joint = objectives::ReweightedJoint(table);
        const size_t L = table.num_labels();
        for (size_t s = 0; s < table.num_strata(); ++s) {
          if (table.cond_variance(s) == 0.0) continue;
          double pz = 0.0;
          for (size_t k = 0; k < L; ++k) pz += joint[s * L + k];
          for (size_t k = 0; k < L; ++k) {
            worst_uniform =
                std::max(worst_uniform, std::abs(joint[s * L + k] / pz - 1.0 / L));
          }
        }
      }
    }
  }
  Detail("%d instances vs oracle, max relative deviation = %.2e", oracle_cases, worst_oracle);
  Detail("%d full-support instances, max conditional deviation = %.2e", full_cases,
         worst_uniform);
  Outcome out;
  out.pass = oracle_cases > 0 && full_cases > 0 && worst_oracle <= kOracleRelTol &&
             worst_uniform <= kDeconfoundTol;
  out.summary = "reweighted conditionals uniform to 1e-12 and weights match oracle";
  return out;
}

// 6 -------------------------------------------------------------------------

Outcome ShiftDirection(int workers) {
  // Default training hyperparameters and the glyph renderer.
  const harness::BenchmarkConfig cfg = harness::ConfigFromJson(
      {{"train_spec", "A"},
       {"target_specs", {"B", "C", "D", "E"}},
       {"n_train", kShiftN},
       {"n_target", kShiftN},
       {"replications", kShiftReps},
       {"base_seed", 20260601},
       {"methods", {"erm", "derm"}}});
  const auto start = std::chrono::steady_clock::now();
  const std::vector<harness::ResultRow> rows = harness::RunBenchmark(
      cfg, workers, [&](int, int done, int total) {
        const double secs = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - start).count();
        Detail("replication %d/%d done (%.0f s)", done, total, secs);
      });
  const std::vector<harness::SummaryRow> summary = harness::Summarize(rows);
  std::printf("%s", harness::SummaryTable(summary).c_str());

  std::map<std::pair<std::string, std::string>, harness::SummaryRow> cell;
  for (const harness::SummaryRow& s : summary) cell[{s.dgp, s.method}] = s;
  const auto bias = [&](const char* dgp, const char* method) {
    return cell.at({dgp, method}).mean_bias;
  };
  const bool a = bias("B", "erm") >= kErmSoftShiftBias && bias("D", "erm") >= kErmSoftShiftBias;
  const bool b = std::abs(bias("B", "derm")) < std::abs(bias("B", "erm")) &&
                 std::abs(bias("D", "derm")) < std::abs(bias("D", "erm"));
  const bool c = std::abs(bias("C", "derm")) > std::abs(bias("B", "derm"));
  Detail("(a) ERM bias B %+.3f, D %+.3f (need >= 0.3): %s", bias("B", "erm"),
         bias("D", "erm"), a ? "ok" : "fails");
  Detail("(b) |DERM| vs |ERM|: B %.3f < %.3f, D %.3f < %.3f: %s",
         std::abs(bias("B", "derm")), std::abs(bias("B", "erm")),
         std::abs(bias("D", "derm")), std::abs(bias("D", "erm")), b ? "ok" : "fails");
  Detail("(c) |DERM C| %.3f > |DERM B| %.3f: %s", std::abs(bias("C", "derm")),
         std::abs(bias("B", "derm")), c ? "ok" : "fails");

  // Lifting direction on the training split, paired by replication.
  int paired = 0, derm_lower = 0, ties = 0;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].dgp != "B" || rows[i].method != "erm") continue;
    const harness::ResultRow& erm = rows[i];
    const harness::ResultRow& derm = rows[i + 1];
    if (!std::isfinite(erm.lifting_excess) || !std::isfinite(derm.lifting_excess)) continue;
    ++paired;
    derm_lower += derm.lifting_excess <= erm.lifting_excess;
    ties += derm.lifting_excess == erm.lifting_excess;
  }
  const bool lifting_ok = paired > 0 && derm_lower >= 0.8 * paired;
  Detail("lifting property: DERM excess <= ERM excess in %d/%d paired reps, %d tied "
         "(need >= 80%%): %s",
         derm_lower, paired, ties, lifting_ok ? "ok" : "fails");

  Outcome out;
  out.pass = a && b && c;
  out.summary = "ERM vs DERM shift directions, 20 reps x n=10000";
  return out;
}

// 7 -------------------------------------------------------------------------

Outcome Gradients() {
  using DMlp = nn::BasicMlp<double>;
  double worst = 0.0;
  int checks = 0;
  for (int trial = 0; trial < 6; ++trial) {
    std::mt19937_64 rng(900 + trial);
    std::normal_distribution<double> normal(0.0, 1.0);
    DMlp mlp = DMlp::Init({7, 6, 5, 4}, 40 + trial);
    for (size_t l = 0; l < mlp.num_layers(); ++l) {
      for (Eigen::Index k = 0; k < mlp.bias(l).size(); ++k) mlp.bias(l)(k) = 0.1 * normal(rng);
    }
    DMlp::RowMatrix x(5, 7);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = normal(rng);
    std::vector<int> labels(5), envs = {0, 1, 0, 1, 1};
    std::vector<double> weights(5);
    for (int i = 0; i < 5; ++i) {
      labels[i] = rng() % 4;
      weights[i] = 0.25 + (rng() % 100) / 50.0;
    }
    for (const nn::Objective objective : {nn::Objective::kErm, nn::Objective::kDerm,
                                          nn::Objective::kVrex, nn::Objective::kIrm}) {
      const double lambda = objective == nn::Objective::kErm ||
                                    objective == nn::Objective::kDerm
                                ? 0.0
                                : 1.5;
      nn::Gradients<double> grads;
      nn::EvaluateObjective<double>(mlp, x, labels, weights, envs, objective, lambda,
                                    &grads);
      const std::vector<double> analytic = grads.Flatten();
      std::vector<double> theta = mlp.Flatten();
      DMlp probe = mlp;
      const double h = 1e-6;
      for (size_t k = 0; k < theta.size(); ++k) {
        const double saved = theta[k];
        theta[k] = saved + h;
        probe.Assign(theta);
        const double up = nn::EvaluateObjective<double>(probe, x, labels, weights, envs,
                                                        objective, lambda, nullptr)
                              .total;
        theta[k] = saved - h;
        probe.Assign(theta);
        const double down = nn::EvaluateObjective<double>(probe, x, labels, weights, envs,
                                                          objective, lambda, nullptr)
                                .total;
        theta[k] = saved;
        const double fd = (up - down) / (2 * h);
        // Relative error with an absolute floor for near-zero entries.
        const double rel =
            std::abs(fd - analytic[k]) / std::max({std::abs(fd), std::abs(analytic[k]), 1e-3});
        worst = std::max(worst, rel);
        ++checks;
      }
    }
  }
  Detail("%d parameter checks, max relative error %.2e", checks, worst);
  Outcome out;
  out.pass = worst <= kGradientRelTol;
  out.summary = "analytic vs central-difference gradients, all objectives incl. IRM";
  return out;
}

// 8 -------------------------------------------------------------------------

Outcome Penalties() {
  using DMlp = nn::BasicMlp<double>;
  const DMlp mlp = DMlp::Init({4, 6, 3}, 8);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal(0.0, 1.0);
  // Environment 1 is an exact copy of environment 0.
  DMlp::RowMatrix x(6, 4);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 4; ++j) x(i, j) = x(i + 3, j) = normal(rng);
  }
  const std::vector<int> labels = {0, 2, 1, 0, 2, 1};
  const std::vector<double> weights = {1.0, 0.5, 2.0, 1.0, 0.5, 2.0};
  const std::vector<int> envs = {0, 0, 0, 1, 1, 1};
  const double vrex = nn::EvaluateObjective<double>(mlp, x, labels, weights, envs,
                                                    nn::Objective::kVrex, 4.0, nullptr)
                          .penalty;
  // Zero logits: every per-environment scale gradient is identically zero.
  DMlp flat = mlp;
  std::vector<double> zeros(flat.Flatten().size(), 0.0);
  flat.Assign(zeros);
  const double irm = nn::EvaluateObjective<double>(flat, x, labels, weights, envs,
                                                   nn::Objective::kIrm, 4.0, nullptr)
                         .penalty;
  const double vrex_map = nn::VrexPenalty({{0, 0.37}, {1, 0.37}, {2, 0.37}});
  Detail("vREx duplicated envs %.1e, vREx equal risks %.1e, IRM zero gradients %.1e", vrex,
         vrex_map, irm);
  Outcome out;
  out.pass = vrex == 0.0 && vrex_map == 0.0 && irm == 0.0;
  out.summary = "penalties exactly zero in the invariant cases";
  return out;
}

// 9 -------------------------------------------------------------------------

Outcome AuditPower() {
  constexpr size_t kStrata = 5;
  std::vector<StratumKey> keys;
  for (size_t s = 0; s < kStrata; ++s) {
    for (size_t i = 0; i < kAuditStratumN; ++i) keys.push_back({{static_cast<int>(s)}});
  }
  const Stratification strata({"z"}, keys);
  const size_t n = keys.size();
  std::mt19937_64 rng(99);
  std::normal_distribution<double> noise(0.0, 1.0);
  int flagged = 0, null_pass = 0;
  double min_z = INFINITY;
  for (int r = 0; r < kAuditReps; ++r) {
    std::vector<double> y(n), biased(n), calibrated(n);
    for (size_t i = 0; i < n; ++i) {
      y[i] = 5.0;
      const double e = noise(rng);
      biased[i] = y[i] - e - (i < kAuditStratumN ? 1.0 : 0.0);
      calibrated[i] = y[i] - noise(rng);
    }
    const diagnostics::CalibrationReport bad = diagnostics::CalibrationAudit(y, biased, strata);
    const double z = bad.rows[0].z_score;
    min_z = std::min(min_z, z);
    flagged += z > kAuditFlagZ && !bad.pass;
    null_pass += diagnostics::CalibrationAudit(y, calibrated, strata).pass;
  }
  const double null_rate = static_cast<double>(null_pass) / kAuditReps;
  Detail("biased stratum flagged in %d/%d reps (min z %.1f), null pass rate %.2f", flagged,
         kAuditReps, min_z, null_rate);
  Outcome out;
  out.pass = flagged == kAuditReps && null_rate >= kAuditNullPassRate;
  out.summary = "calibration audit power and null behaviour at threshold 3";
  return out;
}

// 10 ------------------------------------------------------------------------

Outcome Determinism() {
  const json j = json::parse(R"({
    "train_spec": "A", "target_specs": ["B", "C", "D"],
    "n_train": 600, "n_target": 600, "replications": 4, "base_seed": 11,
    "methods": [
      {"objective": "erm", "epochs": 2, "hidden_layers": [16]},
      {"objective": "derm", "epochs": 2, "hidden_layers": [16]},
      {"objective": "vrex", "penalty_lambda": 1.0, "epochs": 2, "hidden_layers": [16]},
      {"objective": "irm", "penalty_lambda": 1.0, "epochs": 2, "hidden_layers": [16]}
    ]})");
  const harness::BenchmarkConfig cfg = harness::ConfigFromJson(j);
  const std::string first = harness::ResultsCsv(harness::RunBenchmark(cfg, 1));
  bool same = true;
  for (const int workers : {1, 2, 4}) {
    const bool eq = harness::ResultsCsv(harness::RunBenchmark(cfg, workers)) == first;
    Detail("workers=%d identical: %s", workers, eq ? "yes" : "no");
    same = same && eq;
  }
  Outcome out;
  out.pass = same && first.size() > 100;
  out.summary = "benchmark CSV byte-identical across runs and worker counts";
  return out;
}

int Main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::vector<int> only;
  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  app.add_option("--only", only, "Criteria to run")->delimiter(',');
  app.add_option("--workers", workers, "Threads for benchmark-based criteria");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, AnalyticAte},
      {2, [&] { return GroundTruth(workers); }},
      {3, Coverage},
      {4, DoubleRobustness},
      {5, Deconfounding},
      {6, [&] { return ShiftDirection(workers); }},
      {7, Gradients},
      {8, Penalties},
      {9, AuditPower},
      {10, Determinism},
  };
  int failures = 0;
  for (const auto& [id, run] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.summary = std::string("threw: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id,
                o.summary.c_str(), secs);
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace ppci

int main(int argc, char** argv) { return ppci::Main(argc, argv); }
