//
// Copyright 2026 The mixdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/str_format.h"
#include "mixdp/analysis.h"
#include "mixdp/baselines.h"
#include "mixdp/cli.h"
#include "mixdp/config.h"
#include "mixdp/estimators.h"
#include "mixdp/harness.h"
#include "mixdp/mechanisms.h"
#include "mixdp/random_stream.h"

namespace mixdp {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

PrivacyLevel Eps(double e) { return *PrivacyLevel::Finite(e); }

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::StatusOr<ToolConfig> LoadBundled(const std::string& name) {
  return ParseToolConfig(Slurp(fs::path(MIXDP_CONFIG_DIR) / name));
}

const TrialStats* Find(const std::vector<TrialStats>& rows,
                       const std::string& method, double sweep_value) {
  for (const auto& row : rows) {
    if (row.method == method && row.sweep_value == sweep_value) return &row;
  }
  return nullptr;
}

bool Overlap(const TrialStats& x, const TrialStats& y) {
  return x.ci95_low <= y.ci95_high && y.ci95_low <= x.ci95_high;
}

// Random configurations of 2 or 3 groups with mixed public and finite levels.
std::vector<PrivacyGroup> RandomGroups(std::mt19937_64& gen, size_t k) {
  std::uniform_int_distribution<size_t> size(1, 5000);
  std::uniform_real_distribution<double> log_eps(std::log(0.01), std::log(10.0));
  std::bernoulli_distribution is_public(0.2);
  std::vector<PrivacyGroup> groups;
  for (size_t i = 0; i < k; ++i) {
    const PrivacyLevel level = is_public(gen) ? PrivacyLevel::Public()
                                              : Eps(std::exp(log_eps(gen)));
    groups.push_back(
        *PrivacyGroup::Create(std::vector<double>(size(gen), 0.0), level));
  }
  return groups;
}

Outcome WeightsVsBruteForce() {
  const DataDomain domain = *DataDomain::Create(-20, 20, 25);
  std::mt19937_64 gen(101);
  double worst = 0.0;
  for (int config = 0; config < 50; ++config) {
    const auto groups = RandomGroups(gen, config % 2 == 0 ? 2 : 3);
    std::vector<double> vars;
    for (const auto& g : groups) vars.push_back(GroupVariance(g, domain));
    auto closed = OptimalWeights(groups, domain);
    auto brute = BruteForceOptimalWeights(vars, 1000);
    if (!closed.ok() || !brute.ok()) return {false, "evaluation error"};
    for (size_t i = 0; i < groups.size(); ++i) {
      worst = std::max(worst, std::fabs((*closed)[i] - (*brute)[i]));
    }
  }
  return {worst <= 1e-3, absl::StrFormat("max |beta - beta_grid| = %.3g", worst)};
}

Outcome JointVarianceIdentity() {
  const DataDomain domain = *DataDomain::Create(-20, 20, 25);
  std::mt19937_64 gen(202);
  std::uniform_int_distribution<size_t> k_dist(1, 8);
  double worst = 0.0;
  for (int config = 0; config < 1000; ++config) {
    const auto groups = RandomGroups(gen, k_dist(gen));
    double harmonic = 0.0;
    for (const auto& g : groups) harmonic += 1.0 / GroupVariance(g, domain);
    auto weights = OptimalWeights(groups, domain);
    if (!weights.ok()) return {false, "evaluation error"};
    auto joint = JointVariance(*weights, groups, domain);
    if (!joint.ok()) return {false, "evaluation error"};
    worst = std::max(worst, std::fabs(*joint * harmonic - 1.0));
  }
  return {worst <= 1e-9, absl::StrFormat("max relative error = %.3g", worst)};
}

Outcome Fig1Reproduction() {
  auto tool = LoadBundled("fig1.config");
  if (!tool.ok()) return {false, tool.status().ToString()};
  ExperimentConfig config = tool->experiment;
  config.trials = 1000;
  config.sweep = Sweep{Sweep::Kind::kGroupSize, 0, {100, 1000, 10000}};
  auto rows = RunExperiment(config);
  if (!rows.ok()) return {false, rows.status().ToString()};
  bool pass = true;
  std::string detail;
  for (double n : {100.0, 1000.0, 10000.0}) {
    const TrialStats* mixed = Find(*rows, "mixed", n);
    if (mixed == nullptr) return {false, "missing mixed row"};
    for (const char* s : {"min", "average", "max", "optimized"}) {
      const TrialStats* pdp = Find(*rows, std::string("pdp_sample:") + s, n);
      if (pdp == nullptr) return {false, "missing pdp row"};
      const std::string name = s;
      bool ok = true;
      if (name == "optimized") {
        ok = Overlap(*mixed, *pdp);
      } else {
        ok = mixed->empirical_variance < pdp->empirical_variance;
        if (name != "average") ok = ok && !Overlap(*mixed, *pdp);
      }
      if (!ok) {
        pass = false;
        detail += absl::StrFormat(" [n=%g %s: mixed %.4g vs %.4g]", n, s,
                                  mixed->empirical_variance,
                                  pdp->empirical_variance);
      }
    }
  }
  const TrialStats* m = Find(*rows, "mixed", 1000);
  const TrialStats* o = Find(*rows, "pdp_sample:optimized", 1000);
  return {pass, absl::StrFormat("n=1000 mixed %.4g [%.4g, %.4g], optimized "
                                "%.4g [%.4g, %.4g]%s",
                                m->empirical_variance, m->ci95_low,
                                m->ci95_high, o->empirical_variance,
                                o->ci95_low, o->ci95_high, detail)};
}

Outcome ThresholdValues() {
  auto tool = LoadBundled("fig1.config");
  if (!tool.ok()) return {false, tool.status().ToString()};
  const ExperimentConfig& e = tool->experiment;
  const DataDomain domain = *DataDomain::Create(e.a, e.b, e.sigma2);
  auto threshold = [&](const ThresholdStrategy& s) {
    return SelectThreshold(s, e.group_sizes, e.epsilons, domain);
  };
  auto t_min = threshold(ThresholdStrategy::Min());
  auto t_avg = threshold(ThresholdStrategy::Average());
  auto t_max = threshold(ThresholdStrategy::Max());
  auto t_opt = threshold(ThresholdStrategy::Optimized());
  if (!t_min.ok() || !t_avg.ok() || !t_max.ok() || !t_opt.ok()) {
    return {false, "evaluation error"};
  }
  const bool pass = *t_min == 0.01 && *t_avg == 1.76 &&
                    *t_max == 10.0 && std::fabs(*t_opt - 0.25) <= 0.05;
  return {pass, absl::StrFormat("t_min = %.17g, t_average = %.17g, t_max = "
                                "%.17g, t_optimized = %.6g (expected 0.25 +- "
                                "0.05)",
                                *t_min, *t_avg, *t_max, *t_opt)};
}

Outcome SubsamplingSuboptimal() {
  const double sigma2 = 25.0, r = 20.0;
  int slices = 0, failures = 0;
  for (bool amp : {false, true}) {
    for (int mi = 0; mi < 10; ++mi) {
      const size_t m = static_cast<size_t>(std::lround(10 * std::pow(2.0, mi)));
      for (int ei = 0; ei < 10; ++ei) {
        const double eps = 0.01 * std::pow(2.0, ei);
        double best_p = 0.0, best = 1e300;
        for (int pi = 1; pi <= 10; ++pi) {
          const double p = pi / 10.0;
          auto v = SubsampledMeanVariance(m, p, sigma2, r, eps, amp);
          if (!v.ok()) return {false, "evaluation error"};
          if (*v < best) {
            best = *v;
            best_p = p;
          }
        }
        ++slices;
        failures += best_p != 1.0;
      }
    }
  }
  return {failures == 0, absl::StrFormat("%d of %d slices minimized at p = 1",
                                         slices - failures, slices)};
}

Outcome Dominance() {
  const DataDomain domain = *DataDomain::Create(-20, 20, 25);
  std::mt19937_64 gen(606);
  std::uniform_int_distribution<size_t> size(10, 10000);
  std::uniform_real_distribution<double> log_eps(std::log(0.01), std::log(10.0));
  double worst = 1e300;
  for (int draw = 0; draw < 20; ++draw) {
    const std::vector<size_t> sizes = {size(gen), size(gen)};
    const std::vector<PrivacyLevel> levels = {PrivacyLevel::Public(),
                                              Eps(std::exp(log_eps(gen)))};
    double harmonic = 0.0;
    for (size_t i = 0; i < 2; ++i) {
      harmonic += 1.0 / GroupVariance(sizes[i], levels[i], domain);
    }
    std::vector<PrivacyGroup> groups;
    for (size_t i = 0; i < 2; ++i) {
      groups.push_back(
          *PrivacyGroup::Create(std::vector<double>(sizes[i], 0.0), levels[i]));
    }
    auto weights = OptimalWeights(groups, domain);
    if (!weights.ok()) return {false, "evaluation error"};
    const double joint = *JointVariance(*weights, groups, domain);
    for (double t : LogSpace(0.01, 10.0, 200)) {
      auto v = PredictedPdpVariance(sizes, levels, t, domain);
      if (!v.ok()) return {false, "evaluation error"};
      worst = std::min(worst, *v / joint);
    }
  }
  return {worst >= 1.0 - 1e-12,
          absl::StrFormat("min predicted / joint = %.6g", worst)};
}

Outcome MonteCarloVsClosedForm() {
  auto tool = LoadBundled("fig1.config");
  if (!tool.ok()) return {false, tool.status().ToString()};
  ExperimentConfig config = tool->experiment;
  config.group_sizes[0] = 1000;
  config.sweep.reset();
  config.methods = {MethodSpec::Mixed()};
  config.trials = 10000;
  auto rows = RunExperiment(config);
  if (!rows.ok()) return {false, rows.status().ToString()};
  const TrialStats& row = rows->front();
  const double rel =
      std::fabs(row.empirical_variance / *row.theoretical_variance - 1.0);
  return {rel <= 0.15,
          absl::StrFormat("empirical %.6g vs theory %.6g (relative %.3g)",
                          row.empirical_variance, *row.theoretical_variance,
                          rel)};
}

Outcome DpRatio() {
  // Neighbouring clamped values r and -r; the release calibrates to 2r.
  const double r = 1.0, epsilon = 1.0, scale = 2.0 * r / epsilon;
  constexpr int kSamples = 1000000;
  const double lo = -r - 3.0 * scale, hi = r + 3.0 * scale;
  const int bins = static_cast<int>(std::ceil((hi - lo) / (0.5 * scale)));
  const double width = (hi - lo) / bins;
  std::vector<double> cx(bins, 0.0), cy(bins, 0.0);
  RandomStream sx(808, 1), sy(808, 2);
  for (int i = 0; i < kSamples; ++i) {
    auto x = LaplaceMechanism(r, 2.0 * r, epsilon, sx);
    auto y = LaplaceMechanism(-r, 2.0 * r, epsilon, sy);
    if (!x.ok() || !y.ok()) return {false, "evaluation error"};
    const int bx = static_cast<int>(std::floor((*x - lo) / width));
    const int by = static_cast<int>(std::floor((*y - lo) / width));
    if (bx >= 0 && bx < bins) cx[bx] += 1;
    if (by >= 0 && by < bins) cy[by] += 1;
  }
  int checked = 0;
  double worst_excess = -1e300, max_ratio = 0.0;
  for (int b = 0; b < bins; ++b) {
    if (cx[b] < 1000 || cy[b] < 1000) continue;
    const double log_ratio = std::fabs(std::log(cx[b] / cy[b]));
    const double se = std::sqrt(1.0 / cx[b] + 1.0 / cy[b]);
    worst_excess = std::max(worst_excess, log_ratio - (epsilon + 3.0 * se));
    max_ratio = std::max(max_ratio, log_ratio);
    ++checked;
  }
  return {checked > 5 && worst_excess <= 0.0,
          absl::StrFormat("%d bins, max |log ratio| = %.4g (bound eps + 3 SE)",
                          checked, max_ratio)};
}

Outcome MedianExperiment() {
  auto tool = LoadBundled("fig2.config");
  if (!tool.ok()) return {false, tool.status().ToString()};
  ExperimentConfig config = tool->experiment;
  config.epsilons = {Eps(0.01), Eps(10.0)};
  config.trials = 500;
  config.methods = {MethodSpec::Mixed(),
                    MethodSpec::PdpSample(ThresholdStrategy::Average())};
  auto rows = RunExperiment(config);
  if (!rows.ok()) return {false, rows.status().ToString()};
  const TrialStats* mixed = Find(*rows, "mixed", 0.5);
  const TrialStats* base = Find(*rows, "pdp_sample:average", 0.5);
  if (mixed == nullptr || base == nullptr) return {false, "missing rows"};
  bool pass = mixed->rmse <= base->rmse || Overlap(*mixed, *base);
  std::string trend;
  for (const char* method : {"mixed", "pdp_sample:average"}) {
    double previous = 1e300;
    trend += absl::StrFormat(" %s:", method);
    for (double share : config.sweep->values) {
      const TrialStats* row = Find(*rows, method, share);
      if (row == nullptr) return {false, "missing rows"};
      pass = pass && row->rmse < previous;
      previous = row->rmse;
      trend += absl::StrFormat(" %.4g", row->rmse);
    }
  }
  return {pass, absl::StrFormat("share 0.5 rmse mixed %.4g vs baseline %.4g; "
                                "by share%s",
                                mixed->rmse, base->rmse, trend)};
}

Outcome Reproducibility() {
  const fs::path dir = fs::temp_directory_path() / "mixdp_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ostringstream out, err;
  CliInvocation inv;
  inv.subcommand = Subcommand::kMeanExperiment;
  inv.config_path = (fs::path(MIXDP_CONFIG_DIR) / "fig1.config").string();
  inv.output_path = (dir / "first.csv").string();
  const int rc1 = CmdMeanExperiment(inv, out, err);
  inv.output_path = (dir / "second.csv").string();
  const int rc2 = CmdMeanExperiment(inv, out, err);
  if (rc1 != kExitOk || rc2 != kExitOk) {
    return {false, "mean-experiment failed: " + err.str()};
  }
  const std::string a = Slurp(dir / "first.csv");
  const std::string b = Slurp(dir / "second.csv");
  fs::remove_all(dir);
  return {!a.empty() && a == b,
          absl::StrFormat("%d bytes each, identical: %s", a.size(),
                          a == b ? "yes" : "no")};
}

}  // namespace
}  // namespace mixdp

int main() {
  struct Criterion {
    const char* name;
    std::function<mixdp::Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"weights closed form vs simplex grid", mixdp::WeightsVsBruteForce},
      {"joint variance harmonic identity", mixdp::JointVarianceIdentity},
      {"mean experiment ordering and intervals", mixdp::Fig1Reproduction},
      {"threshold values", mixdp::ThresholdValues},
      {"subsampling never helps", mixdp::SubsamplingSuboptimal},
      {"mixed dominates predicted sample variance", mixdp::Dominance},
      {"monte carlo vs closed form variance", mixdp::MonteCarloVsClosedForm},
      {"laplace histogram ratio", mixdp::DpRatio},
      {"median experiment", mixdp::MedianExperiment},
      {"byte-identical reruns", mixdp::Reproducibility},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    const mixdp::Outcome outcome = criteria[i].run();
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    failed += !outcome.pass;
    std::printf("[%s] %zu. %s (%.1fs): %s\n", outcome.pass ? "PASS" : "FAIL",
                i + 1, criteria[i].name, seconds, outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
