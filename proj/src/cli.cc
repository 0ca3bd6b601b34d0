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

#include "mixdp/cli.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "json.hpp"
#include "mixdp/analysis.h"
#include "mixdp/config.h"
#include "mixdp/errors.h"
#include "mixdp/harness.h"

namespace mixdp {
namespace {

// Config loading failed; the message has already been reported.
struct LoadResult {
  std::optional<ToolConfig> config;
  int exit_code = kExitOk;
};

LoadResult LoadConfig(const CliInvocation& invocation, std::ostream& err) {
  std::ifstream in(invocation.config_path);
  if (!in) {
    err << "error: cannot read config '" << invocation.config_path << "'\n";
    return {std::nullopt, kExitConfigError};
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  auto parsed = ParseToolConfig(buffer.str());
  if (!parsed.ok()) {
    err << "error: " << invocation.config_path << ": "
        << parsed.status().message() << "\n";
    return {std::nullopt, kExitConfigError};
  }
  if (invocation.seed_override) parsed->experiment.seed = *invocation.seed_override;
  if (invocation.trials_override) {
    parsed->experiment.trials = *invocation.trials_override;
  }
  return {std::move(*parsed), kExitOk};
}

std::string DefaultFileName(Subcommand subcommand) {
  switch (subcommand) {
    case Subcommand::kMeanExperiment:
      return "mean-experiment.csv";
    case Subcommand::kMedianExperiment:
      return "median-experiment.csv";
    case Subcommand::kVarianceCurves:
      return "variance-curves.csv";
    default:
      return "output.csv";
  }
}

std::string ResolveOutputPath(const CliInvocation& invocation) {
  if (!invocation.output_path.empty()) return invocation.output_path;
  const char* dir = std::getenv(kOutDirEnv);
  std::filesystem::path base = dir != nullptr && *dir != '\0' ? dir : ".";
  return (base / DefaultFileName(invocation.subcommand)).string();
}

// Writes `content` to `path` atomically-ish (temp file then rename).
int WriteFile(const std::string& path, const std::string& content,
              std::ostream& err) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out || !(out << content) || !out.flush()) {
      err << "error: cannot write '" << path << "'\n";
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      return kExitIoError;
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    err << "error: cannot write '" << path << "': " << ec.message() << "\n";
    std::filesystem::remove(tmp, ec);
    return kExitIoError;
  }
  return kExitOk;
}

nlohmann::json DescribeExperiment(const ExperimentConfig& e) {
  nlohmann::json j;
  j["group_sizes"] = e.group_sizes;
  std::vector<std::string> eps;
  for (const auto& level : e.epsilons) eps.push_back(level.ToString());
  j["epsilons"] = eps;
  j["mu"] = e.mu;
  j["sigma2"] = e.sigma2;
  j["domain"] = {e.a, e.b};
  j["trials"] = e.trials;
  j["seed"] = e.seed;
  j["statistic"] = e.statistic == Statistic::kMean ? "mean" : "quantile";
  if (e.statistic == Statistic::kQuantile) j["q"] = e.q;
  std::vector<std::string> methods;
  for (const auto& m : e.methods) methods.push_back(m.Name());
  j["methods"] = methods;
  if (e.sweep) {
    j["sweep"] = {{"param", e.sweep->Name()}, {"values", e.sweep->values}};
  }
  j["rmse_reference"] =
      e.rmse_reference == RmseReference::kPopulation ? "population" : "sample";
  j["bootstrap_resamples"] = e.bootstrap_resamples;
  return j;
}

int WriteResults(const std::string& path, std::span<const TrialStats> rows,
                 const nlohmann::json& metadata, std::ostream& out,
                 std::ostream& err) {
  std::ostringstream csv;
  WriteResultsCsv(rows, csv);
  if (int rc = WriteFile(path, csv.str(), err); rc != kExitOk) return rc;
  if (int rc = WriteFile(path + ".meta.json", metadata.dump(2) + "\n", err);
      rc != kExitOk) {
    return rc;
  }
  out << "wrote " << rows.size() << " rows to " << path << "\n";
  return kExitOk;
}

int ReportFailure(const absl::Status& status, std::ostream& err) {
  err << "error: " << status.message() << "\n";
  return kExitConfigError;
}

std::vector<MethodSpec> DefaultMeanMethods() {
  return {MethodSpec::Mixed(), MethodSpec::PdpSample(ThresholdStrategy::Min()),
          MethodSpec::PdpSample(ThresholdStrategy::Optimized()),
          MethodSpec::PdpSample(ThresholdStrategy::Average()),
          MethodSpec::PdpSample(ThresholdStrategy::Max())};
}

}  // namespace

int CmdMeanExperiment(const CliInvocation& invocation, std::ostream& out,
                      std::ostream& err) {
  LoadResult loaded = LoadConfig(invocation, err);
  if (!loaded.config) return loaded.exit_code;
  ToolConfig& tool = *loaded.config;
  ExperimentConfig& e = tool.experiment;
  if (e.statistic != Statistic::kMean) {
    err << "error: mean-experiment needs statistic = mean\n";
    return kExitConfigError;
  }
  if (!tool.methods_given) {
    e.methods = DefaultMeanMethods();
    // Max and average thresholds are undefined with a public group; drop them
    // from the defaults rather than failing.
    const bool has_public =
        std::any_of(e.epsilons.begin(), e.epsilons.end(),
                    [](const PrivacyLevel& l) { return l.is_public(); });
    if (has_public) {
      std::erase_if(e.methods, [](const MethodSpec& m) {
        return m.kind == MethodSpec::Kind::kPdpSample &&
               (m.strategy.kind() == ThresholdStrategy::Kind::kMax ||
                m.strategy.kind() == ThresholdStrategy::Kind::kAverage);
      });
      err << "note: public group present, skipping pdp:max and pdp:average\n";
    }
  }
  if (absl::Status s = e.Validate(); !s.ok()) return ReportFailure(s, err);

  auto results = RunExperiment(e);
  if (!results.ok()) return ReportFailure(results.status(), err);

  nlohmann::json meta;
  meta["subcommand"] = "mean-experiment";
  meta["version"] = kVersion;
  meta["config"] = DescribeExperiment(e);
  meta["artifact_choices"] = {
      "domain bounds are a configuration choice (default [-20, 20])",
      "emp_variance is the variance about the empirical mean of the "
      "estimates; rmse is measured about the population mean",
      "pdp_sample theoretical_variance is the expected-sample-size "
      "prediction at the selected threshold"};
  return WriteResults(ResolveOutputPath(invocation), *results, meta, out, err);
}

int CmdMedianExperiment(const CliInvocation& invocation, std::ostream& out,
                        std::ostream& err) {
  LoadResult loaded = LoadConfig(invocation, err);
  if (!loaded.config) return loaded.exit_code;
  ToolConfig& tool = *loaded.config;
  ExperimentConfig& e = tool.experiment;
  if (e.statistic != Statistic::kQuantile) {
    err << "error: median-experiment needs statistic = quantile\n";
    return kExitConfigError;
  }
  if (!(e.q > 0.0 && e.q < 1.0)) {
    err << "error: q must lie in (0, 1), got " << e.q << "\n";
    return kExitConfigError;
  }
  if (e.group_sizes.empty()) e.group_sizes = {500, 501};
  if (e.group_sizes.size() != 2) {
    err << "error: median-experiment needs exactly two groups (high, low)\n";
    return kExitConfigError;
  }
  if (!e.sweep) {
    e.sweep = Sweep{Sweep::Kind::kShare, 1, {0.1, 0.25, 0.5, 0.75, 0.9}};
  }
  if (!tool.methods_given) {
    e.methods = {MethodSpec::Mixed(),
                 MethodSpec::PdpSample(ThresholdStrategy::Average())};
  }
  if (tool.scenarios.empty()) {
    tool.scenarios = {
        {*PrivacyLevel::Finite(0.1), *PrivacyLevel::Finite(1.0)},
        {*PrivacyLevel::Finite(0.01), *PrivacyLevel::Finite(10.0)}};
  }

  std::vector<TrialStats> rows;
  nlohmann::json scenarios = nlohmann::json::array();
  for (const auto& scenario : tool.scenarios) {
    ExperimentConfig cell = e;
    cell.epsilons = {scenario.high, scenario.low};
    cell.method_prefix = scenario.Label() + "/";
    if (absl::Status s = cell.Validate(); !s.ok()) return ReportFailure(s, err);
    auto results = RunExperiment(cell);
    if (!results.ok()) return ReportFailure(results.status(), err);
    rows.insert(rows.end(), results->begin(), results->end());
    scenarios.push_back(scenario.Label());
  }

  nlohmann::json meta;
  meta["subcommand"] = "median-experiment";
  meta["version"] = kVersion;
  meta["config"] = DescribeExperiment(e);
  meta["config"].erase("epsilons");
  meta["scenarios"] = scenarios;
  meta["artifact_choices"] = {
      "group 0 is the high-privacy group, group 1 the low-privacy group; the "
      "sweep value is the low-privacy share of the 1001 points",
      "domain bounds are a configuration choice (default [-4, 4])",
      "rmse reference is the population quantile unless rmse_reference = "
      "sample",
      "baseline is the Sample mechanism wrapped around the exponential "
      "mechanism at epsilon = t, standing in for the PE mechanism",
      "ci95 columns bound the rmse"};
  return WriteResults(ResolveOutputPath(invocation), rows, meta, out, err);
}

int CmdVarianceCurves(const CliInvocation& invocation, std::ostream& out,
                      std::ostream& err) {
  LoadResult loaded = LoadConfig(invocation, err);
  if (!loaded.config) return loaded.exit_code;
  const ToolConfig& tool = *loaded.config;
  const ExperimentConfig& e = tool.experiment;
  auto domain = DataDomain::Create(e.a, e.b, e.sigma2);
  if (!domain.ok()) return ReportFailure(domain.status(), err);
  if (e.group_sizes.empty()) {
    err << "error: no groups configured\n";
    return kExitConfigError;
  }
  if (e.group_sizes.size() != e.epsilons.size()) {
    err << "error: group_sizes and epsilons differ in length\n";
    return kExitConfigError;
  }
  if (tool.t_grid_points < 2) {
    err << "error: t_grid_points must be at least 2\n";
    return kExitConfigError;
  }

  std::ostringstream csv;
  csv << "curve,sweep_param,sweep_value,parameter,value,variance\n";
  auto emit = [&](const std::string& name, const std::string& sweep_param,
                  double sweep_value, const VarianceCurve& curve) {
    for (size_t i = 0; i < curve.grid().size(); ++i) {
      csv << name << ',' << sweep_param << ','
          << absl::StrFormat("%.17g", sweep_value) << ',' << curve.parameter()
          << ',' << absl::StrFormat("%.17g", curve.grid()[i]) << ','
          << absl::StrFormat("%.17g", curve.variance()[i]) << '\n';
    }
  };

  for (bool amplified : {false, true}) {
    auto curve = SubsamplingCurve(tool.subsample_m, e.sigma2, domain->r(),
                                  tool.subsample_epsilon, amplified, tool.p_grid);
    if (!curve.ok()) return ReportFailure(curve.status(), err);
    const std::string name =
        amplified ? "subsampling_amplified" : "subsampling_plain";
    emit(name, "none", 0.0, *curve);
    out << absl::StrFormat("%s: argmin p = %g\n", name, curve->Argmin());
  }

  double eps_lo = std::numeric_limits<double>::infinity();
  double eps_hi = 0.0;
  for (const auto& level : e.epsilons) {
    if (level.is_public()) continue;
    eps_lo = std::min(eps_lo, level.epsilon());
    eps_hi = std::max(eps_hi, level.epsilon());
  }
  if (!(eps_hi > 0.0) || eps_lo == eps_hi) {
    err << "error: the threshold curve needs two distinct finite epsilons\n";
    return kExitConfigError;
  }

  const size_t points = e.sweep ? e.sweep->values.size() : 1;
  const std::string sweep_param = e.sweep ? e.sweep->Name() : "none";
  for (size_t s = 0; s < points; ++s) {
    auto cell = e.AtSweepPoint(s);
    if (!cell.ok()) return ReportFailure(cell.status(), err);
    const double sweep_value = e.sweep ? e.sweep->values[s] : 0.0;
    const std::vector<double> t_grid =
        LogSpace(eps_lo, eps_hi, tool.t_grid_points);
    auto curve = ThresholdCurve(cell->group_sizes, cell->epsilons, *domain, t_grid);
    if (!curve.ok()) return ReportFailure(curve.status(), err);
    double inverse_total = 0.0;
    for (size_t i = 0; i < cell->group_sizes.size(); ++i) {
      inverse_total += 1.0 / GroupVariance(cell->group_sizes[i],
                                           cell->epsilons[i], *domain);
    }
    auto reference = VarianceCurve::Create(
        "t", t_grid, std::vector<double>(t_grid.size(), 1.0 / inverse_total));
    if (!reference.ok()) return ReportFailure(reference.status(), err);
    emit("pdp_predicted", sweep_param, sweep_value, *curve);
    emit("mixed_reference", sweep_param, sweep_value, *reference);
    auto optimized =
        OptimizedThreshold(cell->group_sizes, cell->epsilons, *domain);
    if (!optimized.ok()) return ReportFailure(optimized.status(), err);
    out << absl::StrFormat(
        "%s = %g: grid argmin t = %g, optimized t = %.6g, mixed variance = "
        "%.6g\n",
        sweep_param, sweep_value, curve->Argmin(), *optimized, 1.0 / inverse_total);
  }

  const std::string path = ResolveOutputPath(invocation);
  if (int rc = WriteFile(path, csv.str(), err); rc != kExitOk) return rc;
  out << "wrote " << path << "\n";
  return kExitOk;
}

int CmdWeights(const CliInvocation& invocation, std::ostream& out,
               std::ostream& err) {
  LoadResult loaded = LoadConfig(invocation, err);
  if (!loaded.config) return loaded.exit_code;
  const ExperimentConfig& e = loaded.config->experiment;
  if (e.group_sizes.empty()) {
    err << "error: no groups configured\n";
    return kExitConfigError;
  }
  if (e.group_sizes.size() != e.epsilons.size()) {
    err << "error: group_sizes and epsilons differ in length\n";
    return kExitConfigError;
  }
  auto domain = DataDomain::Create(e.a, e.b, e.sigma2);
  if (!domain.ok()) return ReportFailure(domain.status(), err);

  std::vector<double> variances;
  std::vector<double> raw;
  for (size_t i = 0; i < e.group_sizes.size(); ++i) {
    variances.push_back(GroupVariance(e.group_sizes[i], e.epsilons[i], *domain));
    raw.push_back(1.0 / variances.back());
  }
  auto weights = MixWeights::Normalize(raw);
  if (!weights.ok()) return ReportFailure(weights.status(), err);

  out << absl::StrFormat("%-6s %10s %10s %14s %14s %10s\n", "group", "n",
                         "epsilon", "variance", "beta_tilde", "beta");
  double joint = 0.0;
  for (size_t i = 0; i < variances.size(); ++i) {
    const double beta = (*weights)[i];
    joint += beta * beta * variances[i];
    out << absl::StrFormat("%-6d %10d %10s %14.6g %14.6g %10.5f\n", i,
                           e.group_sizes[i],
                           e.epsilons[i].is_public()
                               ? std::string("public")
                               : absl::StrFormat("%g", e.epsilons[i].epsilon()),
                           variances[i], raw[i], beta);
  }
  out << absl::StrFormat("joint_variance %.6g\n", joint);
  return kExitOk;
}

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Mixed-privacy mean and quantile estimation benchmarks", "mixdp"};
  app.require_subcommand(1);

  CliInvocation invocation;
  uint64_t seed = 0;
  size_t trials = 0;
  auto add_common = [&](CLI::App* sub, bool needs_out) {
    sub->add_option("--config", invocation.config_path, "Config file")
        ->required();
    if (needs_out) {
      sub->add_option("--out", invocation.output_path,
                      absl::StrCat("Output CSV (default: $", kOutDirEnv,
                                   "/<subcommand>.csv)"));
    }
    sub->add_option("--seed", seed, "Override the config seed");
    sub->add_option("--trials", trials, "Override the trial count");
  };

  CLI::App* mean = app.add_subcommand("mean-experiment",
                                      "Mixed vs Sample-mechanism mean variance");
  add_common(mean, true);
  CLI::App* median = app.add_subcommand(
      "median-experiment", "Mixed vs Sample-mechanism median RMSE");
  add_common(median, true);
  CLI::App* curves = app.add_subcommand(
      "variance-curves", "Subsampling and threshold variance curves");
  add_common(curves, true);
  CLI::App* weights =
      app.add_subcommand("weights", "Print optimal mixing weights");
  add_common(weights, false);
  app.add_subcommand("version", "Print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream help;
    const int rc = app.exit(e, help, help);
    (rc == 0 ? out : err) << help.str();
    return rc == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  for (CLI::App* sub : {mean, median, curves, weights}) {
    if (sub != chosen) continue;
    if (sub->count("--seed") > 0) invocation.seed_override = seed;
    if (sub->count("--trials") > 0) invocation.trials_override = trials;
  }

  if (chosen == mean) {
    invocation.subcommand = Subcommand::kMeanExperiment;
    return CmdMeanExperiment(invocation, out, err);
  }
  if (chosen == median) {
    invocation.subcommand = Subcommand::kMedianExperiment;
    return CmdMedianExperiment(invocation, out, err);
  }
  if (chosen == curves) {
    invocation.subcommand = Subcommand::kVarianceCurves;
    return CmdVarianceCurves(invocation, out, err);
  }
  if (chosen == weights) {
    invocation.subcommand = Subcommand::kWeights;
    return CmdWeights(invocation, out, err);
  }
  out << "mixdp " << kVersion << "\n";
  return kExitOk;
}

}  // namespace mixdp
