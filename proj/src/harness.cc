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

#include "mixdp/harness.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/normal.hpp>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "mixdp/analysis.h"
#include "mixdp/errors.h"

namespace mixdp {
namespace {

// Stream-key domains, so data, method noise and bootstrap never collide.
constexpr uint64_t kDataKey = 1;
constexpr uint64_t kMethodKey = 2;
constexpr uint64_t kBootstrapKey = 3;

double SampleVariance(std::span<const double> values) {
  const size_t n = values.size();
  if (n < 2) return 0.0;
  const double mean =
      std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(n - 1);
}

double Rmse(std::span<const double> errors) {
  if (errors.empty()) return 0.0;
  double ss = 0.0;
  for (double e : errors) ss += e * e;
  return std::sqrt(ss / static_cast<double>(errors.size()));
}

template <typename Statistic>
BootstrapSummary Bootstrap(std::span<const double> values, size_t resamples,
                           RandomStream& stream, Statistic statistic) {
  BootstrapSummary summary;
  summary.point = statistic(values);
  summary.low = summary.high = summary.point;
  if (values.size() < 2 || resamples == 0) return summary;
  std::vector<double> stats(resamples);
  std::vector<double> resample(values.size());
  for (size_t b = 0; b < resamples; ++b) {
    for (double& x : resample) x = values[stream.UniformIndex(values.size())];
    stats[b] = statistic(std::span<const double>(resample));
  }
  std::sort(stats.begin(), stats.end());
  const auto lo_index = static_cast<size_t>(std::floor(0.025 * resamples));
  const auto hi_index = std::min(
      resamples - 1, static_cast<size_t>(std::ceil(0.975 * resamples)) - 1);
  summary.low = std::min(stats[lo_index], summary.point);
  summary.high = std::max(stats[hi_index], summary.point);
  return summary;
}

std::string FormatDouble(double x) { return absl::StrFormat("%.17g", x); }

absl::StatusOr<double> ParseDouble(absl::string_view field) {
  double x = 0.0;
  if (!absl::SimpleAtod(field, &x)) {
    return InvalidParameterError(absl::StrCat("bad number '", field, "'"));
  }
  return x;
}

absl::StatusOr<size_t> ParseCount(absl::string_view field) {
  uint64_t x = 0;
  if (!absl::SimpleAtoi(field, &x)) {
    return InvalidParameterError(absl::StrCat("bad count '", field, "'"));
  }
  return static_cast<size_t>(x);
}

// Population statistic of Normal(mu, sigma2): mu for the mean, the normal
// quantile otherwise. Clamping to a symmetric range around mu leaves both
// unchanged for the median.
double PopulationStatistic(const ExperimentConfig& config) {
  if (config.statistic == Statistic::kMean) return config.mu;
  if (config.sigma2 == 0.0) return config.mu;
  const boost::math::normal_distribution<double> normal(
      config.mu, std::sqrt(config.sigma2));
  return boost::math::quantile(normal, config.q);
}

absl::StatusOr<double> SampleStatistic(const ExperimentConfig& config,
                                       std::span<const PrivacyGroup> groups) {
  std::vector<double> pooled;
  for (const auto& g : groups) {
    pooled.insert(pooled.end(), g.values().begin(), g.values().end());
  }
  if (config.statistic == Statistic::kMean) {
    return std::accumulate(pooled.begin(), pooled.end(), 0.0) /
           static_cast<double>(pooled.size());
  }
  return ExactQuantile(pooled, config.q);
}

absl::StatusOr<Estimate> RunMethod(const MethodSpec& method,
                                   const ExperimentConfig& config,
                                   std::span<const PrivacyGroup> groups,
                                   const DataDomain& domain,
                                   RandomStream& stream) {
  const bool mean = config.statistic == Statistic::kMean;
  switch (method.kind) {
    case MethodSpec::Kind::kMixed:
      return mean ? MixedMean(groups, domain, stream)
                  : MixedQuantile(groups, config.q, domain, stream);
    case MethodSpec::Kind::kPdpSample:
      return mean ? PdpSampleMean(groups, method.strategy, domain, stream)
                  : PdpSampleQuantile(groups, config.q, method.strategy, domain,
                                      stream);
  }
  return UnsupportedError("unknown method");
}

// Closed-form variance of the method, where one is available: the joint
// variance for the mixed mean, the expected-sample-size prediction for the
// Sample-mechanism mean. Quantiles have none.
absl::StatusOr<std::optional<double>> TheoreticalVariance(
    const MethodSpec& method, const ExperimentConfig& config,
    const DataDomain& domain) {
  if (config.statistic != Statistic::kMean) return std::optional<double>();
  if (method.kind == MethodSpec::Kind::kMixed) {
    double inverse_total = 0.0;
    for (size_t i = 0; i < config.group_sizes.size(); ++i) {
      inverse_total +=
          1.0 / GroupVariance(config.group_sizes[i], config.epsilons[i], domain);
    }
    return std::optional<double>(1.0 / inverse_total);
  }
  MIXDP_ASSIGN_OR_RETURN(double t,
                         SelectThreshold(method.strategy, config.group_sizes,
                                         config.epsilons, domain));
  MIXDP_ASSIGN_OR_RETURN(
      double v, PredictedPdpVariance(config.group_sizes, config.epsilons, t,
                                     domain));
  return std::optional<double>(v);
}

}  // namespace

absl::StatusOr<MethodSpec> MethodSpec::Parse(absl::string_view text) {
  if (text == "mixed") return Mixed();
  if (absl::ConsumePrefix(&text, "pdp:")) {
    MIXDP_ASSIGN_OR_RETURN(ThresholdStrategy strategy,
                           ThresholdStrategy::Parse(text));
    return PdpSample(strategy);
  }
  return InvalidParameterError(absl::StrCat("unknown method '", text, "'"));
}

std::string MethodSpec::Name() const {
  if (kind == Kind::kMixed) return "mixed";
  return absl::StrCat("pdp_sample:", strategy.ToString());
}

std::string Sweep::Name() const {
  return absl::StrCat(kind == Kind::kGroupSize ? "n[" : "share[", group, "]");
}

absl::Status ExperimentConfig::Validate() const {
  if (group_sizes.empty()) return EmptyInputError("no groups configured");
  if (group_sizes.size() != epsilons.size()) {
    return InvalidParameterError(absl::StrCat(
        group_sizes.size(), " group sizes but ", epsilons.size(), " epsilons"));
  }
  for (size_t n : group_sizes) {
    if (n == 0) return InvalidParameterError("group sizes must be positive");
  }
  if (!std::isfinite(mu)) return InvalidParameterError("mu must be finite");
  if (!std::isfinite(sigma2) || sigma2 < 0.0) {
    return InvalidParameterError("sigma2 must be finite and nonnegative");
  }
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    return InvalidParameterError("domain bounds need finite a < b");
  }
  if (trials == 0) return InvalidParameterError("trials must be at least 1");
  if (statistic == Statistic::kQuantile && !(q > 0.0 && q < 1.0)) {
    return InvalidParameterError(absl::StrCat("q must lie in (0, 1), got ", q));
  }
  if (methods.empty()) return EmptyInputError("no methods configured");
  bool has_public = false;
  for (const auto& e : epsilons) has_public |= e.is_public();
  for (const auto& m : methods) {
    if (m.kind != MethodSpec::Kind::kPdpSample) continue;
    const auto kind = m.strategy.kind();
    if (has_public && (kind == ThresholdStrategy::Kind::kMax ||
                       kind == ThresholdStrategy::Kind::kAverage)) {
      return InvalidParameterError(
          "max/average thresholds need a finite epsilon for every group");
    }
  }
  if (sweep.has_value()) {
    if (sweep->values.empty()) return EmptyInputError("sweep has no values");
    if (sweep->group >= group_sizes.size()) {
      return InvalidParameterError("sweep group index out of range");
    }
    if (sweep->kind == Sweep::Kind::kShare && group_sizes.size() != 2) {
      return InvalidParameterError("share sweeps need exactly two groups");
    }
    for (size_t i = 0; i < sweep->values.size(); ++i) {
      MIXDP_RETURN_IF_ERROR(AtSweepPoint(i).status());
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<ExperimentConfig> ExperimentConfig::AtSweepPoint(
    size_t index) const {
  ExperimentConfig out = *this;
  out.sweep.reset();
  if (!sweep.has_value()) return out;
  if (index >= sweep->values.size()) {
    return InvalidParameterError("sweep index out of range");
  }
  const double value = sweep->values[index];
  if (sweep->kind == Sweep::Kind::kGroupSize) {
    if (!(value >= 1.0) || value != std::floor(value)) {
      return InvalidParameterError(
          absl::StrCat("group-size sweep value must be a positive integer, got ",
                       value));
    }
    out.group_sizes[sweep->group] = static_cast<size_t>(value);
    return out;
  }
  if (!(value > 0.0 && value < 1.0)) {
    return InvalidParameterError(
        absl::StrCat("share sweep value must lie in (0, 1), got ", value));
  }
  const size_t total = group_sizes[0] + group_sizes[1];
  const auto share = static_cast<size_t>(std::llround(value * total));
  if (share == 0 || share >= total) {
    return InvalidParameterError(
        absl::StrCat("share ", value, " leaves an empty group"));
  }
  out.group_sizes[sweep->group] = share;
  out.group_sizes[1 - sweep->group] = total - share;
  return out;
}

absl::StatusOr<std::vector<PrivacyGroup>> GenerateGroups(
    const ExperimentConfig& config, uint64_t trial_id, RandomStream& stream) {
  if (config.group_sizes.size() != config.epsilons.size()) {
    return InvalidParameterError("group sizes and epsilons differ in length");
  }
  const double stddev = std::sqrt(config.sigma2);
  std::vector<PrivacyGroup> groups;
  groups.reserve(config.group_sizes.size());
  for (size_t i = 0; i < config.group_sizes.size(); ++i) {
    RandomStream group_stream = stream.Substream(StreamKey({trial_id, i}));
    std::vector<double> values(config.group_sizes[i]);
    for (double& v : values) {
      v = std::clamp(group_stream.Normal(config.mu, stddev), config.a, config.b);
    }
    MIXDP_ASSIGN_OR_RETURN(PrivacyGroup group,
                           PrivacyGroup::Create(std::move(values),
                                                config.epsilons[i]));
    groups.push_back(std::move(group));
  }
  return groups;
}

BootstrapSummary BootstrapVariance(std::span<const double> values,
                                   size_t resamples, RandomStream& stream) {
  return Bootstrap(values, resamples, stream, SampleVariance);
}

BootstrapSummary BootstrapRmse(std::span<const double> errors, size_t resamples,
                               RandomStream& stream) {
  return Bootstrap(errors, resamples, stream, Rmse);
}

absl::StatusOr<std::vector<TrialStats>> RunExperiment(
    const ExperimentConfig& config) {
  MIXDP_RETURN_IF_ERROR(config.Validate());
  const size_t points = config.sweep ? config.sweep->values.size() : 1;
  const std::string sweep_param = config.sweep ? config.sweep->Name() : "none";

  std::vector<TrialStats> results;
  for (size_t s = 0; s < points; ++s) {
    MIXDP_ASSIGN_OR_RETURN(ExperimentConfig cell, config.AtSweepPoint(s));
    MIXDP_ASSIGN_OR_RETURN(DataDomain domain,
                           DataDomain::Create(cell.a, cell.b, cell.sigma2));
    const double population = PopulationStatistic(cell);

    const size_t num_methods = cell.methods.size();
    std::vector<std::vector<double>> estimates(num_methods);
    std::vector<std::vector<double>> errors(num_methods);
    std::vector<size_t> failures(num_methods, 0);

    const RandomStream data_root(cell.seed, StreamKey({kDataKey, s}));
    for (uint64_t trial = 0; trial < cell.trials; ++trial) {
      RandomStream data_stream = data_root;
      MIXDP_ASSIGN_OR_RETURN(std::vector<PrivacyGroup> groups,
                             GenerateGroups(cell, trial, data_stream));
      double reference = population;
      if (cell.rmse_reference == RmseReference::kSample) {
        MIXDP_ASSIGN_OR_RETURN(reference, SampleStatistic(cell, groups));
      }
      for (size_t m = 0; m < num_methods; ++m) {
        RandomStream stream(cell.seed, StreamKey({kMethodKey, s, m, trial}));
        auto estimate = RunMethod(cell.methods[m], cell, groups, domain, stream);
        if (!estimate.ok()) {
          if (IsDegenerateSample(estimate.status())) {
            ++failures[m];
            continue;
          }
          return estimate.status();
        }
        estimates[m].push_back(estimate->value);
        errors[m].push_back(estimate->value - reference);
      }
    }

    for (size_t m = 0; m < num_methods; ++m) {
      TrialStats row;
      row.method = cell.method_prefix + cell.methods[m].Name();
      row.sweep_param = sweep_param;
      row.sweep_value = config.sweep ? config.sweep->values[s] : 0.0;
      row.trials = cell.trials;
      row.failures = failures[m];
      const size_t ok = estimates[m].size();
      RandomStream boot_stream(cell.seed, StreamKey({kBootstrapKey, s, m}));
      if (ok == 0) {
        row.empirical_variance = row.rmse = row.ci95_low = row.ci95_high =
            std::numeric_limits<double>::quiet_NaN();
      } else if (cell.statistic == Statistic::kMean) {
        const BootstrapSummary v = BootstrapVariance(
            estimates[m], cell.bootstrap_resamples, boot_stream);
        row.empirical_variance = v.point;
        row.ci95_low = v.low;
        row.ci95_high = v.high;
        row.rmse = Rmse(errors[m]);
      } else {
        const BootstrapSummary r =
            BootstrapRmse(errors[m], cell.bootstrap_resamples, boot_stream);
        row.empirical_variance = SampleVariance(estimates[m]);
        row.rmse = r.point;
        row.ci95_low = r.low;
        row.ci95_high = r.high;
      }
      MIXDP_ASSIGN_OR_RETURN(row.theoretical_variance,
                             TheoreticalVariance(cell.methods[m], cell, domain));
      results.push_back(std::move(row));
    }
  }
  std::stable_sort(results.begin(), results.end(),
                   [](const TrialStats& x, const TrialStats& y) {
                     if (x.method != y.method) return x.method < y.method;
                     return x.sweep_value < y.sweep_value;
                   });
  return results;
}

void WriteResultsCsv(std::span<const TrialStats> rows, std::ostream& out) {
  std::vector<const TrialStats*> sorted;
  for (const auto& r : rows) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const TrialStats* x, const TrialStats* y) {
                     if (x->method != y->method) return x->method < y->method;
                     return x->sweep_value < y->sweep_value;
                   });
  out << kResultsCsvHeader << '\n';
  for (const TrialStats* r : sorted) {
    out << r->method << ',' << r->sweep_param << ','
        << FormatDouble(r->sweep_value) << ',' << r->trials << ','
        << r->failures << ',' << FormatDouble(r->empirical_variance) << ','
        << FormatDouble(r->rmse) << ',' << FormatDouble(r->ci95_low) << ','
        << FormatDouble(r->ci95_high) << ',';
    if (r->theoretical_variance) out << FormatDouble(*r->theoretical_variance);
    out << '\n';
  }
}

absl::StatusOr<std::vector<TrialStats>> ParseResultsCsv(absl::string_view text) {
  std::vector<absl::string_view> lines =
      absl::StrSplit(text, '\n', absl::SkipEmpty());
  if (lines.empty() || lines[0] != kResultsCsvHeader) {
    return InvalidParameterError("missing or unexpected results header");
  }
  std::vector<TrialStats> rows;
  for (size_t i = 1; i < lines.size(); ++i) {
    std::vector<absl::string_view> f = absl::StrSplit(lines[i], ',');
    if (f.size() != 10) {
      return InvalidParameterError(
          absl::StrCat("line ", i + 1, ": expected 10 fields, got ", f.size()));
    }
    TrialStats r;
    r.method = std::string(f[0]);
    r.sweep_param = std::string(f[1]);
    MIXDP_ASSIGN_OR_RETURN(r.sweep_value, ParseDouble(f[2]));
    MIXDP_ASSIGN_OR_RETURN(r.trials, ParseCount(f[3]));
    MIXDP_ASSIGN_OR_RETURN(r.failures, ParseCount(f[4]));
    MIXDP_ASSIGN_OR_RETURN(r.empirical_variance, ParseDouble(f[5]));
    MIXDP_ASSIGN_OR_RETURN(r.rmse, ParseDouble(f[6]));
    MIXDP_ASSIGN_OR_RETURN(r.ci95_low, ParseDouble(f[7]));
    MIXDP_ASSIGN_OR_RETURN(r.ci95_high, ParseDouble(f[8]));
    if (!f[9].empty()) {
      MIXDP_ASSIGN_OR_RETURN(double v, ParseDouble(f[9]));
      r.theoretical_variance = v;
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace mixdp
