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

#ifndef MIXDP_HARNESS_H_
#define MIXDP_HARNESS_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include "absl/strings/string_view.h"
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mixdp/baselines.h"
#include "mixdp/estimators.h"
#include "mixdp/mechanisms.h"
#include "mixdp/random_stream.h"

namespace mixdp {

enum class Statistic { kMean, kQuantile };

// One estimator under test.
struct MethodSpec {
  enum class Kind { kMixed, kPdpSample };

  static MethodSpec Mixed() { return {Kind::kMixed, ThresholdStrategy::Min()}; }
  static MethodSpec PdpSample(ThresholdStrategy strategy) {
    return {Kind::kPdpSample, strategy};
  }
  // Parses "mixed" or "pdp:<strategy>" (see ThresholdStrategy::Parse).
  static absl::StatusOr<MethodSpec> Parse(absl::string_view text);

  // "mixed" or "pdp_sample:<strategy>".
  std::string Name() const;

  Kind kind;
  ThresholdStrategy strategy;
};

// A parameter varied across runs.
//   kGroupSize: group_sizes[group] = value.
//   kShare: exactly two groups; group `group` receives round(value * N) of
//           the N = sum(group_sizes) points and the other group the rest.
struct Sweep {
  enum class Kind { kGroupSize, kShare };
  Kind kind = Kind::kGroupSize;
  size_t group = 0;
  std::vector<double> values;

  // "n[<group>]" or "share[<group>]".
  std::string Name() const;
};

// Reference value for RMSE: the population statistic of Normal(mu, sigma2),
// or the realized statistic of the pooled (clamped) trial data.
enum class RmseReference { kPopulation, kSample };

struct ExperimentConfig {
  std::vector<size_t> group_sizes;
  std::vector<PrivacyLevel> epsilons;
  double mu = 0.0;
  double sigma2 = 25.0;
  double a = -20.0;
  double b = 20.0;
  size_t trials = 1000;
  uint64_t seed = 1;
  Statistic statistic = Statistic::kMean;
  double q = 0.5;
  std::vector<MethodSpec> methods;
  std::optional<Sweep> sweep;
  RmseReference rmse_reference = RmseReference::kPopulation;
  size_t bootstrap_resamples = 2000;
  // Prepended to every method name in the results (e.g. a scenario tag).
  std::string method_prefix;

  absl::Status Validate() const;

  // Copy with the sweep applied at values[index] and removed.
  absl::StatusOr<ExperimentConfig> AtSweepPoint(size_t index) const;
};

// Aggregated results of one (method, sweep point) cell.
struct TrialStats {
  std::string method;
  std::string sweep_param;
  double sweep_value = 0.0;
  size_t trials = 0;
  size_t failures = 0;
  // Sample variance (n - 1) of the released estimates about their own mean.
  double empirical_variance = 0.0;
  // Root mean squared error about the RMSE reference.
  double rmse = 0.0;
  // 95% bootstrap interval on empirical_variance (mean statistic) or on rmse
  // (quantile statistic).
  double ci95_low = 0.0;
  double ci95_high = 0.0;
  std::optional<double> theoretical_variance;
};

// n_i Normal(mu, sigma2) draws per group, clamped to [a, b]. Group i draws
// from the substream keyed by (trial_id, i), so the result depends only on
// the stream identity and the trial id. Sweeps are not applied here.
absl::StatusOr<std::vector<PrivacyGroup>> GenerateGroups(
    const ExperimentConfig& config, uint64_t trial_id, RandomStream& stream);

// Runs every (sweep point, method) cell for config.trials trials. Each trial
// uses streams keyed by (sweep index, method index, trial id), so the output
// depends on the seed alone. Degenerate-sample trials count as failures and
// are excluded from the statistics.
absl::StatusOr<std::vector<TrialStats>> RunExperiment(
    const ExperimentConfig& config);

// Sample variance and percentile-bootstrap 95% interval.
struct BootstrapSummary {
  double point = 0.0;
  double low = 0.0;
  double high = 0.0;
};
BootstrapSummary BootstrapVariance(std::span<const double> values,
                                   size_t resamples, RandomStream& stream);
// RMSE of `errors` (estimate minus reference) with its bootstrap interval.
BootstrapSummary BootstrapRmse(std::span<const double> errors, size_t resamples,
                               RandomStream& stream);

inline constexpr absl::string_view kResultsCsvHeader =
    "method,sweep_param,sweep_value,trials,failures,emp_variance,rmse,"
    "ci95_low,ci95_high,theoretical_variance";

// Writes rows sorted by (method, sweep_value), doubles with 17 significant
// digits, an absent theoretical variance as an empty field.
void WriteResultsCsv(std::span<const TrialStats> rows, std::ostream& out);
absl::StatusOr<std::vector<TrialStats>> ParseResultsCsv(absl::string_view text);

}  // namespace mixdp

#endif  // MIXDP_HARNESS_H_
