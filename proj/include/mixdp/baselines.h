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

#ifndef MIXDP_BASELINES_H_
#define MIXDP_BASELINES_H_

#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "mixdp/estimators.h"
#include "mixdp/mechanisms.h"
#include "mixdp/random_stream.h"

namespace mixdp {

// How the Sample mechanism picks its threshold t.
class ThresholdStrategy {
 public:
  enum class Kind { kMin, kAverage, kMax, kOptimized, kFixed };

  static ThresholdStrategy Min() { return ThresholdStrategy(Kind::kMin, 0); }
  static ThresholdStrategy Average() {
    return ThresholdStrategy(Kind::kAverage, 0);
  }
  static ThresholdStrategy Max() { return ThresholdStrategy(Kind::kMax, 0); }
  static ThresholdStrategy Optimized() {
    return ThresholdStrategy(Kind::kOptimized, 0);
  }
  static absl::StatusOr<ThresholdStrategy> Fixed(double t);

  // Parses "min", "average", "max", "optimized" or "fixed=<t>".
  static absl::StatusOr<ThresholdStrategy> Parse(absl::string_view text);

  Kind kind() const { return kind_; }
  // Only meaningful for kFixed.
  double fixed_t() const { return fixed_t_; }

  // Inverse of Parse.
  std::string ToString() const;

 private:
  ThresholdStrategy(Kind kind, double t) : kind_(kind), fixed_t_(t) {}
  Kind kind_;
  double fixed_t_;
};

// Per-point inclusion decisions of one Sample-mechanism run.
struct SampleOutcome {
  std::vector<std::vector<bool>> included;
  double t = 0.0;
  std::vector<size_t> sampled_counts;

  size_t total_sampled() const;
};

// min(1, (e^epsilon - 1) / (e^t - 1)); 1 for public groups.
absl::StatusOr<double> InclusionProbability(const PrivacyLevel& privacy,
                                            double t);

// Threshold for `strategy`. Min and Average range over the finite epsilons
// (public groups are skipped); Max is undefined when a public group is
// present. Optimized minimizes PredictedPdpVariance over
// [min epsilon, max epsilon].
absl::StatusOr<double> SelectThreshold(const ThresholdStrategy& strategy,
                                       std::span<const PrivacyGroup> groups,
                                       const DataDomain& domain);
absl::StatusOr<double> SelectThreshold(const ThresholdStrategy& strategy,
                                       std::span<const size_t> sizes,
                                       std::span<const PrivacyLevel> levels,
                                       const DataDomain& domain);

// Draws the inclusion pattern for threshold t. Group i uses
// stream.Substream(i).
absl::StatusOr<SampleOutcome> SamplePoints(std::span<const PrivacyGroup> groups,
                                           double t, RandomStream& stream);

// Sample-mechanism mean: pooled sum of included (clamped) points plus
// Lap(r / t), divided by the realized sample size. An empty sample is a
// degenerate-sample error.
absl::StatusOr<Estimate> PdpSampleMean(std::span<const PrivacyGroup> groups,
                                       const ThresholdStrategy& strategy,
                                       const DataDomain& domain,
                                       RandomStream& stream);

// Sample mechanism wrapped around the exponential-mechanism quantile at
// epsilon = t.
absl::StatusOr<Estimate> PdpSampleQuantile(std::span<const PrivacyGroup> groups,
                                           double q,
                                           const ThresholdStrategy& strategy,
                                           const DataDomain& domain,
                                           RandomStream& stream);

}  // namespace mixdp

#endif  // MIXDP_BASELINES_H_
