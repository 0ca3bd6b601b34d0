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

#ifndef MIXDP_ESTIMATORS_H_
#define MIXDP_ESTIMATORS_H_

#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "mixdp/mechanisms.h"
#include "mixdp/random_stream.h"

namespace mixdp {

// One group of users sharing a privacy requirement. Each user contributes a
// single value; the group size is treated as public knowledge.
class PrivacyGroup {
 public:
  // Fails on an empty value list.
  static absl::StatusOr<PrivacyGroup> Create(std::vector<double> values,
                                             PrivacyLevel privacy);

  const std::vector<double>& values() const { return values_; }
  const PrivacyLevel& privacy() const { return privacy_; }
  size_t size() const { return values_.size(); }

  // Sum of the values after clamping to `domain`.
  double ClampedSum(const DataDomain& domain) const;

 private:
  PrivacyGroup(std::vector<double> values, PrivacyLevel privacy)
      : values_(std::move(values)), privacy_(privacy) {}
  std::vector<double> values_;
  PrivacyLevel privacy_;
};

// Convex-combination weights, aligned with the group list they came from.
class MixWeights {
 public:
  // Normalizes nonnegative raw weights (at least one positive) to sum to 1.
  static absl::StatusOr<MixWeights> Normalize(std::span<const double> raw);

  const std::vector<double>& beta() const { return beta_; }
  size_t size() const { return beta_.size(); }
  double operator[](size_t i) const { return beta_[i]; }

 private:
  explicit MixWeights(std::vector<double> beta) : beta_(std::move(beta)) {}
  std::vector<double> beta_;
};

// A released statistic. theoretical_variance is empty when no closed form is
// available (quantiles, or baselines whose sample size is random).
struct Estimate {
  double value = 0.0;
  std::optional<double> theoretical_variance;
};

// Variance of the single-group Laplace mean (Sigma_i + z_i) / n_i:
//   (n sigma^2 + 2 r^2 / epsilon^2) / n^2,   or sigma^2 / n for Public.
double GroupVariance(const PrivacyGroup& group, const DataDomain& domain);

// Same quantity from a size and privacy level, without materialized data.
double GroupVariance(size_t n, const PrivacyLevel& privacy,
                     const DataDomain& domain);

// Inverse-variance weights beta_i proportional to 1 / GroupVariance_i.
absl::StatusOr<MixWeights> OptimalWeights(std::span<const PrivacyGroup> groups,
                                          const DataDomain& domain);

// sum_i beta_i^2 * GroupVariance_i.
absl::StatusOr<double> JointVariance(const MixWeights& weights,
                                     std::span<const PrivacyGroup> groups,
                                     const DataDomain& domain);

// Minimum-variance mixed mean. Every non-public group's clamped sum gets
// one independent Lap(r / epsilon_i) draw from stream.Substream(i); the
// per-group means are combined with OptimalWeights.
absl::StatusOr<Estimate> MixedMean(std::span<const PrivacyGroup> groups,
                                   const DataDomain& domain,
                                   RandomStream& stream);

// Mixed quantile: an exponential-mechanism quantile per private group (exact
// quantile for public groups), combined with the mean-derived OptimalWeights.
absl::StatusOr<Estimate> MixedQuantile(std::span<const PrivacyGroup> groups,
                                       double q, const DataDomain& domain,
                                       RandomStream& stream);

}  // namespace mixdp

#endif  // MIXDP_ESTIMATORS_H_
