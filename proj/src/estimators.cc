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

#include "mixdp/estimators.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "mixdp/errors.h"

namespace mixdp {

absl::StatusOr<PrivacyGroup> PrivacyGroup::Create(std::vector<double> values,
                                                  PrivacyLevel privacy) {
  if (values.empty()) {
    return EmptyInputError("a privacy group needs at least one value");
  }
  return PrivacyGroup(std::move(values), privacy);
}

double PrivacyGroup::ClampedSum(const DataDomain& domain) const {
  double sum = 0.0;
  for (double v : values_) sum += domain.Clamp(v);
  return sum;
}

absl::StatusOr<MixWeights> MixWeights::Normalize(std::span<const double> raw) {
  if (raw.empty()) return EmptyInputError("no weights to normalize");
  double total = 0.0;
  for (double w : raw) {
    if (!std::isfinite(w) || w < 0.0) {
      return InvalidParameterError(
          absl::StrCat("weights must be finite and nonnegative, got ", w));
    }
    total += w;
  }
  if (total <= 0.0) {
    return InvalidParameterError("at least one weight must be positive");
  }
  std::vector<double> beta;
  beta.reserve(raw.size());
  for (double w : raw) beta.push_back(w / total);
  return MixWeights(std::move(beta));
}

double GroupVariance(size_t n, const PrivacyLevel& privacy,
                     const DataDomain& domain) {
  const double count = static_cast<double>(n);
  double numerator = count * domain.sigma2();
  if (!privacy.is_public()) {
    const double scale = domain.r() / privacy.epsilon();
    numerator += 2.0 * scale * scale;
  }
  return numerator / (count * count);
}

double GroupVariance(const PrivacyGroup& group, const DataDomain& domain) {
  return GroupVariance(group.size(), group.privacy(), domain);
}

absl::StatusOr<MixWeights> OptimalWeights(std::span<const PrivacyGroup> groups,
                                          const DataDomain& domain) {
  if (groups.empty()) return EmptyInputError("no groups to weight");
  std::vector<double> inverse_variances;
  inverse_variances.reserve(groups.size());
  for (const auto& group : groups) {
    inverse_variances.push_back(1.0 / GroupVariance(group, domain));
  }
  return MixWeights::Normalize(inverse_variances);
}

absl::StatusOr<double> JointVariance(const MixWeights& weights,
                                     std::span<const PrivacyGroup> groups,
                                     const DataDomain& domain) {
  if (weights.size() != groups.size()) {
    return InvalidParameterError(absl::StrCat(
        "got ", weights.size(), " weights for ", groups.size(), " groups"));
  }
  double total = 0.0;
  for (size_t i = 0; i < groups.size(); ++i) {
    total += weights[i] * weights[i] * GroupVariance(groups[i], domain);
  }
  return total;
}

absl::StatusOr<Estimate> MixedMean(std::span<const PrivacyGroup> groups,
                                   const DataDomain& domain,
                                   RandomStream& stream) {
  MIXDP_ASSIGN_OR_RETURN(MixWeights weights, OptimalWeights(groups, domain));
  double value = 0.0;
  for (size_t i = 0; i < groups.size(); ++i) {
    const PrivacyGroup& group = groups[i];
    double noisy_sum = group.ClampedSum(domain);
    if (!group.privacy().is_public()) {
      RandomStream group_stream = stream.Substream(i);
      MIXDP_ASSIGN_OR_RETURN(
          double noise,
          SampleLaplace(group_stream, domain.r() / group.privacy().epsilon()));
      noisy_sum += noise;
    }
    value += weights[i] * noisy_sum / static_cast<double>(group.size());
  }
  MIXDP_ASSIGN_OR_RETURN(double variance,
                         JointVariance(weights, groups, domain));
  return Estimate{value, variance};
}

absl::StatusOr<Estimate> MixedQuantile(std::span<const PrivacyGroup> groups,
                                       double q, const DataDomain& domain,
                                       RandomStream& stream) {
  MIXDP_ASSIGN_OR_RETURN(MixWeights weights, OptimalWeights(groups, domain));
  double value = 0.0;
  for (size_t i = 0; i < groups.size(); ++i) {
    const PrivacyGroup& group = groups[i];
    double group_quantile = 0.0;
    if (group.privacy().is_public()) {
      const std::vector<double> clamped = domain.Clamp(group.values());
      MIXDP_ASSIGN_OR_RETURN(group_quantile, ExactQuantile(clamped, q));
    } else {
      RandomStream group_stream = stream.Substream(i);
      MIXDP_ASSIGN_OR_RETURN(
          group_quantile,
          ExpMechQuantile(group.values(), q, group.privacy().epsilon(), domain,
                          group_stream));
    }
    value += weights[i] * group_quantile;
  }
  return Estimate{value, std::nullopt};
}

}  // namespace mixdp
