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

#include "mixdp/baselines.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/strip.h"
#include "mixdp/analysis.h"
#include "mixdp/errors.h"

namespace mixdp {
namespace {

std::vector<size_t> SizesOf(std::span<const PrivacyGroup> groups) {
  std::vector<size_t> sizes;
  for (const auto& g : groups) sizes.push_back(g.size());
  return sizes;
}

std::vector<PrivacyLevel> LevelsOf(std::span<const PrivacyGroup> groups) {
  std::vector<PrivacyLevel> levels;
  for (const auto& g : groups) levels.push_back(g.privacy());
  return levels;
}

// Pools the clamped values of every included point.
std::vector<double> PooledSample(std::span<const PrivacyGroup> groups,
                                 const SampleOutcome& outcome,
                                 const DataDomain& domain) {
  std::vector<double> pooled;
  pooled.reserve(outcome.total_sampled());
  for (size_t i = 0; i < groups.size(); ++i) {
    const auto& values = groups[i].values();
    for (size_t j = 0; j < values.size(); ++j) {
      if (outcome.included[i][j]) pooled.push_back(domain.Clamp(values[j]));
    }
  }
  return pooled;
}

}  // namespace

absl::StatusOr<ThresholdStrategy> ThresholdStrategy::Fixed(double t) {
  if (!std::isfinite(t) || t <= 0.0) {
    return InvalidParameterError(
        absl::StrCat("fixed threshold must be finite and positive, got ", t));
  }
  return ThresholdStrategy(Kind::kFixed, t);
}

absl::StatusOr<ThresholdStrategy> ThresholdStrategy::Parse(
    absl::string_view text) {
  if (text == "min") return Min();
  if (text == "average") return Average();
  if (text == "max") return Max();
  if (text == "optimized") return Optimized();
  if (absl::ConsumePrefix(&text, "fixed=")) {
    double t = 0.0;
    if (!absl::SimpleAtod(text, &t)) {
      return InvalidParameterError(absl::StrCat("bad fixed threshold '", text, "'"));
    }
    return Fixed(t);
  }
  return InvalidParameterError(
      absl::StrCat("unknown threshold strategy '", text, "'"));
}

std::string ThresholdStrategy::ToString() const {
  switch (kind_) {
    case Kind::kMin:
      return "min";
    case Kind::kAverage:
      return "average";
    case Kind::kMax:
      return "max";
    case Kind::kOptimized:
      return "optimized";
    case Kind::kFixed:
      return absl::StrFormat("fixed=%g", fixed_t_);
  }
  return "unknown";
}

size_t SampleOutcome::total_sampled() const {
  size_t total = 0;
  for (size_t c : sampled_counts) total += c;
  return total;
}

absl::StatusOr<double> InclusionProbability(const PrivacyLevel& privacy,
                                            double t) {
  if (!std::isfinite(t) || t <= 0.0) {
    return InvalidParameterError(
        absl::StrCat("threshold must be finite and positive, got ", t));
  }
  if (privacy.is_public() || privacy.epsilon() >= t) return 1.0;
  return std::min(1.0, std::expm1(privacy.epsilon()) / std::expm1(t));
}

absl::StatusOr<double> SelectThreshold(const ThresholdStrategy& strategy,
                                       std::span<const size_t> sizes,
                                       std::span<const PrivacyLevel> levels,
                                       const DataDomain& domain) {
  if (sizes.size() != levels.size()) {
    return InvalidParameterError("sizes and privacy levels differ in length");
  }
  if (strategy.kind() == ThresholdStrategy::Kind::kFixed) {
    return strategy.fixed_t();
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  double sum = 0.0;
  size_t finite = 0;
  bool has_public = false;
  for (const auto& level : levels) {
    if (level.is_public()) {
      has_public = true;
      continue;
    }
    lo = std::min(lo, level.epsilon());
    hi = std::max(hi, level.epsilon());
    sum += level.epsilon();
    ++finite;
  }
  if (finite == 0) {
    return InvalidParameterError("threshold needs at least one finite epsilon");
  }
  switch (strategy.kind()) {
    case ThresholdStrategy::Kind::kMin:
      return lo;
    case ThresholdStrategy::Kind::kAverage:
      return sum / static_cast<double>(finite);
    case ThresholdStrategy::Kind::kMax:
      if (has_public) {
        return InvalidParameterError(
            "max threshold is undefined when a public group is present");
      }
      return hi;
    case ThresholdStrategy::Kind::kOptimized:
      return OptimizedThreshold(sizes, levels, domain);
    case ThresholdStrategy::Kind::kFixed:
      break;
  }
  return strategy.fixed_t();
}

absl::StatusOr<double> SelectThreshold(const ThresholdStrategy& strategy,
                                       std::span<const PrivacyGroup> groups,
                                       const DataDomain& domain) {
  if (groups.empty()) return EmptyInputError("no groups");
  const std::vector<size_t> sizes = SizesOf(groups);
  const std::vector<PrivacyLevel> levels = LevelsOf(groups);
  return SelectThreshold(strategy, sizes, levels, domain);
}

absl::StatusOr<SampleOutcome> SamplePoints(std::span<const PrivacyGroup> groups,
                                           double t, RandomStream& stream) {
  SampleOutcome outcome;
  outcome.t = t;
  outcome.included.resize(groups.size());
  outcome.sampled_counts.assign(groups.size(), 0);
  for (size_t i = 0; i < groups.size(); ++i) {
    MIXDP_ASSIGN_OR_RETURN(double p,
                           InclusionProbability(groups[i].privacy(), t));
    auto& flags = outcome.included[i];
    flags.resize(groups[i].size());
    if (p >= 1.0) {
      std::fill(flags.begin(), flags.end(), true);
      outcome.sampled_counts[i] = flags.size();
      continue;
    }
    RandomStream group_stream = stream.Substream(i);
    for (size_t j = 0; j < flags.size(); ++j) {
      flags[j] = group_stream.Bernoulli(p);
      if (flags[j]) ++outcome.sampled_counts[i];
    }
  }
  return outcome;
}

absl::StatusOr<Estimate> PdpSampleMean(std::span<const PrivacyGroup> groups,
                                       const ThresholdStrategy& strategy,
                                       const DataDomain& domain,
                                       RandomStream& stream) {
  MIXDP_ASSIGN_OR_RETURN(double t, SelectThreshold(strategy, groups, domain));
  MIXDP_ASSIGN_OR_RETURN(SampleOutcome outcome, SamplePoints(groups, t, stream));
  const size_t sampled = outcome.total_sampled();
  if (sampled == 0) {
    return DegenerateSampleError(
        absl::StrCat("no points sampled at threshold t = ", t));
  }
  double sum = 0.0;
  for (size_t i = 0; i < groups.size(); ++i) {
    const auto& values = groups[i].values();
    for (size_t j = 0; j < values.size(); ++j) {
      if (outcome.included[i][j]) sum += domain.Clamp(values[j]);
    }
  }
  MIXDP_ASSIGN_OR_RETURN(double noise, SampleLaplace(stream, domain.r() / t));
  return Estimate{(sum + noise) / static_cast<double>(sampled), std::nullopt};
}

absl::StatusOr<Estimate> PdpSampleQuantile(std::span<const PrivacyGroup> groups,
                                           double q,
                                           const ThresholdStrategy& strategy,
                                           const DataDomain& domain,
                                           RandomStream& stream) {
  MIXDP_ASSIGN_OR_RETURN(double t, SelectThreshold(strategy, groups, domain));
  MIXDP_ASSIGN_OR_RETURN(SampleOutcome outcome, SamplePoints(groups, t, stream));
  if (outcome.total_sampled() == 0) {
    return DegenerateSampleError(
        absl::StrCat("no points sampled at threshold t = ", t));
  }
  const std::vector<double> pooled = PooledSample(groups, outcome, domain);
  MIXDP_ASSIGN_OR_RETURN(double value,
                         ExpMechQuantile(pooled, q, t, domain, stream));
  return Estimate{value, std::nullopt};
}

}  // namespace mixdp
