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

#include "mixdp/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "mixdp/errors.h"

namespace mixdp {
namespace {

bool IsPositiveFinite(double x) { return std::isfinite(x) && x > 0.0; }

absl::Status ValidateQuantileLevel(double q) {
  if (!(q > 0.0 && q < 1.0)) {
    return InvalidParameterError(absl::StrCat("q must lie in (0, 1), got ", q));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<PrivacyLevel> PrivacyLevel::Finite(double epsilon) {
  if (!IsPositiveFinite(epsilon)) {
    return InvalidParameterError(
        absl::StrCat("epsilon must be finite and positive, got ", epsilon));
  }
  return PrivacyLevel(epsilon);
}

std::string PrivacyLevel::ToString() const {
  if (is_public()) return "public";
  return absl::StrFormat("%.17g", *epsilon_);
}

DataDomain::DataDomain(double a, double b, double sigma2)
    : a_(a), b_(b), r_(std::max(std::fabs(a), std::fabs(b))), sigma2_(sigma2) {}

absl::StatusOr<DataDomain> DataDomain::Create(double a, double b,
                                              double sigma2) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    return InvalidParameterError(
        absl::StrCat("domain requires finite a < b, got [", a, ", ", b, "]"));
  }
  if (!IsPositiveFinite(sigma2)) {
    return InvalidParameterError(
        absl::StrCat("sigma2 must be finite and positive, got ", sigma2));
  }
  return DataDomain(a, b, sigma2);
}

double DataDomain::Clamp(double x) const { return std::clamp(x, a_, b_); }

std::vector<double> DataDomain::Clamp(std::span<const double> values) const {
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(Clamp(v));
  return out;
}

double LaplaceInverseCdf(double u, double scale) {
  const double centered = u - 0.5;
  if (centered == 0.0) return 0.0;
  const double sign = centered < 0.0 ? -1.0 : 1.0;
  return -scale * sign * std::log1p(-2.0 * std::fabs(centered));
}

absl::StatusOr<double> SampleLaplace(RandomStream& stream, double scale) {
  if (!IsPositiveFinite(scale)) {
    return InvalidParameterError(
        absl::StrCat("Laplace scale must be finite and positive, got ", scale));
  }
  return LaplaceInverseCdf(stream.Uniform(), scale);
}

absl::StatusOr<double> LaplaceMechanism(double value, double sensitivity,
                                        double epsilon, RandomStream& stream) {
  if (!IsPositiveFinite(epsilon)) {
    return InvalidParameterError(
        absl::StrCat("epsilon must be finite and positive, got ", epsilon));
  }
  if (!IsPositiveFinite(sensitivity)) {
    return InvalidParameterError(absl::StrCat(
        "sensitivity must be finite and positive, got ", sensitivity));
  }
  MIXDP_ASSIGN_OR_RETURN(double noise,
                         SampleLaplace(stream, sensitivity / epsilon));
  return value + noise;
}

absl::StatusOr<std::vector<QuantileInterval>> QuantileIntervalDistribution(
    std::span<const double> data, double q, double epsilon,
    const DataDomain& domain) {
  if (data.empty()) return EmptyInputError("quantile of empty data");
  MIXDP_RETURN_IF_ERROR(ValidateQuantileLevel(q));
  if (!IsPositiveFinite(epsilon)) {
    return InvalidParameterError(
        absl::StrCat("epsilon must be finite and positive, got ", epsilon));
  }

  std::vector<double> sorted = domain.Clamp(data);
  std::sort(sorted.begin(), sorted.end());
  const size_t n = sorted.size();
  const double target_rank = q * static_cast<double>(n);

  // Interval i spans [x_(i), x_(i+1)) with x_(0) = a and x_(n+1) = b.
  std::vector<QuantileInterval> intervals(n + 1);
  double max_log_weight = -std::numeric_limits<double>::infinity();
  std::vector<double> log_weights(n + 1);
  for (size_t i = 0; i <= n; ++i) {
    const double lo = i == 0 ? domain.a() : sorted[i - 1];
    const double hi = i == n ? domain.b() : sorted[i];
    const double utility = -std::fabs(static_cast<double>(i) - target_rank);
    intervals[i] = {lo, hi, utility, 0.0};
    const double length = hi - lo;
    log_weights[i] = length > 0.0 ? std::log(length) + 0.5 * epsilon * utility
                                  : -std::numeric_limits<double>::infinity();
    max_log_weight = std::max(max_log_weight, log_weights[i]);
  }

  double total = 0.0;
  for (size_t i = 0; i <= n; ++i) {
    const double w = std::isinf(log_weights[i])
                         ? 0.0
                         : std::exp(log_weights[i] - max_log_weight);
    intervals[i].probability = w;
    total += w;
  }
  for (auto& interval : intervals) interval.probability /= total;
  return intervals;
}

absl::StatusOr<double> ExpMechQuantile(std::span<const double> data, double q,
                                       double epsilon, const DataDomain& domain,
                                       RandomStream& stream) {
  MIXDP_ASSIGN_OR_RETURN(
      std::vector<QuantileInterval> intervals,
      QuantileIntervalDistribution(data, q, epsilon, domain));

  const double u = stream.Uniform();
  double cumulative = 0.0;
  const QuantileInterval* chosen = nullptr;
  for (const auto& interval : intervals) {
    if (interval.probability == 0.0) continue;
    chosen = &interval;
    cumulative += interval.probability;
    if (u < cumulative) break;
  }
  // `chosen` is the last positive-probability interval if rounding left
  // cumulative slightly below u.
  return chosen->lo + stream.Uniform() * (chosen->hi - chosen->lo);
}

absl::StatusOr<double> AmplifiedEpsilon(double epsilon, double p) {
  if (!IsPositiveFinite(epsilon)) {
    return InvalidParameterError(
        absl::StrCat("epsilon must be finite and positive, got ", epsilon));
  }
  if (!(p > 0.0 && p <= 1.0)) {
    return InvalidParameterError(
        absl::StrCat("sampling rate must lie in (0, 1], got ", p));
  }
  return std::log1p(std::expm1(epsilon) / p);
}

absl::StatusOr<double> ExactQuantile(std::span<const double> data, double q) {
  if (data.empty()) return EmptyInputError("quantile of empty data");
  MIXDP_RETURN_IF_ERROR(ValidateQuantileLevel(q));
  const size_t n = data.size();
  // q * n is computed in floating point; nudge down so that exact products
  // such as 0.1 * 30 do not round up to the next rank.
  const double scaled = q * static_cast<double>(n);
  size_t rank = static_cast<size_t>(std::ceil(scaled * (1.0 - 1e-12)));
  rank = std::clamp<size_t>(rank, 1, n);
  std::vector<double> copy(data.begin(), data.end());
  std::nth_element(copy.begin(), copy.begin() + (rank - 1), copy.end());
  return copy[rank - 1];
}

}  // namespace mixdp
