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

#ifndef MIXDP_MECHANISMS_H_
#define MIXDP_MECHANISMS_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "mixdp/random_stream.h"

namespace mixdp {

// Privacy parameter of one group: either a finite epsilon > 0 or Public
// (epsilon = infinity). Public is a distinct state, never a floating-point
// infinity, so no code path ever builds a zero-scale noise distribution.
class PrivacyLevel {
 public:
  static PrivacyLevel Public() { return PrivacyLevel(std::nullopt); }
  static absl::StatusOr<PrivacyLevel> Finite(double epsilon);

  bool is_public() const { return !epsilon_.has_value(); }
  // Requires !is_public().
  double epsilon() const { return *epsilon_; }

  std::string ToString() const;

  friend bool operator==(const PrivacyLevel&, const PrivacyLevel&) = default;

 private:
  explicit PrivacyLevel(std::optional<double> epsilon) : epsilon_(epsilon) {}
  std::optional<double> epsilon_;
};

// Value range [a, b] of the data, its sensitivity radius r = max(|a|, |b|)
// and the assumed (known) data variance.
class DataDomain {
 public:
  static absl::StatusOr<DataDomain> Create(double a, double b, double sigma2);

  double a() const { return a_; }
  double b() const { return b_; }
  double r() const { return r_; }
  double sigma2() const { return sigma2_; }

  double Clamp(double x) const;
  std::vector<double> Clamp(std::span<const double> values) const;

 private:
  DataDomain(double a, double b, double sigma2);
  double a_;
  double b_;
  double r_;
  double sigma2_;
};

// Inverse CDF of Laplace(0, scale) at u in (0, 1), in sign-log form.
double LaplaceInverseCdf(double u, double scale);

// One Laplace(0, scale) draw from a single uniform of `stream`.
absl::StatusOr<double> SampleLaplace(RandomStream& stream, double scale);

// Releases value + Lap(sensitivity / epsilon).
absl::StatusOr<double> LaplaceMechanism(double value, double sensitivity,
                                        double epsilon, RandomStream& stream);

// One candidate interval of the exponential-mechanism quantile and its
// selection probability.
struct QuantileInterval {
  double lo;
  double hi;
  double utility;
  double probability;
};

// Selection distribution over the n + 1 intervals between consecutive
// order statistics of the clamped data (with a and b as sentinels). Interval
// i has utility -|i - q n| and weight length * exp(epsilon * utility / 2).
// Zero-length intervals get probability exactly 0.
absl::StatusOr<std::vector<QuantileInterval>> QuantileIntervalDistribution(
    std::span<const double> data, double q, double epsilon,
    const DataDomain& domain);

// epsilon-DP quantile via the exponential mechanism: picks an interval from
// QuantileIntervalDistribution and returns a uniform point inside it.
absl::StatusOr<double> ExpMechQuantile(std::span<const double> data, double q,
                                       double epsilon, const DataDomain& domain,
                                       RandomStream& stream);

// Effective epsilon after Poisson subsampling at rate p:
// ln(1 + (e^epsilon - 1) / p).
absl::StatusOr<double> AmplifiedEpsilon(double epsilon, double p);

// Non-private order statistic of rank ceil(q n) (1-indexed).
absl::StatusOr<double> ExactQuantile(std::span<const double> data, double q);

}  // namespace mixdp

#endif  // MIXDP_MECHANISMS_H_
