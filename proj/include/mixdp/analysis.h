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

#ifndef MIXDP_ANALYSIS_H_
#define MIXDP_ANALYSIS_H_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "mixdp/estimators.h"
#include "mixdp/mechanisms.h"

namespace mixdp {

// A variance as a function of one parameter (sampling rate p, threshold t).
class VarianceCurve {
 public:
  // Grid must be strictly increasing, both lists the same nonzero length,
  // and every variance finite and nonnegative.
  static absl::StatusOr<VarianceCurve> Create(std::string parameter,
                                              std::vector<double> grid,
                                              std::vector<double> variance);

  const std::string& parameter() const { return parameter_; }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& variance() const { return variance_; }

  // Grid value with the smallest variance (first one on ties).
  double Argmin() const;

 private:
  VarianceCurve(std::string parameter, std::vector<double> grid,
                std::vector<double> variance)
      : parameter_(std::move(parameter)),
        grid_(std::move(grid)),
        variance_(std::move(variance)) {}
  std::string parameter_;
  std::vector<double> grid_;
  std::vector<double> variance_;
};

// Variance of the Laplace mean of an m-point private sample subsampled at
// rate p. Without amplification the noise uses epsilon / p, which gives
//   sigma^2 / (m p) + 2 r^2 / (epsilon^2 m^2).
// With amplification the noise uses AmplifiedEpsilon(epsilon, p) instead.
absl::StatusOr<double> SubsampledMeanVariance(size_t m, double p, double sigma2,
                                              double r, double epsilon,
                                              bool use_amplification);

// Expected-sample-size approximation of the Sample mechanism's variance at
// threshold t:
//   (sum_i n_i p_i sigma^2 + 2 r^2 / t^2) / (sum_i n_i p_i)^2
// with p_i = InclusionProbability(epsilon_i, t).
absl::StatusOr<double> PredictedPdpVariance(std::span<const size_t> sizes,
                                            std::span<const PrivacyLevel> levels,
                                            double t, const DataDomain& domain);
absl::StatusOr<double> PredictedPdpVariance(std::span<const PrivacyGroup> groups,
                                            double t, const DataDomain& domain);

// Minimizes f on [lo, hi] by golden-section search down to `tolerance`.
// f is assumed unimodal on the interval.
double GoldenSectionMinimize(const std::function<double(double)>& f, double lo,
                             double hi, double tolerance);

// Threshold minimizing PredictedPdpVariance over [min epsilon, max epsilon]
// of the finite epsilons, to within 1e-4. A coarse log-spaced scan brackets
// the minimum before the golden-section refinement, so a kinked objective
// does not trap the search in the wrong piece.
absl::StatusOr<double> OptimizedThreshold(std::span<const size_t> sizes,
                                          std::span<const PrivacyLevel> levels,
                                          const DataDomain& domain);

// Exhaustive simplex-grid minimizer of sum_i beta_i^2 Var_i for 2 or 3
// groups; test oracle for OptimalWeights.
absl::StatusOr<std::vector<double>> BruteForceOptimalWeights(
    std::span<const double> group_variances, size_t grid_resolution);

// SubsampledMeanVariance over a grid of sampling rates.
absl::StatusOr<VarianceCurve> SubsamplingCurve(size_t m, double sigma2,
                                               double r, double epsilon,
                                               bool use_amplification,
                                               std::vector<double> p_grid);

// PredictedPdpVariance over a grid of thresholds.
absl::StatusOr<VarianceCurve> ThresholdCurve(std::span<const size_t> sizes,
                                             std::span<const PrivacyLevel> levels,
                                             const DataDomain& domain,
                                             std::vector<double> t_grid);

// n points log-spaced over [lo, hi] (n >= 2, 0 < lo < hi).
std::vector<double> LogSpace(double lo, double hi, size_t n);

}  // namespace mixdp

#endif  // MIXDP_ANALYSIS_H_
