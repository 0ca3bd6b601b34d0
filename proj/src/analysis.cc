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

#include "mixdp/analysis.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "mixdp/baselines.h"
#include "mixdp/errors.h"

namespace mixdp {

absl::StatusOr<VarianceCurve> VarianceCurve::Create(
    std::string parameter, std::vector<double> grid,
    std::vector<double> variance) {
  if (grid.empty() || grid.size() != variance.size()) {
    return InvalidParameterError(absl::StrCat(
        "curve needs matching nonempty lists, got ", grid.size(), " and ",
        variance.size()));
  }
  for (size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      return InvalidParameterError("curve grid must be strictly increasing");
    }
  }
  for (double v : variance) {
    if (!std::isfinite(v) || v < 0.0) {
      return InvalidParameterError(absl::StrCat("bad curve variance ", v));
    }
  }
  return VarianceCurve(std::move(parameter), std::move(grid),
                       std::move(variance));
}

double VarianceCurve::Argmin() const {
  const auto it = std::min_element(variance_.begin(), variance_.end());
  return grid_[static_cast<size_t>(it - variance_.begin())];
}

absl::StatusOr<double> SubsampledMeanVariance(size_t m, double p, double sigma2,
                                              double r, double epsilon,
                                              bool use_amplification) {
  if (!(p > 0.0 && p <= 1.0)) {
    return InvalidParameterError(
        absl::StrCat("sampling rate must lie in (0, 1], got ", p));
  }
  if (m == 0) return InvalidParameterError("sample size must be positive");
  if (!std::isfinite(epsilon) || epsilon <= 0.0) {
    return InvalidParameterError(
        absl::StrCat("epsilon must be finite and positive, got ", epsilon));
  }
  const double expected = static_cast<double>(m) * p;
  double effective_epsilon = epsilon / p;
  if (use_amplification) {
    MIXDP_ASSIGN_OR_RETURN(effective_epsilon, AmplifiedEpsilon(epsilon, p));
  }
  const double scale = r / effective_epsilon;
  return sigma2 / expected + 2.0 * scale * scale / (expected * expected);
}

absl::StatusOr<double> PredictedPdpVariance(std::span<const size_t> sizes,
                                            std::span<const PrivacyLevel> levels,
                                            double t, const DataDomain& domain) {
  if (sizes.size() != levels.size()) {
    return InvalidParameterError("sizes and privacy levels differ in length");
  }
  double expected = 0.0;
  for (size_t i = 0; i < sizes.size(); ++i) {
    MIXDP_ASSIGN_OR_RETURN(double p, InclusionProbability(levels[i], t));
    expected += static_cast<double>(sizes[i]) * p;
  }
  if (!(expected > 0.0)) {
    return InvalidParameterError("expected sample size is zero");
  }
  const double scale = domain.r() / t;
  return (expected * domain.sigma2() + 2.0 * scale * scale) /
         (expected * expected);
}

absl::StatusOr<double> PredictedPdpVariance(std::span<const PrivacyGroup> groups,
                                            double t, const DataDomain& domain) {
  std::vector<size_t> sizes;
  std::vector<PrivacyLevel> levels;
  for (const auto& g : groups) {
    sizes.push_back(g.size());
    levels.push_back(g.privacy());
  }
  return PredictedPdpVariance(sizes, levels, t, domain);
}

double GoldenSectionMinimize(const std::function<double(double)>& f, double lo,
                             double hi, double tolerance) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > tolerance) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  return 0.5 * (lo + hi);
}

absl::StatusOr<double> OptimizedThreshold(std::span<const size_t> sizes,
                                          std::span<const PrivacyLevel> levels,
                                          const DataDomain& domain) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& level : levels) {
    if (level.is_public()) continue;
    lo = std::min(lo, level.epsilon());
    hi = std::max(hi, level.epsilon());
  }
  if (!(hi > 0.0)) {
    return InvalidParameterError("threshold needs at least one finite epsilon");
  }
  if (lo == hi) return lo;

  // The objective is well defined for every t > 0, so errors cannot occur
  // past the validation above; a failed evaluation is treated as +inf.
  auto objective = [&](double t) {
    auto v = PredictedPdpVariance(sizes, levels, t, domain);
    return v.ok() ? *v : std::numeric_limits<double>::infinity();
  };

  constexpr size_t kScanPoints = 200;
  const std::vector<double> grid = LogSpace(lo, hi, kScanPoints);
  size_t best = 0;
  double best_value = objective(grid[0]);
  for (size_t k = 1; k < grid.size(); ++k) {
    const double v = objective(grid[k]);
    if (v < best_value) {
      best = k;
      best_value = v;
    }
  }
  const double bracket_lo = grid[best == 0 ? 0 : best - 1];
  const double bracket_hi = grid[std::min(best + 1, grid.size() - 1)];
  double t = GoldenSectionMinimize(objective, bracket_lo, bracket_hi, 1e-4);
  double t_value = objective(t);

  // Kinks of the objective sit at the group epsilons; check them directly.
  for (const auto& level : levels) {
    if (level.is_public()) continue;
    const double v = objective(level.epsilon());
    if (v < t_value) {
      t = level.epsilon();
      t_value = v;
    }
  }
  return t;
}

absl::StatusOr<std::vector<double>> BruteForceOptimalWeights(
    std::span<const double> group_variances, size_t grid_resolution) {
  const size_t k = group_variances.size();
  if (k < 2 || k > 3) {
    return UnsupportedError(
        absl::StrCat("brute-force weights support 2 or 3 groups, got ", k));
  }
  if (grid_resolution < 100) {
    return InvalidParameterError("grid resolution must be at least 100");
  }
  for (double v : group_variances) {
    if (!std::isfinite(v) || v <= 0.0) {
      return InvalidParameterError(absl::StrCat("bad group variance ", v));
    }
  }
  const double step = 1.0 / static_cast<double>(grid_resolution);
  std::vector<double> best(k, 0.0);
  double best_value = std::numeric_limits<double>::infinity();
  auto consider = [&](const std::vector<double>& beta) {
    double value = 0.0;
    for (size_t i = 0; i < k; ++i) value += beta[i] * beta[i] * group_variances[i];
    if (value < best_value) {
      best_value = value;
      best = beta;
    }
  };
  std::vector<double> beta(k);
  for (size_t i = 0; i <= grid_resolution; ++i) {
    beta[0] = static_cast<double>(i) * step;
    if (k == 2) {
      beta[1] = 1.0 - beta[0];
      consider(beta);
      continue;
    }
    for (size_t j = 0; i + j <= grid_resolution; ++j) {
      beta[1] = static_cast<double>(j) * step;
      beta[2] = 1.0 - beta[0] - beta[1];
      consider(beta);
    }
  }
  return best;
}

absl::StatusOr<VarianceCurve> SubsamplingCurve(size_t m, double sigma2,
                                               double r, double epsilon,
                                               bool use_amplification,
                                               std::vector<double> p_grid) {
  std::vector<double> variance;
  variance.reserve(p_grid.size());
  for (double p : p_grid) {
    MIXDP_ASSIGN_OR_RETURN(
        double v, SubsampledMeanVariance(m, p, sigma2, r, epsilon,
                                         use_amplification));
    variance.push_back(v);
  }
  return VarianceCurve::Create("p", std::move(p_grid), std::move(variance));
}

absl::StatusOr<VarianceCurve> ThresholdCurve(std::span<const size_t> sizes,
                                             std::span<const PrivacyLevel> levels,
                                             const DataDomain& domain,
                                             std::vector<double> t_grid) {
  std::vector<double> variance;
  variance.reserve(t_grid.size());
  for (double t : t_grid) {
    MIXDP_ASSIGN_OR_RETURN(double v,
                           PredictedPdpVariance(sizes, levels, t, domain));
    variance.push_back(v);
  }
  return VarianceCurve::Create("t", std::move(t_grid), std::move(variance));
}

std::vector<double> LogSpace(double lo, double hi, size_t n) {
  std::vector<double> out(n);
  const double log_lo = std::log(lo);
  const double step = (std::log(hi) - log_lo) / static_cast<double>(n - 1);
  for (size_t i = 0; i < n; ++i) {
    out[i] = std::exp(log_lo + step * static_cast<double>(i));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace mixdp
