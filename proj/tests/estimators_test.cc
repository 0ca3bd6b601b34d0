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
#include <numeric>
#include <vector>

#include "gtest/gtest.h"
#include "mixdp/analysis.h"
#include "mixdp/errors.h"

namespace mixdp {
namespace {

PrivacyLevel Eps(double e) { return *PrivacyLevel::Finite(e); }

PrivacyGroup Group(size_t n, PrivacyLevel level, double value = 0.0) {
  return *PrivacyGroup::Create(std::vector<double>(n, value), level);
}

DataDomain Fig1Domain() { return *DataDomain::Create(-20, 20, 25); }

TEST(PrivacyGroupTest, RejectsEmpty) {
  EXPECT_TRUE(IsEmptyInput(PrivacyGroup::Create({}, Eps(1)).status()));
}

TEST(PrivacyGroupTest, ClampedSum) {
  const DataDomain d = *DataDomain::Create(-1, 1, 1);
  const PrivacyGroup g = *PrivacyGroup::Create({-3, 0.5, 2}, Eps(1));
  EXPECT_DOUBLE_EQ(g.ClampedSum(d), 0.5);
}

TEST(GroupVarianceTest, PublicDropsNoiseTerm) {
  EXPECT_DOUBLE_EQ(GroupVariance(Group(100, PrivacyLevel::Public()), Fig1Domain()),
                   0.25);
}

TEST(GroupVarianceTest, PrivateExamples) {
  EXPECT_DOUBLE_EQ(GroupVariance(Group(100, Eps(0.1)), Fig1Domain()), 8.25);
  EXPECT_DOUBLE_EQ(GroupVariance(1, Eps(1), *DataDomain::Create(-1, 1, 1)), 3.0);
}

TEST(OptimalWeightsTest, IdenticalGroupsSplitEvenly) {
  const std::vector<PrivacyGroup> groups = {Group(50, Eps(0.3)),
                                            Group(50, Eps(0.3))};
  const MixWeights w = *OptimalWeights(groups, Fig1Domain());
  EXPECT_DOUBLE_EQ(w[0], 0.5);
  EXPECT_DOUBLE_EQ(w[1], 0.5);
}

TEST(OptimalWeightsTest, PublicGroupsWeightBySize) {
  const std::vector<PrivacyGroup> groups = {Group(100, PrivacyLevel::Public()),
                                            Group(300, PrivacyLevel::Public())};
  const MixWeights w = *OptimalWeights(groups, Fig1Domain());
  EXPECT_DOUBLE_EQ(w[0], 0.25);
  EXPECT_DOUBLE_EQ(w[1], 0.75);
}

TEST(OptimalWeightsTest, PublicPlusPrivateMatchesClosedFormAndGridSearch) {
  const std::vector<PrivacyGroup> groups = {Group(100, PrivacyLevel::Public()),
                                            Group(100, Eps(0.1))};
  const MixWeights w = *OptimalWeights(groups, Fig1Domain());
  // beta_tilde = (4, 1 / 8.25): 4 / (4 + 1 / 8.25) = 0.97058823529...
  EXPECT_NEAR(w[0], 0.970588235294117647, 1e-15);
  EXPECT_NEAR(w[1], 0.029411764705882353, 1e-15);

  // Grid search over beta minimizing beta^2 Var_1 + (1 - beta)^2 Var_2.
  double best_beta = 0.0, best = 1e300;
  for (int i = 0; i <= 100000; ++i) {
    const double beta = i / 100000.0;
    const double v = beta * beta * 0.25 + (1 - beta) * (1 - beta) * 8.25;
    if (v < best) {
      best = v;
      best_beta = beta;
    }
  }
  EXPECT_NEAR(w[0], best_beta, 1e-5);
}

TEST(OptimalWeightsTest, EmptyGroupList) {
  EXPECT_TRUE(IsEmptyInput(
      OptimalWeights(std::vector<PrivacyGroup>{}, Fig1Domain()).status()));
}

TEST(MixWeightsTest, InvariantToCommonScaling) {
  const std::vector<double> raw = {4.0, 1.0 / 8.25, 17.0};
  const MixWeights base = *MixWeights::Normalize(raw);
  for (double c : {1e-6, 0.5, 3.0, 1e8}) {
    std::vector<double> scaled;
    for (double x : raw) scaled.push_back(c * x);
    const MixWeights w = *MixWeights::Normalize(scaled);
    for (size_t i = 0; i < raw.size(); ++i) EXPECT_NEAR(w[i], base[i], 1e-15);
  }
}

TEST(MixWeightsTest, RejectsBadInput) {
  EXPECT_TRUE(IsInvalidParameter(
      MixWeights::Normalize(std::vector<double>{-1, 2}).status()));
  EXPECT_TRUE(IsInvalidParameter(
      MixWeights::Normalize(std::vector<double>{0, 0}).status()));
  EXPECT_TRUE(IsEmptyInput(MixWeights::Normalize(std::vector<double>{}).status()));
}

TEST(JointVarianceTest, SingleGroup) {
  const std::vector<PrivacyGroup> groups = {Group(37, Eps(0.4))};
  const MixWeights w = *MixWeights::Normalize(std::vector<double>{1.0});
  EXPECT_DOUBLE_EQ(*JointVariance(w, groups, Fig1Domain()),
                   GroupVariance(groups[0], Fig1Domain()));
}

TEST(JointVarianceTest, OptimalAndUniformWeights) {
  const std::vector<PrivacyGroup> groups = {Group(100, PrivacyLevel::Public()),
                                            Group(100, Eps(0.1))};
  const MixWeights opt = *OptimalWeights(groups, Fig1Domain());
  const double optimal = *JointVariance(opt, groups, Fig1Domain());
  // Harmonic form 1 / (4 + 1 / 8.25).
  EXPECT_NEAR(optimal, 0.242647058823529412, 1e-15);

  const MixWeights uniform = *MixWeights::Normalize(std::vector<double>{1, 1});
  const double flat = *JointVariance(uniform, groups, Fig1Domain());
  EXPECT_DOUBLE_EQ(flat, 2.125);
  EXPECT_GT(flat, optimal);
}

TEST(JointVarianceTest, LengthMismatch) {
  const std::vector<PrivacyGroup> groups = {Group(10, Eps(1))};
  const MixWeights w = *MixWeights::Normalize(std::vector<double>{1, 1});
  EXPECT_TRUE(IsInvalidParameter(JointVariance(w, groups, Fig1Domain()).status()));
}

// Random group configurations for the property tests below.
std::vector<PrivacyGroup> RandomGroups(RandomStream& s, size_t k) {
  std::vector<PrivacyGroup> groups;
  for (size_t i = 0; i < k; ++i) {
    const size_t n = 1 + s.UniformIndex(5000);
    const PrivacyLevel level = s.Uniform() < 0.2
                                   ? PrivacyLevel::Public()
                                   : Eps(std::exp(-5 + 7 * s.Uniform()));
    groups.push_back(Group(n, level));
  }
  return groups;
}

TEST(JointVarianceTest, HarmonicIdentityOnRandomConfigurations) {
  RandomStream s(31, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto groups = RandomGroups(s, 1 + s.UniformIndex(8));
    const DataDomain domain =
        *DataDomain::Create(-1 - 30 * s.Uniform(), 1 + 30 * s.Uniform(),
                            0.1 + 50 * s.Uniform());
    const double joint =
        *JointVariance(*OptimalWeights(groups, domain), groups, domain);
    double inverse_total = 0.0;
    for (const auto& g : groups) inverse_total += 1.0 / GroupVariance(g, domain);
    ASSERT_NEAR(joint, 1.0 / inverse_total, 1e-9 / inverse_total);
  }
}

TEST(OptimalWeightsTest, AnyFeasiblePerturbationIncreasesVariance) {
  RandomStream s(47, 0);
  for (int config = 0; config < 50; ++config) {
    const size_t k = 2 + s.UniformIndex(5);
    const auto groups = RandomGroups(s, k);
    const DataDomain domain = Fig1Domain();
    const MixWeights opt = *OptimalWeights(groups, domain);
    const double best = *JointVariance(opt, groups, domain);
    for (int p = 0; p < 100; ++p) {
      // Zero-sum direction keeps the weights summing to one; the step is
      // shrunk until the weights stay nonnegative.
      std::vector<double> delta(k);
      double mean = 0.0;
      for (double& d : delta) {
        d = s.Uniform() - 0.5;
        mean += d / k;
      }
      for (double& d : delta) d -= mean;
      double step = 0.5;
      std::vector<double> beta(k);
      for (int tries = 0; tries < 60; ++tries) {
        bool ok = true;
        for (size_t i = 0; i < k; ++i) {
          beta[i] = opt[i] + step * delta[i];
          ok &= beta[i] >= 0.0;
        }
        if (ok) break;
        step /= 2;
      }
      double perturbed = 0.0;
      for (size_t i = 0; i < k; ++i) {
        perturbed += beta[i] * beta[i] * GroupVariance(groups[i], domain);
      }
      ASSERT_GT(perturbed, best);
    }
  }
}

TEST(MixedMeanTest, SinglePublicGroupIsExact) {
  const DataDomain domain = Fig1Domain();
  const std::vector<PrivacyGroup> groups = {
      *PrivacyGroup::Create({1, 2, 3}, PrivacyLevel::Public())};
  RandomStream s(1, 1);
  const Estimate e = *MixedMean(groups, domain, s);
  EXPECT_EQ(e.value, 2.0);
  ASSERT_TRUE(e.theoretical_variance.has_value());
  EXPECT_DOUBLE_EQ(*e.theoretical_variance, 25.0 / 3.0);
}

TEST(MixedMeanTest, AllPublicGivesGrandMean) {
  RandomStream s(12, 0);
  const DataDomain domain = Fig1Domain();
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<PrivacyGroup> groups;
    double total = 0.0;
    size_t count = 0;
    const size_t k = 1 + s.UniformIndex(6);
    for (size_t i = 0; i < k; ++i) {
      std::vector<double> values(1 + s.UniformIndex(300));
      for (double& v : values) {
        v = s.Normal(1.0, 5.0);
        total += domain.Clamp(v);
      }
      count += values.size();
      groups.push_back(*PrivacyGroup::Create(values, PrivacyLevel::Public()));
    }
    const Estimate e = *MixedMean(groups, domain, s);
    ASSERT_NEAR(e.value, total / count, 1e-12);
  }
}

TEST(MixedMeanTest, EmptyGroupList) {
  RandomStream s(1, 1);
  EXPECT_TRUE(IsEmptyInput(
      MixedMean(std::vector<PrivacyGroup>{}, Fig1Domain(), s).status()));
}

TEST(MixedMeanTest, DeterministicForAStream) {
  const std::vector<PrivacyGroup> groups = {Group(10, Eps(0.5), 1.0),
                                            Group(20, Eps(2.0), -1.0)};
  RandomStream a(5, 9), b(5, 9), c(5, 10);
  const double x = MixedMean(groups, Fig1Domain(), a)->value;
  EXPECT_EQ(x, MixedMean(groups, Fig1Domain(), b)->value);
  EXPECT_NE(x, MixedMean(groups, Fig1Domain(), c)->value);
}

TEST(MixedMeanTest, UnbiasedOnFixedData) {
  // Fixed data; only the Laplace noise varies across trials.
  const DataDomain domain = *DataDomain::Create(-5, 5, 4);
  RandomStream data(77, 0);
  std::vector<PrivacyGroup> groups;
  const std::vector<PrivacyLevel> levels = {PrivacyLevel::Public(), Eps(0.5),
                                            Eps(2.0)};
  for (size_t i = 0; i < levels.size(); ++i) {
    std::vector<double> values(50 + 25 * i);
    for (double& v : values) v = data.Normal(1.0, 2.0);
    groups.push_back(*PrivacyGroup::Create(values, levels[i]));
  }
  const MixWeights w = *OptimalWeights(groups, domain);
  double target = 0.0;
  double noise_variance = 0.0;
  for (size_t i = 0; i < groups.size(); ++i) {
    const double n = groups[i].size();
    target += w[i] * groups[i].ClampedSum(domain) / n;
    if (!levels[i].is_public()) {
      const double b = domain.r() / levels[i].epsilon();
      noise_variance += w[i] * w[i] * 2 * b * b / (n * n);
    }
  }
  constexpr int kTrials = 100000;
  RandomStream root(78, 0);
  double sum = 0.0;
  for (int t = 0; t < kTrials; ++t) {
    RandomStream s = root.Substream(t);
    sum += MixedMean(groups, domain, s)->value;
  }
  const double standard_error = std::sqrt(noise_variance / kTrials);
  EXPECT_NEAR(sum / kTrials, target, 4 * standard_error);
}

TEST(MixedMeanTest, EmpiricalVarianceMatchesJointVarianceOnFig1Groups) {
  const DataDomain domain = Fig1Domain();
  const std::vector<size_t> sizes = {1000, 100, 500, 1000, 5000, 10000};
  const std::vector<double> eps = {10.0, 0.05, 0.1, 0.01, 0.25, 0.15};
  RandomStream root(2024, 0);
  constexpr int kTrials = 1000;
  std::vector<double> estimates;
  double theoretical = 0.0;
  for (int t = 0; t < kTrials; ++t) {
    RandomStream data = root.Substream(2 * t);
    std::vector<PrivacyGroup> groups;
    for (size_t i = 0; i < sizes.size(); ++i) {
      std::vector<double> values(sizes[i]);
      for (double& v : values) v = domain.Clamp(data.Normal(0.0, 5.0));
      groups.push_back(*PrivacyGroup::Create(values, Eps(eps[i])));
    }
    RandomStream noise = root.Substream(2 * t + 1);
    const Estimate e = *MixedMean(groups, domain, noise);
    estimates.push_back(e.value);
    theoretical = *e.theoretical_variance;
  }
  const double mean =
      std::accumulate(estimates.begin(), estimates.end(), 0.0) / kTrials;
  double ss = 0.0;
  for (double x : estimates) ss += (x - mean) * (x - mean);
  const double empirical = ss / (kTrials - 1);
  EXPECT_NEAR(empirical / theoretical, 1.0, 0.15);
}

TEST(MixedQuantileTest, SinglePublicGroupIsExact) {
  const std::vector<PrivacyGroup> groups = {
      *PrivacyGroup::Create({3, 1, 2}, PrivacyLevel::Public())};
  RandomStream s(1, 1);
  const Estimate e = *MixedQuantile(groups, 0.5, Fig1Domain(), s);
  EXPECT_EQ(e.value, 2.0);
  EXPECT_FALSE(e.theoretical_variance.has_value());
}

TEST(MixedQuantileTest, PublicGroupsCombineExactMedians) {
  const std::vector<PrivacyGroup> groups = {
      *PrivacyGroup::Create({1, 2, 3}, PrivacyLevel::Public()),
      *PrivacyGroup::Create({10, 20, 30, 40, 50, 60, 70, 80, 90},
                            PrivacyLevel::Public())};
  const DataDomain domain = *DataDomain::Create(-100, 100, 1);
  RandomStream s(1, 1);
  // Weights proportional to n: (3, 9) / 12.
  EXPECT_NEAR(MixedQuantile(groups, 0.5, domain, s)->value,
              0.25 * 2 + 0.75 * 50, 1e-12);
}

TEST(MixedQuantileTest, Errors) {
  RandomStream s(1, 1);
  EXPECT_TRUE(IsEmptyInput(
      MixedQuantile(std::vector<PrivacyGroup>{}, 0.5, Fig1Domain(), s).status()));
  const std::vector<PrivacyGroup> groups = {Group(3, Eps(1))};
  EXPECT_TRUE(IsInvalidParameter(
      MixedQuantile(groups, 1.0, Fig1Domain(), s).status()));
}

}  // namespace
}  // namespace mixdp
