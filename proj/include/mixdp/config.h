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

#ifndef MIXDP_CONFIG_H_
#define MIXDP_CONFIG_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include "absl/strings/string_view.h"
#include <vector>

#include "absl/status/statusor.h"
#include "mixdp/harness.h"
#include "mixdp/mechanisms.h"

namespace mixdp {

// Flat `key = value` text file. Lines starting with '#' are comments, list
// values are comma-separated. Each key may appear once.
class KeyValueConfig {
 public:
  static absl::StatusOr<KeyValueConfig> Parse(absl::string_view text);

  bool Has(absl::string_view key) const;

  // Typed getters fail with an invalid-parameter error on malformed values.
  absl::StatusOr<std::optional<std::string>> GetString(absl::string_view key) const;
  absl::StatusOr<std::optional<double>> GetDouble(absl::string_view key) const;
  absl::StatusOr<std::optional<uint64_t>> GetUint(absl::string_view key) const;
  absl::StatusOr<std::optional<std::vector<std::string>>> GetList(
      absl::string_view key) const;
  absl::StatusOr<std::optional<std::vector<double>>> GetDoubleList(
      absl::string_view key) const;

  // Fails if any key is not in `known`.
  absl::Status CheckKnownKeys(const std::set<std::string>& known) const;

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

// Privacy level from "public", "inf" or a positive number.
absl::StatusOr<PrivacyLevel> ParsePrivacyLevel(absl::string_view text);

// High/low privacy pair of the two-group median experiment.
struct PrivacyScenario {
  PrivacyLevel high;
  PrivacyLevel low;
  // e.g. "eps_h=0.1;eps_l=1"
  std::string Label() const;
};

// Everything a config file can describe. Experiment fields map onto
// ExperimentConfig; the remainder drives the median scenarios and the
// variance-curve subcommand.
struct ToolConfig {
  ExperimentConfig experiment;
  bool methods_given = false;
  std::vector<PrivacyScenario> scenarios;
  size_t subsample_m = 1000;
  double subsample_epsilon = 0.1;
  std::vector<double> p_grid;
  size_t t_grid_points = 200;
};

// Parses and type-checks a config. Semantic validation (group counts,
// methods, sweeps) is left to the consumer.
absl::StatusOr<ToolConfig> ParseToolConfig(absl::string_view text);

// The config schema, documented in README.md.
const std::set<std::string>& KnownConfigKeys();

}  // namespace mixdp

#endif  // MIXDP_CONFIG_H_
