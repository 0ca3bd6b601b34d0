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

#include "mixdp/config.h"

#include <cmath>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "mixdp/errors.h"

namespace mixdp {
namespace {

absl::StatusOr<double> ToDouble(absl::string_view key, absl::string_view text) {
  double x = 0.0;
  if (!absl::SimpleAtod(text, &x)) {
    return InvalidParameterError(
        absl::StrCat("key '", key, "': '", text, "' is not a number"));
  }
  return x;
}

absl::StatusOr<Sweep> ParseSweep(absl::string_view text) {
  Sweep sweep;
  if (absl::ConsumePrefix(&text, "n[")) {
    sweep.kind = Sweep::Kind::kGroupSize;
  } else if (absl::ConsumePrefix(&text, "share[")) {
    sweep.kind = Sweep::Kind::kShare;
  } else {
    return InvalidParameterError(
        absl::StrCat("sweep must be n[<group>] or share[<group>], got '",
                     text, "'"));
  }
  uint64_t group = 0;
  if (!absl::ConsumeSuffix(&text, "]") || !absl::SimpleAtoi(text, &group)) {
    return InvalidParameterError("malformed sweep group index");
  }
  sweep.group = static_cast<size_t>(group);
  return sweep;
}

absl::StatusOr<PrivacyScenario> ParseScenario(absl::string_view text) {
  std::vector<absl::string_view> parts = absl::StrSplit(text, ':');
  if (parts.size() != 2) {
    return InvalidParameterError(absl::StrCat(
        "scenario must be <eps_high>:<eps_low>, got '", text, "'"));
  }
  MIXDP_ASSIGN_OR_RETURN(PrivacyLevel high, ParsePrivacyLevel(parts[0]));
  MIXDP_ASSIGN_OR_RETURN(PrivacyLevel low, ParsePrivacyLevel(parts[1]));
  return PrivacyScenario{high, low};
}

}  // namespace

absl::StatusOr<KeyValueConfig> KeyValueConfig::Parse(absl::string_view text) {
  KeyValueConfig config;
  int line_number = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_number;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty() || line.front() == '#') continue;
    const size_t eq = line.find('=');
    if (eq == absl::string_view::npos) {
      return InvalidParameterError(
          absl::StrCat("line ", line_number, ": expected key = value"));
    }
    std::string key(absl::StripAsciiWhitespace(line.substr(0, eq)));
    std::string value(absl::StripAsciiWhitespace(line.substr(eq + 1)));
    if (key.empty()) {
      return InvalidParameterError(
          absl::StrCat("line ", line_number, ": empty key"));
    }
    if (!config.entries_.emplace(key, std::move(value)).second) {
      return InvalidParameterError(
          absl::StrCat("line ", line_number, ": duplicate key '", key, "'"));
    }
  }
  return config;
}

bool KeyValueConfig::Has(absl::string_view key) const {
  return entries_.find(key) != entries_.end();
}

absl::StatusOr<std::optional<std::string>> KeyValueConfig::GetString(
    absl::string_view key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::optional<std::string>();
  return std::optional<std::string>(it->second);
}

absl::StatusOr<std::optional<double>> KeyValueConfig::GetDouble(
    absl::string_view key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::optional<double>();
  MIXDP_ASSIGN_OR_RETURN(double x, ToDouble(key, it->second));
  return std::optional<double>(x);
}

absl::StatusOr<std::optional<uint64_t>> KeyValueConfig::GetUint(
    absl::string_view key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::optional<uint64_t>();
  uint64_t x = 0;
  if (!absl::SimpleAtoi(it->second, &x)) {
    return InvalidParameterError(absl::StrCat(
        "key '", key, "': '", it->second, "' is not a nonnegative integer"));
  }
  return std::optional<uint64_t>(x);
}

absl::StatusOr<std::optional<std::vector<std::string>>> KeyValueConfig::GetList(
    absl::string_view key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::optional<std::vector<std::string>>();
  std::vector<std::string> items;
  for (absl::string_view item : absl::StrSplit(it->second, ',')) {
    item = absl::StripAsciiWhitespace(item);
    if (item.empty()) continue;
    items.emplace_back(item);
  }
  return std::optional<std::vector<std::string>>(std::move(items));
}

absl::StatusOr<std::optional<std::vector<double>>>
KeyValueConfig::GetDoubleList(absl::string_view key) const {
  MIXDP_ASSIGN_OR_RETURN(auto items, GetList(key));
  if (!items) return std::optional<std::vector<double>>();
  std::vector<double> values;
  for (const auto& item : *items) {
    MIXDP_ASSIGN_OR_RETURN(double x, ToDouble(key, item));
    values.push_back(x);
  }
  return std::optional<std::vector<double>>(std::move(values));
}

absl::Status KeyValueConfig::CheckKnownKeys(
    const std::set<std::string>& known) const {
  for (const auto& [key, value] : entries_) {
    if (!known.contains(key)) {
      return InvalidParameterError(absl::StrCat("unknown config key '", key, "'"));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<PrivacyLevel> ParsePrivacyLevel(absl::string_view text) {
  text = absl::StripAsciiWhitespace(text);
  const std::string lower = absl::AsciiStrToLower(text);
  if (lower == "public" || lower == "inf") return PrivacyLevel::Public();
  double epsilon = 0.0;
  if (!absl::SimpleAtod(text, &epsilon)) {
    return InvalidParameterError(absl::StrCat("bad epsilon '", text, "'"));
  }
  return PrivacyLevel::Finite(epsilon);
}

std::string PrivacyScenario::Label() const {
  return absl::StrCat("eps_h=", high.ToString(), ";eps_l=", low.ToString());
}

const std::set<std::string>& KnownConfigKeys() {
  static const auto* keys = new std::set<std::string>{
      "statistic",   "q",           "group_sizes",      "epsilons",
      "mu",          "sigma2",      "domain",           "trials",
      "seed",        "methods",     "sweep",            "sweep_values",
      "rmse_reference", "bootstrap_resamples", "scenarios", "subsample_m",
      "subsample_epsilon", "p_grid", "t_grid_points"};
  return *keys;
}

absl::StatusOr<ToolConfig> ParseToolConfig(absl::string_view text) {
  MIXDP_ASSIGN_OR_RETURN(KeyValueConfig kv, KeyValueConfig::Parse(text));
  MIXDP_RETURN_IF_ERROR(kv.CheckKnownKeys(KnownConfigKeys()));

  ToolConfig tool;
  ExperimentConfig& e = tool.experiment;

  MIXDP_ASSIGN_OR_RETURN(auto statistic, kv.GetString("statistic"));
  if (!statistic || *statistic == "mean") {
    e.statistic = Statistic::kMean;
  } else if (*statistic == "quantile" || *statistic == "median") {
    e.statistic = Statistic::kQuantile;
    // Standard-normal median defaults: sigma2 = 1 on [-4, 4].
    e.sigma2 = 1.0;
    e.a = -4.0;
    e.b = 4.0;
  } else {
    return InvalidParameterError(
        absl::StrCat("statistic must be mean or quantile, got '", *statistic, "'"));
  }

  MIXDP_ASSIGN_OR_RETURN(auto q, kv.GetDouble("q"));
  if (q) e.q = *q;

  MIXDP_ASSIGN_OR_RETURN(auto sizes, kv.GetDoubleList("group_sizes"));
  if (sizes) {
    for (double n : *sizes) {
      if (!(n >= 1.0) || n != std::floor(n)) {
        return InvalidParameterError(
            absl::StrCat("group sizes must be positive integers, got ", n));
      }
      e.group_sizes.push_back(static_cast<size_t>(n));
    }
  }
  MIXDP_ASSIGN_OR_RETURN(auto epsilons, kv.GetList("epsilons"));
  if (epsilons) {
    for (const auto& item : *epsilons) {
      MIXDP_ASSIGN_OR_RETURN(PrivacyLevel level, ParsePrivacyLevel(item));
      e.epsilons.push_back(level);
    }
  }

  MIXDP_ASSIGN_OR_RETURN(auto mu, kv.GetDouble("mu"));
  if (mu) e.mu = *mu;
  MIXDP_ASSIGN_OR_RETURN(auto sigma2, kv.GetDouble("sigma2"));
  if (sigma2) e.sigma2 = *sigma2;
  MIXDP_ASSIGN_OR_RETURN(auto domain, kv.GetDoubleList("domain"));
  if (domain) {
    if (domain->size() != 2) {
      return InvalidParameterError("domain must be two numbers: a, b");
    }
    e.a = (*domain)[0];
    e.b = (*domain)[1];
  }
  MIXDP_ASSIGN_OR_RETURN(auto trials, kv.GetUint("trials"));
  if (trials) e.trials = static_cast<size_t>(*trials);
  MIXDP_ASSIGN_OR_RETURN(auto seed, kv.GetUint("seed"));
  if (seed) e.seed = *seed;

  MIXDP_ASSIGN_OR_RETURN(auto methods, kv.GetList("methods"));
  if (methods) {
    tool.methods_given = true;
    for (const auto& item : *methods) {
      MIXDP_ASSIGN_OR_RETURN(MethodSpec method, MethodSpec::Parse(item));
      e.methods.push_back(method);
    }
  }

  MIXDP_ASSIGN_OR_RETURN(auto sweep, kv.GetString("sweep"));
  MIXDP_ASSIGN_OR_RETURN(auto sweep_values, kv.GetDoubleList("sweep_values"));
  if (sweep.has_value() != sweep_values.has_value()) {
    return InvalidParameterError("sweep and sweep_values must be given together");
  }
  if (sweep) {
    MIXDP_ASSIGN_OR_RETURN(Sweep parsed, ParseSweep(*sweep));
    parsed.values = *sweep_values;
    e.sweep = std::move(parsed);
  }

  MIXDP_ASSIGN_OR_RETURN(auto reference, kv.GetString("rmse_reference"));
  if (reference) {
    if (*reference == "population") {
      e.rmse_reference = RmseReference::kPopulation;
    } else if (*reference == "sample") {
      e.rmse_reference = RmseReference::kSample;
    } else {
      return InvalidParameterError(absl::StrCat(
          "rmse_reference must be population or sample, got '", *reference,
          "'"));
    }
  }
  MIXDP_ASSIGN_OR_RETURN(auto resamples, kv.GetUint("bootstrap_resamples"));
  if (resamples) e.bootstrap_resamples = static_cast<size_t>(*resamples);

  MIXDP_ASSIGN_OR_RETURN(auto scenarios, kv.GetList("scenarios"));
  if (scenarios) {
    for (const auto& item : *scenarios) {
      MIXDP_ASSIGN_OR_RETURN(PrivacyScenario s, ParseScenario(item));
      tool.scenarios.push_back(s);
    }
  }

  MIXDP_ASSIGN_OR_RETURN(auto m, kv.GetUint("subsample_m"));
  if (m) tool.subsample_m = static_cast<size_t>(*m);
  MIXDP_ASSIGN_OR_RETURN(auto sub_eps, kv.GetDouble("subsample_epsilon"));
  if (sub_eps) tool.subsample_epsilon = *sub_eps;
  MIXDP_ASSIGN_OR_RETURN(auto p_grid, kv.GetDoubleList("p_grid"));
  if (p_grid) {
    tool.p_grid = *p_grid;
  } else {
    for (int i = 1; i <= 10; ++i) tool.p_grid.push_back(i / 10.0);
  }
  MIXDP_ASSIGN_OR_RETURN(auto t_points, kv.GetUint("t_grid_points"));
  if (t_points) tool.t_grid_points = static_cast<size_t>(*t_points);

  return tool;
}

}  // namespace mixdp
