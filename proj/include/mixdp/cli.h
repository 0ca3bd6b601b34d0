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

#ifndef MIXDP_CLI_H_
#define MIXDP_CLI_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace mixdp {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitIoError = 3;

// Environment variable naming the directory that receives output files when
// --out is not given.
inline constexpr char kOutDirEnv[] = "MIXDP_OUT_DIR";

inline constexpr char kVersion[] = "0.1.0";

enum class Subcommand {
  kMeanExperiment,
  kMedianExperiment,
  kVarianceCurves,
  kWeights,
  kVersion,
};

struct CliInvocation {
  Subcommand subcommand = Subcommand::kVersion;
  std::string config_path;
  // Empty means $MIXDP_OUT_DIR/<subcommand>.csv (or ./<subcommand>.csv).
  std::string output_path;
  std::optional<uint64_t> seed_override;
  std::optional<size_t> trials_override;
};

// Each command returns a process exit status and reports problems on `err`.
int CmdMeanExperiment(const CliInvocation& invocation, std::ostream& out,
                      std::ostream& err);
int CmdMedianExperiment(const CliInvocation& invocation, std::ostream& out,
                        std::ostream& err);
int CmdVarianceCurves(const CliInvocation& invocation, std::ostream& out,
                      std::ostream& err);
int CmdWeights(const CliInvocation& invocation, std::ostream& out,
               std::ostream& err);

// Parses argv and dispatches to one of the commands above.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace mixdp

#endif  // MIXDP_CLI_H_
