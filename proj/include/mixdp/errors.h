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

#ifndef MIXDP_ERRORS_H_
#define MIXDP_ERRORS_H_

#include "absl/status/status.h"
#include "absl/strings/string_view.h"

namespace mixdp {

// Error classes used across the library. Each maps onto one absl status code
// so callers can branch on the class without string matching.
//
//   invalid parameter  -> kInvalidArgument
//   empty input        -> kFailedPrecondition
//   degenerate sample  -> kAborted  (a Monte-Carlo trial that cannot finish)
//   unsupported        -> kUnimplemented
absl::Status InvalidParameterError(absl::string_view message);
absl::Status EmptyInputError(absl::string_view message);
absl::Status DegenerateSampleError(absl::string_view message);
absl::Status UnsupportedError(absl::string_view message);

bool IsInvalidParameter(const absl::Status& status);
bool IsEmptyInput(const absl::Status& status);
bool IsDegenerateSample(const absl::Status& status);

}  // namespace mixdp

// Evaluates an expression returning absl::Status and returns early on error.
#define MIXDP_RETURN_IF_ERROR(expr)          \
  do {                                       \
    const absl::Status mixdp_status_ = (expr); \
    if (!mixdp_status_.ok()) return mixdp_status_; \
  } while (0)

#define MIXDP_CONCAT_INNER_(a, b) a##b
#define MIXDP_CONCAT_(a, b) MIXDP_CONCAT_INNER_(a, b)

#define MIXDP_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, rexpr) \
  auto tmp = (rexpr);                                 \
  if (!tmp.ok()) return tmp.status();                 \
  lhs = std::move(tmp).value()

// Unwraps an absl::StatusOr<T> into `lhs` or returns its error status.
#define MIXDP_ASSIGN_OR_RETURN(lhs, rexpr) \
  MIXDP_ASSIGN_OR_RETURN_IMPL_(MIXDP_CONCAT_(mixdp_statusor_, __LINE__), lhs, rexpr)

#endif  // MIXDP_ERRORS_H_
