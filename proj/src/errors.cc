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

#include "mixdp/errors.h"

namespace mixdp {

absl::Status InvalidParameterError(absl::string_view message) {
  return absl::InvalidArgumentError(message);
}

absl::Status EmptyInputError(absl::string_view message) {
  return absl::FailedPreconditionError(message);
}

absl::Status DegenerateSampleError(absl::string_view message) {
  return absl::AbortedError(message);
}

absl::Status UnsupportedError(absl::string_view message) {
  return absl::UnimplementedError(message);
}

bool IsInvalidParameter(const absl::Status& status) {
  return absl::IsInvalidArgument(status);
}

bool IsEmptyInput(const absl::Status& status) {
  return absl::IsFailedPrecondition(status);
}

bool IsDegenerateSample(const absl::Status& status) {
  return absl::IsAborted(status);
}

}  // namespace mixdp
