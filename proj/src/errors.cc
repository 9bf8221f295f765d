//
// Copyright 2026 The dpfix Authors.
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

#include "dpfix/errors.h"

#include <utility>

namespace dpfix {

std::string_view CategoryName(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kParameter:
      return "parameter";
    case ErrorCategory::kStructural:
      return "structural";
    case ErrorCategory::kModel:
      return "model";
    case ErrorCategory::kConditionNotMet:
      return "condition_not_met";
    case ErrorCategory::kIo:
      return "io";
  }
  return "unknown";
}

Error::Error(ErrorCategory category, const std::string& message)
    : std::runtime_error(message), category_(category) {}

ConditionNotMet::ConditionNotMet(std::string clause, const std::string& message)
    : Error(ErrorCategory::kConditionNotMet,
            message + " [violated: " + clause + "]"),
      clause_(std::move(clause)) {}

void ThrowParameter(const std::string& message) {
  throw Error(ErrorCategory::kParameter, message);
}

void ThrowStructural(const std::string& message) {
  throw Error(ErrorCategory::kStructural, message);
}

void ThrowModel(const std::string& message) {
  throw Error(ErrorCategory::kModel, message);
}

void ThrowIo(const std::string& message) {
  throw Error(ErrorCategory::kIo, message);
}

}  // namespace dpfix
