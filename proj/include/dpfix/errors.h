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

#ifndef DPFIX_ERRORS_H_
#define DPFIX_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace dpfix {

// Failure categories surfaced by the library. The CLI maps each one to a
// distinct exit code and a stable lowercase name.
enum class ErrorCategory {
  kParameter,        // a scalar argument is outside its admissible range
  kStructural,       // shapes, indices or grids do not line up
  kModel,            // the problem itself is degenerate (e.g. rank-deficient A)
  kConditionNotMet,  // a closed-form bound is used outside its validity regime
  kIo,
};

std::string_view CategoryName(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message);

  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

// Raised when a bound's validity condition does not hold. `clause` names the
// failing condition, e.g. "sigma>=4" or "m<n/5".
class ConditionNotMet : public Error {
 public:
  ConditionNotMet(std::string clause, const std::string& message);

  const std::string& clause() const { return clause_; }

 private:
  std::string clause_;
};

[[noreturn]] void ThrowParameter(const std::string& message);
[[noreturn]] void ThrowStructural(const std::string& message);
[[noreturn]] void ThrowModel(const std::string& message);
[[noreturn]] void ThrowIo(const std::string& message);

}  // namespace dpfix

#endif  // DPFIX_ERRORS_H_
