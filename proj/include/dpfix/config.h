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

// Plain key=value configuration files for the CLI.
//
//   # comment
//   setting = federated
//   epsilons = 0.1, 0.3, 1
//
// Keys match the CLI flag names (see README); unknown keys are rejected.

#ifndef DPFIX_CONFIG_H_
#define DPFIX_CONFIG_H_

#include <iosfwd>
#include <map>
#include <string>

#include "dpfix/experiment.h"

namespace dpfix {

using KeyValues = std::map<std::string, std::string>;

KeyValues ParseKeyValues(std::istream& in, const std::string& source);
KeyValues ReadKeyValueFile(const std::string& path);

void ApplyKeyValues(const KeyValues& values, ExperimentConfig& config);

// Directory for CSV outputs: $DPFIX_OUTPUT_DIR, else the working directory.
std::string OutputDirectory();

}  // namespace dpfix

#endif  // DPFIX_CONFIG_H_
