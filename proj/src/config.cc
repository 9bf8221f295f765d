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

#include "dpfix/config.h"

#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>
#include <vector>

#include "dpfix/csv.h"
#include "dpfix/errors.h"

namespace dpfix {
namespace {

std::string Trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double ToDouble(const std::string& key, const std::string& v) {
  try {
    return ParseNumber(v);
  } catch (const Error&) {
    ThrowParameter("key '" + key + "': '" + v + "' is not a number");
  }
}

std::uint64_t ToUnsigned(const std::string& key, const std::string& v) {
  const double d = ToDouble(key, v);
  if (!(d >= 0.0) || d != static_cast<double>(static_cast<std::uint64_t>(d))) {
    ThrowParameter("key '" + key + "': '" + v + "' is not a whole number");
  }
  return static_cast<std::uint64_t>(d);
}

bool ToBool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  ThrowParameter("key '" + key + "': '" + v + "' is not a boolean");
}

std::vector<std::string> SplitList(const std::string& v) {
  std::vector<std::string> items;
  for (const std::string& raw : SplitCsvLine(v)) {
    const std::string item = Trim(raw);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

}  // namespace

KeyValues ParseKeyValues(std::istream& in, const std::string& source) {
  KeyValues values;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      ThrowParameter(source + ":" + std::to_string(line_no) +
                     ": expected key = value");
    }
    const std::string key = Trim(line.substr(0, eq));
    if (key.empty()) {
      ThrowParameter(source + ":" + std::to_string(line_no) + ": empty key");
    }
    values[key] = Trim(line.substr(eq + 1));
  }
  return values;
}

KeyValues ReadKeyValueFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) ThrowIo("cannot open config file '" + path + "'");
  return ParseKeyValues(in, path);
}

void ApplyKeyValues(const KeyValues& values, ExperimentConfig& config) {
  for (const auto& [key, v] : values) {
    if (key == "setting") {
      config.setting = ParseDeployment(v);
    } else if (key == "n") {
      config.n = ToUnsigned(key, v);
    } else if (key == "p") {
      config.p = ToUnsigned(key, v);
    } else if (key == "support") {
      config.support = ToUnsigned(key, v);
    } else if (key == "noise_std") {
      config.noise_std = ToDouble(key, v);
    } else if (key == "train_fraction") {
      config.train_fraction = ToDouble(key, v);
    } else if (key == "data_seed") {
      config.data_seed = ToUnsigned(key, v);
    } else if (key == "kappa") {
      config.kappa = ToDouble(key, v);
      config.cross_validate_kappa = false;
    } else if (key == "K" || key == "iterations") {
      config.iterations = ToUnsigned(key, v);
    } else if (key == "lambda") {
      config.lambda = ToDouble(key, v);
    } else if (key == "gamma") {
      config.gamma = ToDouble(key, v);
    } else if (key == "clip") {
      config.clip = ToDouble(key, v);
    } else if (key == "step") {
      config.step = ToDouble(key, v);
    } else if (key == "sampling") {
      config.sampling = ToDouble(key, v);
    } else if (key == "sigma") {
      config.sigma = ToDouble(key, v);
    } else if (key == "epsilons") {
      config.epsilons.clear();
      for (const auto& e : SplitList(v)) {
        config.epsilons.push_back(ToDouble(key, e));
      }
    } else if (key == "delta") {
      config.delta = ToDouble(key, v);
    } else if (key == "seeds") {
      config.seeds.clear();
      for (const auto& s : SplitList(v)) {
        config.seeds.push_back(ToUnsigned(key, s));
      }
    } else if (key == "num_seeds") {
      const std::uint64_t count = ToUnsigned(key, v);
      config.seeds.clear();
      for (std::uint64_t s = 0; s < count; ++s) config.seeds.push_back(s);
    } else if (key == "algorithms" || key == "algorithm") {
      config.algorithms.clear();
      for (const auto& a : SplitList(v)) {
        config.algorithms.push_back(ParseAlgorithm(a));
      }
    } else if (key == "tune") {
      config.tune = ToBool(key, v);
    } else if (key == "tuning_seed") {
      config.tuning_seed = ToUnsigned(key, v);
    } else {
      ThrowParameter("unknown config key '" + key + "'");
    }
  }
}

std::string OutputDirectory() {
  const char* dir = std::getenv("DPFIX_OUTPUT_DIR");
  return (dir != nullptr && *dir != '\0') ? std::string(dir) : std::string(".");
}

}  // namespace dpfix
