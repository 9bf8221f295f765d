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

#include "dpfix/csv.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <system_error>

#include "dpfix/errors.h"

namespace dpfix {
namespace {

std::uint64_t ParseUnsigned(std::string_view text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    ThrowIo("malformed integer '" + std::string(text) + "' in CSV");
  }
  return v;
}

constexpr const char* kResultsHeader =
    "setting,algorithm,epsilon,delta,sigma,K,seed,train_obj,test_obj,"
    "runtime_ms";

}  // namespace

std::string FormatNumber(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) ThrowIo("number formatting failed");
  return std::string(buf, ptr);
}

double ParseNumber(std::string_view text) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    ThrowIo("malformed number '" + std::string(text) + "' in CSV");
  }
  return v;
}

std::vector<std::string> SplitCsvLine(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.emplace_back(line.substr(start));
      break;
    }
    fields.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

void WriteResultsCsv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kResultsHeader << '\n';
  for (const ResultRow& r : rows) {
    out << r.setting << ',' << r.algorithm << ',' << FormatNumber(r.epsilon)
        << ',' << FormatNumber(r.delta) << ',' << FormatNumber(r.sigma) << ','
        << r.iterations << ',' << r.seed << ','
        << FormatNumber(r.train_objective) << ','
        << FormatNumber(r.test_objective) << ',' << FormatNumber(r.runtime_ms)
        << '\n';
  }
}

std::vector<ResultRow> ReadResultsCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) ThrowIo("results CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kResultsHeader) ThrowIo("unexpected results CSV header");
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = SplitCsvLine(line);
    if (f.size() != 10) ThrowIo("results CSV row has wrong field count");
    ResultRow r;
    r.setting = f[0];
    r.algorithm = f[1];
    r.epsilon = ParseNumber(f[2]);
    r.delta = ParseNumber(f[3]);
    r.sigma = ParseNumber(f[4]);
    r.iterations = ParseUnsigned(f[5]);
    r.seed = ParseUnsigned(f[6]);
    r.train_objective = ParseNumber(f[7]);
    r.test_objective = ParseNumber(f[8]);
    r.runtime_ms = ParseNumber(f[9]);
    rows.push_back(std::move(r));
  }
  return rows;
}

void WriteRdpCurveCsv(std::ostream& out, const RdpCurve& curve) {
  out << "alpha,epsilon,provenance\n";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    out << FormatNumber(curve.alphas()[i]) << ','
        << FormatNumber(curve.epsilon(i)) << ',' << curve.provenance()[i]
        << '\n';
  }
}

void WriteTraceCsv(std::ostream& out, const RunTrace& trace) {
  out << "iter,objective,dist_sq\n";
  for (const IterationRecord& r : trace.records) {
    out << r.k << ',' << FormatNumber(r.objective) << ','
        << FormatNumber(r.dist_sq) << '\n';
  }
}

void WriteObservationLogCsv(std::ostream& out, const ObservationLog& log) {
  std::size_t p = 0;
  for (std::size_t j = 0; j < log.num_users() && p == 0; ++j) {
    if (!log.View(j).empty()) p = log.View(j).front().z.size();
  }
  out << "user,step";
  for (std::size_t d = 0; d < p; ++d) out << ",z" << d;
  out << '\n';
  for (std::size_t j = 0; j < log.num_users(); ++j) {
    for (const Observation& o : log.View(j)) {
      out << j << ',' << o.step;
      for (double v : o.z) out << ',' << FormatNumber(v);
      out << '\n';
    }
  }
}

void WriteSummaryCsv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "algorithm,target_epsilon,mean_test_obj,std_test_obj,count\n";
  for (const SummaryRow& s : rows) {
    out << s.algorithm << ',' << FormatNumber(s.target_epsilon) << ','
        << FormatNumber(s.mean_test_objective) << ','
        << FormatNumber(s.std_test_objective) << ',' << s.count << '\n';
  }
}

void WriteFile(const std::string& path,
               const std::function<void(std::ostream&)>& write) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) ThrowIo("cannot open '" + path + "' for writing");
  write(out);
  out.flush();
  if (!out) ThrowIo("write to '" + path + "' failed");
}

}  // namespace dpfix
