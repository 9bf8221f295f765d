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

// CSV export with locale-independent, round-trip exact number formatting.

#ifndef DPFIX_CSV_H_
#define DPFIX_CSV_H_

#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "dpfix/experiment.h"
#include "dpfix/fixed_point.h"
#include "dpfix/privacy.h"
#include "dpfix/simnet.h"

namespace dpfix {

// Shortest text that parses back to the same double ("inf", "-inf", "nan"
// for non-finite values).
std::string FormatNumber(double value);
double ParseNumber(std::string_view text);

std::vector<std::string> SplitCsvLine(std::string_view line);

void WriteResultsCsv(std::ostream& out, const std::vector<ResultRow>& rows);
std::vector<ResultRow> ReadResultsCsv(std::istream& in);

void WriteRdpCurveCsv(std::ostream& out, const RdpCurve& curve);
void WriteTraceCsv(std::ostream& out, const RunTrace& trace);
// One row per observation: user, step, z_0, ..., z_{p-1}.
void WriteObservationLogCsv(std::ostream& out, const ObservationLog& log);
void WriteSummaryCsv(std::ostream& out, const std::vector<SummaryRow>& rows);

// Opens `path` for writing, runs `write` and reports failures as I/O errors
// naming the path.
void WriteFile(const std::string& path,
               const std::function<void(std::ostream&)>& write);

}  // namespace dpfix

#endif  // DPFIX_CSV_H_
