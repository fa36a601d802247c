// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// CSV output of regret traces and summaries, and SVG regret plots.
//
// Numbers are written in the shortest decimal form that parses back to the
// same double, independent of the locale.

#ifndef MSET_REPORT_H_
#define MSET_REPORT_H_

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mset/harness.h"

namespace mset {

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string FormatDouble(double x);
// Throws CsvError unless all of `text` is one number.
double ParseDouble(std::string_view text);

// Columns: policy,rep,t,cum_pseudo_regret. Failed traces are skipped.
void WriteTracesCsv(std::ostream& out, const std::vector<RegretTrace>& traces);
void WriteTracesCsv(const std::filesystem::path& path,
                    const std::vector<RegretTrace>& traces);
std::vector<RegretTrace> ReadTracesCsv(const std::filesystem::path& path);

// Columns: policy,t,mean,sd,se.
void WriteSummaryCsv(std::ostream& out,
                     const std::vector<PolicySummary>& summaries);
void WriteSummaryCsv(const std::filesystem::path& path,
                     const std::vector<PolicySummary>& summaries);
std::vector<PolicySummary> ReadSummaryCsv(const std::filesystem::path& path);

enum class PlotPanel { kLinear, kLogLog };

// Parses a comma-separated list such as "linear,loglog". Throws
// std::invalid_argument on unknown or repeated names.
std::vector<PlotPanel> ParsePanels(std::string_view text);

// One panel per entry of `panels`, side by side: mean regret per policy with
// a shaded +-SD band. Log-log panels drop points whose mean is not positive.
std::string RenderRegretSvg(const std::vector<PolicySummary>& summaries,
                            const std::vector<PlotPanel>& panels);

}  // namespace mset

#endif  // MSET_REPORT_H_
