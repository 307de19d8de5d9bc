// Copyright (c) 2026 aqa-eval authors
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

#ifndef AQA_REPORT_H_
#define AQA_REPORT_H_

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aqa {

enum class Method { kAqaScore, kClapScore, kPrompting, kCascade };

const char* MethodName(Method method);
Method ParseMethod(std::string_view name);  // throws kInvalidArgument

struct EvalReport {
  std::string benchmark_id;
  Method method = Method::kAqaScore;
  std::string backend_id;
  std::string template_id;  // "sweep:<set>" for sweep summaries
  std::map<std::string, double> metrics;
  long long failure_count = 0;
  long long instance_count = 0;
  std::string config_digest;
  // Answer surface forms used for yes/no scoring; empty for other methods.
  std::vector<std::string> yes_forms;
  std::vector<std::string> no_forms;

  bool operator==(const EvalReport&) const = default;
};

enum class ReportFormat { kCsv, kMarkdown, kJson };

ReportFormat ParseReportFormat(std::string_view name);  // csv | md | json

// Reports are ordered by (benchmark_id, method, backend_id, template_id).
// Text formats print metrics with 4 decimals; JSON carries full precision.
// Throws kEmptyReportList on an empty list and kInvalidScore on a non-finite
// metric.
std::string EmitReport(std::span<const EvalReport> reports, ReportFormat format);

// Inverse of the JSON format.
std::vector<EvalReport> ParseReportJson(std::string_view text);

// Error-bar plot data: one row per per-template metric, plus mean/std rows
// from sweep summaries.
std::string EmitPlotData(std::span<const EvalReport> reports);

// "%.4f" with negative zero folded to zero.
std::string FormatFixed4(double value);

}  // namespace aqa

#endif  // AQA_REPORT_H_
