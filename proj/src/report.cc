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

#include "aqa/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <tuple>

#include "aqa/error.h"
#include "json.hpp"

namespace aqa {
namespace {

using nlohmann::json;

constexpr const char* kReportFormatTag = "aqa-eval-report/1";
constexpr std::string_view kSweepPrefix = "sweep:";

std::vector<EvalReport> Sorted(std::span<const EvalReport> reports) {
  if (reports.empty()) throw Error(ErrorCode::kEmptyReportList, "no reports to emit");
  for (const auto& r : reports) {
    for (const auto& [name, value] : r.metrics) {
      if (!std::isfinite(value)) {
        throw Error(ErrorCode::kInvalidScore, "metric " + name + " is not finite");
      }
    }
  }
  std::vector<EvalReport> out(reports.begin(), reports.end());
  auto key = [](const EvalReport& r) {
    return std::make_tuple(std::string_view(r.benchmark_id), std::string_view(MethodName(r.method)),
                           std::string_view(r.backend_id), std::string_view(r.template_id));
  };
  std::stable_sort(out.begin(), out.end(),
                   [&](const EvalReport& a, const EvalReport& b) { return key(a) < key(b); });
  return out;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string MdCell(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += (c == '\n' ? ' ' : c);
  }
  return out;
}

std::string MetricList(const EvalReport& r) {
  std::string out;
  for (const auto& [name, value] : r.metrics) {
    if (!out.empty()) out += ';';
    out += name + "=" + FormatFixed4(value);
  }
  return out;
}

std::string EmitCsv(const std::vector<EvalReport>& reports) {
  std::string out =
      "benchmark_id,method,backend_id,template_id,instance_count,failure_count,metrics,"
      "config_digest\n";
  for (const auto& r : reports) {
    out += CsvField(r.benchmark_id) + ',' + MethodName(r.method) + ',' + CsvField(r.backend_id) +
           ',' + CsvField(r.template_id) + ',' + std::to_string(r.instance_count) + ',' +
           std::to_string(r.failure_count) + ',' + CsvField(MetricList(r)) + ',' +
           r.config_digest + '\n';
  }
  return out;
}

std::string EmitMarkdown(const std::vector<EvalReport>& reports) {
  std::string out;
  std::size_t i = 0;
  while (i < reports.size()) {
    std::size_t j = i;
    std::set<std::string> names;
    while (j < reports.size() && reports[j].benchmark_id == reports[i].benchmark_id) {
      for (const auto& [name, v] : reports[j].metrics) names.insert(name);
      ++j;
    }
    if (!out.empty()) out += '\n';
    out += "## " + MdCell(reports[i].benchmark_id) + "\n\n";
    out += "| method | backend | template | instances | failures |";
    for (const auto& n : names) out += " " + MdCell(n) + " |";
    out += " config |\n|---|---|---|---:|---:|";
    for (std::size_t k = 0; k < names.size(); ++k) out += "---:|";
    out += "---|\n";
    for (std::size_t k = i; k < j; ++k) {
      const auto& r = reports[k];
      out += std::string("| ") + MethodName(r.method) + " | " + MdCell(r.backend_id) + " | " +
             MdCell(r.template_id) + " | " + std::to_string(r.instance_count) + " | " +
             std::to_string(r.failure_count) + " |";
      for (const auto& n : names) {
        auto it = r.metrics.find(n);
        out += " " + (it == r.metrics.end() ? std::string("-") : FormatFixed4(it->second)) + " |";
      }
      out += " " + r.config_digest.substr(0, 12) + " |\n";
    }
    i = j;
  }
  return out;
}

json ToJson(const EvalReport& r) {
  json metrics = json::object();
  for (const auto& [name, value] : r.metrics) metrics[name] = value;
  json j = {{"benchmark_id", r.benchmark_id},
            {"method", MethodName(r.method)},
            {"backend_id", r.backend_id},
            {"template_id", r.template_id},
            {"metrics", metrics},
            {"failure_count", r.failure_count},
            {"instance_count", r.instance_count},
            {"config_digest", r.config_digest}};
  if (!r.yes_forms.empty() || !r.no_forms.empty()) {
    j["yes_forms"] = r.yes_forms;
    j["no_forms"] = r.no_forms;
  }
  return j;
}

}  // namespace

const char* MethodName(Method method) {
  switch (method) {
    case Method::kAqaScore: return "aqascore";
    case Method::kClapScore: return "clapscore";
    case Method::kPrompting: return "prompting";
    case Method::kCascade: return "cascade";
  }
  return "?";
}

Method ParseMethod(std::string_view name) {
  if (name == "aqascore") return Method::kAqaScore;
  if (name == "clapscore") return Method::kClapScore;
  if (name == "prompting") return Method::kPrompting;
  if (name == "cascade") return Method::kCascade;
  throw Error(ErrorCode::kInvalidArgument, "unknown method '" + std::string(name) + "'");
}

ReportFormat ParseReportFormat(std::string_view name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "md" || name == "markdown") return ReportFormat::kMarkdown;
  if (name == "json") return ReportFormat::kJson;
  throw Error(ErrorCode::kInvalidArgument, "unknown report format '" + std::string(name) + "'");
}

std::string FormatFixed4(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", value);
  std::string s(buf);
  if (s == "-0.0000") s = "0.0000";
  return s;
}

std::string EmitReport(std::span<const EvalReport> reports, ReportFormat format) {
  std::vector<EvalReport> sorted = Sorted(reports);
  switch (format) {
    case ReportFormat::kCsv: return EmitCsv(sorted);
    case ReportFormat::kMarkdown: return EmitMarkdown(sorted);
    case ReportFormat::kJson: {
      json arr = json::array();
      for (const auto& r : sorted) arr.push_back(ToJson(r));
      json doc = {{"format", kReportFormatTag}, {"reports", arr}};
      return doc.dump(2) + "\n";
    }
  }
  return "";
}

std::vector<EvalReport> ParseReportJson(std::string_view text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || doc.value("format", "") != kReportFormatTag ||
      !doc.contains("reports") || !doc["reports"].is_array()) {
    throw Error(ErrorCode::kSchemaViolation, "not an aqa-eval JSON report");
  }
  std::vector<EvalReport> out;
  try {
    for (const json& j : doc["reports"]) {
      EvalReport r;
      r.benchmark_id = j.at("benchmark_id").get<std::string>();
      r.method = ParseMethod(j.at("method").get<std::string>());
      r.backend_id = j.at("backend_id").get<std::string>();
      r.template_id = j.at("template_id").get<std::string>();
      for (const auto& [name, value] : j.at("metrics").items()) r.metrics[name] = value.get<double>();
      r.failure_count = j.at("failure_count").get<long long>();
      r.instance_count = j.at("instance_count").get<long long>();
      r.config_digest = j.at("config_digest").get<std::string>();
      if (j.contains("yes_forms")) r.yes_forms = j["yes_forms"].get<std::vector<std::string>>();
      if (j.contains("no_forms")) r.no_forms = j["no_forms"].get<std::vector<std::string>>();
      out.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaViolation, std::string("malformed report: ") + e.what());
  }
  return out;
}

std::string EmitPlotData(std::span<const EvalReport> reports) {
  std::vector<EvalReport> sorted = Sorted(reports);
  std::string out = "benchmark_id,method,template_id,metric,value,std\n";
  for (const auto& r : sorted) {
    const std::string prefix = CsvField(r.benchmark_id) + ',' + MethodName(r.method) + ',' +
                               CsvField(r.template_id) + ',';
    if (!r.template_id.starts_with(kSweepPrefix)) {
      for (const auto& [name, value] : r.metrics) {
        out += prefix + CsvField(name) + ',' + FormatFixed4(value) + ",\n";
      }
      continue;
    }
    for (const auto& [name, value] : r.metrics) {
      if (!name.ends_with("/mean")) continue;
      std::string base = name.substr(0, name.size() - 5);
      auto sd = r.metrics.find(base + "/std");
      out += prefix + CsvField(base) + ',' + FormatFixed4(value) + ',' +
             (sd == r.metrics.end() ? "" : FormatFixed4(sd->second)) + '\n';
    }
  }
  return out;
}

}  // namespace aqa
