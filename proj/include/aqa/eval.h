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

#ifndef AQA_EVAL_H_
#define AQA_EVAL_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "aqa/benchmark.h"
#include "aqa/gateway.h"
#include "aqa/prompt_registry.h"
#include "aqa/report.h"

namespace aqa {

struct Manifest {
  std::vector<ManifestEntry> entries;
  std::string digest;  // hex SHA-256 of the file bytes
};

Manifest ReadManifest(const std::filesystem::path& path, ManifestKind kind);

struct EvalConfig {
  Method method = Method::kAqaScore;
  // Question template for AQAScore; empty picks each benchmark's default.
  std::string template_id;
  double tie_credit = 0.5;
  std::uint64_t seed = 0;
  // Extra backend state that changes results (the mock's planted table).
  std::string backend_fingerprint;
};

// Benchmark a single instance belongs to: relate, pam, relate-pair,
// baton-pair, baton, fense, brace, compa, or "rating" when a rating scale
// matches neither RELATE nor PAM.
std::string BenchmarkIdOf(const BenchmarkInstance& instance);

// Template used for a benchmark when none is requested.
std::string DefaultTemplate(const PromptRegistry& registry, std::string_view benchmark_id);

// Throws kKindMismatch unless the template can score instances of this kind.
void CheckTemplateFits(const PromptRegistry& registry, std::string_view template_id,
                       ManifestKind kind);

// One report per benchmark present in the manifest. Instances are scored
// concurrently up to the gateway's in-flight limit; metrics are reduced in
// manifest order so results do not depend on scheduling.
std::vector<EvalReport> RunEval(const Manifest& manifest, Gateway& gateway,
                                const PromptRegistry& registry, const EvalConfig& config);

struct SweepResult {
  std::vector<EvalReport> per_template;
  std::vector<EvalReport> summaries;  // template_id "sweep:<set>"

  std::vector<EvalReport> All() const;
};

// Runs every template of a registry set. All templates are checked against
// every instance kind before any backend call.
SweepResult RunSweep(const Manifest& manifest, Gateway& gateway, const PromptRegistry& registry,
                     const EvalConfig& config, std::string_view template_set);

// Summary report over per-template reports of one benchmark: <m>/mean and
// <m>/std for every metric common to all of them, plus n_templates.
EvalReport SummarizeSweep(std::span<const EvalReport> per_template, std::string_view set_id);

// Runs fn(i) for i in [0, n) on up to `workers` threads. The exception of
// the lowest failing index is rethrown after all workers finish.
void ParallelFor(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace aqa

#endif  // AQA_EVAL_H_
