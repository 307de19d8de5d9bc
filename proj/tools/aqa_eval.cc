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

// aqa-eval: command-line front end (score, eval, convert, sweep).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aqa/benchmark.h"
#include "aqa/error.h"
#include "aqa/eval.h"
#include "aqa/gateway.h"
#include "aqa/http_backend.h"
#include "aqa/mock_backend.h"
#include "aqa/prompt_registry.h"
#include "aqa/report.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitBackend = 3;
constexpr int kExitFailureRate = 4;

struct BackendFlags {
  std::string backend_url;
  bool mock = false;
  std::optional<std::uint64_t> seed;
  std::string planted;
  std::string cache_dir;
  std::string registry;
  int max_in_flight = 8;
  int timeout_ms = 120000;
  int retries = 2;
  int backoff_ms = 200;
  std::string bearer_token;
  std::string backend_id;
  int max_new_tokens = 512;
  std::vector<std::string> yes_forms;
  std::vector<std::string> no_forms;
};

struct EvalFlags {
  std::string manifest;
  std::string kind = "mixed";
  std::string method = "aqascore";
  std::string template_id;
  double tie_credit = 0.5;
  double max_failure_rate = 1.0;
  std::string format = "json";
  std::string out = "-";
  std::string plot_out;
};

void AddBackendFlags(CLI::App* cmd, BackendFlags& f) {
  cmd->add_option("--backend-url", f.backend_url, "Inference server base URL")
      ->envname("AQA_BACKEND_URL");
  cmd->add_flag("--mock", f.mock, "Use the deterministic mock oracle");
  cmd->add_option("--seed", f.seed, "Mock oracle seed");
  cmd->add_option("--planted", f.planted, "Mock planted-probability table (JSON)");
  cmd->add_option("--cache-dir", f.cache_dir, "Persistent response cache directory")
      ->envname("AQA_CACHE_DIR");
  cmd->add_option("--registry", f.registry, "Prompt registry JSON");
  cmd->add_option("--max-in-flight", f.max_in_flight, "Concurrent backend requests")
      ->check(CLI::Range(1, 1024));
  cmd->add_option("--timeout-ms", f.timeout_ms, "Per-request timeout")->check(CLI::PositiveNumber);
  cmd->add_option("--retries", f.retries, "Retries on transient backend errors")
      ->check(CLI::Range(0, 16));
  cmd->add_option("--backoff-ms", f.backoff_ms, "Initial retry backoff")->check(CLI::Range(0, 60000));
  cmd->add_option("--bearer-token", f.bearer_token, "Authorization bearer token");
  cmd->add_option("--backend-id", f.backend_id, "Backend identity recorded in reports and cache");
  cmd->add_option("--max-new-tokens", f.max_new_tokens, "Generation cap")->check(CLI::PositiveNumber);
  cmd->add_option("--yes-form", f.yes_forms, "Surface form counted as Yes (repeatable)");
  cmd->add_option("--no-form", f.no_forms, "Surface form counted as No (repeatable)");
}

void AddEvalFlags(CLI::App* cmd, EvalFlags& f, bool with_method) {
  cmd->add_option("--manifest", f.manifest, "JSONL manifest")->required();
  cmd->add_option("--kind", f.kind, "rating|audio_pair|text_pair|binary_feedback|compa_group|mixed");
  if (with_method) {
    cmd->add_option("--method", f.method, "aqascore|clapscore|prompting|cascade");
    cmd->add_option("--template", f.template_id, "Question template id (aqascore)");
  }
  cmd->add_option("--tie-credit", f.tie_credit, "Credit for tied pairwise predictions")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--max-failure-rate", f.max_failure_rate,
                  "Exit 4 when any report's failure rate exceeds this")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--format", f.format, "csv|md|json");
  cmd->add_option("--out", f.out, "Report path ('-' for stdout)");
  cmd->add_option("--plot-out", f.plot_out, "Plot-data CSV path");
}

aqa::PromptRegistry LoadRegistry(const BackendFlags& f) {
  return f.registry.empty() ? aqa::PromptRegistry::LoadDefault()
                            : aqa::PromptRegistry::Load(f.registry);
}

struct Backend {
  std::unique_ptr<aqa::Gateway> gateway;
  std::string fingerprint;
  std::uint64_t seed = 0;
};

Backend MakeBackend(const BackendFlags& f) {
  aqa::BackendDescriptor d;
  d.decoding.max_new_tokens = f.max_new_tokens;
  if (!f.yes_forms.empty()) d.yes_forms = f.yes_forms;
  if (!f.no_forms.empty()) d.no_forms = f.no_forms;
  aqa::GatewayOptions opts;
  opts.max_in_flight = f.max_in_flight;
  opts.max_retries = f.retries;
  opts.initial_backoff_ms = f.backoff_ms;
  opts.cache_dir = f.cache_dir;

  Backend out;
  std::unique_ptr<aqa::Backend> impl;
  if (f.mock) {
    aqa::MockOracleConfig cfg;
    if (!f.planted.empty()) cfg = aqa::LoadMockConfig(f.planted);
    if (f.seed) cfg.seed = *f.seed;
    cfg.Validate();
    d.backend_id = f.backend_id.empty() ? "mock" : f.backend_id;
    d.endpoint = "mock";
    out.fingerprint = cfg.Digest();
    out.seed = cfg.seed;
    impl = std::make_unique<aqa::MockBackend>(cfg);
  } else {
    if (f.backend_url.empty()) {
      throw aqa::Error(aqa::ErrorCode::kInvalidArgument,
                       "no backend: pass --mock or --backend-url (or set AQA_BACKEND_URL)");
    }
    d.backend_id = f.backend_id.empty() ? f.backend_url : f.backend_id;
    d.endpoint = f.backend_url;
    impl = std::make_unique<aqa::HttpBackend>(f.backend_url,
                                              aqa::HttpOptions{f.timeout_ms, f.bearer_token});
  }
  out.gateway = std::make_unique<aqa::Gateway>(d, std::move(impl), opts);
  return out;
}

void WriteOutput(const std::string& path, const std::string& bytes) {
  if (path.empty() || path == "-") {
    std::cout << bytes;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw aqa::Error(aqa::ErrorCode::kIoError, "cannot write " + path);
  out << bytes;
  if (!out.flush()) throw aqa::Error(aqa::ErrorCode::kIoError, "write failed: " + path);
}

int Emit(const std::vector<aqa::EvalReport>& reports, const EvalFlags& f) {
  WriteOutput(f.out, aqa::EmitReport(reports, aqa::ParseReportFormat(f.format)));
  if (!f.plot_out.empty()) WriteOutput(f.plot_out, aqa::EmitPlotData(reports));
  for (const auto& r : reports) {
    if (r.instance_count == 0) continue;
    const double rate =
        static_cast<double>(r.failure_count) / static_cast<double>(r.instance_count);
    if (rate > f.max_failure_rate) {
      std::cerr << "aqa-eval: " << r.benchmark_id << "/" << r.template_id << " failure rate "
                << rate << " exceeds " << f.max_failure_rate << "\n";
      return kExitFailureRate;
    }
  }
  return kExitOk;
}

int RunScore(const BackendFlags& bf, const std::string& audio_path, const std::string& text,
             const std::string& template_id) {
  const aqa::PromptRegistry registry = LoadRegistry(bf);
  Backend b = MakeBackend(bf);
  const aqa::AudioRef audio = aqa::LoadAudio(audio_path, fs::current_path());
  const aqa::RenderedPrompt prompt = registry.RenderSingle(template_id, text);
  const aqa::YesNoLogProbs lp = b.gateway->QueryYesNo(audio, prompt);
  nlohmann::json j = {{"aqa_score", aqa::AqaScore(lp)},
                      {"s_yes", lp.s_yes()},
                      {"s_no", lp.s_no()},
                      {"template_id", template_id},
                      {"backend_id", b.gateway->descriptor().backend_id},
                      {"audio_sha256", audio.content_digest},
                      {"digest", b.gateway->YesNoDigest(audio, prompt)}};
  std::cout << j.dump() << "\n";
  return kExitOk;
}

aqa::EvalConfig MakeConfig(const EvalFlags& f, const Backend& b) {
  aqa::EvalConfig c;
  c.method = aqa::ParseMethod(f.method);
  c.template_id = f.template_id;
  c.tie_credit = f.tie_credit;
  c.seed = b.seed;
  c.backend_fingerprint = b.fingerprint;
  return c;
}

int RunEvalCmd(const BackendFlags& bf, const EvalFlags& ef) {
  aqa::ParseReportFormat(ef.format);
  const aqa::PromptRegistry registry = LoadRegistry(bf);
  const aqa::Manifest manifest = aqa::ReadManifest(ef.manifest, aqa::ParseManifestKind(ef.kind));
  Backend b = MakeBackend(bf);
  return Emit(aqa::RunEval(manifest, *b.gateway, registry, MakeConfig(ef, b)), ef);
}

int RunSweepCmd(const BackendFlags& bf, const EvalFlags& ef, const std::string& set) {
  aqa::ParseReportFormat(ef.format);
  const aqa::PromptRegistry registry = LoadRegistry(bf);
  const aqa::Manifest manifest = aqa::ReadManifest(ef.manifest, aqa::ParseManifestKind(ef.kind));
  Backend b = MakeBackend(bf);
  return Emit(aqa::RunSweep(manifest, *b.gateway, registry, MakeConfig(ef, b), set).All(), ef);
}

int RunConvert(const std::string& in, const std::string& from, const std::string& to,
               double threshold, std::uint64_t shuffle_seed, const std::string& out) {
  std::vector<aqa::AudioPairInstance> pairs;
  if (from == "relate" && to == "relate-pair") {
    std::vector<aqa::RatingInstance> ratings;
    for (auto& e : aqa::LoadManifest(in, aqa::ManifestKind::kRating, {.load_audio = false})) {
      ratings.push_back(std::get<aqa::RatingInstance>(e.instance));
    }
    pairs = aqa::BuildRelatePairs(ratings, threshold, shuffle_seed);
  } else if (from == "baton" && to == "baton-pair") {
    std::vector<aqa::BinaryFeedbackInstance> feedback;
    for (auto& e :
         aqa::LoadManifest(in, aqa::ManifestKind::kBinaryFeedback, {.load_audio = false})) {
      feedback.push_back(std::get<aqa::BinaryFeedbackInstance>(e.instance));
    }
    pairs = aqa::BuildBatonPairs(feedback, shuffle_seed);
  } else {
    throw aqa::Error(aqa::ErrorCode::kInvalidArgument,
                     "unsupported conversion " + from + " -> " + to);
  }
  // Locators are rewritten relative to the output manifest's directory.
  if (out != "-") {
    const fs::path out_dir = fs::absolute(out).parent_path();
    for (auto& p : pairs) {
      for (aqa::AudioRef* a : {&p.audio_first, &p.audio_second}) {
        fs::path rel = fs::absolute(a->path).lexically_normal().lexically_relative(out_dir);
        a->locator = rel.empty() ? fs::absolute(a->path).string() : rel.generic_string();
      }
    }
  }
  WriteOutput(out, aqa::ToManifestText(pairs));
  std::cerr << "aqa-eval: wrote " << pairs.size() << " pairs\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Audio-text alignment evaluation with yes/no verification scores"};
  app.require_subcommand(1);

  BackendFlags bf;
  EvalFlags ef;

  auto* score = app.add_subcommand("score", "Score one audio/text pair");
  std::string audio, text, score_template = "text.default";
  score->add_option("--audio", audio, "Audio file")->required();
  score->add_option("--text", text, "Description")->required();
  score->add_option("--template", score_template, "Question template id");
  AddBackendFlags(score, bf);

  auto* eval = app.add_subcommand("eval", "Evaluate a manifest and emit a report");
  AddEvalFlags(eval, ef, true);
  AddBackendFlags(eval, bf);

  auto* sweep = app.add_subcommand("sweep", "Evaluate every template of a set");
  std::string set;
  sweep->add_option("--templates", set, "Template set id")->required();
  AddEvalFlags(sweep, ef, false);
  AddBackendFlags(sweep, bf);

  auto* convert = app.add_subcommand("convert", "Build pairwise manifests from annotations");
  std::string conv_in, conv_from, conv_to, conv_out = "-";
  double threshold = 2.0;
  std::uint64_t shuffle_seed = 0;
  convert->add_option("--in", conv_in, "Input manifest")->required();
  convert->add_option("--from", conv_from, "relate|baton")->required();
  convert->add_option("--to", conv_to, "relate-pair|baton-pair")->required();
  convert->add_option("--threshold", threshold, "Minimum rating gap (strict)");
  convert->add_option("--shuffle-seed", shuffle_seed, "Seed for slot-order shuffling");
  convert->add_option("--out", conv_out, "Output manifest ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*score) return RunScore(bf, audio, text, score_template);
    if (*eval) return RunEvalCmd(bf, ef);
    if (*sweep) return RunSweepCmd(bf, ef, set);
    if (*convert) {
      return RunConvert(conv_in, conv_from, conv_to, threshold, shuffle_seed, conv_out);
    }
  } catch (const aqa::Error& e) {
    std::cerr << "aqa-eval: " << e.what() << "\n";
    return aqa::IsBackendError(e.code()) ? kExitBackend : kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "aqa-eval: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
