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

#include "aqa/eval.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "aqa/baselines.h"
#include "aqa/digest.h"
#include "aqa/stats.h"

namespace aqa {
namespace {

struct Group {
  std::string benchmark_id;
  ManifestKind kind;
  std::vector<const BenchmarkInstance*> items;
};

struct InstanceResult {
  double value = 0.0;  // rating prediction or binary-feedback score
  Preference preference = Preference::kTie;
  CompaGroupResult compa;
  bool failed = false;
};

std::string ShortestRepr(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<Group> GroupByBenchmark(const Manifest& manifest) {
  std::vector<Group> groups;
  std::map<std::string, std::size_t> index;
  for (const auto& e : manifest.entries) {
    std::string id = BenchmarkIdOf(e.instance);
    auto [it, fresh] = index.try_emplace(id, groups.size());
    if (fresh) groups.push_back({id, KindOf(e.instance), {}});
    groups[it->second].items.push_back(&e.instance);
  }
  return groups;
}

Preference FromChoice(ParsedChoice c) {
  return c == ParsedChoice::kFirst ? Preference::kFirst : Preference::kSecond;
}

// Scores one instance with the yes/no question template.
InstanceResult ScoreAqa(Gateway& gw, const PromptRegistry& reg, const std::string& tid,
                        const BenchmarkInstance& inst) {
  InstanceResult out;
  auto score = [&](const AudioRef& audio, const std::string& text) {
    return gw.Score(audio, reg.RenderSingle(tid, text)).value;
  };
  if (const auto* r = std::get_if<RatingInstance>(&inst)) {
    out.value = score(r->audio, r->text);
  } else if (const auto* p = std::get_if<AudioPairInstance>(&inst)) {
    out.preference = Prefer(score(p->audio_first, p->text), score(p->audio_second, p->text));
  } else if (const auto* t = std::get_if<TextPairInstance>(&inst)) {
    if (reg.Get(tid).kind == TemplateKind::kPairwiseText) {
      // One question asks whether the first caption is better; "no" favors the second.
      const double p = gw.Score(t->audio, reg.RenderPairwise(tid, t->text_first, t->text_second))
                           .value;
      out.preference = Prefer(p, 1.0 - p);
    } else {
      out.preference = Prefer(score(t->audio, t->text_first), score(t->audio, t->text_second));
    }
  } else if (const auto* b = std::get_if<BinaryFeedbackInstance>(&inst)) {
    out.value = score(b->audio, b->text);
  } else if (const auto* g = std::get_if<CompaGroup>(&inst)) {
    ScoreGrid grid{};
    const AudioRef* audios[2] = {&g->audio_1, &g->audio_2};
    const std::string* texts[2] = {&g->text_1, &g->text_2};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) grid[i][j] = score(*audios[i], *texts[j]);
    }
    out.compa = CompaGroupEval(grid);
  }
  return out;
}

InstanceResult ScoreClap(Gateway& gw, const BenchmarkInstance& inst) {
  InstanceResult out;
  auto clap = [&](const AudioRef& audio, const std::string& text) {
    return ClapScore(gw.EmbedAudio(audio), gw.EmbedText(text));
  };
  if (const auto* r = std::get_if<RatingInstance>(&inst)) {
    out.value = clap(r->audio, r->text);
  } else if (const auto* p = std::get_if<AudioPairInstance>(&inst)) {
    out.preference = Prefer(clap(p->audio_first, p->text), clap(p->audio_second, p->text));
  } else if (const auto* t = std::get_if<TextPairInstance>(&inst)) {
    out.preference = Prefer(clap(t->audio, t->text_first), clap(t->audio, t->text_second));
  } else if (const auto* b = std::get_if<BinaryFeedbackInstance>(&inst)) {
    out.value = clap(b->audio, b->text);
  } else if (const auto* g = std::get_if<CompaGroup>(&inst)) {
    ScoreGrid grid{};
    const AudioRef* audios[2] = {&g->audio_1, &g->audio_2};
    const std::string* texts[2] = {&g->text_1, &g->text_2};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) grid[i][j] = clap(*audios[i], *texts[j]);
    }
    out.compa = CompaGroupEval(grid);
  }
  return out;
}

InstanceResult ScoreBaseline(Gateway& gw, const PromptRegistry& reg, Method method,
                             const std::string& benchmark_id, const BenchmarkInstance& inst) {
  const BaselineMode mode = ModeFor(inst);
  const BaselineOutcome o =
      method == Method::kPrompting ? RunPromptingBaseline(gw, reg, inst, benchmark_id, mode)
                                   : RunCascadeBaseline(gw, reg, inst, benchmark_id, mode);
  InstanceResult out;
  if (!o.ok()) {
    out.failed = true;
    return out;
  }
  if (o.rating) out.value = *o.rating;
  if (o.choice) {
    if (*o.choice == ParsedChoice::kPreferred || *o.choice == ParsedChoice::kRejected) {
      out.value = *o.choice == ParsedChoice::kPreferred ? 1.0 : 0.0;
    } else {
      out.preference = FromChoice(*o.choice);
    }
  }
  return out;
}

HumanChoice HumanOf(const BenchmarkInstance& inst) {
  if (const auto* p = std::get_if<AudioPairInstance>(&inst)) return p->preference;
  return std::get<TextPairInstance>(inst).preference;
}

void AddPairMetrics(EvalReport& report, const std::vector<const BenchmarkInstance*>& items,
                    const std::vector<InstanceResult>& results, double tie_credit) {
  std::vector<PreferenceOutcome> all;
  std::map<std::string, std::vector<PreferenceOutcome>> subsets;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (results[i].failed) continue;
    PreferenceOutcome o{results[i].preference, HumanOf(*items[i])};
    all.push_back(o);
    if (const auto* t = std::get_if<TextPairInstance>(items[i])) {
      subsets[SubsetName(t->subset)].push_back(o);
    } else if (const auto* p = std::get_if<AudioPairInstance>(items[i]); p && p->event_count) {
      subsets["events=" + std::to_string(*p->event_count)].push_back(o);
    }
  }
  report.metrics["pair_acc"] = PairAccuracy(all, tie_credit);
  report.metrics["n_scored"] = static_cast<double>(all.size());
  for (const auto& [name, outcomes] : subsets) {
    report.metrics["pair_acc/" + name] = PairAccuracy(outcomes, tie_credit);
  }
}

void AddRatingMetrics(EvalReport& report, const std::vector<const BenchmarkInstance*>& items,
                      const std::vector<InstanceResult>& results) {
  std::vector<double> predicted, human;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (results[i].failed) continue;
    predicted.push_back(results[i].value);
    human.push_back(RelateAggregate(std::get<RatingInstance>(*items[i])));
  }
  report.metrics["lcc"] = Pearson(predicted, human);
  report.metrics["srcc"] = Spearman(predicted, human);
  report.metrics["ktau"] = KendallTauB(predicted, human);
  report.metrics["n_scored"] = static_cast<double>(predicted.size());
}

void AddFeedbackMetrics(EvalReport& report, const std::vector<const BenchmarkInstance*>& items,
                        const std::vector<InstanceResult>& results, bool binary_judge) {
  std::vector<int> labels;
  std::vector<double> scores;
  std::map<int, std::pair<std::vector<int>, std::vector<double>>> by_events;
  long long correct = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (results[i].failed) continue;
    const auto& b = std::get<BinaryFeedbackInstance>(*items[i]);
    const int label = b.label == FeedbackLabel::kPreferred ? 1 : 0;
    labels.push_back(label);
    scores.push_back(results[i].value);
    by_events[b.event_count].first.push_back(label);
    by_events[b.event_count].second.push_back(results[i].value);
    if (binary_judge && (results[i].value == 1.0) == (label == 1)) ++correct;
  }
  report.metrics["auc"] = RocAuc(labels, scores);
  report.metrics["n_scored"] = static_cast<double>(labels.size());
  for (const auto& [events, series] : by_events) {
    const auto& ls = series.first;
    // A single-class slice has no AUC; it is left out rather than reported.
    if (std::find(ls.begin(), ls.end(), 0) == ls.end() ||
        std::find(ls.begin(), ls.end(), 1) == ls.end()) {
      continue;
    }
    report.metrics["auc/events=" + std::to_string(events)] = RocAuc(ls, series.second);
  }
  if (binary_judge) {
    report.metrics["accuracy"] =
        static_cast<double>(correct) / static_cast<double>(labels.size());
  }
}

void AddCompaMetrics(EvalReport& report, const std::vector<const BenchmarkInstance*>& items,
                     const std::vector<InstanceResult>& results) {
  std::vector<CompaGroupResult> all;
  std::map<std::string, std::vector<CompaGroupResult>> tasks;
  for (std::size_t i = 0; i < items.size(); ++i) {
    all.push_back(results[i].compa);
    tasks[CompaTaskName(std::get<CompaGroup>(*items[i]).task)].push_back(results[i].compa);
  }
  auto put = [&](const std::string& prefix, const std::vector<CompaGroupResult>& rs) {
    const CompaScores s = ComputeCompaScores(rs);
    report.metrics[prefix + "text"] = s.text_pct;
    report.metrics[prefix + "audio"] = s.audio_pct;
    report.metrics[prefix + "group"] = s.group_pct;
  };
  put("", all);
  report.metrics["n_scored"] = static_cast<double>(all.size());
  for (const auto& [task, rs] : tasks) put(task + "/", rs);
}

std::string ConfigDigest(const Manifest& manifest, const Gateway& gw,
                         const PromptRegistry& reg, const EvalConfig& config,
                         const std::string& benchmark_id, const std::string& template_id) {
  FieldHasher h;
  h.Add("aqa-config-v1")
      .Add(reg.version())
      .Add(reg.digest())
      .Add(gw.descriptor().ToJson().dump())
      .Add(config.backend_fingerprint)
      .AddU64(config.seed)
      .Add(MethodName(config.method))
      .Add(template_id)
      .Add(ShortestRepr(config.tie_credit))
      .Add(benchmark_id)
      .Add(manifest.digest);
  return ToHex(h.Finish());
}

void CheckMethod(const Group& g, Method method) {
  const bool baseline = method == Method::kPrompting || method == Method::kCascade;
  if (!baseline) return;
  if (g.kind == ManifestKind::kCompaGroup) {
    throw Error(ErrorCode::kIncompatibleMethod,
                std::string(MethodName(method)) + " has no judging prompt for CompA groups");
  }
  if (g.benchmark_id == "rating") {
    throw Error(ErrorCode::kIncompatibleMethod,
                "rating scale matches neither RELATE [0,10] nor PAM [1,5]; set \"benchmark\"");
  }
}

}  // namespace

Manifest ReadManifest(const std::filesystem::path& path, ManifestKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open manifest " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();
  Manifest m;
  m.entries = ParseManifest(bytes, kind, path.parent_path());
  m.digest = Sha256Hex(bytes);
  return m;
}

std::string BenchmarkIdOf(const BenchmarkInstance& instance) {
  if (const auto* r = std::get_if<RatingInstance>(&instance)) {
    return r->family.empty() ? "rating" : r->family;
  }
  if (const auto* p = std::get_if<AudioPairInstance>(&instance)) {
    return p->source == PairSource::kRelatePair ? "relate-pair" : "baton-pair";
  }
  if (const auto* t = std::get_if<TextPairInstance>(&instance)) return t->family;
  if (std::holds_alternative<BinaryFeedbackInstance>(instance)) return "baton";
  return "compa";
}

std::string DefaultTemplate(const PromptRegistry& registry, std::string_view benchmark_id) {
  const auto families = registry.Families();
  if (std::find(families.begin(), families.end(), benchmark_id) == families.end()) {
    return "text.default";
  }
  return registry.TemplateSet(registry.FamilyKind(benchmark_id), benchmark_id).front();
}

void CheckTemplateFits(const PromptRegistry& registry, std::string_view template_id,
                       ManifestKind kind) {
  const PromptTemplate& t = registry.Get(template_id);
  const bool fits = t.kind == TemplateKind::kSingleDescription ||
                    (t.kind == TemplateKind::kPairwiseText && kind == ManifestKind::kTextPair);
  if (!fits) {
    throw Error(ErrorCode::kKindMismatch, "template '" + t.id + "' (" + TemplateKindName(t.kind) +
                                              ") cannot score " + ManifestKindName(kind) +
                                              " instances");
  }
}

void ParallelFor(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  const std::size_t threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(workers, 1)));
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_index = n;
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

std::vector<EvalReport> RunEval(const Manifest& manifest, Gateway& gateway,
                                const PromptRegistry& registry, const EvalConfig& config) {
  if (!(config.tie_credit >= 0.0 && config.tie_credit <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tie credit must lie in [0, 1]");
  }
  if (manifest.entries.empty()) throw Error(ErrorCode::kEmptyList, "manifest has no instances");
  const bool aqa = config.method == Method::kAqaScore;
  if (!aqa && !config.template_id.empty()) {
    throw Error(ErrorCode::kIncompatibleMethod,
                "question templates apply to aqascore only, not " +
                    std::string(MethodName(config.method)));
  }

  const std::vector<Group> groups = GroupByBenchmark(manifest);
  // Everything that can fail without touching the backend is checked first.
  std::vector<std::string> template_ids;
  for (const Group& g : groups) {
    CheckMethod(g, config.method);
    std::string tid;
    if (aqa) {
      tid = config.template_id.empty() ? DefaultTemplate(registry, g.benchmark_id)
                                       : config.template_id;
      CheckTemplateFits(registry, tid, g.kind);
    } else if (config.method == Method::kClapScore) {
      tid = "clap";
    } else {
      tid = registry.BaselineTemplate(MethodName(config.method), g.benchmark_id);
      if (config.method == Method::kCascade) registry.BaselineTemplate("cascade", "caption");
    }
    template_ids.push_back(tid);
  }

  std::vector<EvalReport> reports;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const Group& g = groups[gi];
    const std::string& tid = template_ids[gi];
    std::vector<InstanceResult> results(g.items.size());
    ParallelFor(g.items.size(), gateway.options().max_in_flight, [&](std::size_t i) {
      switch (config.method) {
        case Method::kAqaScore: results[i] = ScoreAqa(gateway, registry, tid, *g.items[i]); break;
        case Method::kClapScore: results[i] = ScoreClap(gateway, *g.items[i]); break;
        default:
          results[i] = ScoreBaseline(gateway, registry, config.method, g.benchmark_id,
                                     *g.items[i]);
      }
    });

    EvalReport report;
    report.benchmark_id = g.benchmark_id;
    report.method = config.method;
    report.backend_id = gateway.descriptor().backend_id;
    report.template_id = tid;
    report.instance_count = static_cast<long long>(g.items.size());
    report.failure_count = std::count_if(results.begin(), results.end(),
                                         [](const InstanceResult& r) { return r.failed; });
    report.config_digest = ConfigDigest(manifest, gateway, registry, config, g.benchmark_id, tid);
    if (aqa) {
      report.yes_forms = gateway.descriptor().yes_forms;
      report.no_forms = gateway.descriptor().no_forms;
    }
    switch (g.kind) {
      case ManifestKind::kRating: AddRatingMetrics(report, g.items, results); break;
      case ManifestKind::kAudioPair:
      case ManifestKind::kTextPair:
        AddPairMetrics(report, g.items, results, config.tie_credit);
        break;
      case ManifestKind::kBinaryFeedback:
        AddFeedbackMetrics(report, g.items, results,
                           config.method == Method::kPrompting ||
                               config.method == Method::kCascade);
        break;
      case ManifestKind::kCompaGroup: AddCompaMetrics(report, g.items, results); break;
      case ManifestKind::kMixed: break;
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

std::vector<EvalReport> SweepResult::All() const {
  std::vector<EvalReport> out = per_template;
  out.insert(out.end(), summaries.begin(), summaries.end());
  return out;
}

EvalReport SummarizeSweep(std::span<const EvalReport> per_template, std::string_view set_id) {
  if (per_template.empty()) throw Error(ErrorCode::kEmptyList, "no per-template reports");
  const EvalReport& first = per_template.front();
  EvalReport s;
  s.benchmark_id = first.benchmark_id;
  s.method = first.method;
  s.backend_id = first.backend_id;
  s.template_id = "sweep:" + std::string(set_id);
  s.instance_count = first.instance_count;
  s.yes_forms = first.yes_forms;
  s.no_forms = first.no_forms;
  FieldHasher h;
  h.Add("aqa-sweep-v1").Add(set_id);
  for (const auto& r : per_template) {
    s.failure_count += r.failure_count;
    h.Add(r.template_id).Add(r.config_digest);
  }
  s.config_digest = ToHex(h.Finish());
  for (const auto& [name, v] : first.metrics) {
    std::vector<double> values;
    for (const auto& r : per_template) {
      auto it = r.metrics.find(name);
      if (it != r.metrics.end()) values.push_back(it->second);
    }
    if (values.size() != per_template.size()) continue;
    const SweepSummary sum = Summarize(values);
    s.metrics[name + "/mean"] = sum.mean;
    s.metrics[name + "/std"] = sum.std;
  }
  s.metrics["n_templates"] = static_cast<double>(per_template.size());
  return s;
}

SweepResult RunSweep(const Manifest& manifest, Gateway& gateway, const PromptRegistry& registry,
                     const EvalConfig& config, std::string_view template_set) {
  if (config.method != Method::kAqaScore) {
    throw Error(ErrorCode::kIncompatibleMethod, "template sweeps apply to aqascore only");
  }
  const std::vector<std::string> ids =
      registry.TemplateSet(registry.FamilyKind(template_set), template_set);
  for (const Group& g : GroupByBenchmark(manifest)) {
    for (const auto& id : ids) CheckTemplateFits(registry, id, g.kind);
  }
  SweepResult out;
  for (const auto& id : ids) {
    EvalConfig c = config;
    c.template_id = id;
    for (auto& r : RunEval(manifest, gateway, registry, c)) out.per_template.push_back(std::move(r));
  }
  std::map<std::string, std::vector<EvalReport>> by_benchmark;
  for (const auto& r : out.per_template) by_benchmark[r.benchmark_id].push_back(r);
  for (const auto& [id, reports] : by_benchmark) {
    out.summaries.push_back(SummarizeSweep(reports, template_set));
  }
  return out;
}

}  // namespace aqa
