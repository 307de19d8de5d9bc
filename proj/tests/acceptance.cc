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

// Acceptance run: one PASS/FAIL line per primary criterion, each with its
// pinned tolerance and wall-clock budget. Exit status is the failure count.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "aqa/baselines.h"
#include "aqa/benchmark.h"
#include "aqa/eval.h"
#include "aqa/mock_backend.h"
#include "aqa/prompt_registry.h"
#include "aqa/scoring.h"
#include "aqa/stats.h"
#include "json.hpp"

namespace {

using namespace aqa;
using V = std::vector<double>;

// Collects the first few violations of a criterion.
class Check {
 public:
  void Expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) detail_ += (detail_.empty() ? "" : "; ") + what;
  }
  bool ok() const { return failures_ == 0; }
  std::string detail() const {
    return failures_ <= 3 ? detail_ : detail_ + "; +" + std::to_string(failures_ - 3) + " more";
  }
  std::string note;

 private:
  int failures_ = 0;
  std::string detail_;
};

std::string Num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---- 1. scoring identities -------------------------------------------------

void ScoringIdentities(Check& c) {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> lp(-200.0, 0.0);
  std::uniform_real_distribution<double> shift(-500.0, 500.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double y = lp(rng), n = lp(rng), s = shift(rng);
    const long double naive = 1.0L / (1.0L + std::exp(static_cast<long double>(n) - y));
    const double got = AqaScore(y, n);
    const double err = std::fabs(static_cast<double>(got - naive));
    worst = std::max(worst, err);
    c.Expect(err <= 1e-12, "formula at (" + Num(y) + "," + Num(n) + ")");
    c.Expect(std::fabs(AqaScore(y, n) + AqaScore(n, y) - 1.0) <= 1e-12, "complement");
    c.Expect(std::fabs(AqaScore(y + s, n + s) - got) <= 1e-12, "shift by " + Num(s));
  }
  c.note = "10000 pairs, max formula error " + Num(worst);
}

// ---- 2. correlation oracles -----------------------------------------------

double KendallOracle(const V& x, const V& y) {
  long long con = 0, dis = 0, tx = 0, ty = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double dx = x[i] - x[j], dy = y[i] - y[j];
      if (dx == 0) ++tx;
      if (dy == 0) ++ty;
      if (dx != 0 && dy != 0) ((dx > 0) == (dy > 0) ? con : dis) += 1;
    }
  }
  const double n0 = static_cast<double>(x.size() * (x.size() - 1) / 2);
  return static_cast<double>(con - dis) / std::sqrt((n0 - tx) * (n0 - ty));
}

void CorrelationOracles(Check& c) {
  const V fixed{0.3, -1.0, 2.5, 2.5, 7.0, 4.0};
  V perm{1, 2, 3, 4, 5, 6};
  int perms = 0;
  do {
    c.Expect(Spearman(fixed, perm) == Pearson(AverageRanks(fixed), AverageRanks(perm)),
             "spearman != pearson of ranks");
    ++perms;
  } while (std::next_permutation(perm.begin(), perm.end()));
  c.Expect(perms == 720, "permutation count");

  std::mt19937_64 rng(77);
  int series = 0;
  double worst = 0.0;
  while (series < 1000) {
    const std::size_t n = 2 + rng() % 49;
    const int levels = 2 + static_cast<int>(rng() % 6);
    V x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(rng() % levels);
      y[i] = static_cast<double>(rng() % levels);
    }
    const bool cx = std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; });
    const bool cy = std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; });
    if (cx || cy) continue;  // tau-b undefined; covered by the error-path tests
    const double err = std::fabs(KendallTauB(x, y) - KendallOracle(x, y));
    worst = std::max(worst, err);
    c.Expect(err <= 1e-12, "kendall vs oracle n=" + std::to_string(n));
    ++series;
  }
  c.Expect(std::fabs(Pearson(V{1, 2, 3, 4}, V{1, 3, 2, 4}) - 0.8) <= 1e-5, "pearson 0.8");
  c.Expect(std::fabs(KendallTauB(V{1, 1, 2}, V{1, 2, 3}) - 2 / std::sqrt(6.0)) <= 1e-5,
           "tau-b 2/sqrt6");
  c.Expect(std::fabs(Spearman(V{1, 2, 2, 3}, V{1, 2, 3, 4}) - 4.5 / std::sqrt(22.5)) <= 1e-5,
           "spearman 4.5/sqrt22.5");
  c.note = "720 perms, 1000 tied series, max tau-b error " + Num(worst);
}

// ---- 3. AUC ------------------------------------------------------------------

double MannWhitneyBrute(const std::vector<int>& labels, const V& scores) {
  double wins = 0, pairs = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < labels.size(); ++j) {
      if (labels[j] != 0) continue;
      pairs += 1;
      wins += scores[i] > scores[j] ? 1.0 : scores[i] == scores[j] ? 0.5 : 0.0;
    }
  }
  return wins / pairs;
}

double TrapezoidRoc(const std::vector<int>& labels, const V& scores) {
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return scores[a] > scores[b]; });
  const double P = static_cast<double>(std::count(labels.begin(), labels.end(), 1));
  const double N = static_cast<double>(labels.size()) - P;
  double tpr = 0, fpr = 0, area = 0;
  for (std::size_t i = 0; i < idx.size();) {
    double tp = 0, fp = 0;
    std::size_t j = i;
    for (; j < idx.size() && scores[idx[j]] == scores[idx[i]]; ++j) {
      (labels[idx[j]] == 1 ? tp : fp) += 1;
    }
    const double nt = tpr + tp / P, nf = fpr + fp / N;
    area += (nf - fpr) * (tpr + nt) / 2;
    tpr = nt;
    fpr = nf;
    i = j;
  }
  return area;
}

void Auc(Check& c) {
  std::mt19937_64 rng(31337);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 2 + rng() % 200;
    std::vector<int> labels(n);
    V scores(n);
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = static_cast<int>(rng() & 1);
      scores[i] = static_cast<double>(rng() % 25) / 24.0;  // coarse grid: many ties
    }
    labels[rng() % n] = 1;
    std::size_t k;
    do k = rng() % n; while (labels[k] == 1 && std::count(labels.begin(), labels.end(), 1) == 1);
    labels[k] = 0;
    if (std::count(labels.begin(), labels.end(), 1) == 0) labels[(k + 1) % n] = 1;
    const double auc = RocAuc(labels, scores);
    const double e1 = std::fabs(auc - MannWhitneyBrute(labels, scores));
    const double e2 = std::fabs(auc - TrapezoidRoc(labels, scores));
    worst = std::max({worst, e1, e2});
    c.Expect(e1 <= 1e-12, "vs Mann-Whitney");
    c.Expect(e2 <= 1e-12, "vs trapezoid");
  }
  c.note = "1000 instances, max error " + Num(worst);
}

// ---- 4. conversion -----------------------------------------------------------

void Conversion(Check& c) {
  // Group g holds clips with integer means 0..m-1 (m = 4..11). A pair
  // qualifies iff its gap is >= 3, i.e. (m-3)(m-2)/2 per group; gaps of
  // exactly 2.0 sit on the threshold and are excluded.
  std::vector<RatingInstance> ratings;
  std::size_t expected = 0;
  for (int m = 4; m <= 11; ++m) {
    expected += static_cast<std::size_t>((m - 3) * (m - 2) / 2);
    for (int k = 0; k < m; ++k) {
      RatingInstance r;
      r.id = "g" + std::to_string(m) + "c" + std::to_string(k);
      r.audio = UnloadedAudio(r.id + ".wav", "/data");
      r.text = "prompt " + std::to_string(m);
      // Two raters straddling the mean keep the aggregate exact.
      r.ratings = k == 0 ? V{0, 0} : V{k - 0.5, k + 0.5};
      ratings.push_back(r);
    }
  }
  const auto pairs = BuildRelatePairs(ratings, 2.0, 11);
  c.Expect(pairs.size() == expected,
           "relate pairs " + std::to_string(pairs.size()) + " != " + std::to_string(expected));
  for (const auto& p : pairs) {
    const auto& win = p.preference == HumanChoice::kFirst ? p.audio_first : p.audio_second;
    const auto& lose = p.preference == HumanChoice::kFirst ? p.audio_second : p.audio_first;
    const int kw = std::stoi(win.locator.substr(win.locator.find('c') + 1));
    const int kl = std::stoi(lose.locator.substr(lose.locator.find('c') + 1));
    c.Expect(kw - kl >= 3, "preference or threshold wrong for " + p.id);
  }

  std::vector<BinaryFeedbackInstance> feedback;
  std::size_t product = 0;
  for (int p = 0; p <= 4; ++p) {
    for (int r = 0; r <= 4; ++r) {
      product += static_cast<std::size_t>(p * r);
      for (int i = 0; i < p + r; ++i) {
        BinaryFeedbackInstance b;
        b.id = "p" + std::to_string(p) + "r" + std::to_string(r) + "i" + std::to_string(i);
        b.audio = UnloadedAudio(b.id + ".wav", "/data");
        b.text = "text " + std::to_string(p) + "/" + std::to_string(r);
        b.label = i < p ? FeedbackLabel::kPreferred : FeedbackLabel::kRejected;
        b.event_count = 2 + (p + r) % 2;
        feedback.push_back(b);
      }
    }
  }
  const auto baton = BuildBatonPairs(feedback, 5);
  c.Expect(baton.size() == product,
           "baton pairs " + std::to_string(baton.size()) + " != " + std::to_string(product));
  c.note = std::to_string(expected) + " relate pairs, " + std::to_string(product) +
           " baton pairs over 25 groups";
}

// ---- 5. CompA invariants -----------------------------------------------------

void Compa(Check& c) {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<std::function<double(double)>> transforms{
      [](double s) { return 3.0 * s + 1.0; },
      [](double s) { return 1.0 / (1.0 + std::exp(-8.0 * (s - 0.5))); },
      [](double s) { return std::exp(s); }};
  for (int t = 0; t < 10000; ++t) {
    ScoreGrid g;
    for (auto& row : g) {
      for (auto& v : row) v = t % 4 == 0 ? static_cast<double>(rng() % 3) / 2.0 : u(rng);
    }
    const auto r = CompaGroupEval(g);
    c.Expect(r.group_ok == (r.text_ok && r.audio_ok), "group != text && audio");
    const ScoreGrid swapped{{{g[1][1], g[1][0]}, {g[0][1], g[0][0]}}};
    c.Expect(CompaGroupEval(swapped) == r, "swap changed flags");
    for (const auto& f : transforms) {
      ScoreGrid h;
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) h[i][j] = f(g[i][j]);
      }
      c.Expect(CompaGroupEval(h) == r, "monotone transform changed flags");
    }
  }
  c.note = "10000 grids, 3 transforms";
}

// ---- 6. end-to-end -----------------------------------------------------------

std::string ReadText(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Pair accuracy expected from the raw planted table, without the library's
// scoring path: each pair's prediction is read off the planted p values.
std::map<std::string, double> HandEnumeratedPairAccuracy(const std::filesystem::path& dir) {
  std::map<std::pair<std::string, std::string>, double> planted;
  const auto doc = nlohmann::json::parse(ReadText(dir / "planted.json"));
  for (const auto& e : doc.at("planted")) {
    planted[{e["audio"].get<std::string>(), e["text"].get<std::string>()}] = e["p"].get<double>();
  }
  std::map<std::string, std::pair<int, int>> tally;  // benchmark -> (correct, total)
  auto p = [&](const nlohmann::json& audio, const std::string& subject) {
    return planted.at({audio.get<std::string>(), subject});
  };
  std::istringstream lines(ReadText(dir / "mixed.jsonl"));
  for (std::string line; std::getline(lines, line);) {
    const auto j = nlohmann::json::parse(line);
    bool first;
    std::string bench;
    if (j["kind"] == "audio_pair") {
      const auto text = j["text"].get<std::string>();
      first = p(j["audio_first"], text) > p(j["audio_second"], text);
      bench = "relate-pair";
    } else if (j["kind"] == "text_pair") {
      const std::string subject =
          j["text_first"].get<std::string>() + "\n" + j["text_second"].get<std::string>();
      first = p(j["audio"], subject) > 0.5;
      bench = "fense";
    } else {
      continue;
    }
    auto& [ok, n] = tally[bench];
    ok += first == (j["preference"] == "first");
    ++n;
  }
  std::map<std::string, double> out;
  for (const auto& [b, t] : tally) out[b] = static_cast<double>(t.first) / t.second;
  return out;
}

void EndToEnd(Check& c) {
  const auto dir = std::filesystem::path(AQA_TEST_DATA_DIR) / "e2e";
  const PromptRegistry registry = PromptRegistry::Load(AQA_REGISTRY_PATH);
  auto run = [&] {
    const Manifest m = ReadManifest(dir / "mixed.jsonl", ManifestKind::kMixed);
    const MockOracleConfig cfg = LoadMockConfig(dir / "planted.json");
    Gateway gw(BackendDescriptor{}, std::make_unique<MockBackend>(cfg));
    EvalConfig ec;
    ec.seed = cfg.seed;
    ec.backend_fingerprint = cfg.Digest();
    return EmitReport(RunEval(m, gw, registry, ec), ReportFormat::kJson);
  };
  const std::string a = run(), b = run();
  c.Expect(a == b, "JSON reports differ between runs");
  const auto expected = HandEnumeratedPairAccuracy(dir);
  std::string note;
  for (const auto& r : ParseReportJson(a)) {
    if (r.benchmark_id == "relate") {
      c.Expect(r.metrics.at("srcc") >= 0.99, "srcc " + Num(r.metrics.at("srcc")));
      note += "relate srcc " + Num(r.metrics.at("srcc")) + ", ";
      continue;
    }
    const double want = expected.at(r.benchmark_id);
    c.Expect(want == 0.9, r.benchmark_id + " hand enumeration gives " + Num(want));
    c.Expect(r.metrics.at("pair_acc") == want,
             r.benchmark_id + " pair_acc " + Num(r.metrics.at("pair_acc")));
    note += r.benchmark_id + " pair_acc " + Num(r.metrics.at("pair_acc")) + ", ";
  }
  c.Expect(expected.size() == 2, "expected two pairwise benchmarks");
  c.note = note + "mock backend, no network";
}

// ---- 7. parser totality ------------------------------------------------------

void Parsers(Check& c) {
  std::mt19937_64 rng(99991);
  const Scale relate{0, 10};
  const std::vector<ChoiceKind> kinds{ChoiceKind::kCaption12, ChoiceKind::kAudioFirstSecond,
                                      ChoiceKind::kPreferredRejected};
  for (int t = 0; t < 100000; ++t) {
    std::string s(rng() % 64, '\0');
    for (auto& ch : s) ch = static_cast<char>(rng() & 0xff);
    if (t % 2) s = (t % 4 == 1 ? "Score: " : "Answer: ") + s;  // reach the value scanners
    try {
      const auto r = ParseScore(s, relate);
      c.Expect(r.value >= 0 && r.value <= 10, "score out of scale accepted");
    } catch (const Error& e) {
      c.Expect(e.code() == ErrorCode::kNoMatch || e.code() == ErrorCode::kOutOfScale,
               "unexpected score error");
    } catch (...) {
      c.Expect(false, "non-typed exception from ParseScore");
    }
    for (ChoiceKind k : kinds) {
      try {
        ParseChoice(s, k);
      } catch (const Error& e) {
        c.Expect(e.code() == ErrorCode::kNoMatch || e.code() == ErrorCode::kAmbiguousValue,
                 "unexpected choice error");
      } catch (...) {
        c.Expect(false, "non-typed exception from ParseChoice");
      }
    }
  }
  int round_trips = 0;
  for (int v = 0; v <= 10; ++v, ++round_trips) {
    c.Expect(ParseScore("Score: " + std::to_string(v), relate).value == v, "Score round trip");
  }
  for (int v = 1; v <= 5; ++v, ++round_trips) {
    c.Expect(ParseScore("Score: " + std::to_string(v), Scale{1, 5}).value == v, "PAM round trip");
  }
  const std::vector<std::tuple<std::string, ChoiceKind, ParsedChoice>> formats{
      {"Better Caption: 1", ChoiceKind::kCaption12, ParsedChoice::kFirst},
      {"Better Caption: 2", ChoiceKind::kCaption12, ParsedChoice::kSecond},
      {"Better Match: first audio", ChoiceKind::kAudioFirstSecond, ParsedChoice::kFirst},
      {"Better Match: second audio", ChoiceKind::kAudioFirstSecond, ParsedChoice::kSecond},
      {"Answer: preferred", ChoiceKind::kPreferredRejected, ParsedChoice::kPreferred},
      {"Answer: rejected", ChoiceKind::kPreferredRejected, ParsedChoice::kRejected},
      {"Decision: preferred", ChoiceKind::kPreferredRejected, ParsedChoice::kPreferred},
      {"Decision: rejected", ChoiceKind::kPreferredRejected, ParsedChoice::kRejected}};
  for (const auto& [text, kind, want] : formats) {
    c.Expect(ParseChoice(text, kind) == want, "round trip of '" + text + "'");
    ++round_trips;
  }
  for (ChoiceKind k : kinds) {
    for (ParsedChoice v : AdmissibleChoices(k)) {
      c.Expect(ParseChoice(FormatChoice(k, v), k) == v, "FormatChoice round trip");
      ++round_trips;
    }
  }
  c.note = "100000 fuzz strings x 4 parsers, " + std::to_string(round_trips) + " round trips";
}

// ---- 8. sweep math -----------------------------------------------------------

void SweepMath(Check& c) {
  const V nine(9, 0.7312);
  const auto s9 = Summarize(nine);
  c.Expect(s9.std == 0.0 && s9.mean == 0.7312 && s9.n_templates == 9, "9 constants");

  const auto s2 = Summarize(V{0.4, 0.6});
  c.Expect(s2.mean == 0.5, "mean " + Num(s2.mean));
  // The operands are the binary neighbours of 0.4 and 0.6; their exact
  // population std is |0.6 - 0.4| / 2, where the subtraction is exact.
  const double exact = (0.6 - 0.4) / 2;
  c.Expect(s2.std == exact, "std " + Num(s2.std) + " != exact " + Num(exact));
  c.Expect(std::fabs(s2.std - 0.1) <= 1e-16, "std far from 0.1");

  // The same through a real 9-template sweep on identical planted scores.
  const auto dir = std::filesystem::path(AQA_TEST_DATA_DIR) / "e2e";
  const PromptRegistry registry = PromptRegistry::Load(AQA_REGISTRY_PATH);
  Manifest m = ReadManifest(dir / "mixed.jsonl", ManifestKind::kMixed);
  std::erase_if(m.entries, [](const ManifestEntry& e) {
    return KindOf(e.instance) != ManifestKind::kRating;
  });
  const MockOracleConfig cfg = LoadMockConfig(dir / "planted.json");
  Gateway gw(BackendDescriptor{}, std::make_unique<MockBackend>(cfg));
  EvalConfig ec;
  ec.seed = cfg.seed;
  const auto sweep = RunSweep(m, gw, registry, ec, "relate");
  c.Expect(sweep.summaries.size() == 1, "one summary");
  for (const auto& [name, v] : sweep.summaries.at(0).metrics) {
    if (name.ends_with("/std")) c.Expect(v == 0.0, name + " = " + Num(v));
  }
  c.note = "std(0.4,0.6) = " + Num(s2.std) + " (exact for the binary operands)";
}

struct Criterion {
  const char* name;
  const char* tolerance;
  double budget_s;
  void (*fn)(Check&);
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"scoring identities", "abs 1e-12", 1.0, ScoringIdentities},
      {"correlation oracles", "exact / 1e-12 / hand 1e-5", 10.0, CorrelationOracles},
      {"auc oracles", "abs 1e-12", 5.0, Auc},
      {"pair conversion counts", "exact", 5.0, Conversion},
      {"compa invariants", "exact", 5.0, Compa},
      {"end-to-end determinism", "byte-identical; pair_acc exact; srcc >= 0.99", 5.0, EndToEnd},
      {"parser totality", "no untyped failure; exact round trip", 10.0, Parsers},
      {"sweep math", "exact", 5.0, SweepMath},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& cr = criteria[i];
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.fn(check);
    } catch (const std::exception& e) {
      check.Expect(false, std::string("threw: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    check.Expect(secs < cr.budget_s, "over time budget");
    const bool ok = check.ok();
    failed += !ok;
    std::printf("%s [%zu] %-24s tol=%s  time=%.3fs (<%.0fs)  %s\n", ok ? "PASS" : "FAIL", i + 1,
                cr.name, cr.tolerance, secs, cr.budget_s,
                ok ? check.note.c_str() : check.detail().c_str());
  }
  std::printf("%s: %d/%zu criteria passed\n", failed ? "FAIL" : "PASS",
              static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
