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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

#include "aqa/benchmark.h"
#include "aqa/report.h"
#include "json.hpp"
#include "test_util.h"

namespace aqa {
namespace {

using nlohmann::json;
using testing::DataDir;

struct RunResult {
  int code = -1;
  std::string out;
};

// Runs the CLI through the shell; stderr is discarded.
RunResult Cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " '" + std::string(AQA_EVAL_BIN) + "' " + args + " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string Q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

const std::string kE2eMock = "--manifest " + Q(DataDir() / "e2e" / "mixed.jsonl") +
                             " --mock --planted " + Q(DataDir() / "e2e" / "planted.json");

TEST(CliTest, ScoreWithPlantedEntry) {
  const auto r = Cli("score --audio " + Q(DataDir() / "e2e" / "audio" / "clip00.wav") +
                     " --text 'a dog heard in scene 0' --mock --planted " +
                     Q(DataDir() / "e2e" / "planted.json"));
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["aqa_score"].get<double>(), 0.05, 1e-12);
  EXPECT_EQ(j["template_id"], "text.default");
  EXPECT_EQ(j["backend_id"], "mock");
}

TEST(CliTest, ScoreIsDeterministicAndSeedSensitive) {
  const std::string base =
      "score --audio " + Q(DataDir() / "e2e" / "audio" / "clip03.wav") + " --text 'a cat' --mock";
  const auto a = Cli(base + " --seed 1"), b = Cli(base + " --seed 1"), c = Cli(base + " --seed 2");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(json::parse(a.out)["aqa_score"], json::parse(c.out)["aqa_score"]);
}

TEST(CliTest, EvalJsonIsByteIdenticalAcrossRuns) {
  const auto a = Cli("eval " + kE2eMock + " --format json");
  const auto b = Cli("eval " + kE2eMock + " --format json --max-in-flight 1");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const auto reports = ParseReportJson(a.out);
  ASSERT_EQ(reports.size(), 3u);
  EXPECT_EQ(reports[0].benchmark_id, "fense");
  EXPECT_EQ(reports[0].metrics.at("pair_acc"), 0.9);
}

TEST(CliTest, EvalWritesFilesAndUsesCache) {
  testing::TempDir dir;
  const std::string args = "eval " + kE2eMock + " --format csv --out " + Q(dir / "r.csv") +
                           " --plot-out " + Q(dir / "plot.csv") + " --cache-dir " +
                           Q(dir / "cache");
  ASSERT_EQ(Cli(args).code, 0);
  const std::string csv = testing::ReadFile(dir / "r.csv");
  EXPECT_TRUE(csv.starts_with("benchmark_id,method,backend_id,template_id,"));
  EXPECT_TRUE(testing::ReadFile(dir / "plot.csv").starts_with("benchmark_id,method,template_id"));
  EXPECT_TRUE(std::filesystem::exists(dir / "cache"));
  // The second run is answered from the cache and must not differ.
  ASSERT_EQ(Cli(args).code, 0);
  EXPECT_EQ(testing::ReadFile(dir / "r.csv"), csv);
}

TEST(CliTest, AllMethodsRunOnMock) {
  for (const char* m : {"clapscore", "prompting", "cascade"}) {
    const auto r = Cli("eval " + kE2eMock + " --method " + m + " --format md");
    EXPECT_EQ(r.code, 0) << m;
    EXPECT_NE(r.out.find("## relate"), std::string::npos) << m;
  }
}

TEST(CliTest, ValidationErrorsExitTwo) {
  EXPECT_EQ(Cli("").code, 2);
  EXPECT_EQ(Cli("eval --mock").code, 2);
  EXPECT_EQ(Cli("eval " + kE2eMock + " --method bleu").code, 2);
  EXPECT_EQ(Cli("eval " + kE2eMock + " --format xlsx").code, 2);
  EXPECT_EQ(Cli("eval " + kE2eMock + " --kind spectrogram").code, 2);
  EXPECT_EQ(Cli("eval " + kE2eMock + " --template fense.default").code, 2);
  EXPECT_EQ(Cli("eval --manifest " + Q(DataDir() / "e2e" / "mixed.jsonl")).code, 2);
  EXPECT_EQ(Cli("eval --manifest " + Q(DataDir() / "compa" / "compa.jsonl") +
                " --mock --method prompting")
                .code,
            2);
  EXPECT_EQ(Cli("sweep " + kE2eMock + " --templates fense").code, 2);
  EXPECT_EQ(Cli("eval --manifest /nonexistent.jsonl --mock").code, 2);
}

TEST(CliTest, BackendErrorsExitThree) {
  const std::string url = "http://127.0.0.1:" + std::to_string(testing::UnusedLoopbackPort());
  EXPECT_EQ(Cli("eval --manifest " + Q(DataDir() / "e2e" / "mixed.jsonl") + " --backend-url " +
                url + " --retries 0 --timeout-ms 2000")
                .code,
            3);
  // The environment variable stands in for the flag.
  EXPECT_EQ(Cli("eval --manifest " + Q(DataDir() / "e2e" / "mixed.jsonl") + " --retries 0",
                "AQA_BACKEND_URL=" + url)
                .code,
            3);
  // ...and the flag wins over it.
  EXPECT_EQ(Cli("eval " + kE2eMock + " --format csv", "AQA_BACKEND_URL=" + url).code, 0);
}

TEST(CliTest, FailureRateAboveLimitExitsFour) {
  testing::TempDir dir;
  json planted = json::parse(testing::ReadFile(DataDir() / "e2e" / "planted.json"));
  for (auto& e : planted["planted"]) {
    e["audio"] = (DataDir() / "e2e" / e["audio"].get<std::string>()).string();
  }
  json gens = json::array();
  for (int i = 0; i < 4; ++i) {
    char clip[64];
    std::snprintf(clip, sizeof clip, "audio/clip%02d.wav", i);
    gens.push_back({{"audio", (DataDir() / "e2e" / clip).string()},
                    {"template", "prompting.rate.relate"},
                    {"text", "no idea"}});
  }
  planted["generations"] = gens;
  testing::WriteFile(dir / "planted.json", planted.dump());
  const std::string base = "eval --manifest " + Q(DataDir() / "e2e" / "mixed.jsonl") +
                           " --mock --planted " + Q(dir / "planted.json") +
                           " --method prompting --format csv";
  // 4 of 20 relate instances fail to parse.
  EXPECT_EQ(Cli(base + " --max-failure-rate 0.1").code, 4);
  EXPECT_EQ(Cli(base + " --max-failure-rate 0.2").code, 0);
}

TEST(CliTest, SweepEmitsSummaryRows) {
  testing::TempDir dir;
  std::string ratings;
  const std::string all = testing::ReadFile(DataDir() / "e2e" / "mixed.jsonl");
  std::istringstream in(all);
  for (std::string line; std::getline(in, line);) {
    if (line.find("\"kind\": \"rating\"") == std::string::npos) continue;
    json j = json::parse(line);
    j["audio"] = (DataDir() / "e2e" / j["audio"].get<std::string>()).string();
    ratings += j.dump() + "\n";
  }
  testing::WriteFile(dir / "ratings.jsonl", ratings);
  const auto s = Cli("sweep --manifest " + Q(dir / "ratings.jsonl") + " --mock --planted " +
                     Q(DataDir() / "e2e" / "planted.json") + " --templates relate --format json");
  ASSERT_EQ(s.code, 0);
  const auto reports = ParseReportJson(s.out);
  ASSERT_EQ(reports.size(), 10u);
  // "sweep:" sorts ahead of the per-template "text.*" rows.
  const auto& summary = reports.front();
  EXPECT_EQ(summary.template_id, "sweep:relate");
  EXPECT_EQ(summary.metrics.at("n_templates"), 9.0);
  EXPECT_EQ(summary.metrics.at("srcc/std"), 0.0);
}

TEST(CliTest, ConvertRelateToPairs) {
  testing::TempDir dir;
  std::string lines;
  const double means[] = {7.2, 4.8, 6.0, 4.0, 5.5};
  for (int i = 0; i < 5; ++i) {
    json j = {{"kind", "rating"},
              {"id", "r" + std::to_string(i)},
              {"audio", (DataDir() / "e2e" / "audio" / ("clip0" + std::to_string(i) + ".wav"))
                            .string()},
              {"text", "same prompt"},
              {"ratings", {means[i]}},
              {"scale", {0, 10}}};
    lines += j.dump() + "\n";
  }
  testing::WriteFile(dir / "relate.jsonl", lines);
  const std::string out = (dir / "sub" / "pairs.jsonl").string();
  std::filesystem::create_directories(dir / "sub");
  const auto r = Cli("convert --in " + Q(dir / "relate.jsonl") +
                     " --from relate --to relate-pair --threshold 2.0 --shuffle-seed 3 --out '" +
                     out + "'");
  ASSERT_EQ(r.code, 0);
  // Only 7.2 vs 4.8 and 7.2 vs 4.0 clear the strict 2.0 gap; 6.0 vs 4.0 sits on it.
  const auto pairs = LoadManifest(out, ManifestKind::kAudioPair);
  EXPECT_EQ(pairs.size(), 2u);
  for (const auto& e : pairs) EXPECT_TRUE(std::get<AudioPairInstance>(e.instance).audio_first.loaded());
  const std::string first = testing::ReadFile(out);
  ASSERT_EQ(Cli("convert --in " + Q(dir / "relate.jsonl") +
                " --from relate --to relate-pair --shuffle-seed 3 --out '" + out + "'")
                .code,
            0);
  EXPECT_EQ(testing::ReadFile(out), first);
  EXPECT_EQ(Cli("convert --in " + Q(dir / "relate.jsonl") + " --from relate --to baton-pair").code,
            2);
}

}  // namespace
}  // namespace aqa
