/*
 * Copyright 2026 The cwla-eval Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cmath>
#include <sstream>

#include "cwla/corpus.h"
#include "cwla/error.h"
#include "doctest.h"

namespace cwla {
namespace {

Qrels qrels_from(const std::string& text) {
  std::istringstream in(text);
  return parse_qrels(in, "test.qrels");
}

Run run_from(const std::string& text) {
  std::istringstream in(text);
  return parse_run(in, "test.run");
}

TEST_CASE("parse_qrels reads levels and the observed maximum") {
  const auto qrels = qrels_from("q1 0 dA 2\nq1 0 dB 0\n");
  CHECK(qrels.size() == 2);
  CHECK(qrels.level("q1", "dA") == 2);
  CHECK(qrels.level("q1", "dB") == 0);
  CHECK_FALSE(qrels.level("q1", "dC").has_value());
  CHECK(qrels.max_level() == 2);
}

TEST_CASE("parse_qrels: last duplicate wins, blank lines are skipped") {
  const auto qrels = qrels_from("q1 0 dA 2\n\n   \nq1 0 dA 3\n");
  CHECK(qrels.size() == 1);
  CHECK(qrels.level("q1", "dA") == 3);
  CHECK(qrels.max_level() == 3);
}

TEST_CASE("empty qrels have no usable max level unless one is set") {
  auto qrels = qrels_from("");
  CHECK(qrels.empty());
  CHECK_THROWS_AS(qrels.max_level(), ConfigError);
  qrels.set_max_level(4);
  CHECK(qrels.max_level() == 4);
}

TEST_CASE("max level override cannot drop below observed levels") {
  auto qrels = qrels_from("q1 0 dA 3\n");
  CHECK_THROWS_AS(qrels.set_max_level(2), ConfigError);
  CHECK_THROWS_AS(qrels.set_max_level(0), ConfigError);
  qrels.set_max_level(4);
  CHECK(qrels.max_level() == 4);
}

TEST_CASE("parse_qrels errors name the line") {
  auto message = [](const std::string& text) {
    try {
      qrels_from(text);
    } catch (const DataError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("q1 0 dA 1\nq1 0 dB\n").find("test.qrels:2") == 0);
  CHECK(message("q1 0 dA x\n").find("not an integer") != std::string::npos);
  CHECK(message("q1 0 dA 1.5\n").find("not an integer") != std::string::npos);
  CHECK(message("q1 0 dA -1\n").find("negative") != std::string::npos);
}

TEST_CASE("parse_run orders by descending score") {
  const auto run = run_from(
      "q1 Q0 dLow 1 1.0 sys\n"
      "q1 Q0 dHigh 2 3.0 sys\n");
  CHECK(run.id == "sys");
  CHECK(run.ranked.at("q1") == std::vector<std::string>{"dHigh", "dLow"});
}

TEST_CASE("parse_run breaks score ties by ascending doc id") {
  const auto run = run_from(
      "q1 Q0 dB 1 2.0 sys\n"
      "q1 Q0 dA 2 2.0 sys\n");
  CHECK(run.ranked.at("q1") == std::vector<std::string>{"dA", "dB"});
}

TEST_CASE("parse_run rejects malformed input") {
  CHECK_THROWS_WITH_AS(run_from("q1 Q0 dA 1 2.0\n"),
                       doctest::Contains("test.run:1"), DataError);
  CHECK_THROWS_WITH_AS(run_from("q1 Q0 dA 1 high sys\n"),
                       doctest::Contains("not a finite number"), DataError);
  CHECK_THROWS_WITH_AS(run_from("q1 Q0 dA 1 2 sys\nq1 Q0 dA 2 1 sys\n"),
                       doctest::Contains("duplicate document"), DataError);
  CHECK_THROWS_WITH_AS(run_from("q1 Q0 dA 1 2 sys\nq1 Q0 dB 2 1 other\n"),
                       doctest::Contains("run tag"), DataError);
}

TEST_CASE("parse_run is independent of line order") {
  const auto a = run_from(
      "q2 Q0 x 1 0.5 s\nq1 Q0 dA 1 2 s\nq1 Q0 dC 3 1 s\nq1 Q0 dB 2 2 s\n");
  const auto b = run_from(
      "q1 Q0 dC 3 1 s\nq1 Q0 dB 2 2 s\nq2 Q0 x 1 0.5 s\nq1 Q0 dA 1 2 s\n");
  CHECK(a.ranked == b.ranked);
}

TEST_CASE("map_gain linear and exponential") {
  CHECK(map_gain(2, {GainScheme::kLinear, 4}) == 0.5);
  CHECK(map_gain(4, {GainScheme::kLinear, 4}) == 1.0);
  CHECK(map_gain(3, {GainScheme::kExponential, 3}) == 0.875);
  CHECK(map_gain(0, {GainScheme::kLinear, 4}) == 0.0);
  CHECK(map_gain(0, {GainScheme::kExponential, 4}) == 0.0);
  CHECK_THROWS_AS(map_gain(5, {GainScheme::kLinear, 4}), DataError);
  CHECK_THROWS_AS(map_gain(-1, {GainScheme::kLinear, 4}), DataError);
}

TEST_CASE("map_gain matches the closed forms exactly for every level") {
  for (int max_level = 1; max_level <= 6; ++max_level) {
    for (int x = 0; x <= max_level; ++x) {
      CHECK(map_gain(x, {GainScheme::kLinear, max_level}) ==
            static_cast<double>(x) / max_level);
      CHECK(map_gain(x, {GainScheme::kExponential, max_level}) ==
            (std::pow(2.0, x) - 1.0) / std::pow(2.0, max_level));
    }
    // Exponential never reaches 1.
    CHECK(map_gain(max_level, {GainScheme::kExponential, max_level}) < 1.0);
  }
}

TEST_CASE("GainVector enforces its invariants") {
  CHECK_THROWS_AS(GainVector(std::vector<double>{}), DataError);
  CHECK_THROWS_AS(GainVector({0.5, 1.5}), DataError);
  CHECK_THROWS_AS(GainVector({-0.1}), DataError);
  CHECK(GainVector({0.0, 1.0}).depth() == 2);
}

TEST_CASE("assemble_gains pads, truncates and zeroes unjudged documents") {
  auto qrels = qrels_from("q1 0 dA 4\nq1 0 dC 2\nq2 0 dZ 1\n");
  std::vector<Run> runs;
  runs.push_back(run_from("q1 Q0 dA 1 9 short\nq1 Q0 dB 2 8 short\n"));
  runs.push_back(run_from(
      "q1 Q0 dA 1 9 deep\nq1 Q0 dB 2 8 deep\nq1 Q0 dC 3 7 deep\n"
      "q1 Q0 dD 4 6 deep\n"));
  const RunSet set(std::move(runs));
  const auto table = assemble_gains(set, qrels, {GainScheme::kLinear, 4}, 3);

  CHECK(table.topic_ids() == std::vector<std::string>{"q1", "q2"});
  CHECK(table.at("short", "q1") == GainVector({1.0, 0.0, 0.0}));
  CHECK(table.at("deep", "q1") == GainVector({1.0, 0.0, 0.5}));
  // q2 is judged but no run retrieved anything for it.
  CHECK(table.at("deep", "q2") == GainVector({0.0, 0.0, 0.0}));
  CHECK(table.warnings().empty());
}

TEST_CASE("assemble_gains: empty list gives depth zeros") {
  auto qrels = qrels_from("q1 0 dA 1\n");
  std::vector<Run> runs{Run{"empty", {{"q1", {}}}}};
  const auto table =
      assemble_gains(RunSet(std::move(runs)), qrels, {GainScheme::kLinear, 1}, 10);
  CHECK(table.at("empty", "q1") == GainVector(std::vector<double>(10, 0.0)));
}

TEST_CASE("assemble_gains warns about run topics missing from qrels") {
  auto qrels = qrels_from("q1 0 dA 1\n");
  std::vector<Run> runs;
  runs.push_back(run_from("q1 Q0 dA 1 1 s\nq9 Q0 dA 1 1 s\n"));
  const auto table =
      assemble_gains(RunSet(std::move(runs)), qrels, {GainScheme::kLinear, 1}, 2);
  REQUIRE(table.warnings().size() == 1);
  CHECK(table.warnings()[0].find("q9") != std::string::npos);
  CHECK(table.at("s", "q9") == GainVector({0.0, 0.0}));
}

TEST_CASE("RunSet rejects duplicate run ids") {
  std::vector<Run> runs{Run{"a", {}}, Run{"a", {}}};
  CHECK_THROWS_AS(RunSet(std::move(runs)), DataError);
}

}  // namespace
}  // namespace cwla
