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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "cwla/csv.h"
#include "cwla/error.h"
#include "cwla/job.h"
#include "doctest.h"
#include "synthetic.h"

namespace cwla {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void spit(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream(path, std::ios::binary) << text;
}

std::vector<std::string> data_lines(const fs::path& path) {
  std::istringstream in(slurp(path));
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream in(line);
  for (std::string field; std::getline(in, field, ',');) out.push_back(field);
  return out;
}

struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name)
      : dir(fs::temp_directory_path() / ("cwla_job_test_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
};

// 2 runs x 3 topics.
JobConfig tiny(const Scratch& s) {
  spit(s.dir / "qrels.txt",
       "t1 0 a 2\nt1 0 b 1\nt2 0 c 2\nt3 0 d 1\nt3 0 e 2\n");
  spit(s.dir / "runs" / "one.txt",
       "t1 Q0 a 1 3 one\nt1 Q0 b 2 2 one\nt2 Q0 x 1 1 one\nt3 Q0 e 1 5 one\n");
  spit(s.dir / "runs" / "two.txt",
       "t1 Q0 b 1 3 two\nt2 Q0 c 1 1 two\nt3 Q0 d 1 5 two\nt3 Q0 e 2 4 two\n");
  JobConfig config;
  config.qrels = s.dir / "qrels.txt";
  config.runs = {s.dir / "runs"};
  config.out_dir = s.dir / "out";
  config.metrics = "rbp@0.8+erg";
  return config;
}

TEST_CASE("score: one topics x runs CSV per spec, byte-identical on rerun") {
  Scratch s("score");
  auto config = tiny(s);
  const auto first = cmd_score(config);
  REQUIRE(first.files.size() == 1);
  CHECK(first.files[0].filename() == "rbp@0.8+erg.scores.csv");
  const auto lines = data_lines(first.files[0]);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "topic,one,two");
  for (std::size_t i = 1; i < 4; ++i) CHECK(split(lines[i]).size() == 3);
  CHECK(split(lines[2])[1] == "0");  // run one retrieved nothing relevant for t2

  const auto bytes = slurp(first.files[0]);
  CHECK(bytes.rfind("# cwla-eval score ", 0) == 0);
  CHECK(bytes.find("seed=42") != std::string::npos);
  CHECK(bytes.find("metrics=rbp@0.8+erg") != std::string::npos);
  CHECK(bytes.find('\r') == std::string::npos);
  cmd_score(config);
  CHECK(slurp(first.files[0]) == bytes);
}

TEST_CASE("score rejects constant combinations") {
  Scratch s("reject");
  auto config = tiny(s);
  config.metrics = "rbp@0.8+err";
  CHECK_THROWS_WITH_AS(cmd_score(config), doctest::Contains("Table 1"),
                       ConfigError);
}

TEST_CASE("score errors name the file and line") {
  Scratch s("badrun");
  auto config = tiny(s);
  spit(s.dir / "runs" / "two.txt", "t1 Q0 b 1 x two\n");
  CHECK_THROWS_WITH_AS(cmd_score(config), doctest::Contains("two.txt:1"),
                       DataError);
}

TEST_CASE("auto gain mapping: exponential for ERR, linear otherwise") {
  Scratch s("gainmap");
  auto config = tiny(s);
  config.depth = 1;
  config.truncation = Truncation::kOpenTail;
  config.metrics = "err+err,ap+fin";
  const auto result = cmd_score(config);
  const auto err = data_lines(result.files[0]);
  const auto ap = data_lines(result.files[1]);
  // t1: run one puts the level-2 document first; x_max = 2.
  CHECK(split(err[1])[1] == "0.75");
  CHECK(split(ap[1])[1] == "1");
}

TEST_CASE("similarity grid file") {
  Scratch s("similarity");
  const auto dir = s.dir / "collection";
  testing::write_synthetic_collection(dir, 6, 10, 3);
  JobConfig config;
  config.qrels = dir / "qrels.txt";
  config.runs = {dir / "runs"};
  config.out_dir = s.dir / "out";
  config.metrics = "rbp@0.8+erg,rbp@0.8+etg,rbp@0.8+max,ap+erg";
  const auto result = cmd_similarity(config);
  REQUIRE(result.files.size() == 1);  // ap has a single aggregation
  CHECK(result.files[0].filename() == "similarity_rbp@0.8.csv");
  const auto lines = data_lines(result.files[0]);
  CHECK(lines[0] == "agg_a,agg_b,tau,ci_low,ci_high,ties");
  REQUIRE(lines.size() == 1 + 9);
  std::map<std::pair<std::string, std::string>, std::string> tau;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i]);
    tau[{f[0], f[1]}] = f[2];
  }
  CHECK(tau[{"erg", "erg"}] == "1");
  CHECK(tau[{"erg", "etg"}] == "1");
  CHECK(tau[{"erg", "max"}] == tau[{"max", "erg"}]);

  config.metrics = "rbp@0.8+erg,ap+erg";
  CHECK_THROWS_AS(cmd_similarity(config), ConfigError);
  config.metrics = "rbp@0.8+erg,rbp@0.8+etg,ap+erg,ap+max";
  config.model = "ap";
  const auto only_ap = cmd_similarity(config);
  REQUIRE(only_ap.files.size() == 1);
  CHECK(only_ap.files[0].filename() == "similarity_ap.csv");
}

TEST_CASE("consistency: duplicated spec gives equal columns and no wins") {
  Scratch s("consistency");
  const auto dir = s.dir / "collection";
  testing::write_synthetic_collection(dir, 8, 12, 4);
  JobConfig config;
  config.qrels = dir / "qrels.txt";
  config.runs = {dir / "runs"};
  config.out_dir = s.dir / "out";
  config.metrics = "dcg@10+erg,dcg@10+erg";
  config.consistency_trials = 50;
  config.hsd_trials = 200;
  config.seed = 1234;
  const auto result = cmd_consistency(config);
  REQUIRE(result.files.size() == 2);
  const auto taus = data_lines(result.files[1]);
  CHECK(taus.size() == 1 + 50);
  for (std::size_t i = 1; i < taus.size(); ++i) {
    const auto f = split(taus[i]);
    CHECK(f[1] == f[2]);
  }
  for (const auto& file : result.files) {
    CHECK(slurp(file).find("seed=1234") != std::string::npos);
    CHECK(slurp(file).find("B=50") != std::string::npos);
  }
  const auto summary = data_lines(result.files[0]);
  CHECK(summary[0] == "model,aggregation,canonical,mean_tau,outperforms,tie_trials");
  REQUIRE(summary.size() == 3);
  CHECK(split(summary[1])[4] == "0");
  CHECK(split(summary[2])[4] == "0");
}

TEST_CASE("discpower: pairs, curves and identical runs") {
  Scratch s("discpower");
  auto config = tiny(s);
  config.hsd_trials = 300;
  config.metrics = "rbp@0.8+erg,ap+max";
  const auto result = cmd_discpower(config);
  REQUIRE(result.files.size() == 5);
  const auto asl = data_lines(s.dir / "out" / "rbp@0.8+erg.asl.csv");
  CHECK(asl[0] == "run_a,run_b,diff,asl");
  CHECK(asl.size() == 1 + 1);  // K = 2
  const auto curve = data_lines(s.dir / "out" / "ap+max.curve.csv");
  CHECK(curve[0] == "pair_rank,asl");
  CHECK(data_lines(s.dir / "out" / "discpower_summary.csv").size() == 3);

  // Two copies of one run.
  spit(s.dir / "runs" / "two.txt",
       "t1 Q0 a 1 3 two\nt1 Q0 b 2 2 two\nt2 Q0 x 1 1 two\nt3 Q0 e 1 5 two\n");
  cmd_discpower(config);
  const auto same = data_lines(s.dir / "out" / "rbp@0.8+erg.asl.csv");
  CHECK(split(same[1])[3] == "1");

  spit(s.dir / "runs" / "two.txt", "");
  fs::remove(s.dir / "runs" / "two.txt");
  CHECK_THROWS_AS(cmd_discpower(config), ConfigError);
}

TEST_CASE("asl curve is sorted ascending") {
  Scratch s("curve");
  const auto dir = s.dir / "collection";
  testing::write_synthetic_collection(dir, 7, 10, 5);
  JobConfig config;
  config.qrels = dir / "qrels.txt";
  config.runs = {dir / "runs"};
  config.out_dir = s.dir / "out";
  config.metrics = "inst@2.5+erg";
  config.hsd_trials = 300;
  cmd_discpower(config);
  const auto curve = data_lines(s.dir / "out" / "inst@2.5+erg.curve.csv");
  REQUIRE(curve.size() == 1 + 21);
  for (std::size_t i = 2; i < curve.size(); ++i) {
    CHECK(std::stod(split(curve[i])[1]) >= std::stod(split(curve[i - 1])[1]));
  }
}

TEST_CASE("job validation") {
  Scratch s("validate");
  auto config = tiny(s);
  config.alpha = 1.0;
  CHECK_THROWS_AS(validate(config), ConfigError);
  config = tiny(s);
  config.family = "none";
  CHECK_THROWS_AS(validate(config), ConfigError);
  config = tiny(s);
  config.gain_map = "log";
  CHECK_THROWS_AS(validate(config), ConfigError);
  config = tiny(s);
  config.max_level = 1;  // below the observed 2
  CHECK_THROWS_AS(cmd_score(config), ConfigError);
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CWLA_EVAL_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

TEST_CASE("cli exit codes and config file") {
  Scratch s("cli");
  const auto config = tiny(s);
  const std::string common = "--qrels " + config.qrels.string() + " --runs " +
                             config.runs[0].string() + " --out " +
                             config.out_dir.string();
  CHECK(run_cli("score " + common + " --metrics rbp@0.8+erg") == 0);
  CHECK(fs::exists(config.out_dir / "rbp@0.8+erg.scores.csv"));
  CHECK(run_cli("score " + common + " --metrics rbp@0.8+err") == 2);
  CHECK(run_cli("score " + common + " --metrics inst+erg") == 2);
  CHECK(run_cli("score " + common) == 2);
  CHECK(run_cli("frobnicate " + common + " --metrics ap+erg") == 2);

  spit(s.dir / "bad" / "bad.txt", "t1 Q0 a 1\n");
  CHECK(run_cli("score --qrels " + config.qrels.string() + " --runs " +
                (s.dir / "bad").string() + " --out " + config.out_dir.string() +
                " --metrics ap+erg") == 3);

  // Config file supplies defaults, flags win.
  spit(s.dir / "job.ini",
       "qrels=" + config.qrels.string() + "\nruns=" + config.runs[0].string() +
           "\nmetrics=ap+erg\ndepth=3\nout=" + (s.dir / "ini_out").string() + "\n");
  CHECK(run_cli("score --config " + (s.dir / "job.ini").string() +
                " --metrics dcg@3+erg") == 0);
  CHECK(fs::exists(s.dir / "ini_out" / "dcg@3+erg.scores.csv"));
  CHECK_FALSE(fs::exists(s.dir / "ini_out" / "ap+erg.scores.csv"));
  CHECK(slurp(s.dir / "ini_out" / "dcg@3+erg.scores.csv").find("depth=3") !=
        std::string::npos);
}

}  // namespace
}  // namespace cwla
