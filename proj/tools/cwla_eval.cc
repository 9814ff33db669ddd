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

// cwla_eval: score C/W/L/A metrics on TREC runs and meta-evaluate them.
//
//   cwla_eval score       --qrels Q --runs DIR --metrics rbp@0.8+erg,...
//   cwla_eval similarity  ... (>= 2 aggregations per browsing model)
//   cwla_eval consistency ... [--B 1000] [--hsd-trials 2000] [--seed 42]
//   cwla_eval discpower   ... [--hsd-trials 2000] [--alpha 0.05]

#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "cwla/error.h"
#include "cwla/job.h"

int main(int argc, char** argv) {
  CLI::App app{"C/W/L/A metric scoring and meta-evaluation"};
  app.set_config("--config", "", "INI/TOML file with option defaults; flags win");
  app.fallthrough();
  app.require_subcommand(1);

  cwla::JobConfig config;
  config.workers = std::max(1u, std::thread::hardware_concurrency());
  std::string truncation = "stop";
  int max_level = 0;

  app.add_option("--qrels", config.qrels, "TREC qrels file")->required();
  app.add_option("--runs", config.runs,
                 "run files and/or directories of run files")
      ->required()
      ->delimiter(',');
  app.add_option("--depth", config.depth, "evaluation cutoff")
      ->capture_default_str();
  app.add_option("--gain-map", config.gain_map,
                 "auto|linear|exponential (auto: exponential for ERR)")
      ->capture_default_str();
  app.add_option("--max-level", max_level,
                 "maximum relevance level (default: observed maximum)");
  app.add_option("--truncation", truncation, "stop|open")
      ->capture_default_str();
  app.add_option("--metrics", config.metrics,
                 "MODEL[@PARAM]+AGG[,...] or table1@T")
      ->required();
  app.add_option("--seed", config.seed, "random seed")->capture_default_str();
  app.add_option("--B", config.consistency_trials,
                 "topic split trials for consistency")
      ->capture_default_str();
  app.add_option("--hsd-trials", config.hsd_trials,
                 "randomised Tukey HSD trials")
      ->capture_default_str();
  app.add_option("--alpha", config.alpha, "significance level")
      ->capture_default_str();
  app.add_option("--family", config.family,
                 "consistency HSD family: model|all")
      ->capture_default_str();
  app.add_option("--model", config.model,
                 "similarity: only this browsing model, e.g. rbp@0.8");
  app.add_option("--out", config.out_dir, "output directory")
      ->capture_default_str();
  app.add_option("--threads", config.workers, "worker threads");

  auto* score = app.add_subcommand("score", "topic-by-run score matrices");
  auto* similarity =
      app.add_subcommand("similarity", "Kendall tau between aggregations");
  auto* consistency = app.add_subcommand(
      "consistency", "system ranking consistency over topic splits");
  auto* discpower = app.add_subcommand(
      "discpower", "ASL tables and curves from the randomised Tukey HSD");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(cwla::ExitCode::kConfig);
  }

  try {
    config.truncation = cwla::parse_truncation(truncation);
    if (app.count("--max-level")) config.max_level = max_level;

    cwla::JobResult result;
    if (score->parsed()) {
      result = cwla::cmd_score(config);
    } else if (similarity->parsed()) {
      result = cwla::cmd_similarity(config);
    } else if (consistency->parsed()) {
      result = cwla::cmd_consistency(config);
    } else if (discpower->parsed()) {
      result = cwla::cmd_discpower(config);
    }
    for (const auto& warning : result.warnings) {
      std::cerr << "warning: " << warning << '\n';
    }
    for (const auto& file : result.files) std::cout << file.string() << '\n';
  } catch (const cwla::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(cwla::ExitCode::kUnknown);
  }
  return 0;
}
