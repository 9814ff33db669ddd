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

#pragma once

// Batch jobs behind the cwla_eval subcommands.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cwla/corpus.h"
#include "cwla/meta_eval.h"
#include "cwla/metric.h"

namespace cwla {

struct JobConfig {
  std::filesystem::path qrels;
  std::vector<std::filesystem::path> runs;
  std::size_t depth = 10;
  // auto | linear | exponential. auto maps ERR gains exponentially and all
  // other models linearly.
  std::string gain_map = "auto";
  std::optional<int> max_level;
  Truncation truncation = Truncation::kStopAtDepth;
  std::string metrics;
  std::uint64_t seed = kDefaultSeed;
  std::size_t consistency_trials = kDefaultConsistencyTrials;
  std::size_t hsd_trials = kDefaultHsdTrials;
  double alpha = kDefaultAlpha;
  // Tukey HSD family for consistency: "model" (metrics sharing a browsing
  // model) or "all".
  std::string family = "model";
  // Restricts `similarity` to one browsing model, e.g. "rbp@0.8".
  std::string model;
  std::filesystem::path out_dir = ".";
  unsigned workers = 1;
};

struct JobResult {
  std::vector<std::filesystem::path> files;
  std::vector<std::string> warnings;
};

// Throws ConfigError on invalid settings.
void validate(const JobConfig& config);

// Resolved metric specs for the configured metric list.
std::vector<MetricSpec> metric_specs(const JobConfig& config);

// File-name stem for a metric id, e.g. "rbp@0.8+erg".
std::string file_stem(const std::string& metric_id);

// <id>.scores.csv per metric.
JobResult cmd_score(const JobConfig& config);
// similarity_<model>.csv per browsing model with >= 2 aggregations.
JobResult cmd_similarity(const JobConfig& config);
// consistency_summary.csv and consistency_taus.csv.
JobResult cmd_consistency(const JobConfig& config);
// <id>.asl.csv and <id>.curve.csv per metric, plus discpower_summary.csv.
JobResult cmd_discpower(const JobConfig& config);

}  // namespace cwla
