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

#include <algorithm>
#include <numeric>

#include "cwla/error.h"
#include "cwla/meta_eval.h"
#include "cwla/parallel.h"
#include "cwla/rng.h"

namespace cwla {

TopicSplit draw_topic_split(std::size_t n_topics, std::uint64_t seed,
                            std::size_t trial) {
  if (n_topics < 2) throw ConfigError("topic split needs at least 2 topics");
  const std::size_t first_size = n_topics / 2;
  std::vector<std::size_t> topics(n_topics);
  std::iota(topics.begin(), topics.end(), std::size_t{0});
  auto engine = rng::substream(seed, rng::Domain::kTopicSplit, trial);
  // Partial Fisher-Yates: the first `first_size` slots become a uniform
  // sample without replacement.
  for (std::size_t i = 0; i < first_size; ++i) {
    const std::size_t j = i + rng::uniform_below(engine, n_topics - i);
    std::swap(topics[i], topics[j]);
  }
  TopicSplit split;
  split.first.assign(topics.begin(), topics.begin() + first_size);
  split.second.assign(topics.begin() + first_size, topics.end());
  std::sort(split.first.begin(), split.first.end());
  std::sort(split.second.begin(), split.second.end());
  return split;
}

ConsistencyColumn consistency_trials(const ScoreMatrix& scores,
                                     std::size_t trials, std::uint64_t seed,
                                     unsigned workers) {
  if (scores.topics() < 2) {
    throw ConfigError("consistency needs at least 2 topics");
  }
  if (scores.runs() < 2) throw ConfigError("consistency needs at least 2 runs");
  if (trials < 1) throw ConfigError("consistency needs B >= 1");
  ConsistencyColumn column;
  column.taus.resize(trials);
  std::vector<char> tied(trials, 0);
  parallel_for(trials, workers, [&](std::size_t b) {
    const auto split = draw_topic_split(scores.topics(), seed, b);
    const auto first = rank_runs(scores.run_ids, mean_scores(scores, split.first));
    const auto second =
        rank_runs(scores.run_ids, mean_scores(scores, split.second));
    column.taus[b] = kendall_tau(first, second);
    tied[b] = first.had_ties || second.had_ties;
  });
  column.tie_trials = static_cast<std::size_t>(
      std::count(tied.begin(), tied.end(), char{1}));
  return column;
}

ConsistencyMatrix consistency_matrix(std::span<const ScoreMatrix> matrices,
                                     std::span<const std::string> metric_ids,
                                     std::size_t trials, std::uint64_t seed,
                                     unsigned workers) {
  if (matrices.empty()) throw ConfigError("no score matrices");
  if (metric_ids.size() != matrices.size()) {
    throw ConfigError("one metric id per score matrix");
  }
  ConsistencyMatrix out;
  out.trials = trials;
  out.seed = seed;
  out.metric_ids.assign(metric_ids.begin(), metric_ids.end());
  out.taus = Matrix(trials, matrices.size());
  for (std::size_t m = 0; m < matrices.size(); ++m) {
    if (matrices[m].topic_ids != matrices[0].topic_ids) {
      throw ConfigError("score matrices must share the topic set");
    }
    const auto column = consistency_trials(matrices[m], trials, seed, workers);
    for (std::size_t b = 0; b < trials; ++b) out.taus(b, m) = column.taus[b];
    out.tie_trials.push_back(column.tie_trials);
  }
  return out;
}

std::vector<ConsistencySummaryRow> consistency_significance(
    const ConsistencyMatrix& matrix, std::size_t trials, std::uint64_t seed,
    double alpha, unsigned workers) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ConfigError("alpha must lie in (0, 1)");
  }
  const std::size_t m = matrix.metric_ids.size();
  if (matrix.taus.cols() != m) throw ConfigError("tau matrix shape mismatch");
  if (matrix.taus.rows() < 2) throw ConfigError("consistency test needs B >= 2");
  const auto means = matrix.taus.column_means();
  std::vector<ConsistencySummaryRow> rows(m);
  for (std::size_t i = 0; i < m; ++i) {
    rows[i].metric_id = matrix.metric_ids[i];
    rows[i].mean_tau = means[i];
    if (i < matrix.tie_trials.size()) rows[i].tie_trials = matrix.tie_trials[i];
  }
  if (m >= 2) {
    const auto hsd = randomized_tukey_hsd(matrix.taus, trials, seed, workers);
    for (const auto& pair : hsd.pairs) {
      if (!(pair.asl < alpha)) continue;
      if (means[pair.a] > means[pair.b]) {
        ++rows[pair.a].outperforms;
      } else if (means[pair.b] > means[pair.a]) {
        ++rows[pair.b].outperforms;
      }
    }
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ConsistencySummaryRow& a,
                      const ConsistencySummaryRow& b) {
                     if (a.mean_tau != b.mean_tau) return a.mean_tau > b.mean_tau;
                     return a.metric_id < b.metric_id;
                   });
  return rows;
}

}  // namespace cwla
