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

// C/W/L/A metric evaluation.
//
// A metric is a browsing model C(i) plus an aggregation A(i). The stopping
// distribution follows from C:
//
//   L(i) = (1 - C(i)) * prod_{j<i} C(j)
//
// and the score is sum_{i=1}^{depth} L(i) * A(i). Ranks are 1-based in this
// interface.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cwla/corpus.h"
#include "cwla/matrix.h"
#include "cwla/metric.h"

namespace cwla {

// C(rank) for 1 <= rank <= gains.depth(), as the model defines it.
double continuation(const BrowsingModel& model, std::size_t rank,
                    const GainVector& gains);

// C(1..depth) with the truncation policy applied to the final rank.
std::vector<double> continuations(const BrowsingModel& model,
                                  const GainVector& gains,
                                  Truncation truncation);

std::vector<double> last_probabilities(const BrowsingModel& model,
                                       const GainVector& gains,
                                       Truncation truncation);

// Expected number of items inspected within the depth,
// sum_{i=1}^{depth} prod_{j<i} C(j). Always >= 1.
double v_plus(const BrowsingModel& model, const GainVector& gains,
              Truncation truncation);

// Attention weights prod_{j<i} C(j) / V+; they sum to 1.
std::vector<double> weights(const BrowsingModel& model,
                            const GainVector& gains, Truncation truncation);

// A(rank) for a user who stops at `rank`.
double aggregate(const Aggregation& agg, const GainVector& gains,
                 std::size_t rank, double v_plus);

// Scores one gain vector. The MetricSpec depth must equal gains.depth().
double score(const MetricSpec& spec, const GainVector& gains);

// Like score() but accepts any (model, aggregation) pair, including the
// constant combinations that MetricSpec::make rejects.
double score_unchecked(const BrowsingModel& model, const Aggregation& agg,
                       const GainVector& gains, Truncation truncation,
                       std::optional<double> rate_normalizer = std::nullopt);

// Topic-by-run matrix of metric scores.
struct ScoreMatrix {
  std::vector<std::string> topic_ids;
  std::vector<std::string> run_ids;
  Matrix values;  // topics x runs

  std::size_t topics() const { return topic_ids.size(); }
  std::size_t runs() const { return run_ids.size(); }
};

// Every cell of `table` under `spec`. Cells are independent, so work is
// spread over `workers` threads without affecting the result.
ScoreMatrix score_matrix(const GainTable& table, const MetricSpec& spec,
                         unsigned workers = 1);

}  // namespace cwla
