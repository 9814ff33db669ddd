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
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "cwla/error.h"
#include "cwla/meta_eval.h"

namespace cwla {

std::vector<double> mean_scores(const ScoreMatrix& scores,
                                std::span<const std::size_t> topic_rows) {
  if (topic_rows.empty()) throw ConfigError("empty topic subset");
  std::vector<double> sums(scores.runs(), 0.0);
  for (std::size_t t : topic_rows) {
    if (t >= scores.topics()) throw ConfigError("topic row out of range");
    const auto row = scores.values.row(t);
    for (std::size_t k = 0; k < sums.size(); ++k) sums[k] += row[k];
  }
  const double n = static_cast<double>(topic_rows.size());
  for (double& s : sums) s /= n;
  return sums;
}

std::vector<double> mean_scores(const ScoreMatrix& scores) {
  std::vector<std::size_t> all(scores.topics());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return mean_scores(scores, all);
}

RunRanking rank_runs(std::span<const std::string> run_ids,
                     std::span<const double> means) {
  if (run_ids.size() != means.size()) {
    throw ConfigError("run ids and means differ in length");
  }
  std::vector<std::size_t> order(run_ids.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (means[a] != means[b]) return means[a] > means[b];
    return run_ids[a] < run_ids[b];
  });
  // Means that differ only by rounding are ties: the same totals reached
  // through different per-topic normalizations must rank the same way.
  auto tied = [&](double hi, double lo) {
    return hi - lo <= kMeanTieTolerance * std::max(std::abs(hi), std::abs(lo));
  };
  RunRanking ranking;
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= order.size(); ++i) {
    if (i < order.size() && tied(means[order[i - 1]], means[order[i]])) continue;
    if (i - begin > 1) {
      ranking.had_ties = true;
      std::sort(order.begin() + begin, order.begin() + i,
                [&](std::size_t a, std::size_t b) { return run_ids[a] < run_ids[b]; });
    }
    begin = i;
  }
  ranking.runs.reserve(order.size());
  for (std::size_t i : order) ranking.runs.push_back(run_ids[i]);
  return ranking;
}

double kendall_tau(const RunRanking& a, const RunRanking& b) {
  const std::size_t n = a.runs.size();
  if (n != b.runs.size()) throw ConfigError("rankings differ in length");
  if (n < 2) throw ConfigError("kendall tau needs at least two runs");
  std::unordered_map<std::string, std::size_t> position;
  position.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!position.emplace(b.runs[i], i).second) {
      throw ConfigError("duplicate run '" + b.runs[i] + "' in ranking");
    }
  }
  std::vector<std::size_t> mapped(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto it = position.find(a.runs[i]);
    if (it == position.end()) {
      throw ConfigError("run '" + a.runs[i] + "' missing from ranking");
    }
    mapped[i] = it->second;
  }
  long long concordant = 0;
  long long discordant = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (mapped[i] < mapped[j]) {
        ++concordant;
      } else if (mapped[i] > mapped[j]) {
        ++discordant;
      } else {
        throw ConfigError("duplicate run '" + a.runs[j] + "' in ranking");
      }
    }
  }
  const double pairs = static_cast<double>(n) * (n - 1) / 2.0;
  return static_cast<double>(concordant - discordant) / pairs;
}

Interval tau_ci(double tau, std::size_t n) {
  if (n < 4) throw ConfigError("tau confidence interval needs n >= 4");
  const double nn = static_cast<double>(n);
  const double variance = 2.0 * (2.0 * nn + 5.0) / (9.0 * nn * (nn - 1.0));
  const double half = 1.96 * std::sqrt(variance);
  return {std::max(-1.0, tau - half), std::min(1.0, tau + half)};
}

SimilarityGrid similarity_grid(std::span<const ScoreMatrix> matrices,
                               std::span<const std::string> labels) {
  const std::size_t m = matrices.size();
  if (m < 2) throw ConfigError("similarity needs at least two aggregations");
  if (labels.size() != m) throw ConfigError("one label per score matrix");
  std::vector<RunRanking> rankings;
  rankings.reserve(m);
  for (const auto& scores : matrices) {
    if (scores.run_ids != matrices[0].run_ids ||
        scores.topic_ids != matrices[0].topic_ids) {
      throw ConfigError("score matrices must share runs and topics");
    }
    const auto means = mean_scores(scores);
    rankings.push_back(rank_runs(scores.run_ids, means));
  }
  const std::size_t n = matrices[0].runs();
  SimilarityGrid grid{{labels.begin(), labels.end()},
                      Matrix(m, m),
                      Matrix(m, m),
                      Matrix(m, m),
                      Matrix(m, m)};
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) {
      const double tau = a == b ? 1.0 : kendall_tau(rankings[a], rankings[b]);
      const Interval ci = n >= 4 ? tau_ci(tau, n) : Interval{-1.0, 1.0};
      const double ties =
          (rankings[a].had_ties || rankings[b].had_ties) ? 1.0 : 0.0;
      for (auto [i, j] : {std::pair{a, b}, std::pair{b, a}}) {
        grid.tau(i, j) = tau;
        grid.ci_low(i, j) = ci.low;
        grid.ci_high(i, j) = ci.high;
        grid.ties(i, j) = ties;
      }
    }
  }
  return grid;
}

std::vector<CurvePoint> asl_curve(const AslTable& table) {
  std::vector<double> asls;
  asls.reserve(table.pairs.size());
  for (const auto& p : table.pairs) asls.push_back(p.asl);
  std::sort(asls.begin(), asls.end());
  std::vector<CurvePoint> curve;
  curve.reserve(asls.size());
  for (std::size_t i = 0; i < asls.size(); ++i) curve.push_back({i + 1, asls[i]});
  return curve;
}

double discriminative_power(const AslTable& table, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ConfigError("alpha must lie in (0, 1)");
  }
  if (table.pairs.empty()) return 0.0;
  const auto significant =
      std::count_if(table.pairs.begin(), table.pairs.end(),
                    [alpha](const AslEntry& p) { return p.asl < alpha; });
  return static_cast<double>(significant) /
         static_cast<double>(table.pairs.size());
}

}  // namespace cwla
