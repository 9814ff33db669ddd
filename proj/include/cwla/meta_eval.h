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

// Meta-evaluation of metrics: ranking similarity, system ranking
// consistency over random topic splits, and discriminative power under the
// randomised Tukey HSD test.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cwla/engine.h"
#include "cwla/matrix.h"

namespace cwla {

inline constexpr std::size_t kDefaultConsistencyTrials = 1000;
inline constexpr std::size_t kDefaultHsdTrials = 2000;
inline constexpr double kDefaultAlpha = 0.05;
inline constexpr std::uint64_t kDefaultSeed = 42;

// Per-run mean over the selected topic rows (indices into the matrix).
std::vector<double> mean_scores(const ScoreMatrix& scores,
                                std::span<const std::size_t> topic_rows);
// Per-run mean over all topics.
std::vector<double> mean_scores(const ScoreMatrix& scores);

// Runs ordered best first.
// Relative difference below which two mean scores count as tied.
inline constexpr double kMeanTieTolerance = 1e-12;

struct RunRanking {
  std::vector<std::string> runs;
  // Some runs shared a mean score (within kMeanTieTolerance); they were
  // ordered by ascending run id.
  bool had_ties = false;
};

RunRanking rank_runs(std::span<const std::string> run_ids,
                     std::span<const double> means);

// tau-a over all run pairs: (concordant - discordant) / (n(n-1)/2).
double kendall_tau(const RunRanking& a, const RunRanking& b);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

// 95% normal-approximation interval, var = 2(2n+5) / (9n(n-1)), clipped to
// [-1, 1]. Requires n >= 4.
Interval tau_ci(double tau, std::size_t n);

struct SimilarityGrid {
  std::vector<std::string> labels;
  Matrix tau;
  Matrix ci_low;
  Matrix ci_high;
  // ties(a, b) == 1 if either ranking had tied means.
  Matrix ties;
};

// Kendall's tau between the all-topic run rankings of every pair of score
// matrices. All matrices must share run ids.
SimilarityGrid similarity_grid(std::span<const ScoreMatrix> matrices,
                               std::span<const std::string> labels);

struct TopicSplit {
  std::vector<std::size_t> first;   // truncate(|T|/2) topics
  std::vector<std::size_t> second;  // the rest
};

// The split for trial `trial` (0-based). Depends only on
// (n_topics, seed, trial), so every metric run with the same seed sees the
// same split at the same trial. Both halves are sorted.
TopicSplit draw_topic_split(std::size_t n_topics, std::uint64_t seed,
                            std::size_t trial);

struct ConsistencyColumn {
  std::vector<double> taus;
  std::size_t tie_trials = 0;
};

// B consistency trials: tau between the rankings induced by the two halves
// of each split.
ConsistencyColumn consistency_trials(const ScoreMatrix& scores,
                                     std::size_t trials, std::uint64_t seed,
                                     unsigned workers = 1);

struct ConsistencyMatrix {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> metric_ids;
  Matrix taus;  // trials x metrics
  std::vector<std::size_t> tie_trials;
};

ConsistencyMatrix consistency_matrix(std::span<const ScoreMatrix> matrices,
                                     std::span<const std::string> metric_ids,
                                     std::size_t trials, std::uint64_t seed,
                                     unsigned workers = 1);

struct PairAsl {
  std::size_t a = 0;
  std::size_t b = 0;
  double mean_a = 0.0;
  double mean_b = 0.0;
  double diff = 0.0;  // |mean_a - mean_b|
  double asl = 1.0;
};

struct HsdResult {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<PairAsl> pairs;  // (0,1), (0,2), ..., (m-2, m-1)
};

// Randomised (paired) Tukey HSD. Each trial permutes the values within
// every row of `data` uniformly at random and records the largest
// difference between column means; ASL(a, b) is the fraction of trials whose
// largest difference reaches the observed |mean_a - mean_b|. Each trial
// draws from its own substream, and rows are shuffled from sorted order, so
// the result is fixed by (data, trials, seed) and relabelling columns
// relabels the pairs without changing any ASL.
HsdResult randomized_tukey_hsd(const Matrix& data, std::size_t trials,
                               std::uint64_t seed, unsigned workers = 1);

struct ConsistencySummaryRow {
  std::string metric_id;
  double mean_tau = 0.0;
  // Metrics in the same family this one significantly outperforms.
  std::size_t outperforms = 0;
  std::size_t tie_trials = 0;
};

// Mean tau per metric and outperform counts from a Tukey HSD on the tau
// matrix at level alpha. Rows are ordered by descending mean tau (ties by
// metric id).
std::vector<ConsistencySummaryRow> consistency_significance(
    const ConsistencyMatrix& matrix, std::size_t trials, std::uint64_t seed,
    double alpha = kDefaultAlpha, unsigned workers = 1);

struct AslEntry {
  std::string run_a;
  std::string run_b;
  double diff = 0.0;
  double asl = 1.0;
};

struct AslTable {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<AslEntry> pairs;
};

// Tukey HSD over the runs (columns) of a score matrix.
AslTable run_pair_asl(const ScoreMatrix& scores, std::size_t trials,
                      std::uint64_t seed, unsigned workers = 1);

struct CurvePoint {
  std::size_t x = 0;  // 1-based position after sorting
  double asl = 1.0;
};

// Pairs sorted by ascending ASL.
std::vector<CurvePoint> asl_curve(const AslTable& table);

// Fraction of pairs with ASL < alpha.
double discriminative_power(const AslTable& table,
                            double alpha = kDefaultAlpha);

}  // namespace cwla
