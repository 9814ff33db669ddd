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

#include "cwla/error.h"
#include "cwla/meta_eval.h"
#include "cwla/parallel.h"
#include "cwla/rng.h"

namespace cwla {
namespace {

// A permuted maximum within this distance of an observed difference counts
// as reaching it, so summation-order rounding cannot hide an exact tie.
constexpr double kTieTolerance = 1e-12;

}  // namespace

HsdResult randomized_tukey_hsd(const Matrix& data, std::size_t trials,
                               std::uint64_t seed, unsigned workers) {
  const std::size_t rows = data.rows();
  const std::size_t cols = data.cols();
  if (cols < 2) throw ConfigError("Tukey HSD needs at least 2 columns");
  if (rows < 2) throw ConfigError("Tukey HSD needs at least 2 rows");
  if (trials < 1) throw ConfigError("Tukey HSD needs at least 1 trial");
  for (double v : data.values()) {
    if (!std::isfinite(v)) throw NumericError("non-finite value in HSD input");
  }

  const double n = static_cast<double>(rows);
  const auto means = data.column_means();

  // Shuffles start from each row's values in ascending order, so a trial's
  // permuted sums depend only on the row contents and not on the column
  // labels.
  Matrix sorted = data;
  for (std::size_t r = 0; r < rows; ++r) {
    auto row = sorted.row(r);
    std::sort(row.begin(), row.end());
  }

  std::vector<double> max_diffs(trials);
  parallel_chunks(trials, workers, [&](std::size_t begin, std::size_t end) {
    std::vector<double> row(cols);
    std::vector<double> sums(cols);
    for (std::size_t t = begin; t < end; ++t) {
      auto engine = rng::substream(seed, rng::Domain::kTukeyHsd, t);
      std::fill(sums.begin(), sums.end(), 0.0);
      for (std::size_t r = 0; r < rows; ++r) {
        const auto src = sorted.row(r);
        std::copy(src.begin(), src.end(), row.begin());
        rng::shuffle(std::span<double>(row), engine);
        for (std::size_t c = 0; c < cols; ++c) sums[c] += row[c];
      }
      const auto [lo, hi] = std::minmax_element(sums.begin(), sums.end());
      max_diffs[t] = *hi / n - *lo / n;
    }
  });
  std::sort(max_diffs.begin(), max_diffs.end());

  HsdResult result;
  result.trials = trials;
  result.seed = seed;
  result.pairs.reserve(cols * (cols - 1) / 2);
  for (std::size_t a = 0; a < cols; ++a) {
    for (std::size_t b = a + 1; b < cols; ++b) {
      PairAsl pair;
      pair.a = a;
      pair.b = b;
      pair.mean_a = means[a];
      pair.mean_b = means[b];
      pair.diff = std::abs(means[a] - means[b]);
      const auto first_reaching =
          std::lower_bound(max_diffs.begin(), max_diffs.end(),
                           pair.diff - kTieTolerance);
      pair.asl = static_cast<double>(max_diffs.end() - first_reaching) /
                 static_cast<double>(trials);
      result.pairs.push_back(pair);
    }
  }
  return result;
}

AslTable run_pair_asl(const ScoreMatrix& scores, std::size_t trials,
                      std::uint64_t seed, unsigned workers) {
  if (scores.runs() < 2) {
    throw ConfigError("discriminative power needs at least 2 runs");
  }
  const auto hsd = randomized_tukey_hsd(scores.values, trials, seed, workers);
  AslTable table;
  table.trials = trials;
  table.seed = seed;
  table.pairs.reserve(hsd.pairs.size());
  for (const auto& pair : hsd.pairs) {
    table.pairs.push_back({scores.run_ids[pair.a], scores.run_ids[pair.b],
                           pair.diff, pair.asl});
  }
  return table;
}

}  // namespace cwla
