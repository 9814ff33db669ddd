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

#include "cwla/engine.h"

#include <algorithm>
#include <cmath>

#include "cwla/error.h"
#include "cwla/parallel.h"

namespace cwla {
namespace {

void check_rank(std::size_t rank, std::size_t depth) {
  if (rank < 1 || rank > depth) {
    throw ConfigError("rank " + std::to_string(rank) + " outside [1, " +
                      std::to_string(depth) + "]");
  }
}

// C(1..d) exactly as the model defines it; index 0 holds C(1).
std::vector<double> model_continuations(const BrowsingModel& model,
                                        std::span<const double> r) {
  const std::size_t d = r.size();
  std::vector<double> c(d, 0.0);
  switch (model.kind()) {
    case ModelKind::kPrecision: {
      const auto k = static_cast<std::size_t>(model.cutoff());
      for (std::size_t i = 1; i <= d; ++i) c[i - 1] = i < k ? 1.0 : 0.0;
      break;
    }
    case ModelKind::kDcg: {
      const auto k = static_cast<std::size_t>(model.cutoff());
      for (std::size_t i = 1; i <= d; ++i) {
        const double x = static_cast<double>(i);
        c[i - 1] = i < k ? std::log2(x + 1.0) / std::log2(x + 2.0) : 0.0;
      }
      break;
    }
    case ModelKind::kRbp:
      std::fill(c.begin(), c.end(), model.persistence());
      break;
    case ModelKind::kInst: {
      // T_i = T - sum_{j<=i} r_j is the gain still missing after rank i.
      const double target = model.target();
      double collected = 0.0;
      for (std::size_t i = 1; i <= d; ++i) {
        collected += r[i - 1];
        const double remaining = target - collected;
        const double x = static_cast<double>(i);
        const double num = std::max(0.0, x - 1.0 + target + remaining);
        const double den = x + target + remaining;
        const double ratio = num / den;
        c[i - 1] = ratio * ratio;
      }
      break;
    }
    case ModelKind::kAp: {
      // tail[i] = sum_{j>=i} r_j / j, truncated at the depth.
      std::vector<double> tail(d + 2, 0.0);
      for (std::size_t i = d; i >= 1; --i) {
        tail[i] = tail[i + 1] + r[i - 1] / static_cast<double>(i);
      }
      for (std::size_t i = 1; i <= d; ++i) {
        c[i - 1] = tail[i] > 0.0 ? tail[i + 1] / tail[i] : 0.0;
      }
      break;
    }
    case ModelKind::kErr:
      for (std::size_t i = 0; i < d; ++i) c[i] = 1.0 - r[i];
      break;
  }
  return c;
}

double checked(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw NumericError(std::string("non-finite ") + what);
  }
  return value;
}

}  // namespace

double continuation(const BrowsingModel& model, std::size_t rank,
                    const GainVector& gains) {
  check_rank(rank, gains.depth());
  return model_continuations(model, gains.values())[rank - 1];
}

std::vector<double> continuations(const BrowsingModel& model,
                                  const GainVector& gains,
                                  Truncation truncation) {
  auto c = model_continuations(model, gains.values());
  if (truncation == Truncation::kStopAtDepth && !c.empty()) c.back() = 0.0;
  return c;
}

std::vector<double> last_probabilities(const BrowsingModel& model,
                                       const GainVector& gains,
                                       Truncation truncation) {
  const auto c = continuations(model, gains, truncation);
  std::vector<double> last(c.size());
  double reach = 1.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    last[i] = (1.0 - c[i]) * reach;
    reach *= c[i];
  }
  return last;
}

double v_plus(const BrowsingModel& model, const GainVector& gains,
              Truncation truncation) {
  const auto c = continuations(model, gains, truncation);
  double total = 0.0;
  double reach = 1.0;
  for (double ci : c) {
    total += reach;
    reach *= ci;
  }
  return checked(total, "V+");
}

std::vector<double> weights(const BrowsingModel& model,
                            const GainVector& gains, Truncation truncation) {
  const auto c = continuations(model, gains, truncation);
  std::vector<double> w(c.size());
  double reach = 1.0;
  double total = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    w[i] = reach;
    total += reach;
    reach *= c[i];
  }
  for (double& wi : w) wi /= total;
  return w;
}

double aggregate(const Aggregation& agg, const GainVector& gains,
                 std::size_t rank, double v_plus) {
  check_rank(rank, gains.depth());
  const auto r = gains.values().first(rank);
  double sum = 0.0;
  double best = 0.0;
  for (double g : r) {
    sum += g;
    best = std::max(best, g);
  }
  const double last = r.back();
  switch (agg.kind()) {
    case AggKind::kErg: return sum / v_plus;
    case AggKind::kEtg: return sum;
    case AggKind::kAvg: return sum / static_cast<double>(rank);
    case AggKind::kMax: return best;
    case AggKind::kFin: return last;
    case AggKind::kPe: return agg.beta() * best + (1.0 - agg.beta()) * last;
    case AggKind::kErr: return 1.0 / static_cast<double>(rank);
  }
  return 0.0;
}

double score_unchecked(const BrowsingModel& model, const Aggregation& agg,
                       const GainVector& gains, Truncation truncation,
                       std::optional<double> rate_normalizer) {
  const auto r = gains.values();
  const auto c = continuations(model, gains, truncation);

  double normalizer = 1.0;
  if (agg.kind() == AggKind::kErg) {
    if (rate_normalizer) {
      normalizer = *rate_normalizer;
    } else {
      normalizer = 0.0;
      double reach = 1.0;
      for (double ci : c) {
        normalizer += reach;
        reach *= ci;
      }
    }
    if (!(normalizer > 0.0) || !std::isfinite(normalizer)) {
      throw NumericError("V+ must be positive and finite");
    }
  }

  double total = 0.0;
  double reach = 1.0;
  double sum = 0.0;
  double best = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    sum += r[i];
    best = std::max(best, r[i]);
    const double rank = static_cast<double>(i + 1);
    double a = 0.0;
    switch (agg.kind()) {
      case AggKind::kErg: a = sum / normalizer; break;
      case AggKind::kEtg: a = sum; break;
      case AggKind::kAvg: a = sum / rank; break;
      case AggKind::kMax: a = best; break;
      case AggKind::kFin: a = r[i]; break;
      case AggKind::kPe: a = agg.beta() * best + (1.0 - agg.beta()) * r[i]; break;
      case AggKind::kErr: a = 1.0 / rank; break;
    }
    total += (1.0 - c[i]) * reach * a;
    reach *= c[i];
  }
  return checked(total, "metric score");
}

double score(const MetricSpec& spec, const GainVector& gains) {
  if (is_constant_combination(spec.model, spec.agg)) {
    throw ConfigError("metric " + spec.id() +
                      " is an excluded Table 1 cell (constant score)");
  }
  if (spec.depth != gains.depth()) {
    throw ConfigError("metric depth " + std::to_string(spec.depth) +
                      " differs from gain vector depth " +
                      std::to_string(gains.depth()));
  }
  return score_unchecked(spec.model, spec.agg, gains, spec.truncation,
                         spec.rate_normalizer);
}

ScoreMatrix score_matrix(const GainTable& table, const MetricSpec& spec,
                         unsigned workers) {
  ScoreMatrix out{table.topic_ids(), table.run_ids(),
                  Matrix(table.topic_ids().size(), table.run_ids().size())};
  const std::size_t runs = out.runs();
  parallel_for(out.topics() * runs, workers, [&](std::size_t cell) {
    const std::size_t t = cell / runs;
    const std::size_t k = cell % runs;
    try {
      out.values(t, k) = score(spec, table.at(t, k));
    } catch (const NumericError& e) {
      throw NumericError(spec.id() + " (run " + out.run_ids[k] + ", topic " +
                         out.topic_ids[t] + "): " + e.what());
    } catch (const ConfigError& e) {
      throw ConfigError(spec.id() + " (run " + out.run_ids[k] + ", topic " +
                        out.topic_ids[t] + "): " + e.what());
    }
  });
  return out;
}

}  // namespace cwla
