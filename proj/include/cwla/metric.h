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

// Browsing models, aggregations and the metric specs that combine them.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cwla/corpus.h"

namespace cwla {

enum class ModelKind { kPrecision, kDcg, kRbp, kInst, kAp, kErr };

// A user browsing model, i.e. a continuation probability C(i).
class BrowsingModel {
 public:
  static BrowsingModel precision(int k);
  static BrowsingModel dcg(int k);
  static BrowsingModel rbp(double persistence);
  static BrowsingModel inst(double target);
  static BrowsingModel ap();
  static BrowsingModel err();

  ModelKind kind() const { return kind_; }
  // Rank cutoff k for Precision and DCG.
  int cutoff() const { return static_cast<int>(param_); }
  // p for RBP.
  double persistence() const { return param_; }
  // T for INST.
  double target() const { return param_; }

  // Continuation does not depend on the gains.
  bool gain_independent() const {
    return kind_ == ModelKind::kPrecision || kind_ == ModelKind::kDcg ||
           kind_ == ModelKind::kRbp;
  }

  // e.g. "rbp@0.8", "ap".
  std::string name() const;

  friend bool operator==(const BrowsingModel&, const BrowsingModel&) = default;

 private:
  BrowsingModel(ModelKind kind, double param) : kind_(kind), param_(param) {}

  ModelKind kind_ = ModelKind::kAp;
  double param_ = 0.0;
};

enum class AggKind { kErg, kEtg, kAvg, kMax, kFin, kPe, kErr };

class Aggregation {
 public:
  static constexpr double kDefaultPeakEndBeta = 0.5;

  static Aggregation erg() { return Aggregation(AggKind::kErg); }
  static Aggregation etg() { return Aggregation(AggKind::kEtg); }
  static Aggregation avg() { return Aggregation(AggKind::kAvg); }
  static Aggregation max() { return Aggregation(AggKind::kMax); }
  static Aggregation fin() { return Aggregation(AggKind::kFin); }
  static Aggregation peak_end(double beta = kDefaultPeakEndBeta);
  static Aggregation reciprocal() { return Aggregation(AggKind::kErr); }

  AggKind kind() const { return kind_; }
  double beta() const { return beta_; }
  std::string name() const;

  friend bool operator==(const Aggregation&, const Aggregation&) = default;

 private:
  explicit Aggregation(AggKind kind, double beta = kDefaultPeakEndBeta)
      : kind_(kind), beta_(beta) {}

  AggKind kind_ = AggKind::kErg;
  double beta_ = kDefaultPeakEndBeta;
};

// What happens to the users still browsing at the last evaluated rank.
enum class Truncation {
  // C(depth) is forced to 0, so sum L(i) == 1.
  kStopAtDepth,
  // C(depth) is left as the model defines it; the mass continuing past the
  // depth is dropped.
  kOpenTail,
};

std::string_view to_string(Truncation truncation);
Truncation parse_truncation(std::string_view text);

// True for the grid cells that are impractical: ERR's reciprocal
// aggregation under a gain-independent browsing model makes every score
// the same constant.
bool is_constant_combination(const BrowsingModel& model,
                             const Aggregation& agg);

// True when `agg` reproduces the textbook metric for `model`.
bool is_canonical(const BrowsingModel& model, const Aggregation& agg);

struct MetricSpec {
  BrowsingModel model = BrowsingModel::ap();
  Aggregation agg = Aggregation::erg();
  std::size_t depth = 10;
  Truncation truncation = Truncation::kStopAtDepth;
  GainScheme gain = GainScheme::kLinear;
  // Replaces the computed V+ in the ERG aggregation when set, e.g.
  // 1/(1-p) for an untruncated RBP normalizer.
  std::optional<double> rate_normalizer;

  // Validates parameters and rejects constant combinations.
  static MetricSpec make(BrowsingModel model, Aggregation agg,
                         std::size_t depth = 10,
                         Truncation truncation = Truncation::kStopAtDepth,
                         GainScheme gain = GainScheme::kLinear);

  // "MODEL[@PARAM]+AGG", e.g. "rbp@0.8+erg".
  std::string id() const;
};

struct ParsedMetric {
  BrowsingModel model;
  Aggregation agg;
};

// Parses one "MODEL[@PARAM]+AGG[@BETA]" token. Case-insensitive; throws
// ConfigError for unknown names, missing or out-of-range parameters and
// constant combinations.
ParsedMetric parse_metric(std::string_view text);

// Parses a comma-separated list. The token "table1@T" expands to all 39
// practical combinations with Precision@10, DCG@10, RBP@0.8, INST@T, AP
// and ERR.
std::vector<ParsedMetric> parse_metric_list(std::string_view text);

std::vector<ParsedMetric> table1_metrics(double inst_target);

}  // namespace cwla
