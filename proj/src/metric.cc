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

#include "cwla/metric.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <system_error>

#include "cwla/error.h"

namespace cwla {
namespace {

std::string format_param(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  return text;
}

double parse_number(std::string_view text, std::string_view context) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() ||
      !std::isfinite(value)) {
    throw ConfigError("bad parameter '" + std::string(text) + "' in '" +
                      std::string(context) + "'");
  }
  return value;
}

int parse_cutoff(std::string_view text, std::string_view context) {
  const double value = parse_number(text, context);
  if (value != std::floor(value) || value < 1 || value > 1e6) {
    throw ConfigError("rank cutoff must be a positive integer in '" +
                      std::string(context) + "'");
  }
  return static_cast<int>(value);
}

struct NameParam {
  std::string name;
  std::optional<std::string> param;
};

NameParam split_param(std::string_view text) {
  const auto at = text.find('@');
  if (at == std::string_view::npos) return {lower(text), std::nullopt};
  return {lower(text.substr(0, at)), std::string(text.substr(at + 1))};
}

BrowsingModel parse_model(std::string_view text, std::string_view context) {
  const auto [name, param] = split_param(text);
  auto require = [&]() -> const std::string& {
    if (!param) {
      throw ConfigError("browsing model '" + name +
                        "' needs a parameter (MODEL@PARAM) in '" +
                        std::string(context) + "'");
    }
    return *param;
  };
  auto reject = [&] {
    if (param) {
      throw ConfigError("browsing model '" + name +
                        "' takes no parameter in '" + std::string(context) +
                        "'");
    }
  };
  if (name == "precision" || name == "p" || name == "prec") {
    return BrowsingModel::precision(parse_cutoff(require(), context));
  }
  if (name == "dcg") return BrowsingModel::dcg(parse_cutoff(require(), context));
  if (name == "rbp") return BrowsingModel::rbp(parse_number(require(), context));
  if (name == "inst") {
    return BrowsingModel::inst(parse_number(require(), context));
  }
  if (name == "ap") {
    reject();
    return BrowsingModel::ap();
  }
  if (name == "err") {
    reject();
    return BrowsingModel::err();
  }
  throw ConfigError("unknown browsing model '" + name + "' in '" +
                    std::string(context) + "'");
}

Aggregation parse_agg(std::string_view text, std::string_view context) {
  const auto [name, param] = split_param(text);
  if (name == "pe") {
    return param ? Aggregation::peak_end(parse_number(*param, context))
                 : Aggregation::peak_end();
  }
  if (param) {
    throw ConfigError("aggregation '" + name + "' takes no parameter in '" +
                      std::string(context) + "'");
  }
  if (name == "erg") return Aggregation::erg();
  if (name == "etg") return Aggregation::etg();
  if (name == "avg") return Aggregation::avg();
  if (name == "max") return Aggregation::max();
  if (name == "fin") return Aggregation::fin();
  if (name == "err") return Aggregation::reciprocal();
  throw ConfigError("unknown aggregation '" + name + "' in '" +
                    std::string(context) + "'");
}

void check_combination(const BrowsingModel& model, const Aggregation& agg) {
  if (is_constant_combination(model, agg)) {
    throw ConfigError("metric " + model.name() + "+" + agg.name() +
                      " is an excluded Table 1 cell: its score is a constant "
                      "independent of the ranking and thus is impractical");
  }
}

}  // namespace

BrowsingModel BrowsingModel::precision(int k) {
  if (k < 1) throw ConfigError("precision cutoff k must be >= 1");
  return BrowsingModel(ModelKind::kPrecision, k);
}

BrowsingModel BrowsingModel::dcg(int k) {
  if (k < 1) throw ConfigError("dcg cutoff k must be >= 1");
  return BrowsingModel(ModelKind::kDcg, k);
}

BrowsingModel BrowsingModel::rbp(double persistence) {
  if (!(persistence > 0.0 && persistence < 1.0)) {
    throw ConfigError("rbp persistence p must lie in (0, 1)");
  }
  return BrowsingModel(ModelKind::kRbp, persistence);
}

BrowsingModel BrowsingModel::inst(double target) {
  if (!(target > 0.0) || !std::isfinite(target)) {
    throw ConfigError("inst target T must be > 0");
  }
  return BrowsingModel(ModelKind::kInst, target);
}

BrowsingModel BrowsingModel::ap() { return BrowsingModel(ModelKind::kAp, 0); }
BrowsingModel BrowsingModel::err() { return BrowsingModel(ModelKind::kErr, 0); }

std::string BrowsingModel::name() const {
  switch (kind_) {
    case ModelKind::kPrecision: return "precision@" + format_param(param_);
    case ModelKind::kDcg: return "dcg@" + format_param(param_);
    case ModelKind::kRbp: return "rbp@" + format_param(param_);
    case ModelKind::kInst: return "inst@" + format_param(param_);
    case ModelKind::kAp: return "ap";
    case ModelKind::kErr: return "err";
  }
  return "?";
}

Aggregation Aggregation::peak_end(double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw ConfigError("peak-end beta must lie in [0, 1]");
  }
  return Aggregation(AggKind::kPe, beta);
}

std::string Aggregation::name() const {
  switch (kind_) {
    case AggKind::kErg: return "erg";
    case AggKind::kEtg: return "etg";
    case AggKind::kAvg: return "avg";
    case AggKind::kMax: return "max";
    case AggKind::kFin: return "fin";
    case AggKind::kPe:
      return beta_ == kDefaultPeakEndBeta ? "pe" : "pe@" + format_param(beta_);
    case AggKind::kErr: return "err";
  }
  return "?";
}

std::string_view to_string(Truncation truncation) {
  return truncation == Truncation::kStopAtDepth ? "stop" : "open";
}

Truncation parse_truncation(std::string_view text) {
  if (text == "stop") return Truncation::kStopAtDepth;
  if (text == "open") return Truncation::kOpenTail;
  throw ConfigError("unknown truncation policy '" + std::string(text) +
                    "' (expected stop|open)");
}

bool is_constant_combination(const BrowsingModel& model,
                             const Aggregation& agg) {
  return agg.kind() == AggKind::kErr && model.gain_independent();
}

bool is_canonical(const BrowsingModel& model, const Aggregation& agg) {
  if (model.kind() == ModelKind::kErr) return agg.kind() == AggKind::kErr;
  return agg.kind() == AggKind::kErg;
}

MetricSpec MetricSpec::make(BrowsingModel model, Aggregation agg,
                            std::size_t depth, Truncation truncation,
                            GainScheme gain) {
  check_combination(model, agg);
  if (depth < 1) throw ConfigError("evaluation depth must be >= 1");
  MetricSpec spec;
  spec.model = model;
  spec.agg = agg;
  spec.depth = depth;
  spec.truncation = truncation;
  spec.gain = gain;
  return spec;
}

std::string MetricSpec::id() const { return model.name() + "+" + agg.name(); }

ParsedMetric parse_metric(std::string_view text) {
  text = trim(text);
  const auto plus = text.find('+');
  if (plus == std::string_view::npos) {
    throw ConfigError("metric spec '" + std::string(text) +
                      "' must look like MODEL[@PARAM]+AGG");
  }
  ParsedMetric parsed{parse_model(trim(text.substr(0, plus)), text),
                      parse_agg(trim(text.substr(plus + 1)), text)};
  check_combination(parsed.model, parsed.agg);
  return parsed;
}

std::vector<ParsedMetric> table1_metrics(double inst_target) {
  const std::vector<BrowsingModel> models = {
      BrowsingModel::precision(10), BrowsingModel::dcg(10),
      BrowsingModel::rbp(0.8),      BrowsingModel::inst(inst_target),
      BrowsingModel::ap(),          BrowsingModel::err()};
  const std::vector<Aggregation> aggs = {
      Aggregation::erg(), Aggregation::etg(),      Aggregation::avg(),
      Aggregation::max(), Aggregation::fin(),      Aggregation::peak_end(),
      Aggregation::reciprocal()};
  std::vector<ParsedMetric> out;
  for (const auto& model : models) {
    for (const auto& agg : aggs) {
      if (!is_constant_combination(model, agg)) out.push_back({model, agg});
    }
  }
  return out;
}

std::vector<ParsedMetric> parse_metric_list(std::string_view text) {
  std::vector<ParsedMetric> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto token =
        trim(text.substr(pos, comma == std::string_view::npos ? text.npos
                                                               : comma - pos));
    if (!token.empty()) {
      const auto [name, param] = split_param(token);
      if (name == "table1") {
        if (!param) {
          throw ConfigError(
              "table1 needs the INST target: table1@T (e.g. table1@2.5)");
        }
        const auto all = table1_metrics(parse_number(*param, token));
        out.insert(out.end(), all.begin(), all.end());
      } else {
        out.push_back(parse_metric(token));
      }
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw ConfigError("no metric specs given");
  return out;
}

}  // namespace cwla
