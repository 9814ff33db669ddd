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

#include "cwla/job.h"

#include <algorithm>
#include <fstream>
#include <map>

#include "cwla/csv.h"
#include "cwla/engine.h"
#include "cwla/error.h"

namespace cwla {
namespace {

struct Loaded {
  std::vector<MetricSpec> specs;
  std::vector<ScoreMatrix> scores;  // parallel to specs
  std::vector<std::string> warnings;
};

GainScheme scheme_for(const JobConfig& config, const BrowsingModel& model) {
  if (config.gain_map == "auto") {
    return model.kind() == ModelKind::kErr ? GainScheme::kExponential
                                           : GainScheme::kLinear;
  }
  return parse_gain_scheme(config.gain_map);
}

Loaded load(const JobConfig& config) {
  validate(config);
  Loaded loaded;
  loaded.specs = metric_specs(config);

  Qrels qrels = read_qrels(config.qrels);
  if (config.max_level) qrels.set_max_level(*config.max_level);
  const RunSet runs = read_runs(config.runs);
  if (runs.runs().empty()) throw DataError("no run files found");

  std::map<GainScheme, GainTable> tables;
  for (const auto& spec : loaded.specs) {
    if (tables.contains(spec.gain)) continue;
    const GainMapping mapping{spec.gain, qrels.max_level()};
    auto table = assemble_gains(runs, qrels, mapping, config.depth);
    if (tables.empty()) loaded.warnings = table.warnings();
    tables.emplace(spec.gain, std::move(table));
  }
  for (const auto& spec : loaded.specs) {
    loaded.scores.push_back(
        score_matrix(tables.at(spec.gain), spec, config.workers));
  }
  return loaded;
}

std::string join(const std::vector<std::string>& items, char sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

csv::Provenance provenance(const std::string& command, const JobConfig& config,
                           const std::vector<MetricSpec>& specs) {
  std::vector<std::string> runs;
  for (const auto& p : config.runs) runs.push_back(p.string());
  std::vector<std::string> ids;
  for (const auto& s : specs) ids.push_back(s.id());
  return {command,
          {{"qrels", config.qrels.string()},
           {"runs", join(runs, ';')},
           {"depth", std::to_string(config.depth)},
           {"gain_map", config.gain_map},
           {"max_level",
            config.max_level ? std::to_string(*config.max_level) : "observed"},
           {"truncation", std::string(to_string(config.truncation))},
           {"seed", std::to_string(config.seed)},
           {"B", std::to_string(config.consistency_trials)},
           {"hsd_trials", std::to_string(config.hsd_trials)},
           {"alpha", csv::format_number(config.alpha)},
           {"family", config.family},
           {"metrics", join(ids, ';')}}};
}

template <class WriteFn>
std::filesystem::path write_file(const JobConfig& config,
                                 const std::string& name, WriteFn&& write) {
  std::filesystem::create_directories(config.out_dir);
  const auto path = config.out_dir / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  write(out);
  out.flush();
  if (!out) throw DataError("failed writing " + path.string());
  return path;
}

// Metric indices grouped by browsing model, in order of first appearance.
std::vector<std::vector<std::size_t>> group_by_model(
    const std::vector<MetricSpec>& specs) {
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto name = specs[i].model.name();
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
      names.push_back(name);
      groups.push_back({i});
    } else {
      groups[static_cast<std::size_t>(it - names.begin())].push_back(i);
    }
  }
  return groups;
}

}  // namespace

void validate(const JobConfig& config) {
  if (config.qrels.empty()) throw ConfigError("--qrels is required");
  if (config.runs.empty()) throw ConfigError("--runs is required");
  if (config.depth < 1) throw ConfigError("--depth must be >= 1");
  if (config.gain_map != "auto") parse_gain_scheme(config.gain_map);
  if (config.metrics.empty()) throw ConfigError("--metrics is required");
  if (config.consistency_trials < 1) throw ConfigError("--B must be >= 1");
  if (config.hsd_trials < 1) throw ConfigError("--hsd-trials must be >= 1");
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw ConfigError("--alpha must lie in (0, 1)");
  }
  if (config.family != "model" && config.family != "all") {
    throw ConfigError("--family must be model or all");
  }
}

std::vector<MetricSpec> metric_specs(const JobConfig& config) {
  std::vector<MetricSpec> specs;
  for (const auto& parsed : parse_metric_list(config.metrics)) {
    specs.push_back(MetricSpec::make(parsed.model, parsed.agg, config.depth,
                                     config.truncation,
                                     scheme_for(config, parsed.model)));
  }
  return specs;
}

std::string file_stem(const std::string& metric_id) {
  std::string out = metric_id;
  for (char& c : out) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '@' || c == '+' ||
                      c == '.' || c == '-' || c == '_';
    if (!keep) c = '_';
  }
  return out;
}

JobResult cmd_score(const JobConfig& config) {
  const auto loaded = load(config);
  JobResult result{{}, loaded.warnings};
  const auto prov = provenance("score", config, loaded.specs);
  std::vector<std::string> written;
  for (std::size_t m = 0; m < loaded.specs.size(); ++m) {
    const auto name = file_stem(loaded.specs[m].id()) + ".scores.csv";
    if (std::find(written.begin(), written.end(), name) != written.end()) {
      continue;
    }
    written.push_back(name);
    result.files.push_back(write_file(config, name, [&](std::ostream& out) {
      csv::write_score_matrix(out, prov, loaded.scores[m]);
    }));
  }
  return result;
}

JobResult cmd_similarity(const JobConfig& config) {
  const auto loaded = load(config);
  JobResult result{{}, loaded.warnings};
  const auto prov = provenance("similarity", config, loaded.specs);
  std::string wanted;
  if (!config.model.empty()) {
    wanted = parse_metric(config.model + "+erg").model.name();
  }
  for (const auto& group : group_by_model(loaded.specs)) {
    const auto model = loaded.specs[group.front()].model.name();
    if (!wanted.empty() && model != wanted) continue;
    if (group.size() < 2) continue;
    std::vector<ScoreMatrix> matrices;
    std::vector<std::string> labels;
    for (std::size_t m : group) {
      matrices.push_back(loaded.scores[m]);
      labels.push_back(loaded.specs[m].agg.name());
    }
    const auto grid = similarity_grid(matrices, labels);
    result.files.push_back(write_file(
        config, "similarity_" + file_stem(model) + ".csv",
        [&](std::ostream& out) { csv::write_similarity(out, prov, grid); }));
  }
  if (result.files.empty()) {
    throw ConfigError(
        "similarity needs at least two aggregations of one browsing model");
  }
  return result;
}

JobResult cmd_consistency(const JobConfig& config) {
  const auto loaded = load(config);
  JobResult result{{}, loaded.warnings};
  const auto prov = provenance("consistency", config, loaded.specs);

  std::vector<std::string> ids;
  for (const auto& s : loaded.specs) ids.push_back(s.id());
  const auto matrix =
      consistency_matrix(loaded.scores, ids, config.consistency_trials,
                         config.seed, config.workers);

  std::vector<std::vector<std::size_t>> families;
  if (config.family == "all") {
    families.emplace_back(loaded.specs.size());
    for (std::size_t i = 0; i < loaded.specs.size(); ++i) families[0][i] = i;
  } else {
    families = group_by_model(loaded.specs);
  }

  std::vector<csv::SummaryRow> rows;
  for (const auto& family : families) {
    ConsistencyMatrix sub;
    sub.trials = matrix.trials;
    sub.seed = matrix.seed;
    sub.taus = Matrix(matrix.taus.rows(), family.size());
    for (std::size_t j = 0; j < family.size(); ++j) {
      // Column position keeps duplicate ids apart.
      sub.metric_ids.push_back(std::to_string(j));
      sub.tie_trials.push_back(matrix.tie_trials[family[j]]);
      for (std::size_t b = 0; b < matrix.taus.rows(); ++b) {
        sub.taus(b, j) = matrix.taus(b, family[j]);
      }
    }
    if (sub.taus.rows() < 2) {
      throw ConfigError("consistency significance needs B >= 2");
    }
    const auto summary = consistency_significance(
        sub, config.hsd_trials, config.seed, config.alpha, config.workers);
    for (const auto& row : summary) {
      const auto& spec = loaded.specs[family[std::stoul(row.metric_id)]];
      rows.push_back({spec.model.name(), spec.agg.name(),
                      is_canonical(spec.model, spec.agg), row.mean_tau,
                      row.outperforms, row.tie_trials});
    }
  }

  result.files.push_back(
      write_file(config, "consistency_summary.csv", [&](std::ostream& out) {
        csv::write_consistency_summary(out, prov, rows);
      }));
  result.files.push_back(
      write_file(config, "consistency_taus.csv", [&](std::ostream& out) {
        csv::write_consistency_taus(out, prov, matrix);
      }));
  return result;
}

JobResult cmd_discpower(const JobConfig& config) {
  const auto loaded = load(config);
  JobResult result{{}, loaded.warnings};
  const auto prov = provenance("discpower", config, loaded.specs);
  std::vector<std::pair<std::string, AslTable>> tables;
  for (std::size_t m = 0; m < loaded.specs.size(); ++m) {
    const auto id = loaded.specs[m].id();
    if (std::any_of(tables.begin(), tables.end(),
                    [&](const auto& t) { return t.first == id; })) {
      continue;
    }
    auto table = run_pair_asl(loaded.scores[m], config.hsd_trials, config.seed,
                              config.workers);
    const auto curve = asl_curve(table);
    const auto stem = file_stem(id);
    result.files.push_back(
        write_file(config, stem + ".asl.csv", [&](std::ostream& out) {
          csv::write_asl_table(out, prov, table);
        }));
    result.files.push_back(
        write_file(config, stem + ".curve.csv", [&](std::ostream& out) {
          csv::write_asl_curve(out, prov, curve);
        }));
    tables.emplace_back(id, std::move(table));
  }
  result.files.push_back(
      write_file(config, "discpower_summary.csv", [&](std::ostream& out) {
        out << prov.line() << '\n' << "metric,pairs,discriminative_power\n";
        for (const auto& [id, table] : tables) {
          out << csv::escape(id) << ',' << table.pairs.size() << ','
              << csv::format_number(discriminative_power(table, config.alpha))
              << '\n';
        }
      }));
  return result;
}

}  // namespace cwla
