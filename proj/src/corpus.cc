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

#include "cwla/corpus.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <system_error>
#include <utility>

#include "cwla/error.h"

namespace cwla {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() &&
           (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) {
      ++pos;
    }
    if (pos == line.size()) break;
    const std::size_t start = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' &&
           line[pos] != '\r') {
      ++pos;
    }
    fields.push_back(line.substr(start, pos - start));
  }
  return fields;
}

std::string where(std::string_view source, std::size_t line_no) {
  return std::string(source) + ":" + std::to_string(line_no) + ": ";
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

}  // namespace

void Qrels::set(const std::string& topic, const std::string& doc, int level) {
  if (level < 0) throw DataError("negative relevance level");
  judgments_[topic][doc] = level;
}

std::optional<int> Qrels::level(const std::string& topic,
                                const std::string& doc) const {
  const auto t = judgments_.find(topic);
  if (t == judgments_.end()) return std::nullopt;
  const auto d = t->second.find(doc);
  if (d == t->second.end()) return std::nullopt;
  return d->second;
}

bool Qrels::has_topic(const std::string& topic) const {
  return judgments_.contains(topic);
}

std::vector<std::string> Qrels::topic_ids() const {
  std::vector<std::string> ids;
  ids.reserve(judgments_.size());
  for (const auto& [topic, docs] : judgments_) ids.push_back(topic);
  return ids;
}

std::size_t Qrels::size() const {
  std::size_t n = 0;
  for (const auto& [topic, docs] : judgments_) n += docs.size();
  return n;
}

int Qrels::observed_max_level() const {
  int max_level = 0;
  for (const auto& [topic, docs] : judgments_) {
    for (const auto& [doc, level] : docs) max_level = std::max(max_level, level);
  }
  return max_level;
}

void Qrels::set_max_level(int max_level) {
  if (max_level < 1) throw ConfigError("max relevance level must be >= 1");
  const int observed = observed_max_level();
  if (max_level < observed) {
    throw ConfigError("max relevance level " + std::to_string(max_level) +
                      " is below the observed level " +
                      std::to_string(observed));
  }
  max_level_override_ = max_level;
}

int Qrels::max_level() const {
  if (max_level_override_) return *max_level_override_;
  const int observed = observed_max_level();
  if (observed < 1) {
    throw ConfigError(
        "qrels contain no positive relevance level; set the max level "
        "explicitly");
  }
  return observed;
}

Qrels parse_qrels(std::istream& in, std::string_view source) {
  Qrels qrels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != 4) {
      throw DataError(where(source, line_no) + "expected 4 fields, got " +
                      std::to_string(fields.size()));
    }
    const std::string_view level_text = fields[3];
    int level = 0;
    const auto [ptr, ec] = std::from_chars(
        level_text.data(), level_text.data() + level_text.size(), level);
    if (ec != std::errc() || ptr != level_text.data() + level_text.size()) {
      throw DataError(where(source, line_no) + "relevance level '" +
                      std::string(level_text) + "' is not an integer");
    }
    if (level < 0) {
      throw DataError(where(source, line_no) + "negative relevance level " +
                      std::to_string(level));
    }
    qrels.set(std::string(fields[0]), std::string(fields[2]), level);
  }
  return qrels;
}

Qrels read_qrels(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse_qrels(in, path.string());
}

Run parse_run(std::istream& in, std::string_view source) {
  struct Entry {
    double score;
    std::string doc;
  };
  std::map<std::string, std::vector<Entry>> entries;
  std::map<std::string, std::set<std::string, std::less<>>, std::less<>> seen;
  Run run;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != 6) {
      throw DataError(where(source, line_no) + "expected 6 fields, got " +
                      std::to_string(fields.size()));
    }
    const std::string_view score_text = fields[4];
    double score = 0.0;
    const auto [ptr, ec] = std::from_chars(
        score_text.data(), score_text.data() + score_text.size(), score);
    if (ec != std::errc() || ptr != score_text.data() + score_text.size() ||
        !std::isfinite(score)) {
      throw DataError(where(source, line_no) + "score '" +
                      std::string(score_text) + "' is not a finite number");
    }
    const std::string_view tag = fields[5];
    if (run.id.empty()) {
      run.id = std::string(tag);
    } else if (run.id != tag) {
      throw DataError(where(source, line_no) + "run tag '" + std::string(tag) +
                      "' differs from '" + run.id + "'");
    }
    std::string topic(fields[0]);
    std::string doc(fields[2]);
    if (!seen[topic].insert(doc).second) {
      throw DataError(where(source, line_no) + "duplicate document '" + doc +
                      "' for topic '" + topic + "'");
    }
    entries[std::move(topic)].push_back({score, std::move(doc)});
  }
  for (auto& [topic, list] : entries) {
    std::sort(list.begin(), list.end(), [](const Entry& a, const Entry& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.doc < b.doc;
    });
    auto& docs = run.ranked[topic];
    docs.reserve(list.size());
    for (auto& e : list) docs.push_back(std::move(e.doc));
  }
  return run;
}

Run read_run(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  Run run = parse_run(in, path.string());
  if (run.id.empty()) run.id = path.filename().string();
  return run;
}

RunSet::RunSet(std::vector<Run> runs) : runs_(std::move(runs)) {
  std::set<std::string> ids;
  std::set<std::string> topics;
  for (const auto& run : runs_) {
    if (!ids.insert(run.id).second) {
      throw DataError("duplicate run id '" + run.id + "'");
    }
    for (const auto& [topic, docs] : run.ranked) topics.insert(topic);
  }
  topic_ids_.assign(topics.begin(), topics.end());
}

std::vector<std::string> RunSet::run_ids() const {
  std::vector<std::string> ids;
  ids.reserve(runs_.size());
  for (const auto& run : runs_) ids.push_back(run.id);
  return ids;
}

RunSet read_runs(std::span<const std::filesystem::path> paths) {
  std::vector<std::filesystem::path> files;
  for (const auto& path : paths) {
    if (std::filesystem::is_directory(path)) {
      std::vector<std::filesystem::path> found;
      for (const auto& entry : std::filesystem::directory_iterator(path)) {
        if (entry.is_regular_file()) found.push_back(entry.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(path);
    }
  }
  std::vector<Run> runs;
  runs.reserve(files.size());
  for (const auto& file : files) runs.push_back(read_run(file));
  return RunSet(std::move(runs));
}

std::string_view to_string(GainScheme scheme) {
  return scheme == GainScheme::kLinear ? "linear" : "exponential";
}

GainScheme parse_gain_scheme(std::string_view text) {
  if (text == "linear") return GainScheme::kLinear;
  if (text == "exponential" || text == "exp") return GainScheme::kExponential;
  throw ConfigError("unknown gain mapping '" + std::string(text) + "'");
}

double map_gain(int level, const GainMapping& mapping) {
  if (mapping.max_level < 1) {
    throw ConfigError("max relevance level must be >= 1");
  }
  if (level < 0 || level > mapping.max_level) {
    throw DataError("relevance level " + std::to_string(level) +
                    " outside [0, " + std::to_string(mapping.max_level) + "]");
  }
  switch (mapping.scheme) {
    case GainScheme::kLinear:
      return static_cast<double>(level) / mapping.max_level;
    case GainScheme::kExponential:
      return (std::ldexp(1.0, level) - 1.0) / std::ldexp(1.0, mapping.max_level);
  }
  return 0.0;
}

GainVector::GainVector(std::vector<double> gains) : gains_(std::move(gains)) {
  if (gains_.empty()) throw DataError("gain vector must have depth >= 1");
  for (double g : gains_) {
    if (!(g >= 0.0 && g <= 1.0)) {
      throw DataError("gain " + std::to_string(g) + " outside [0, 1]");
    }
  }
}

GainTable::GainTable(std::vector<std::string> topic_ids,
                     std::vector<std::string> run_ids,
                     std::vector<GainVector> cells,
                     std::vector<std::string> warnings)
    : topic_ids_(std::move(topic_ids)),
      run_ids_(std::move(run_ids)),
      cells_(std::move(cells)),
      warnings_(std::move(warnings)) {
  if (cells_.size() != topic_ids_.size() * run_ids_.size()) {
    throw DataError("gain table cell count does not match its shape");
  }
}

const GainVector& GainTable::at(std::string_view run_id,
                                std::string_view topic_id) const {
  const auto r = std::find(run_ids_.begin(), run_ids_.end(), run_id);
  const auto t = std::find(topic_ids_.begin(), topic_ids_.end(), topic_id);
  if (r == run_ids_.end() || t == topic_ids_.end()) {
    throw std::out_of_range("no gain vector for (" + std::string(run_id) +
                            ", " + std::string(topic_id) + ")");
  }
  return at(static_cast<std::size_t>(t - topic_ids_.begin()),
            static_cast<std::size_t>(r - run_ids_.begin()));
}

GainTable assemble_gains(const RunSet& runs, const Qrels& qrels,
                         const GainMapping& mapping, std::size_t depth) {
  if (depth < 1) throw ConfigError("depth must be >= 1");
  std::set<std::string> topic_set(runs.topic_ids().begin(),
                                  runs.topic_ids().end());
  for (auto& topic : qrels.topic_ids()) topic_set.insert(std::move(topic));
  std::vector<std::string> topics(topic_set.begin(), topic_set.end());

  std::vector<std::string> warnings;
  for (const auto& topic : topics) {
    if (!qrels.has_topic(topic)) {
      warnings.push_back("topic '" + topic +
                         "' has no relevance judgments; all gains are 0");
    }
  }

  std::vector<GainVector> cells;
  cells.reserve(topics.size() * runs.runs().size());
  for (const auto& topic : topics) {
    for (const auto& run : runs.runs()) {
      std::vector<double> gains(depth, 0.0);
      const auto it = run.ranked.find(topic);
      if (it != run.ranked.end()) {
        const auto& docs = it->second;
        const std::size_t n = std::min(depth, docs.size());
        for (std::size_t i = 0; i < n; ++i) {
          if (const auto level = qrels.level(topic, docs[i])) {
            gains[i] = map_gain(*level, mapping);
          }
        }
      }
      cells.emplace_back(std::move(gains));
    }
  }
  return GainTable(std::move(topics), runs.run_ids(), std::move(cells),
                   std::move(warnings));
}

}  // namespace cwla
