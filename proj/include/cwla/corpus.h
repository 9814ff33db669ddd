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

// TREC qrels / run ingestion and gain assembly.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cwla {

// Judged relevance levels keyed by (topic, document).
class Qrels {
 public:
  Qrels() = default;

  // Last write wins for a repeated (topic, doc) pair.
  void set(const std::string& topic, const std::string& doc, int level);

  std::optional<int> level(const std::string& topic,
                           const std::string& doc) const;
  bool has_topic(const std::string& topic) const;
  std::vector<std::string> topic_ids() const;
  std::size_t size() const;
  bool empty() const { return size() == 0; }

  int observed_max_level() const;

  // Overrides the observed maximum. Must be >= 1 and >= every level seen.
  void set_max_level(int max_level);

  // The x_max used for gain mapping. Throws ConfigError when neither an
  // override nor a positive observed level exists.
  int max_level() const;

 private:
  std::map<std::string, std::map<std::string, int, std::less<>>, std::less<>>
      judgments_;
  std::optional<int> max_level_override_;
};

// Parses `topic iter doc level` lines. `source` names the input in errors.
Qrels parse_qrels(std::istream& in, std::string_view source = "<qrels>");
Qrels read_qrels(const std::filesystem::path& path);

// One system's ranked documents per topic, rank 1 first.
struct Run {
  std::string id;
  std::map<std::string, std::vector<std::string>> ranked;
};

// Parses `topic Q0 doc rank score tag` lines. Documents are ordered by
// descending score, ties by ascending doc-id; the rank column is ignored.
Run parse_run(std::istream& in, std::string_view source = "<run>");
Run read_run(const std::filesystem::path& path);

class RunSet {
 public:
  RunSet() = default;
  // Throws DataError on duplicate run ids.
  explicit RunSet(std::vector<Run> runs);

  const std::vector<Run>& runs() const { return runs_; }
  std::vector<std::string> run_ids() const;
  // Sorted union of the topics ranked by any run.
  const std::vector<std::string>& topic_ids() const { return topic_ids_; }

 private:
  std::vector<Run> runs_;
  std::vector<std::string> topic_ids_;
};

// Expands directories (regular files, sorted by name) and reads each run.
RunSet read_runs(std::span<const std::filesystem::path> paths);

enum class GainScheme { kLinear, kExponential };

std::string_view to_string(GainScheme scheme);
GainScheme parse_gain_scheme(std::string_view text);

struct GainMapping {
  GainScheme scheme = GainScheme::kLinear;
  int max_level = 1;
};

// Linear: level / max_level. Exponential: (2^level - 1) / 2^max_level.
double map_gain(int level, const GainMapping& mapping);

// Mapped gains of the top `depth` documents of one ranked list. Values are
// in [0, 1] and the length is the evaluation depth.
class GainVector {
 public:
  GainVector() = default;
  // Throws DataError if empty or any gain lies outside [0, 1].
  explicit GainVector(std::vector<double> gains);

  std::span<const double> values() const { return gains_; }
  std::size_t depth() const { return gains_.size(); }
  double operator[](std::size_t i) const { return gains_[i]; }

  friend bool operator==(const GainVector&, const GainVector&) = default;

 private:
  std::vector<double> gains_;
};

// Gain vectors for every (topic, run) cell.
class GainTable {
 public:
  GainTable(std::vector<std::string> topic_ids,
            std::vector<std::string> run_ids, std::vector<GainVector> cells,
            std::vector<std::string> warnings = {});

  const std::vector<std::string>& topic_ids() const { return topic_ids_; }
  const std::vector<std::string>& run_ids() const { return run_ids_; }
  const GainVector& at(std::size_t topic, std::size_t run) const {
    return cells_[topic * run_ids_.size() + run];
  }
  // Lookup by id; throws std::out_of_range if absent.
  const GainVector& at(std::string_view run_id,
                       std::string_view topic_id) const;
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  std::vector<std::string> topic_ids_;
  std::vector<std::string> run_ids_;
  std::vector<GainVector> cells_;
  std::vector<std::string> warnings_;
};

// Topics are the sorted union of qrels and run topics. Unjudged documents
// get gain 0 and lists shorter than `depth` are zero-padded. A topic that no
// qrels line mentions yields all-zero vectors and a warning.
GainTable assemble_gains(const RunSet& runs, const Qrels& qrels,
                         const GainMapping& mapping, std::size_t depth);

}  // namespace cwla
