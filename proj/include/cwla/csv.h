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

// CSV writers. Output is UTF-8 with LF line endings; numbers use '.' and
// 10 significant digits. Every file starts with one '#' provenance line.

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cwla/engine.h"
#include "cwla/meta_eval.h"

namespace cwla::csv {

// Decimal with 10 significant digits, e.g. 0.3280000000 -> "0.328".
std::string format_number(double value);

// Quotes a field when it contains a comma, quote or newline.
std::string escape(std::string_view field);

struct Provenance {
  std::string command;
  std::vector<std::pair<std::string, std::string>> fields;

  // "# cwla-eval <command> key=value ..."
  std::string line() const;
};

void write_score_matrix(std::ostream& out, const Provenance& provenance,
                        const ScoreMatrix& scores);

// Long form: one row per ordered (a, b) pair including the diagonal.
void write_similarity(std::ostream& out, const Provenance& provenance,
                      const SimilarityGrid& grid);

struct SummaryRow {
  std::string model;
  std::string aggregation;
  bool canonical = false;
  double mean_tau = 0.0;
  std::size_t outperforms = 0;
  std::size_t tie_trials = 0;
};

void write_consistency_summary(std::ostream& out, const Provenance& provenance,
                               std::span<const SummaryRow> rows);

// Raw B x |M| tau matrix, one column per metric.
void write_consistency_taus(std::ostream& out, const Provenance& provenance,
                            const ConsistencyMatrix& matrix);

void write_asl_table(std::ostream& out, const Provenance& provenance,
                     const AslTable& table);

void write_asl_curve(std::ostream& out, const Provenance& provenance,
                     std::span<const CurvePoint> curve);

}  // namespace cwla::csv
