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

#include "cwla/csv.h"

#include <cstdio>
#include <ostream>

namespace cwla::csv {

std::string format_number(double value) {
  if (value == 0.0) return "0";  // also folds -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string Provenance::line() const {
  std::string out = "# cwla-eval " + command;
  for (const auto& [key, value] : fields) {
    out += ' ';
    out += key;
    out += '=';
    out += value;
  }
  return out;
}

void write_score_matrix(std::ostream& out, const Provenance& provenance,
                        const ScoreMatrix& scores) {
  out << provenance.line() << '\n' << "topic";
  for (const auto& run : scores.run_ids) out << ',' << escape(run);
  out << '\n';
  for (std::size_t t = 0; t < scores.topics(); ++t) {
    out << escape(scores.topic_ids[t]);
    for (double v : scores.values.row(t)) out << ',' << format_number(v);
    out << '\n';
  }
}

void write_similarity(std::ostream& out, const Provenance& provenance,
                      const SimilarityGrid& grid) {
  out << provenance.line() << '\n'
      << "agg_a,agg_b,tau,ci_low,ci_high,ties\n";
  for (std::size_t a = 0; a < grid.labels.size(); ++a) {
    for (std::size_t b = 0; b < grid.labels.size(); ++b) {
      out << escape(grid.labels[a]) << ',' << escape(grid.labels[b]) << ','
          << format_number(grid.tau(a, b)) << ','
          << format_number(grid.ci_low(a, b)) << ','
          << format_number(grid.ci_high(a, b)) << ','
          << (grid.ties(a, b) != 0.0 ? 1 : 0) << '\n';
    }
  }
}

void write_consistency_summary(std::ostream& out, const Provenance& provenance,
                               std::span<const SummaryRow> rows) {
  out << provenance.line() << '\n'
      << "model,aggregation,canonical,mean_tau,outperforms,tie_trials\n";
  for (const auto& row : rows) {
    out << escape(row.model) << ',' << escape(row.aggregation) << ','
        << (row.canonical ? '*' : '-') << ',' << format_number(row.mean_tau)
        << ',' << row.outperforms << ',' << row.tie_trials << '\n';
  }
}

void write_consistency_taus(std::ostream& out, const Provenance& provenance,
                            const ConsistencyMatrix& matrix) {
  out << provenance.line() << '\n' << "trial";
  for (const auto& id : matrix.metric_ids) out << ',' << escape(id);
  out << '\n';
  for (std::size_t b = 0; b < matrix.taus.rows(); ++b) {
    out << b + 1;
    for (double v : matrix.taus.row(b)) out << ',' << format_number(v);
    out << '\n';
  }
}

void write_asl_table(std::ostream& out, const Provenance& provenance,
                     const AslTable& table) {
  out << provenance.line() << '\n' << "run_a,run_b,diff,asl\n";
  for (const auto& p : table.pairs) {
    out << escape(p.run_a) << ',' << escape(p.run_b) << ','
        << format_number(p.diff) << ',' << format_number(p.asl) << '\n';
  }
}

void write_asl_curve(std::ostream& out, const Provenance& provenance,
                     std::span<const CurvePoint> curve) {
  out << provenance.line() << '\n' << "pair_rank,asl\n";
  for (const auto& point : curve) {
    out << point.x << ',' << format_number(point.asl) << '\n';
  }
}

}  // namespace cwla::csv
