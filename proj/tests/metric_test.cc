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

#include "cwla/error.h"
#include "cwla/metric.h"
#include "doctest.h"

namespace cwla {
namespace {

TEST_CASE("parse_metric reads MODEL[@PARAM]+AGG") {
  const auto rbp = parse_metric("rbp@0.8+erg");
  CHECK(rbp.model == BrowsingModel::rbp(0.8));
  CHECK(rbp.agg == Aggregation::erg());

  const auto inst = parse_metric("INST@2.25+Max");
  CHECK(inst.model == BrowsingModel::inst(2.25));
  CHECK(inst.agg == Aggregation::max());

  const auto err = parse_metric("err+err");
  CHECK(err.model == BrowsingModel::err());
  CHECK(err.agg == Aggregation::reciprocal());

  const auto pe = parse_metric("dcg@10+pe@0.3");
  CHECK(pe.agg.beta() == doctest::Approx(0.3));
  CHECK(parse_metric("ap+pe").agg.beta() == 0.5);
}

TEST_CASE("metric ids round-trip through the parser") {
  for (const auto& m : table1_metrics(2.25)) {
    const auto id = m.model.name() + "+" + m.agg.name();
    const auto back = parse_metric(id);
    CHECK(back.model == m.model);
    CHECK(back.agg == m.agg);
  }
}

TEST_CASE("constant combinations are rejected") {
  for (const char* spec : {"precision@10+err", "dcg@10+err", "rbp@0.8+err"}) {
    CHECK_THROWS_WITH_AS(parse_metric(spec), doctest::Contains("Table 1"),
                         ConfigError);
  }
  CHECK_THROWS_AS(MetricSpec::make(BrowsingModel::rbp(0.8),
                                   Aggregation::reciprocal()),
                  ConfigError);
  CHECK_NOTHROW(parse_metric("inst@2.5+err"));
  CHECK_NOTHROW(parse_metric("ap+err"));
}

TEST_CASE("parameters are validated") {
  CHECK_THROWS_AS(parse_metric("inst+erg"), ConfigError);  // T is mandatory
  CHECK_THROWS_AS(parse_metric("rbp@1+erg"), ConfigError);
  CHECK_THROWS_AS(parse_metric("rbp@0+erg"), ConfigError);
  CHECK_THROWS_AS(parse_metric("precision@0+erg"), ConfigError);
  CHECK_THROWS_AS(parse_metric("precision@2.5+erg"), ConfigError);
  CHECK_THROWS_AS(parse_metric("inst@-1+erg"), ConfigError);
  CHECK_THROWS_AS(parse_metric("ap@3+erg"), ConfigError);
  CHECK_THROWS_AS(parse_metric("ap+pe@1.5"), ConfigError);
  CHECK_THROWS_AS(parse_metric("ap+median"), ConfigError);
  CHECK_THROWS_AS(parse_metric("bpref+erg"), ConfigError);
  CHECK_THROWS_AS(parse_metric("rbp@0.8"), ConfigError);
}

TEST_CASE("table1 preset has the 39 practical cells") {
  const auto all = parse_metric_list("table1@2.5");
  CHECK(all.size() == 39);
  int err_cells = 0;
  for (const auto& m : all) {
    CHECK_FALSE(is_constant_combination(m.model, m.agg));
    err_cells += m.agg.kind() == AggKind::kErr;
  }
  CHECK(err_cells == 3);
  CHECK_THROWS_AS(parse_metric_list("table1"), ConfigError);
  CHECK(parse_metric_list("rbp@0.8+erg, ap+max").size() == 2);
  CHECK_THROWS_AS(parse_metric_list(" , "), ConfigError);
}

TEST_CASE("canonical aggregations") {
  CHECK(is_canonical(BrowsingModel::precision(10), Aggregation::erg()));
  CHECK(is_canonical(BrowsingModel::err(), Aggregation::reciprocal()));
  CHECK_FALSE(is_canonical(BrowsingModel::err(), Aggregation::erg()));
  CHECK_FALSE(is_canonical(BrowsingModel::ap(), Aggregation::etg()));
}

TEST_CASE("truncation names") {
  CHECK(parse_truncation("stop") == Truncation::kStopAtDepth);
  CHECK(parse_truncation("open") == Truncation::kOpenTail);
  CHECK_THROWS_AS(parse_truncation("none"), ConfigError);
}

}  // namespace
}  // namespace cwla
