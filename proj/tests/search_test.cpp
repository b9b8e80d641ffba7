/*
 * Copyright 2026 The Controversy Rules Authors.
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

#include <gtest/gtest.h>

#include <random>

#include "controversy/search.hpp"
#include "fixtures.hpp"

namespace controversy {
namespace {

SearchConfig indicator_config(Measure measure, double min_support, std::size_t depth) {
  SearchConfig cfg;
  cfg.measure = measure;
  cfg.min_support = min_support;
  cfg.depth = depth;
  cfg.bins = 2;  // one split at 0.5 per indicator column
  return cfg;
}

TEST(SearchConfigTest, Validation) {
  SearchConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.min_support = 0.0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.min_support = 1.0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.beam_width = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.depth = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.top_q = 0;
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(SearchConfigTest, MinCasesRoundsUp) {
  SearchConfig cfg;
  EXPECT_EQ(cfg.min_cases(625), 25u);
  EXPECT_EQ(cfg.min_cases(891), 36u);
  EXPECT_EQ(cfg.min_cases(10), 1u);
  cfg.min_support = 0.375;
  EXPECT_EQ(cfg.min_cases(8), 3u);
}

TEST(BeamSearchTest, ToyBFindsConsistentDisagreement) {
  const auto ds = fixtures::indicator_dataset(8);
  const auto pm = fixtures::make_pm(fixtures::kToyB);
  const auto res = beam_search(ds, pm, indicator_config(Measure::kCcl, 3.0 / 8.0, 5));
  ASSERT_FALSE(res.entries.empty());
  EXPECT_NEAR(res.entries.front().quality, 0.811278124459, 1e-9);
  EXPECT_EQ(evaluate(res.entries.front().description, ds), fixtures::rows_1based(8, {1, 3, 4}));
  EXPECT_NEAR(res.baseline, -0.196077550764056, 1e-12);
}

TEST(BeamSearchTest, UnanimousMatrixGivesZeroQualities) {
  const auto ds = fixtures::indicator_dataset(8);
  const auto pm = fixtures::make_pm({{1, 1, 1}, {0, 0, 0}, {1, 1, 1}, {0, 0, 0}, {1, 1, 1}, {0, 0, 0}, {1, 1, 1}, {0, 0, 0}});
  const auto res = beam_search(ds, pm, indicator_config(Measure::kRow, 0.25, 2));
  EXPECT_EQ(res.entries.size(), 10u);
  for (const auto& e : res.entries) EXPECT_EQ(e.quality, 0.0);
}

TEST(BeamSearchTest, RaslOnThreeClassesIsConfigError) {
  const auto ds = fixtures::indicator_dataset(3, std::vector<int>{0, 1, 2}, 3);
  const auto pm = fixtures::make_pm({{0, 1}, {1, 2}, {2, 0}}, 3);
  SearchConfig cfg;
  cfg.measure = Measure::kRasl;
  try {
    beam_search(ds, pm, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig);
    EXPECT_NE(std::string(e.what()).find("measure requires binary target"), std::string::npos);
  }
}

TEST(BeamSearchTest, MissingTruthIsConfigError) {
  const auto ds = fixtures::indicator_dataset(8);
  const auto pm = fixtures::make_pm(fixtures::kToyA);
  SearchConfig cfg;
  cfg.measure = Measure::kGtYac;
  EXPECT_THROW(beam_search(ds, pm, cfg), Error);
}

TEST(ExhaustiveSearchTest, DepthOneSingleBinaryAttribute) {
  std::vector<AttributeColumn> cols;
  cols.push_back(AttributeColumn::make_nominal("x", {"0", "1", "0", "1", "1", "0"}));
  const Dataset ds(6, std::move(cols));
  const auto pm = fixtures::make_pm({{0, 1}, {0, 0}, {1, 1}, {0, 1}, {1, 0}, {0, 0}});
  SearchConfig cfg;
  cfg.depth = 1;
  cfg.min_support = 0.1;
  cfg.top_q = 100;
  const auto res = exhaustive_search(ds, pm, cfg);
  EXPECT_EQ(res.entries.size(), 4u);
  for (const auto& e : res.entries) EXPECT_EQ(e.description.size(), 1u);
}

TEST(ExhaustiveSearchTest, ToyARanksRowsTwoAndFiveFirst) {
  const auto ds = fixtures::indicator_dataset(8);
  const auto pm = fixtures::make_pm(fixtures::kToyA);
  const auto res = exhaustive_search(ds, pm, indicator_config(Measure::kRow, 0.25, 6));
  ASSERT_FALSE(res.entries.empty());
  EXPECT_EQ(res.entries.front().quality, 1.0);
  EXPECT_EQ(evaluate(res.entries.front().description, ds), fixtures::rows_1based(8, {2, 5}));
  EXPECT_LT(res.entries[1].quality, 1.0);
}

TEST(ExhaustiveSearchTest, BudgetExceeded) {
  const auto ds = fixtures::indicator_dataset(8);
  const auto pm = fixtures::make_pm(fixtures::kToyA);
  auto cfg = indicator_config(Measure::kRow, 0.25, 6);
  cfg.oracle_budget = 1000;
  try {
    exhaustive_search(ds, pm, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kOracleTooLarge);
  }
}

void expect_sorted(const ResultList& res, Direction dir) {
  for (std::size_t k = 1; k < res.entries.size(); ++k) {
    const auto& a = res.entries[k - 1];
    const auto& b = res.entries[k];
    if (a.quality != b.quality) {
      EXPECT_TRUE(dir == Direction::kMaximize ? a.quality > b.quality : a.quality < b.quality);
    } else if (a.description.size() != b.description.size()) {
      EXPECT_LT(a.description.size(), b.description.size());
    } else {
      EXPECT_LT(a.key, b.key);
    }
  }
}

TEST(SearchPropertyTest, BeamEqualsExhaustiveOnSmallInstances) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    const auto inst = fixtures::random_instance(rng, 10 + rng() % 21, 1 + rng() % 4, 2 + rng() % 4, 2);
    for (const auto m : kAllMeasures) {
      SearchConfig cfg;
      cfg.measure = m;
      cfg.depth = 1 + rng() % 2;
      cfg.min_support = 0.1;
      cfg.direction = rng() % 2 ? Direction::kMaximize : Direction::kMinimize;
      ResultList exhaustive;
      try {
        exhaustive = exhaustive_search(inst.ds, inst.pm, cfg);
      } catch (const Error&) {
        continue;
      }
      const auto beam = beam_search(inst.ds, inst.pm, cfg);
      EXPECT_EQ(beam, exhaustive) << "trial " << trial << " measure " << token(m);
      expect_sorted(beam, cfg.direction);
    }
  }
}

TEST(SearchPropertyTest, NarrowBeamNeverBeatsExhaustive) {
  std::mt19937_64 rng(78);
  for (int trial = 0; trial < 40; ++trial) {
    const auto inst = fixtures::random_instance(rng, 30, 4, 4, 3);
    SearchConfig cfg;
    cfg.measure = Measure::kCcl;
    cfg.beam_width = 2;
    cfg.depth = 3;
    cfg.min_support = 0.1;
    cfg.direction = trial % 2 ? Direction::kMaximize : Direction::kMinimize;
    const auto beam = beam_search(inst.ds, inst.pm, cfg);
    const auto full = exhaustive_search(inst.ds, inst.pm, cfg);
    ASSERT_FALSE(beam.entries.empty());
    if (cfg.direction == Direction::kMaximize) {
      EXPECT_LE(beam.entries.front().quality, full.entries.front().quality);
    } else {
      EXPECT_GE(beam.entries.front().quality, full.entries.front().quality);
    }
    for (const auto& e : beam.entries) EXPECT_GE(e.case_count, cfg.min_cases(inst.ds.cases()));
  }
}

TEST(SearchPropertyTest, MinimizingEqualsMaximizingNegated) {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = fixtures::random_instance(rng, 40, 4, 5, 2);
    const MeasureEvaluator ev(Measure::kRow, inst.pm);
    SearchConfig cfg;
    cfg.depth = 2;
    cfg.beam_width = 5;
    cfg.direction = Direction::kMinimize;
    const auto plain = [&](const RowSet& r) { return ev.score(r); };
    const auto negated = [&](const RowSet& r) -> std::optional<double> {
      const auto v = ev.score(r);
      if (!v) return std::nullopt;
      return -*v;
    };
    const auto minimized = beam_search_with(inst.ds, plain, cfg);
    cfg.direction = Direction::kMaximize;
    const auto maximized = beam_search_with(inst.ds, negated, cfg);
    ASSERT_EQ(minimized.entries.size(), maximized.entries.size());
    for (std::size_t k = 0; k < minimized.entries.size(); ++k) {
      EXPECT_EQ(minimized.entries[k].description, maximized.entries[k].description);
      EXPECT_EQ(minimized.entries[k].quality, -maximized.entries[k].quality);
    }
  }
}

TEST(SearchPropertyTest, ThreadCountDoesNotChangeResults) {
  std::mt19937_64 rng(80);
  const auto inst = fixtures::random_instance(rng, 3000, 4, 5, 3);
  SearchConfig cfg;
  cfg.measure = Measure::kCac;
  cfg.threads = 1;
  const auto serial = beam_search(inst.ds, inst.pm, cfg);
  cfg.threads = 4;
  EXPECT_EQ(beam_search(inst.ds, inst.pm, cfg), serial);
}

TEST(SearchPropertyTest, NoDuplicateDescriptionsAndSupportHolds) {
  std::mt19937_64 rng(81);
  const auto inst = fixtures::random_instance(rng, 200, 4, 5, 2);
  SearchConfig cfg;
  cfg.top_q = 50;
  const auto res = beam_search(inst.ds, inst.pm, cfg);
  std::set<std::string> keys;
  for (const auto& e : res.entries) {
    EXPECT_TRUE(keys.insert(e.key).second);
    EXPECT_GE(e.case_count, cfg.min_cases(200));
    EXPECT_FALSE(e.description.empty());
    EXPECT_EQ(evaluate(e.description, inst.ds).count(), e.case_count);
  }
}

}  // namespace
}  // namespace controversy
