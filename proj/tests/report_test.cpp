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

#include <algorithm>
#include <random>
#include <sstream>

#include "controversy/report.hpp"
#include "fixtures.hpp"

namespace controversy {
namespace {

struct Toy {
  Dataset ds = fixtures::indicator_dataset(8);
  PredictionMatrix pm = fixtures::make_pm(fixtures::kToyB);
};

ResultList toy_results(const Toy& toy) {
  SearchConfig cfg;
  cfg.measure = Measure::kCcl;
  cfg.min_support = 0.375;
  cfg.depth = 5;
  cfg.bins = 2;
  cfg.top_q = 3;
  return beam_search(toy.ds, toy.pm, cfg);
}

TEST(ReportTest, TableHasCaptionAndRoundedQualities) {
  const Toy toy;
  const auto table = render_table(toy_results(toy), toy.ds);
  std::istringstream in(table);
  std::string caption_line, header, first;
  std::getline(in, caption_line);
  std::getline(in, header);
  std::getline(in, first);
  EXPECT_EQ(caption_line, "ccl(DS)=-0.196");
  EXPECT_EQ(header, "description | #cases | ccl");
  EXPECT_TRUE(first.ends_with(" | 3 | 0.811")) << first;
}

TEST(ReportTest, CsvKeepsFullPrecision) {
  const Toy toy;
  const auto text = render_csv(toy_results(toy), toy.ds, RenderStyle::kAscii);
  const auto recs = csv::parse_records(text);
  ASSERT_GE(recs.size(), 2u);
  EXPECT_EQ(recs[0], (csv::Record{"rank", "description", "cases", "quality", "baseline", "measure"}));
  EXPECT_EQ(recs[1][0], "1");
  EXPECT_EQ(recs[1][2], "3");
  EXPECT_EQ(csv::parse_real(recs[1][3]).value(), toy_results(toy).entries[0].quality);
  EXPECT_EQ(recs[1][5], "ccl");
  EXPECT_NE(recs[1][1].find(" AND "), std::string::npos);
}

TEST(ReportTest, JsonIsStableAcrossRuns) {
  const Toy toy;
  RunReport a{SearchConfig{}, toy_results(toy), 0.5, {{"data", 8, 8, content_hash("x")}}};
  RunReport b = a;
  b.seconds = 9.0;
  b.results = toy_results(toy);
  EXPECT_EQ(render_json(a, toy.ds), render_json(b, toy.ds));
  const auto doc = nlohmann::json::parse(render_json(a, toy.ds));
  EXPECT_EQ(doc["results"].size(), 3u);
  EXPECT_EQ(doc["results"][0]["cases"], 3);
  EXPECT_EQ(doc["inputs"][0]["hash"], content_hash("x"));
}

TEST(ReportTest, ContentHashIsFnv1a) {
  EXPECT_EQ(content_hash(""), "cbf29ce484222325");
  EXPECT_EQ(content_hash("a"), "af63dc4c8601ec8c");
  EXPECT_NE(content_hash("ab"), content_hash("ba"));
}

TEST(MatrixExportTest, ToyARowsSortLexicographically) {
  const auto pm = fixtures::make_pm(fixtures::kToyA);
  const auto order = lexicographic_row_order(pm.entries());
  // All-zero rows 6 and 7 come first, then (0,0,0,1), (0,1,0,1), (0,1,1,0), ...
  EXPECT_EQ(order, (std::vector<std::size_t>{5, 6, 7, 1, 4, 2, 0, 3}));
}

TEST(MatrixExportTest, OrderIsAPermutation) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pm = fixtures::make_pm(fixtures::random_rows(rng, 50, 4, 3), 3);
    auto order = lexicographic_row_order(pm.entries());
    for (std::size_t k = 1; k < order.size(); ++k) {
      const auto a = pm.entries().row(order[k - 1]);
      const auto b = pm.entries().row(order[k]);
      EXPECT_FALSE(std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end()));
    }
    std::sort(order.begin(), order.end());
    for (std::size_t k = 0; k < order.size(); ++k) EXPECT_EQ(order[k], k);
  }
}

TEST(MatrixExportTest, OrderingCsvAndImage) {
  const auto ds = fixtures::indicator_dataset(8, std::vector<int>{1, 0, 1, 1, 0, 0, 0, 0});
  const auto pm = fixtures::make_pm(fixtures::kToyA);
  const auto order = lexicographic_row_order(pm.entries());
  const std::optional<RowSet> members = fixtures::rows_1based(8, {2, 5});

  std::ostringstream csv_out;
  write_ordering_csv(csv_out, pm, ds, order, members);
  const auto recs = csv::parse_records(csv_out.str());
  ASSERT_EQ(recs.size(), 9u);
  EXPECT_EQ(recs[0], (csv::Record{"sorted_pos", "original_index", "C1", "C2", "C3", "C4", "truth", "member"}));
  EXPECT_EQ(recs[1], (csv::Record{"0", "5", "0", "0", "0", "0", "0", "0"}));
  EXPECT_EQ(recs[4], (csv::Record{"3", "1", "0", "1", "0", "1", "0", "1"}));

  std::ostringstream img;
  write_ppm(img, pm, ds, order, members);
  const auto bytes = img.str();
  const std::string header = "P6\n8 8\n255\n";  // 2 band + 4 predictions + gap + truth
  ASSERT_TRUE(bytes.starts_with(header));
  EXPECT_EQ(bytes.size(), header.size() + 8 * 8 * 3);
  // Row at sorted position 3 is original row 2 (a member): band pixel is black.
  const auto px = [&](std::size_t y, std::size_t x) { return static_cast<unsigned char>(bytes[header.size() + (y * 8 + x) * 3]); };
  EXPECT_EQ(px(3, 0), 0);
  EXPECT_EQ(px(0, 0), 255);
}

TEST(MatrixExportTest, NoDescriptionMeansNoBand) {
  const auto ds = fixtures::indicator_dataset(8);
  const auto pm = fixtures::make_pm(fixtures::kToyA);
  const auto order = lexicographic_row_order(pm.entries());
  std::ostringstream img;
  write_ppm(img, pm, ds, order, std::nullopt);
  EXPECT_TRUE(img.str().starts_with("P6\n4 8\n255\n"));
  std::ostringstream csv_out;
  write_ordering_csv(csv_out, pm, ds, order, std::nullopt);
  const auto recs = csv::parse_records(csv_out.str());
  EXPECT_EQ(recs[0].back(), "member");
  EXPECT_EQ(recs[1].back(), "");
}

}  // namespace
}  // namespace controversy
