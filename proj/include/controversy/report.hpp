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

// Run reports (console table, CSV, JSON) and the ordered prediction-matrix
// export.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "controversy/core_data.hpp"
#include "controversy/csv.hpp"
#include "controversy/description.hpp"
#include "controversy/measures.hpp"
#include "controversy/search.hpp"

namespace controversy {

// 64-bit FNV-1a, rendered as 16 hex digits.
inline std::string content_hash(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct InputFingerprint {
  std::string role;  // "data", "schema", "predictions"
  std::size_t rows = 0;
  std::size_t columns = 0;
  std::string hash;
};

struct RunReport {
  SearchConfig config;
  ResultList results;
  double seconds = 0.0;
  std::vector<InputFingerprint> inputs;
};

[[nodiscard]] inline std::string_view token(Direction d) noexcept {
  return d == Direction::kMaximize ? "max" : "min";
}
[[nodiscard]] inline std::string_view token(Binning b) noexcept {
  return b == Binning::kEqualWidth ? "equal-width" : "equal-frequency";
}

inline std::string caption(Measure m, double baseline) {
  return std::string(token(m)) + "(DS)=" + csv::format_fixed(baseline, 3);
}

// Console table: caption line, then "description | #cases | <measure>" rows
// with qualities rounded to 3 decimals.
inline std::string render_table(const ResultList& results, const Dataset& ds, RenderStyle style = RenderStyle::kUnicode) {
  std::ostringstream os;
  os << caption(results.measure, results.baseline) << '\n';
  os << "description | #cases | " << token(results.measure) << '\n';
  for (const auto& e : results.entries) {
    os << render(e.description, ds, style) << " | " << e.case_count << " | " << csv::format_fixed(e.quality, 3) << '\n';
  }
  return os.str();
}

inline std::string render_csv(const ResultList& results, const Dataset& ds, RenderStyle style = RenderStyle::kUnicode) {
  std::ostringstream os;
  csv::write_record(os, {"rank", "description", "cases", "quality", "baseline", "measure"});
  for (std::size_t r = 0; r < results.entries.size(); ++r) {
    const auto& e = results.entries[r];
    csv::write_record(os, {std::to_string(r + 1), render(e.description, ds, style), std::to_string(e.case_count),
                           csv::format_exact(e.quality), csv::format_exact(e.baseline),
                           std::string(token(results.measure))});
  }
  return os.str();
}

// JSON report. Wall-clock time is left out so identical runs produce
// identical bytes.
inline std::string render_json(const RunReport& report, const Dataset& ds, RenderStyle style = RenderStyle::kUnicode) {
  using nlohmann::ordered_json;
  const auto& cfg = report.config;
  ordered_json config{{"measure", token(cfg.measure)},
                      {"direction", token(cfg.direction)},
                      {"beam_width", cfg.beam_width},
                      {"depth", cfg.depth},
                      {"min_support", cfg.min_support},
                      {"min_cases", cfg.min_cases(ds.cases())},
                      {"top", cfg.top_q},
                      {"bins", cfg.bins},
                      {"binning", token(cfg.binning)}};
  ordered_json inputs = ordered_json::array();
  for (const auto& in : report.inputs) {
    inputs.push_back({{"role", in.role}, {"rows", in.rows}, {"columns", in.columns}, {"hash", in.hash}});
  }
  ordered_json rows = ordered_json::array();
  for (std::size_t r = 0; r < report.results.entries.size(); ++r) {
    const auto& e = report.results.entries[r];
    rows.push_back({{"rank", r + 1},
                    {"description", render(e.description, ds, style)},
                    {"cases", e.case_count},
                    {"quality", e.quality}});
  }
  ordered_json doc{{"config", config},
                   {"inputs", inputs},
                   {"baseline", report.results.baseline},
                   {"results", rows}};
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Ordered matrix export

// Row permutation sorting rows lexicographically by their class codes,
// left to right; equal rows keep their input order.
inline std::vector<std::size_t> lexicographic_row_order(const LabelMatrix& m) {
  std::vector<std::size_t> order(m.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ra = m.row(a);
    const auto rb = m.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  });
  return order;
}

// Header: sorted_pos,original_index,<classifiers...>[,truth],member. The
// member column is left blank when no subgroup was given.
inline void write_ordering_csv(std::ostream& os, const PredictionMatrix& pm, const Dataset& ds,
                               const std::vector<std::size_t>& order, const std::optional<RowSet>& members) {
  csv::Record header{"sorted_pos", "original_index"};
  for (const auto& name : pm.classifier_names()) header.push_back(name);
  if (ds.has_truth()) header.push_back("truth");
  header.push_back("member");
  csv::write_record(os, header);
  csv::Record rec;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const std::size_t i = order[pos];
    rec.assign({std::to_string(pos), std::to_string(i)});
    for (std::size_t j = 0; j < pm.cols(); ++j) rec.push_back(pm.labels().label(pm.entries().at(i, j)));
    if (ds.has_truth()) rec.push_back(ds.labels().label(ds.truth()[i]));
    rec.push_back(members ? (members->contains(i) ? "1" : "0") : "");
    csv::write_record(os, rec);
  }
}

namespace detail {

using Rgb = std::array<std::uint8_t, 3>;

inline Rgb class_color(ClassCode c) {
  static constexpr Rgb kPalette[] = {{31, 119, 180},  {255, 127, 14}, {44, 160, 44},   {214, 39, 40},
                                     {148, 103, 189}, {140, 86, 75},  {227, 119, 194}, {127, 127, 127},
                                     {188, 189, 34},  {23, 190, 207}};
  return kPalette[c % std::size(kPalette)];
}

}  // namespace detail

struct RasterLayout {
  std::size_t band = 0;       // highlight margin, present only with a subgroup
  std::size_t truth_gap = 0;  // separator + truth pixel
  std::size_t width = 0;
  std::size_t height = 0;
};

inline RasterLayout raster_layout(const PredictionMatrix& pm, const Dataset& ds, bool with_members) {
  RasterLayout l;
  l.band = with_members ? 2 : 0;
  l.truth_gap = ds.has_truth() ? 2 : 0;
  l.width = l.band + pm.cols() + l.truth_gap;
  l.height = pm.rows();
  return l;
}

// Binary PPM (P6), one row per case in `order` and one pixel per prediction.
// Layout left to right: optional 2-pixel highlight band (black for members,
// white otherwise), the n prediction pixels, and when truth is known a white
// separator followed by the truth pixel.
inline void write_ppm(std::ostream& os, const PredictionMatrix& pm, const Dataset& ds,
                      const std::vector<std::size_t>& order, const std::optional<RowSet>& members) {
  const auto layout = raster_layout(pm, ds, members.has_value());
  os << "P6\n" << layout.width << ' ' << layout.height << "\n255\n";
  const detail::Rgb white{255, 255, 255};
  const detail::Rgb black{0, 0, 0};
  std::vector<char> line(layout.width * 3);
  for (const std::size_t i : order) {
    std::size_t x = 0;
    auto put = [&](const detail::Rgb& c) {
      std::copy(c.begin(), c.end(), line.begin() + static_cast<std::ptrdiff_t>(3 * x++));
    };
    for (std::size_t b = 0; b < layout.band; ++b) put(members->contains(i) ? black : white);
    for (std::size_t j = 0; j < pm.cols(); ++j) put(detail::class_color(pm.entries().at(i, j)));
    if (layout.truth_gap) {
      put(white);
      put(detail::class_color(ds.truth()[i]));
    }
    os.write(line.data(), static_cast<std::streamsize>(line.size()));
  }
}

}  // namespace controversy
