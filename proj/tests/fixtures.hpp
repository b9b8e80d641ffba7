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

// Shared fixtures and independent reference computations for the tests.
// The oracle:: functions work from plain label vectors and std::map tallies
// and never call into the library's measure code.

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "controversy/controversy.hpp"

namespace fixtures {

using Rows = std::vector<std::vector<int>>;

// Toy prediction matrices, rows 1..8 stored at indices 0..7.
inline const Rows kToyA = {{1, 1, 0, 1}, {0, 1, 0, 1}, {1, 0, 1, 1}, {1, 1, 1, 0},
                           {0, 1, 1, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 1}};
inline const Rows kToyB = {{1, 1, 0, 1}, {0, 1, 0, 1}, {1, 1, 0, 1}, {1, 1, 0, 1},
                           {0, 1, 1, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 1}};

// Prediction matrix whose class k has label text std::to_string(k).
inline controversy::PredictionMatrix make_pm(const Rows& rows, std::size_t num_classes = 2) {
  std::vector<controversy::ClassCode> entries;
  for (const auto& r : rows) {
    for (const int v : r) entries.push_back(static_cast<controversy::ClassCode>(v));
  }
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < num_classes; ++k) labels.push_back(std::to_string(k));
  std::vector<std::string> names;
  for (std::size_t j = 0; j < rows.front().size(); ++j) names.push_back("C" + std::to_string(j + 1));
  return controversy::PredictionMatrix(
      controversy::LabelMatrix(rows.size(), rows.front().size(), num_classes, std::move(entries)), std::move(names),
      controversy::LabelDictionary(std::move(labels)));
}

// One numeric 0/1 column per row: column r<i> is 1 exactly on row i (1-based).
inline controversy::Dataset indicator_dataset(std::size_t m, std::optional<std::vector<int>> truth = std::nullopt,
                                              std::size_t num_classes = 2) {
  std::vector<controversy::AttributeColumn> cols;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> v(m, 0.0);
    v[i] = 1.0;
    cols.push_back(controversy::AttributeColumn::make_numeric("r" + std::to_string(i + 1), std::move(v)));
  }
  if (!truth) return controversy::Dataset(m, std::move(cols));
  std::vector<controversy::ClassCode> codes(truth->begin(), truth->end());
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < num_classes; ++k) labels.push_back(std::to_string(k));
  return controversy::Dataset(m, std::move(cols), std::move(codes), controversy::LabelDictionary(std::move(labels)));
}

inline controversy::RowSet rows_1based(std::size_t m, std::initializer_list<int> ids) {
  auto s = controversy::RowSet::none(m);
  for (const int i : ids) s.insert(static_cast<std::size_t>(i - 1));
  return s;
}

namespace oracle {

inline double entropy(const std::vector<int>& labels) {
  std::map<int, int> tally;
  for (const int l : labels) ++tally[l];
  double h = 0.0;
  for (const auto& [label, count] : tally) {
    const double p = static_cast<double>(count) / static_cast<double>(labels.size());
    h -= p * std::log(p) / std::log(2.0);
  }
  return h;
}

inline double mean_row_entropy(const Rows& m, const std::vector<std::size_t>& sg) {
  double s = 0.0;
  for (const auto i : sg) s += entropy(m[i]);
  return s / static_cast<double>(sg.size());
}

inline double mean_col_entropy(const Rows& m, const std::vector<std::size_t>& sg) {
  double s = 0.0;
  for (std::size_t j = 0; j < m.front().size(); ++j) {
    std::vector<int> col;
    for (const auto i : sg) col.push_back(m[i][j]);
    s += entropy(col);
  }
  return s / static_cast<double>(m.front().size());
}

inline double phi_ccl(const Rows& m, const std::vector<std::size_t>& sg) {
  return mean_row_entropy(m, sg) - mean_col_entropy(m, sg);
}

// O(P N) pair count with half credit for ties.
inline double phi_rasl(const std::vector<double>& prob, const std::vector<int>& truth, int positive,
                       const std::vector<std::size_t>& sg) {
  double loss = 0.0;
  int positives = 0;
  for (const auto p : sg) {
    if (truth[p] != positive) continue;
    ++positives;
    for (const auto q : sg) {
      if (truth[q] == positive) continue;
      if (prob[q] > prob[p]) loss += 1.0;
      else if (prob[q] == prob[p]) loss += 0.5;
    }
  }
  return loss / positives;
}

inline Rows accordance(const Rows& m) {
  Rows out = m;
  for (std::size_t i = 0; i < m.size(); ++i) {
    std::map<int, int> tally;
    for (const int v : m[i]) ++tally[v];
    int top = tally.begin()->first;
    for (const auto& [label, count] : tally) {
      if (count > tally[top]) top = label;
    }
    for (std::size_t j = 0; j < m[i].size(); ++j) out[i][j] = m[i][j] == top;
  }
  return out;
}

}  // namespace oracle

inline Rows random_rows(std::mt19937_64& rng, std::size_t m, std::size_t n, std::size_t k) {
  std::uniform_int_distribution<int> cls(0, static_cast<int>(k) - 1);
  Rows rows(m, std::vector<int>(n));
  for (auto& r : rows) {
    for (auto& v : r) v = cls(rng);
  }
  return rows;
}

// Random instance for search tests: up to 4 binary nominal descriptors, a
// truth column and a prediction matrix correlated with the descriptors.
struct Instance {
  controversy::Dataset ds;
  controversy::PredictionMatrix pm;
};

inline Instance random_instance(std::mt19937_64& rng, std::size_t m, std::size_t descriptors, std::size_t n,
                                std::size_t k) {
  std::uniform_int_distribution<int> bit(0, 1);
  std::uniform_int_distribution<int> cls(0, static_cast<int>(k) - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::vector<std::string>> cells(descriptors, std::vector<std::string>(m));
  for (auto& col : cells) {
    for (auto& c : col) c = bit(rng) ? "a" : "b";
  }
  std::vector<controversy::AttributeColumn> cols;
  for (std::size_t d = 0; d < descriptors; ++d) {
    cols.push_back(controversy::AttributeColumn::make_nominal("d" + std::to_string(d), cells[d]));
  }
  // Guarantee both classes appear in the truth.
  std::vector<int> truth(m);
  for (auto& t : truth) t = cls(rng);
  truth[0] = 0;
  truth[1] = 1;
  Rows preds(m, std::vector<int>(n));
  for (std::size_t i = 0; i < m; ++i) {
    const double noise = (descriptors && cells[0][i] == "a") ? 0.6 : 0.15;
    for (auto& v : preds[i]) v = unit(rng) < noise ? cls(rng) : truth[i];
  }
  std::vector<controversy::ClassCode> codes(truth.begin(), truth.end());
  std::vector<std::string> labels;
  for (std::size_t c = 0; c < k; ++c) labels.push_back(std::to_string(c));
  controversy::Dataset ds(m, std::move(cols), std::move(codes), controversy::LabelDictionary(labels));
  return {std::move(ds), make_pm(preds, k)};
}

}  // namespace fixtures
