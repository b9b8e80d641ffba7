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

// Conjunctive description language: atomic conditions over one attribute,
// canonical conjunctions of them, evaluation to row sets and the refinement
// operator used by the search.

#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "controversy/core_data.hpp"
#include "controversy/csv.hpp"
#include "controversy/error.hpp"
#include "controversy/row_set.hpp"

namespace controversy {

// Declaration order is the canonical order of operators.
enum class ConditionOp { kEquals, kNotEquals, kLeq, kGt };

struct Condition {
  std::size_t column = 0;
  ConditionOp op = ConditionOp::kEquals;
  ClassCode code = 0;      // nominal operand
  double threshold = 0.0;  // numeric operand

  static Condition equals(std::size_t column, ClassCode code) { return {column, ConditionOp::kEquals, code, 0.0}; }
  static Condition not_equals(std::size_t column, ClassCode code) {
    return {column, ConditionOp::kNotEquals, code, 0.0};
  }
  static Condition leq(std::size_t column, double t) { return {column, ConditionOp::kLeq, 0, t}; }
  static Condition gt(std::size_t column, double t) { return {column, ConditionOp::kGt, 0, t}; }

  [[nodiscard]] bool nominal() const noexcept {
    return op == ConditionOp::kEquals || op == ConditionOp::kNotEquals;
  }

  [[nodiscard]] bool matches(const AttributeColumn& col, std::size_t i) const {
    switch (op) {
      case ConditionOp::kEquals: return col.codes[i] == code;
      case ConditionOp::kNotEquals: return col.codes[i] != code;
      case ConditionOp::kLeq: return col.values[i] <= threshold;
      case ConditionOp::kGt: return col.values[i] > threshold;
    }
    return false;
  }

  friend std::weak_ordering operator<=>(const Condition& a, const Condition& b) {
    if (auto c = a.column <=> b.column; c != 0) return c;
    if (auto c = a.op <=> b.op; c != 0) return c;
    if (a.nominal()) return a.code <=> b.code;
    if (a.threshold < b.threshold) return std::weak_ordering::less;
    if (b.threshold < a.threshold) return std::weak_ordering::greater;
    return std::weak_ordering::equivalent;
  }
  friend bool operator==(const Condition& a, const Condition& b) {
    return (a <=> b) == std::weak_ordering::equivalent;
  }
};

inline void validate(const Condition& cond, const Dataset& ds) {
  if (cond.column >= ds.num_columns()) throw Error(ErrorKind::kConfig, "condition references unknown column");
  const auto& col = ds.column(cond.column);
  if (cond.nominal() != col.nominal()) {
    throw Error(ErrorKind::kConfig, "operator does not match the kind of column '" + col.name + "'");
  }
  if (cond.nominal() && cond.code >= col.dictionary.size()) {
    throw Error(ErrorKind::kConfig, "value code outside the dictionary of column '" + col.name + "'");
  }
}

inline RowSet evaluate(const Condition& cond, const Dataset& ds) {
  const auto& col = ds.column(cond.column);
  return RowSet::where(ds.cases(), [&](std::size_t i) { return cond.matches(col, i); });
}

enum class RenderStyle {
  kUnicode,  // "Age ≤ 11 ∧ Sex = male"
  kAscii     // "Age <= 11 AND Sex = male"
};

// A conjunction of conditions held in canonical form: sorted, no duplicates.
// The empty conjunction denotes the whole dataset.
class Description {
 public:
  Description() = default;
  explicit Description(std::vector<Condition> conditions) : conditions_(std::move(conditions)) {
    std::sort(conditions_.begin(), conditions_.end());
    conditions_.erase(std::unique(conditions_.begin(), conditions_.end()), conditions_.end());
  }

  [[nodiscard]] const std::vector<Condition>& conditions() const noexcept { return conditions_; }
  [[nodiscard]] std::size_t size() const noexcept { return conditions_.size(); }
  [[nodiscard]] bool empty() const noexcept { return conditions_.empty(); }
  [[nodiscard]] bool contains(const Condition& c) const {
    return std::binary_search(conditions_.begin(), conditions_.end(), c);
  }

  [[nodiscard]] Description with(const Condition& c) const {
    auto conds = conditions_;
    conds.push_back(c);
    return Description(std::move(conds));
  }

  friend bool operator==(const Description& a, const Description& b) { return a.conditions_ == b.conditions_; }
  friend auto operator<=>(const Description& a, const Description& b) {
    return std::lexicographical_compare_three_way(a.conditions_.begin(), a.conditions_.end(),
                                                  b.conditions_.begin(), b.conditions_.end());
  }

 private:
  std::vector<Condition> conditions_;
};

inline Description canonicalize(std::vector<Condition> conditions) { return Description(std::move(conditions)); }
inline Description canonicalize(const Description& desc) { return desc; }

inline std::string render(const Condition& cond, const Dataset& ds, RenderStyle style = RenderStyle::kUnicode) {
  const auto& col = ds.column(cond.column);
  const bool ascii = style == RenderStyle::kAscii;
  std::string out = col.name;
  switch (cond.op) {
    case ConditionOp::kEquals: out += " = "; break;
    case ConditionOp::kNotEquals: out += ascii ? " != " : " ≠ "; break;
    case ConditionOp::kLeq: out += ascii ? " <= " : " ≤ "; break;
    case ConditionOp::kGt: out += " > "; break;
  }
  out += cond.nominal() ? col.dictionary.label(cond.code) : csv::format_exact(cond.threshold);
  return out;
}

inline std::string render(const Description& desc, const Dataset& ds, RenderStyle style = RenderStyle::kUnicode) {
  const std::string_view joiner = style == RenderStyle::kAscii ? " AND " : " ∧ ";
  std::string out;
  for (std::size_t k = 0; k < desc.size(); ++k) {
    if (k) out += joiner;
    out += render(desc.conditions()[k], ds, style);
  }
  return out;
}

inline RowSet evaluate(const Description& desc, const Dataset& ds) {
  RowSet rows = RowSet::all(ds.cases());
  for (const auto& cond : desc.conditions()) rows = rows.intersect(evaluate(cond, ds));
  return rows;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_conjunction(std::string_view text) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto a = text.find(" AND ");
    const auto u = text.find("∧");
    const auto pos = std::min(a, u);
    if (pos == std::string_view::npos) break;
    parts.push_back(text.substr(0, pos));
    text.remove_prefix(pos + (pos == a ? 5 : std::string_view("∧").size()));
  }
  parts.push_back(text);
  return parts;
}

}  // namespace detail

// Inverse of render(): accepts both styles.
inline Description parse_description(std::string_view text, const Dataset& ds) {
  text = detail::trim(text);
  if (text.empty()) return {};

  struct OpToken {
    std::string_view token;
    ConditionOp op;
  };
  static constexpr OpToken kTokens[] = {
      {" != ", ConditionOp::kNotEquals}, {" ≠ ", ConditionOp::kNotEquals},
      {" <= ", ConditionOp::kLeq},       {" ≤ ", ConditionOp::kLeq},
      {" > ", ConditionOp::kGt},         {" = ", ConditionOp::kEquals},
  };

  std::vector<Condition> conds;
  for (auto term : detail::split_conjunction(text)) {
    term = detail::trim(term);
    const std::string padded = " " + std::string(term) + " ";
    std::size_t best = std::string::npos;
    const OpToken* found = nullptr;
    for (const auto& tok : kTokens) {
      const auto pos = padded.find(tok.token, 1);
      if (pos != std::string::npos && (pos < best || (pos == best && tok.token.size() > found->token.size()))) {
        best = pos;
        found = &tok;
      }
    }
    if (!found) throw Error(ErrorKind::kConfig, "cannot parse condition '" + std::string(term) + "'");
    const auto name = detail::trim(std::string_view(padded).substr(0, best));
    const auto value = detail::trim(std::string_view(padded).substr(best + found->token.size()));
    const auto col_idx = ds.column_index(name);
    if (!col_idx) throw Error(ErrorKind::kConfig, "description references unknown column '" + std::string(name) + "'");
    const auto& col = ds.column(*col_idx);
    Condition cond{*col_idx, found->op, 0, 0.0};
    if (cond.nominal()) {
      if (!col.nominal()) {
        throw Error(ErrorKind::kConfig, "column '" + col.name + "' is numeric; use <= or >");
      }
      const auto code = col.dictionary.find(std::string(value));
      if (!code) {
        throw Error(ErrorKind::kConfig, "value '" + std::string(value) + "' never occurs in column '" + col.name + "'");
      }
      cond.code = *code;
    } else {
      if (col.nominal()) throw Error(ErrorKind::kConfig, "column '" + col.name + "' is nominal; use = or !=");
      const auto t = csv::parse_real(value);
      if (!t) throw Error(ErrorKind::kConfig, "cannot parse threshold '" + std::string(value) + "'");
      cond.threshold = *t;
    }
    conds.push_back(cond);
  }
  return Description(std::move(conds));
}

// ---------------------------------------------------------------------------
// Refinement

enum class Binning { kEqualWidth, kEqualFrequency };

// Split points for a numeric column, computed once over the full column.
// Equal width: min + i (max - min) / bins for i = 1 .. bins-1.
// Equal frequency: the i/bins lower empirical quantiles, skipping points that
// would leave the "> t" side empty.
inline std::vector<double> split_points(std::span<const double> values, std::size_t bins, Binning strategy) {
  if (bins < 2) throw Error(ErrorKind::kConfig, "bin count must be at least 2");
  if (values.empty()) return {};
  std::vector<double> points;
  if (strategy == Binning::kEqualWidth) {
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it;
    const double width = *hi_it - lo;
    for (std::size_t i = 1; i < bins; ++i) {
      points.push_back(lo + static_cast<double>(i) * width / static_cast<double>(bins));
    }
  } else {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    for (std::size_t i = 1; i < bins; ++i) {
      const std::size_t rank = (i * m + bins - 1) / bins;  // ceil(i m / bins)
      const double p = sorted[std::max<std::size_t>(rank, 1) - 1];
      if (p < sorted.back()) points.push_back(p);
    }
  }
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

// Every atomic condition the search may add: = and != per observed nominal
// value, <= and > per numeric split point. Sorted canonically.
class RefinementSpace {
 public:
  RefinementSpace(const Dataset& ds, std::size_t bins = 7, Binning strategy = Binning::kEqualWidth) {
    if (bins < 2) throw Error(ErrorKind::kConfig, "bin count must be at least 2");
    for (std::size_t j = 0; j < ds.num_columns(); ++j) {
      const auto& col = ds.column(j);
      if (col.nominal()) {
        for (ClassCode c = 0; c < col.dictionary.size(); ++c) {
          pool_.push_back(Condition::equals(j, c));
          pool_.push_back(Condition::not_equals(j, c));
        }
      } else {
        for (const double t : split_points(col.values, bins, strategy)) {
          pool_.push_back(Condition::leq(j, t));
          pool_.push_back(Condition::gt(j, t));
        }
      }
    }
    std::sort(pool_.begin(), pool_.end());
    pool_.erase(std::unique(pool_.begin(), pool_.end()), pool_.end());
  }

  [[nodiscard]] const std::vector<Condition>& conditions() const noexcept { return pool_; }

 private:
  std::vector<Condition> pool_;
};

// All one-condition specializations of desc, skipping conditions it already has.
inline std::vector<Description> refine(const Description& desc, const RefinementSpace& space) {
  std::vector<Description> out;
  out.reserve(space.conditions().size());
  for (const auto& cond : space.conditions()) {
    if (!desc.contains(cond)) out.push_back(desc.with(cond));
  }
  return out;
}

inline std::vector<Description> refine(const Description& desc, const Dataset& ds, std::size_t bins = 7,
                                       Binning strategy = Binning::kEqualWidth) {
  return refine(desc, RefinementSpace(ds, bins, strategy));
}

}  // namespace controversy
