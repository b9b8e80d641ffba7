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

// Level-wise beam search over conjunctive descriptions, and an exhaustive
// enumerator with the same result contract used as a test oracle.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "controversy/core_data.hpp"
#include "controversy/csv.hpp"
#include "controversy/description.hpp"
#include "controversy/error.hpp"
#include "controversy/measures.hpp"
#include "controversy/row_set.hpp"

namespace controversy {

enum class Direction { kMaximize, kMinimize };

struct SearchConfig {
  std::size_t beam_width = 25;
  std::size_t depth = 3;
  double min_support = 0.04;  // fraction of the cases, rounded up
  std::size_t top_q = 10;
  Direction direction = Direction::kMaximize;
  std::size_t bins = 7;
  Binning binning = Binning::kEqualWidth;
  Measure measure = Measure::kRow;
  std::optional<ClassCode> positive;  // rasl only; defaults to default_positive()
  std::size_t threads = 1;            // 0 picks the hardware concurrency
  std::size_t oracle_budget = 2'000'000;

  void validate() const {
    if (!(min_support > 0.0 && min_support < 1.0)) throw Error(ErrorKind::kConfig, "min support must lie in (0, 1)");
    if (beam_width < 1) throw Error(ErrorKind::kConfig, "beam width must be at least 1");
    if (depth < 1) throw Error(ErrorKind::kConfig, "depth must be at least 1");
    if (top_q < 1) throw Error(ErrorKind::kConfig, "result count must be at least 1");
    if (bins < 2) throw Error(ErrorKind::kConfig, "bin count must be at least 2");
  }

  // Smallest admissible subgroup size. The epsilon keeps 0.04 * 625 at 25.
  [[nodiscard]] std::size_t min_cases(std::size_t cases) const {
    const double raw = std::ceil(min_support * static_cast<double>(cases) - 1e-9);
    return std::max<std::size_t>(1, static_cast<std::size_t>(raw));
  }
};

struct ResultEntry {
  Description description;
  std::string key;  // ASCII rendering; final tie-breaker
  std::size_t case_count = 0;
  double quality = 0.0;
  double baseline = 0.0;

  friend bool operator==(const ResultEntry& a, const ResultEntry& b) {
    return a.description == b.description && a.case_count == b.case_count && a.quality == b.quality &&
           a.baseline == b.baseline;
  }
};

struct ResultList {
  Measure measure = Measure::kRow;
  Direction direction = Direction::kMaximize;
  double baseline = 0.0;
  std::vector<ResultEntry> entries;

  friend bool operator==(const ResultList&, const ResultList&) = default;
};

namespace detail {

struct Candidate {
  std::vector<std::uint32_t> conds;  // sorted indices into the refinement pool
  std::size_t parent = 0;
  std::uint32_t added = 0;
  std::size_t case_count = 0;
  double quality = 0.0;
  bool valid = false;
  std::string key;
};

// Strict weak order: better quality first, then fewer conditions, then text.
inline bool ranks_before(const Candidate& a, const Candidate& b, Direction dir) {
  if (a.quality != b.quality) return dir == Direction::kMaximize ? a.quality > b.quality : a.quality < b.quality;
  if (a.conds.size() != b.conds.size()) return a.conds.size() < b.conds.size();
  if (a.key != b.key) return a.key < b.key;
  return a.conds < b.conds;
}

template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(1, count / 64));
  if (threads <= 1) {
    fn(std::size_t{0}, count);
    return;
  }
  std::vector<std::thread> workers;
  const std::size_t chunk = (count + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    workers.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
  for (auto& w : workers) w.join();
}

inline MeasureEvaluator make_evaluator(const Dataset& ds, const PredictionMatrix& pm, const SearchConfig& cfg) {
  if (pm.rows() != ds.cases()) throw Error(ErrorKind::kDimension, "prediction matrix and dataset differ in rows");
  cfg.validate();
  try {
    const auto truth = ds.has_truth() ? ds.truth() : std::span<const ClassCode>{};
    return MeasureEvaluator(cfg.measure, pm, truth, cfg.positive);
  } catch (const Error& e) {
    throw Error(ErrorKind::kConfig, e.what());
  }
}

// Scorer: callable RowSet -> std::optional<double>, nullopt where undefined.
template <typename Scorer>
class SearchContext {
 public:
  SearchContext(const Dataset& ds, const Scorer& scorer, const SearchConfig& cfg, double baseline)
      : ds_(ds), cfg_(checked(cfg)), space_(ds, cfg_.bins, cfg_.binning), scorer_(scorer), baseline_(baseline) {
    pool_rows_.reserve(space_.conditions().size());
    for (const auto& cond : space_.conditions()) pool_rows_.push_back(evaluate(cond, ds));
    min_cases_ = cfg_.min_cases(ds.cases());
  }

  [[nodiscard]] const std::vector<Condition>& pool() const { return space_.conditions(); }
  [[nodiscard]] const RowSet& pool_rows(std::size_t c) const { return pool_rows_[c]; }
  [[nodiscard]] std::size_t min_cases() const { return min_cases_; }
  [[nodiscard]] const SearchConfig& config() const { return cfg_; }

  // Scores rows for a candidate; leaves it invalid when below support or undefined.
  void score(Candidate& cand, const RowSet& rows) const {
    cand.case_count = rows.count();
    if (cand.case_count < min_cases_) return;
    const std::optional<double> q = scorer_(rows);
    if (!q || !std::isfinite(*q)) return;
    cand.quality = *q;
    cand.valid = true;
  }

  [[nodiscard]] Description description_of(const std::vector<std::uint32_t>& conds) const {
    std::vector<Condition> out;
    out.reserve(conds.size());
    for (const auto c : conds) out.push_back(pool()[c]);
    return Description(std::move(out));
  }

  void attach_key(Candidate& cand) const { cand.key = render(description_of(cand.conds), ds_, RenderStyle::kAscii); }

  // Sorts candidates and keeps the first `limit`.
  void keep_best(std::vector<Candidate>& cands, std::size_t limit) const {
    const auto dir = cfg_.direction;
    const auto cmp = [dir](const Candidate& a, const Candidate& b) { return ranks_before(a, b, dir); };
    if (cands.size() > limit) {
      std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(limit), cands.end(), cmp);
      cands.resize(limit);
    } else {
      std::sort(cands.begin(), cands.end(), cmp);
    }
  }

  // Folds a scored batch into the running top-q list.
  void merge_results(std::vector<Candidate>& results, std::vector<Candidate>& batch) const {
    std::erase_if(batch, [](const Candidate& c) { return !c.valid; });
    for (auto& c : batch) {
      attach_key(c);
      results.push_back(c);
    }
    keep_best(results, cfg_.top_q);
  }

  [[nodiscard]] ResultList to_results(const std::vector<Candidate>& best) const {
    ResultList out{cfg_.measure, cfg_.direction, baseline_, {}};
    for (const auto& c : best) {
      out.entries.push_back({description_of(c.conds), c.key, c.case_count, c.quality, baseline_});
    }
    return out;
  }

 private:
  static SearchConfig checked(const SearchConfig& cfg) {
    cfg.validate();
    return cfg;
  }

  const Dataset& ds_;
  SearchConfig cfg_;
  RefinementSpace space_;
  const Scorer& scorer_;
  double baseline_;
  std::vector<RowSet> pool_rows_;
  std::size_t min_cases_ = 1;
};

}  // namespace detail

// Beam search: level 0 holds the empty description; each level refines every
// beam member by one condition, scores the new descriptions that meet the
// support threshold, and keeps the best `beam_width` as the next beam. The
// output is the best `top_q` descriptions seen at any level and does not
// depend on the thread count. `baseline` is only copied into the results.
template <typename Scorer>
ResultList beam_search_with(const Dataset& ds, const Scorer& scorer, const SearchConfig& cfg, double baseline = 0.0) {
  using detail::Candidate;
  const detail::SearchContext<Scorer> ctx(ds, scorer, cfg, baseline);
  const auto pool_size = static_cast<std::uint32_t>(ctx.pool().size());

  struct BeamMember {
    std::vector<std::uint32_t> conds;
    RowSet rows;
  };
  std::vector<BeamMember> beam{{{}, RowSet::all(ds.cases())}};
  std::set<std::vector<std::uint32_t>> seen;
  std::vector<Candidate> results;

  for (std::size_t level = 1; level <= cfg.depth && !beam.empty(); ++level) {
    std::vector<Candidate> cands;
    for (std::size_t b = 0; b < beam.size(); ++b) {
      const auto& parent = beam[b].conds;
      for (std::uint32_t c = 0; c < pool_size; ++c) {
        if (std::binary_search(parent.begin(), parent.end(), c)) continue;
        Candidate cand;
        cand.conds = parent;
        cand.conds.insert(std::upper_bound(cand.conds.begin(), cand.conds.end(), c), c);
        if (!seen.insert(cand.conds).second) continue;
        cand.parent = b;
        cand.added = c;
        cands.push_back(std::move(cand));
      }
    }

    detail::parallel_for(cands.size(), cfg.threads, [&](std::size_t lo, std::size_t hi) {
      RowSet scratch;
      for (std::size_t k = lo; k < hi; ++k) {
        beam[cands[k].parent].rows.intersect_into(ctx.pool_rows(cands[k].added), scratch);
        ctx.score(cands[k], scratch);
      }
    });

    ctx.merge_results(results, cands);
    ctx.keep_best(cands, cfg.beam_width);

    std::vector<BeamMember> next;
    next.reserve(cands.size());
    for (auto& c : cands) {
      next.push_back({c.conds, beam[c.parent].rows.intersect(ctx.pool_rows(c.added))});
    }
    beam = std::move(next);
  }
  return ctx.to_results(results);
}

// Scores every canonical description of 1..depth conditions drawn from the
// refinement pool. Throws kOracleTooLarge when that exceeds cfg.oracle_budget.
template <typename Scorer>
ResultList exhaustive_search_with(const Dataset& ds, const Scorer& scorer, const SearchConfig& cfg,
                                  double baseline = 0.0) {
  using detail::Candidate;
  const detail::SearchContext<Scorer> ctx(ds, scorer, cfg, baseline);
  const std::size_t pool_size = ctx.pool().size();

  // Σ_{k=1..d} C(P, k), in floating point so it saturates instead of wrapping.
  double total = 0.0;
  double binom = 1.0;
  for (std::size_t k = 1; k <= cfg.depth && k <= pool_size; ++k) {
    binom = binom * static_cast<double>(pool_size - k + 1) / static_cast<double>(k);
    total += binom;
  }
  if (total > static_cast<double>(cfg.oracle_budget)) {
    throw Error(ErrorKind::kOracleTooLarge, "exhaustive search would score " + csv::format_fixed(total, 0) +
                                                " descriptions, budget is " + std::to_string(cfg.oracle_budget));
  }

  std::vector<Candidate> results;
  std::vector<Candidate> batch;
  std::vector<std::uint32_t> stack;
  std::vector<RowSet> rows_at(cfg.depth + 1);
  rows_at[0] = RowSet::all(ds.cases());

  // Depth-first over strictly increasing index tuples.
  auto visit = [&](auto&& self, std::uint32_t from) -> void {
    const std::size_t level = stack.size();
    for (auto c = from; c < pool_size; ++c) {
      rows_at[level].intersect_into(ctx.pool_rows(c), rows_at[level + 1]);
      stack.push_back(c);
      Candidate cand;
      cand.conds = stack;
      ctx.score(cand, rows_at[level + 1]);
      if (cand.valid) batch.push_back(std::move(cand));
      if (batch.size() >= 4096) {
        ctx.merge_results(results, batch);
        batch.clear();
      }
      if (level + 1 < cfg.depth) self(self, c + 1);
      stack.pop_back();
    }
  };
  visit(visit, 0);
  ctx.merge_results(results, batch);
  return ctx.to_results(results);
}

inline ResultList beam_search(const Dataset& ds, const PredictionMatrix& pm, const SearchConfig& cfg) {
  const auto ev = detail::make_evaluator(ds, pm, cfg);
  const auto scorer = [&ev](const RowSet& rows) { return ev.score(rows); };
  return beam_search_with(ds, scorer, cfg, ev.baseline());
}

inline ResultList exhaustive_search(const Dataset& ds, const PredictionMatrix& pm, const SearchConfig& cfg) {
  const auto ev = detail::make_evaluator(ds, pm, cfg);
  const auto scorer = [&ev](const RowSet& rows) { return ev.score(rows); };
  return exhaustive_search_with(ds, scorer, cfg, ev.baseline());
}

}  // namespace controversy
