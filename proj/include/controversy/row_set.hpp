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

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <vector>

namespace controversy {

// Membership bitmap over case indices [0, m) with a cached cardinality.
class RowSet {
 public:
  RowSet() = default;

  static RowSet none(std::size_t universe) {
    RowSet s;
    s.universe_ = universe;
    s.words_.assign((universe + 63) / 64, 0);
    return s;
  }

  static RowSet all(std::size_t universe) {
    RowSet s = none(universe);
    std::fill(s.words_.begin(), s.words_.end(), ~std::uint64_t{0});
    s.clear_tail();
    s.count_ = universe;
    return s;
  }

  template <typename Range>
  static RowSet of(std::size_t universe, const Range& members) {
    RowSet s = none(universe);
    for (const auto i : members) s.insert(static_cast<std::size_t>(i));
    return s;
  }

  // Builds a set from a predicate over indices.
  template <typename Pred>
  static RowSet where(std::size_t universe, Pred&& pred) {
    RowSet s = none(universe);
    for (std::size_t i = 0; i < universe; ++i) {
      if (pred(i)) s.words_[i >> 6] |= std::uint64_t{1} << (i & 63);
    }
    s.recount();
    return s;
  }

  void insert(std::size_t i) {
    auto& w = words_[i >> 6];
    const auto bit = std::uint64_t{1} << (i & 63);
    if (!(w & bit)) {
      w |= bit;
      ++count_;
    }
  }

  [[nodiscard]] bool contains(std::size_t i) const noexcept {
    return i < universe_ && (words_[i >> 6] >> (i & 63)) & 1u;
  }
  [[nodiscard]] std::size_t count() const noexcept { return count_; }
  [[nodiscard]] std::size_t universe() const noexcept { return universe_; }
  [[nodiscard]] bool empty() const noexcept { return count_ == 0; }

  [[nodiscard]] RowSet intersect(const RowSet& other) const {
    RowSet out;
    intersect_into(other, out);
    return out;
  }

  // Writes this ∩ other into out, reusing out's storage.
  void intersect_into(const RowSet& other, RowSet& out) const {
    out.universe_ = universe_;
    out.words_.resize(words_.size());
    std::size_t c = 0;
    for (std::size_t k = 0; k < words_.size(); ++k) {
      const auto w = words_[k] & other.words_[k];
      out.words_[k] = w;
      c += static_cast<std::size_t>(std::popcount(w));
    }
    out.count_ = c;
  }

  [[nodiscard]] bool is_subset_of(const RowSet& other) const noexcept {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      if (words_[k] & ~other.words_[k]) return false;
    }
    return true;
  }

  // Calls fn(i) for every member in increasing index order.
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      auto w = words_[k];
      while (w) {
        const auto bit = static_cast<std::size_t>(std::countr_zero(w));
        fn((k << 6) | bit);
        w &= w - 1;
      }
    }
  }

  [[nodiscard]] std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    out.reserve(count_);
    for_each([&](std::size_t i) { out.push_back(i); });
    return out;
  }

  friend bool operator==(const RowSet& a, const RowSet& b) noexcept {
    return a.universe_ == b.universe_ && a.words_ == b.words_;
  }

 private:
  void clear_tail() {
    if (const auto rem = universe_ & 63; rem != 0 && !words_.empty()) {
      words_.back() &= (std::uint64_t{1} << rem) - 1;
    }
  }
  void recount() {
    count_ = 0;
    for (const auto w : words_) count_ += static_cast<std::size_t>(std::popcount(w));
  }

  std::size_t universe_ = 0;
  std::size_t count_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace controversy
