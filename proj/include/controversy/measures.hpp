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

// Controversy quality measures over a prediction matrix.
//
// All entropies are base-2 Shannon entropies of label tallies. The measures
// come in two flavours that must agree exactly:
//   * free functions (phi_row, phi_ccl, ...) that evaluate the definition
//     directly on a subgroup and also report the whole-dataset baseline;
//   * MeasureEvaluator, which precomputes per-row quantities and transformed
//     matrices once so the search can score many subgroups cheaply.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "controversy/core_data.hpp"
#include "controversy/error.hpp"
#include "controversy/row_set.hpp"

namespace controversy {

enum class Measure { kRow, kCcl, kCac, kCco, kGtYac, kGtYac2, kRasl };

inline constexpr Measure kAllMeasures[] = {Measure::kRow,   Measure::kCcl,    Measure::kCac, Measure::kCco,
                                           Measure::kGtYac, Measure::kGtYac2, Measure::kRasl};

[[nodiscard]] constexpr std::string_view token(Measure m) noexcept {
  switch (m) {
    case Measure::kRow: return "row";
    case Measure::kCcl: return "ccl";
    case Measure::kCac: return "cac";
    case Measure::kCco: return "cco";
    case Measure::kGtYac: return "gt-yac";
    case Measure::kGtYac2: return "gt-yac2";
    case Measure::kRasl: return "rasl";
  }
  return "?";
}

[[nodiscard]] inline std::optional<Measure> parse_measure(std::string_view text) {
  for (const auto m : kAllMeasures) {
    if (token(m) == text) return m;
  }
  return std::nullopt;
}

[[nodiscard]] constexpr bool needs_truth(Measure m) noexcept {
  return m == Measure::kCco || m == Measure::kGtYac || m == Measure::kGtYac2 || m == Measure::kRasl;
}

struct QualityValue {
  double value = 0.0;
  Measure measure = Measure::kRow;
  double baseline = 0.0;
};

// Per-class tally over one row, or over one column restricted to a subgroup.
struct CountVector {
  std::vector<std::size_t> counts;

  [[nodiscard]] std::size_t total() const noexcept {
    std::size_t t = 0;
    for (const auto c : counts) t += c;
    return t;
  }
};

namespace detail {

inline double entropy_unchecked(std::span<const std::size_t> counts, std::size_t total) {
  double h = 0.0;
  const double inv = 1.0 / static_cast<double>(total);
  for (const auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) * inv;
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace detail

inline double entropy(std::span<const std::size_t> counts) {
  std::size_t total = 0;
  for (const auto c : counts) total += c;
  if (total == 0) throw Error(ErrorKind::kUndefined, "entropy of an empty tally is undefined");
  return detail::entropy_unchecked(counts, total);
}

inline double entropy(const CountVector& cv) { return entropy(cv.counts); }

// ---------------------------------------------------------------------------
// Matrix transforms

enum class IndicatorKind { kAccordance, kCorrectness };

// 0/1 matrix with the shape of its source prediction matrix.
struct BinaryIndicatorMatrix {
  LabelMatrix bits;
  IndicatorKind kind = IndicatorKind::kAccordance;
};

// Most frequent class per row; ties go to the smallest class code.
inline std::vector<ClassCode> row_majority(const LabelMatrix& m) {
  std::vector<ClassCode> top(m.rows());
  std::vector<std::size_t> counts(m.num_classes());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::fill(counts.begin(), counts.end(), 0);
    for (const auto c : m.row(i)) ++counts[c];
    top[i] = static_cast<ClassCode>(std::max_element(counts.begin(), counts.end()) - counts.begin());
  }
  return top;
}

inline BinaryIndicatorMatrix accordance_matrix(const LabelMatrix& m) {
  const auto top = row_majority(m);
  std::vector<ClassCode> bits(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) bits[i * m.cols() + j] = m.at(i, j) == top[i] ? 1 : 0;
  }
  return {LabelMatrix(m.rows(), m.cols(), 2, std::move(bits)), IndicatorKind::kAccordance};
}

inline BinaryIndicatorMatrix accordance_matrix(const PredictionMatrix& pm) { return accordance_matrix(pm.entries()); }

namespace detail {

inline void require_truth(std::span<const ClassCode> truth, std::size_t rows) {
  if (truth.empty()) throw Error(ErrorKind::kMissingTruth, "measure requires a ground-truth column");
  if (truth.size() != rows) throw Error(ErrorKind::kDimension, "truth length does not match the prediction matrix");
}

}  // namespace detail

inline BinaryIndicatorMatrix correctness_matrix(const PredictionMatrix& pm, std::span<const ClassCode> truth) {
  const auto& m = pm.entries();
  detail::require_truth(truth, m.rows());
  std::vector<ClassCode> bits(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) bits[i * m.cols() + j] = m.at(i, j) == truth[i] ? 1 : 0;
  }
  return {LabelMatrix(m.rows(), m.cols(), 2, std::move(bits)), IndicatorKind::kCorrectness};
}

// Fraction of classifiers voting for the positive class, per row.
inline std::vector<double> ensemble_positive_prob(const PredictionMatrix& pm, ClassCode positive) {
  if (pm.labels().size() != 2) throw Error(ErrorKind::kBinaryOnly, "measure requires binary target");
  if (positive >= 2) throw Error(ErrorKind::kConfig, "positive class code out of range");
  const auto& m = pm.entries();
  std::vector<double> prob(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::size_t votes = 0;
    for (const auto c : m.row(i)) votes += c == positive;
    prob[i] = static_cast<double>(votes) / static_cast<double>(m.cols());
  }
  return prob;
}

// Positive class for rasl: the label "1" when present, else code 1.
inline ClassCode default_positive(const LabelDictionary& labels) {
  if (const auto c = labels.find("1")) return *c;
  return 1;
}

// ---------------------------------------------------------------------------
// Direct definitions

namespace detail {

// Entropy of one row's labels, plus `extra_count` copies of `extra` (used to
// append the ground truth once or n times).
inline double row_entropy(std::span<const ClassCode> row, std::size_t num_classes, std::vector<std::size_t>& scratch,
                          std::optional<ClassCode> extra = std::nullopt, std::size_t extra_count = 0) {
  scratch.assign(num_classes, 0);
  for (const auto c : row) ++scratch[c];
  std::size_t total = row.size();
  if (extra) {
    scratch[*extra] += extra_count;
    total += extra_count;
  }
  return entropy_unchecked(scratch, total);
}

inline void require_nonempty(const RowSet& sg) {
  if (sg.empty()) throw Error(ErrorKind::kUndefined, "measure is undefined on an empty subgroup");
}

inline double mean_row_entropy(const RowSet& sg, const LabelMatrix& m, std::span<const ClassCode> truth = {},
                               std::size_t truth_copies = 0) {
  std::vector<std::size_t> scratch;
  double sum = 0.0;
  sg.for_each([&](std::size_t i) {
    sum += truth_copies ? row_entropy(m.row(i), m.num_classes(), scratch, truth[i], truth_copies)
                        : row_entropy(m.row(i), m.num_classes(), scratch);
  });
  return sum / static_cast<double>(sg.count());
}

inline double mean_column_entropy(const RowSet& sg, const LabelMatrix& m) {
  std::vector<std::size_t> counts(m.num_classes());
  double sum = 0.0;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    std::fill(counts.begin(), counts.end(), 0);
    sg.for_each([&](std::size_t i) { ++counts[m.at(i, j)]; });
    sum += entropy_unchecked(counts, sg.count());
  }
  return sum / static_cast<double>(m.cols());
}

inline double consistency(const RowSet& sg, const LabelMatrix& m) {
  require_nonempty(sg);
  return mean_row_entropy(sg, m) - mean_column_entropy(sg, m);
}

// Average subranking loss, doubled so that half-credit ties stay integral.
struct RankingLoss {
  std::uint64_t doubled_loss = 0;
  std::size_t positives = 0;
  std::size_t negatives = 0;

  [[nodiscard]] std::optional<double> value() const {
    if (positives == 0 || negatives == 0) return std::nullopt;
    return static_cast<double>(doubled_loss) / (2.0 * static_cast<double>(positives));
  }
};

inline RankingLoss ranking_loss(const RowSet& sg, std::span<const double> prob, std::span<const ClassCode> truth,
                                ClassCode positive) {
  std::vector<double> neg;
  std::vector<double> pos;
  sg.for_each([&](std::size_t i) { (truth[i] == positive ? pos : neg).push_back(prob[i]); });
  std::sort(neg.begin(), neg.end());
  RankingLoss out;
  out.positives = pos.size();
  out.negatives = neg.size();
  for (const double p : pos) {
    const auto lo = std::lower_bound(neg.begin(), neg.end(), p);
    const auto hi = std::upper_bound(lo, neg.end(), p);
    out.doubled_loss += 2 * static_cast<std::uint64_t>(neg.end() - hi) + static_cast<std::uint64_t>(hi - lo);
  }
  return out;
}

}  // namespace detail

inline QualityValue phi_row(const RowSet& sg, const PredictionMatrix& pm) {
  detail::require_nonempty(sg);
  const auto& m = pm.entries();
  return {detail::mean_row_entropy(sg, m), Measure::kRow, detail::mean_row_entropy(RowSet::all(m.rows()), m)};
}

inline QualityValue phi_ccl(const RowSet& sg, const PredictionMatrix& pm) {
  const auto& m = pm.entries();
  return {detail::consistency(sg, m), Measure::kCcl, detail::consistency(RowSet::all(m.rows()), m)};
}

inline QualityValue phi_cac(const RowSet& sg, const PredictionMatrix& pm) {
  const auto acc = accordance_matrix(pm);
  return {detail::consistency(sg, acc.bits), Measure::kCac, detail::consistency(RowSet::all(acc.bits.rows()), acc.bits)};
}

inline QualityValue phi_cco(const RowSet& sg, const PredictionMatrix& pm, std::span<const ClassCode> truth) {
  const auto cor = correctness_matrix(pm, truth);
  return {detail::consistency(sg, cor.bits), Measure::kCco, detail::consistency(RowSet::all(cor.bits.rows()), cor.bits)};
}

inline QualityValue phi_gt_yac(const RowSet& sg, const PredictionMatrix& pm, std::span<const ClassCode> truth) {
  const auto& m = pm.entries();
  detail::require_truth(truth, m.rows());
  detail::require_nonempty(sg);
  return {detail::mean_row_entropy(sg, m, truth, 1), Measure::kGtYac,
          detail::mean_row_entropy(RowSet::all(m.rows()), m, truth, 1)};
}

inline QualityValue phi_gt_yac_prime(const RowSet& sg, const PredictionMatrix& pm, std::span<const ClassCode> truth) {
  const auto& m = pm.entries();
  detail::require_truth(truth, m.rows());
  detail::require_nonempty(sg);
  return {detail::mean_row_entropy(sg, m, truth, m.cols()), Measure::kGtYac2,
          detail::mean_row_entropy(RowSet::all(m.rows()), m, truth, m.cols())};
}

// Mean over positives in sg of (#negatives scored higher + 0.5 #negatives
// scored equal). Needs at least one positive and one negative in sg.
inline QualityValue phi_rasl(const RowSet& sg, std::span<const double> prob, std::span<const ClassCode> truth,
                             ClassCode positive) {
  detail::require_truth(truth, prob.size());
  const auto value = detail::ranking_loss(sg, prob, truth, positive).value();
  if (!value) throw Error(ErrorKind::kUndefined, "rasl needs both a positive and a negative case in the subgroup");
  const auto base = detail::ranking_loss(RowSet::all(prob.size()), prob, truth, positive).value();
  return {*value, Measure::kRasl, base.value_or(std::nan(""))};
}

// ---------------------------------------------------------------------------
// Precomputed evaluator

class MeasureEvaluator {
 public:
  // Throws kMissingTruth / kBinaryOnly when the measure cannot apply to this
  // input at all, and kConfig when it is undefined on the whole dataset.
  MeasureEvaluator(Measure measure, const PredictionMatrix& pm, std::span<const ClassCode> truth = {},
                   std::optional<ClassCode> positive = std::nullopt)
      : measure_(measure), rows_(pm.rows()), cols_(pm.cols()) {
    const auto& m = pm.entries();
    if (needs_truth(measure)) detail::require_truth(truth, m.rows());
    std::vector<std::size_t> scratch;
    switch (measure) {
      case Measure::kRow:
      case Measure::kGtYac:
      case Measure::kGtYac2: {
        const std::size_t copies = measure == Measure::kRow ? 0 : measure == Measure::kGtYac ? 1 : m.cols();
        row_value_.resize(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
          row_value_[i] = copies ? detail::row_entropy(m.row(i), m.num_classes(), scratch, truth[i], copies)
                                 : detail::row_entropy(m.row(i), m.num_classes(), scratch);
        }
        break;
      }
      case Measure::kCcl:
      case Measure::kCac:
      case Measure::kCco: {
        target_ = measure == Measure::kCcl   ? m
                  : measure == Measure::kCac ? accordance_matrix(m).bits
                                             : correctness_matrix(pm, truth).bits;
        row_value_.resize(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
          row_value_[i] = detail::row_entropy(target_.row(i), target_.num_classes(), scratch);
        }
        break;
      }
      case Measure::kRasl: {
        if (pm.labels().size() != 2) throw Error(ErrorKind::kBinaryOnly, "measure requires binary target");
        positive_ = positive.value_or(default_positive(pm.labels()));
        if (positive_ >= 2) throw Error(ErrorKind::kConfig, "positive class code out of range");
        votes_.resize(rows_);
        is_positive_.resize(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
          std::uint32_t v = 0;
          for (const auto c : m.row(i)) v += c == positive_;
          votes_[i] = v;
          is_positive_[i] = truth[i] == positive_;
        }
        break;
      }
    }
    const auto base = score(RowSet::all(rows_));
    if (!base) {
      throw Error(ErrorKind::kConfig,
                  "measure " + std::string(token(measure)) + " is undefined on the whole dataset");
    }
    baseline_ = *base;
  }

  [[nodiscard]] Measure measure() const noexcept { return measure_; }
  [[nodiscard]] double baseline() const noexcept { return baseline_; }
  [[nodiscard]] ClassCode positive() const noexcept { return positive_; }

  // Quality of sg, or nullopt where the measure is undefined on it.
  [[nodiscard]] std::optional<double> score(const RowSet& sg) const {
    if (sg.empty()) return std::nullopt;
    const double size = static_cast<double>(sg.count());
    switch (measure_) {
      case Measure::kRow:
      case Measure::kGtYac:
      case Measure::kGtYac2: {
        double sum = 0.0;
        sg.for_each([&](std::size_t i) { sum += row_value_[i]; });
        return sum / size;
      }
      case Measure::kCcl:
      case Measure::kCac:
      case Measure::kCco: {
        const std::size_t k = target_.num_classes();
        std::vector<std::size_t> counts(cols_ * k, 0);
        double sum = 0.0;
        sg.for_each([&](std::size_t i) {
          sum += row_value_[i];
          const auto row = target_.row(i);
          for (std::size_t j = 0; j < cols_; ++j) ++counts[j * k + row[j]];
        });
        double col_sum = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) {
          col_sum += detail::entropy_unchecked(std::span<const std::size_t>(counts.data() + j * k, k), sg.count());
        }
        return sum / size - col_sum / static_cast<double>(cols_);
      }
      case Measure::kRasl: {
        // Votes take values 0..n, so a histogram replaces sorting.
        std::vector<std::size_t> neg(cols_ + 1, 0);
        std::vector<std::size_t> pos(cols_ + 1, 0);
        sg.for_each([&](std::size_t i) { ++(is_positive_[i] ? pos : neg)[votes_[i]]; });
        detail::RankingLoss loss;
        std::size_t neg_above = 0;
        for (std::size_t v = cols_ + 1; v-- > 0;) {
          loss.doubled_loss += pos[v] * (2 * static_cast<std::uint64_t>(neg_above) + neg[v]);
          neg_above += neg[v];
          loss.positives += pos[v];
        }
        loss.negatives = neg_above;
        return loss.value();
      }
    }
    return std::nullopt;
  }

  [[nodiscard]] QualityValue quality(const RowSet& sg) const {
    const auto v = score(sg);
    if (!v) throw Error(ErrorKind::kUndefined, "measure " + std::string(token(measure_)) + " is undefined on this subgroup");
    return {*v, measure_, baseline_};
  }

 private:
  Measure measure_;
  std::size_t rows_;
  std::size_t cols_;
  double baseline_ = 0.0;
  std::vector<double> row_value_;
  LabelMatrix target_;
  ClassCode positive_ = 1;
  std::vector<std::uint32_t> votes_;
  std::vector<bool> is_positive_;
};

// Measure value on the whole dataset, as printed next to result tables.
inline double measure_baseline(Measure measure, const Dataset& ds, const PredictionMatrix& pm,
                               std::optional<ClassCode> positive = std::nullopt) {
  const auto truth = ds.has_truth() ? ds.truth() : std::span<const ClassCode>{};
  return MeasureEvaluator(measure, pm, truth, positive).baseline();
}

}  // namespace controversy
