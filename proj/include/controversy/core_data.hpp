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

// Columnar storage for descriptor attributes, the ground-truth label and the
// classifier prediction matrix. Everything here is immutable once loaded.

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "json.hpp"

#include "controversy/csv.hpp"
#include "controversy/error.hpp"

namespace controversy {

using ClassCode = std::uint32_t;

// Bidirectional text <-> code map. Codes are dense and assigned in order of
// first insertion.
class LabelDictionary {
 public:
  LabelDictionary() = default;
  explicit LabelDictionary(std::vector<std::string> labels) {
    for (auto& label : labels) intern(label);
  }

  ClassCode intern(const std::string& label) {
    auto [it, inserted] = index_.try_emplace(label, static_cast<ClassCode>(labels_.size()));
    if (inserted) labels_.push_back(label);
    return it->second;
  }

  [[nodiscard]] std::optional<ClassCode> find(const std::string& label) const {
    const auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  [[nodiscard]] const std::string& label(ClassCode code) const { return labels_.at(code); }
  [[nodiscard]] std::size_t size() const noexcept { return labels_.size(); }
  [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }

  friend bool operator==(const LabelDictionary& a, const LabelDictionary& b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, ClassCode> index_;
};

enum class AttributeKind { kNominal, kNumeric };

struct AttributeColumn {
  std::string name;
  AttributeKind kind = AttributeKind::kNumeric;
  std::vector<ClassCode> codes;  // nominal only
  LabelDictionary dictionary;    // nominal only
  std::vector<double> values;    // numeric only

  [[nodiscard]] std::size_t size() const noexcept {
    return kind == AttributeKind::kNominal ? codes.size() : values.size();
  }
  [[nodiscard]] bool nominal() const noexcept { return kind == AttributeKind::kNominal; }

  static AttributeColumn make_numeric(std::string name, std::vector<double> values) {
    AttributeColumn col;
    col.name = std::move(name);
    col.kind = AttributeKind::kNumeric;
    col.values = std::move(values);
    return col;
  }

  static AttributeColumn make_nominal(std::string name, const std::vector<std::string>& cells) {
    AttributeColumn col;
    col.name = std::move(name);
    col.kind = AttributeKind::kNominal;
    col.codes.reserve(cells.size());
    for (const auto& cell : cells) col.codes.push_back(col.dictionary.intern(cell));
    return col;
  }
};

// Dense m x n matrix of class codes, row-major.
class LabelMatrix {
 public:
  LabelMatrix() = default;
  LabelMatrix(std::size_t rows, std::size_t cols, std::size_t num_classes,
              std::vector<ClassCode> entries)
      : rows_(rows), cols_(cols), num_classes_(num_classes), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) {
      throw Error(ErrorKind::kDimension, "label matrix entry count does not match its shape");
    }
    for (const ClassCode c : entries_) {
      if (c >= num_classes_) throw Error(ErrorKind::kLabel, "label matrix entry outside class range");
    }
  }

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] std::size_t num_classes() const noexcept { return num_classes_; }
  [[nodiscard]] ClassCode at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  [[nodiscard]] std::span<const ClassCode> row(std::size_t i) const {
    return {entries_.data() + i * cols_, cols_};
  }
  [[nodiscard]] const std::vector<ClassCode>& entries() const noexcept { return entries_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t num_classes_ = 0;
  std::vector<ClassCode> entries_;
};

class Dataset {
 public:
  Dataset(std::size_t cases, std::vector<AttributeColumn> columns,
          std::optional<std::vector<ClassCode>> truth = std::nullopt, LabelDictionary labels = {},
          std::string target_name = "target")
      : cases_(cases),
        columns_(std::move(columns)),
        truth_(std::move(truth)),
        labels_(std::move(labels)),
        target_name_(std::move(target_name)) {
    if (cases_ == 0) throw Error(ErrorKind::kLoad, "dataset has zero cases");
    std::unordered_set<std::string> names;
    for (const auto& col : columns_) {
      if (col.size() != cases_) {
        throw Error(ErrorKind::kDimension, "column '" + col.name + "' has wrong length");
      }
      if (!names.insert(col.name).second) {
        throw Error(ErrorKind::kSchema, "duplicate column name '" + col.name + "'");
      }
    }
    if (truth_) {
      if (truth_->size() != cases_) throw Error(ErrorKind::kDimension, "truth column has wrong length");
      for (const ClassCode c : *truth_) {
        if (c >= labels_.size()) throw Error(ErrorKind::kLabel, "truth code outside label dictionary");
      }
      if (labels_.size() < 2) {
        throw Error(ErrorKind::kLabel, "target column must contain at least two classes");
      }
    }
  }

  [[nodiscard]] std::size_t cases() const noexcept { return cases_; }
  [[nodiscard]] std::size_t num_columns() const noexcept { return columns_.size(); }
  [[nodiscard]] const std::vector<AttributeColumn>& columns() const noexcept { return columns_; }
  [[nodiscard]] const AttributeColumn& column(std::size_t j) const { return columns_.at(j); }
  [[nodiscard]] std::optional<std::size_t> column_index(std::string_view name) const {
    for (std::size_t j = 0; j < columns_.size(); ++j) {
      if (columns_[j].name == name) return j;
    }
    return std::nullopt;
  }
  [[nodiscard]] bool has_truth() const noexcept { return truth_.has_value(); }
  [[nodiscard]] std::span<const ClassCode> truth() const {
    if (!truth_) throw Error(ErrorKind::kMissingTruth, "dataset has no ground-truth column");
    return *truth_;
  }
  [[nodiscard]] const LabelDictionary& labels() const noexcept { return labels_; }
  [[nodiscard]] const std::string& target_name() const noexcept { return target_name_; }

 private:
  std::size_t cases_;
  std::vector<AttributeColumn> columns_;
  std::optional<std::vector<ClassCode>> truth_;
  LabelDictionary labels_;
  std::string target_name_;
};

class PredictionMatrix {
 public:
  PredictionMatrix(LabelMatrix entries, std::vector<std::string> classifier_names, LabelDictionary labels)
      : entries_(std::move(entries)), names_(std::move(classifier_names)), labels_(std::move(labels)) {
    if (entries_.cols() < 2) throw Error(ErrorKind::kDimension, "prediction matrix needs at least two classifiers");
    if (names_.size() != entries_.cols()) {
      throw Error(ErrorKind::kDimension, "classifier name count does not match matrix width");
    }
    if (entries_.num_classes() != labels_.size()) {
      throw Error(ErrorKind::kLabel, "prediction matrix class count does not match its dictionary");
    }
  }

  [[nodiscard]] std::size_t rows() const noexcept { return entries_.rows(); }
  [[nodiscard]] std::size_t cols() const noexcept { return entries_.cols(); }
  [[nodiscard]] const LabelMatrix& entries() const noexcept { return entries_; }
  [[nodiscard]] const std::vector<std::string>& classifier_names() const noexcept { return names_; }
  [[nodiscard]] const LabelDictionary& labels() const noexcept { return labels_; }

 private:
  LabelMatrix entries_;
  std::vector<std::string> names_;
  LabelDictionary labels_;
};

// ---------------------------------------------------------------------------
// Schema

enum class ColumnRole { kNominal, kNumeric, kTarget, kIgnore };

struct SchemaColumn {
  std::string name;
  ColumnRole role = ColumnRole::kIgnore;
};

struct Schema {
  std::vector<SchemaColumn> columns;

  static Schema parse(std::string_view json_text) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kSchema, std::string("schema is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("columns") || !doc["columns"].is_array()) {
      throw Error(ErrorKind::kSchema, "schema must be an object with a \"columns\" array");
    }
    Schema schema;
    std::unordered_set<std::string> seen;
    bool has_target = false;
    for (const auto& entry : doc["columns"]) {
      if (!entry.is_object() || !entry.contains("name") || !entry["name"].is_string() ||
          !entry.contains("role") || !entry["role"].is_string()) {
        throw Error(ErrorKind::kSchema, "schema column needs string \"name\" and \"role\"");
      }
      SchemaColumn col;
      col.name = entry["name"].get<std::string>();
      const auto role = entry["role"].get<std::string>();
      if (role == "nominal") col.role = ColumnRole::kNominal;
      else if (role == "numeric") col.role = ColumnRole::kNumeric;
      else if (role == "target") col.role = ColumnRole::kTarget;
      else if (role == "ignore") col.role = ColumnRole::kIgnore;
      else throw Error(ErrorKind::kSchema, "unknown role '" + role + "' for column '" + col.name + "'");
      if (!seen.insert(col.name).second) {
        throw Error(ErrorKind::kSchema, "duplicate column name '" + col.name + "' in schema");
      }
      if (col.role == ColumnRole::kTarget) {
        if (has_target) throw Error(ErrorKind::kSchema, "schema declares more than one target column");
        has_target = true;
      }
      schema.columns.push_back(std::move(col));
    }
    return schema;
  }

  [[nodiscard]] std::string to_json() const {
    nlohmann::json cols = nlohmann::json::array();
    for (const auto& col : columns) {
      const char* role = col.role == ColumnRole::kNominal   ? "nominal"
                         : col.role == ColumnRole::kNumeric ? "numeric"
                         : col.role == ColumnRole::kTarget  ? "target"
                                                            : "ignore";
      cols.push_back({{"name", col.name}, {"role", role}});
    }
    return nlohmann::json{{"columns", cols}}.dump(2);
  }
};

// ---------------------------------------------------------------------------
// Loading

// Builds a Dataset from CSV text. Descriptor columns appear in schema order;
// CSV columns the schema does not mention are ignored.
inline Dataset load_dataset(std::string_view csv_text, const Schema& schema) {
  auto table = csv::to_table(csv::parse_records(csv_text), "dataset");

  std::unordered_map<std::string, std::size_t> header_index;
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    if (!header_index.emplace(table.header[j], j).second) {
      throw Error(ErrorKind::kSchema, "duplicate column name '" + table.header[j] + "' in dataset header");
    }
  }
  if (table.rows.empty()) throw Error(ErrorKind::kLoad, "dataset has zero cases");
  const std::size_t m = table.rows.size();

  std::vector<AttributeColumn> columns;
  std::optional<std::vector<ClassCode>> truth;
  LabelDictionary labels;
  std::string target_name = "target";

  for (const auto& entry : schema.columns) {
    if (entry.role == ColumnRole::kIgnore) continue;
    const auto it = header_index.find(entry.name);
    if (it == header_index.end()) {
      throw Error(ErrorKind::kSchema, std::string(entry.role == ColumnRole::kTarget ? "target" : "descriptor") +
                                          " column '" + entry.name + "' not present in dataset");
    }
    const std::size_t src = it->second;
    switch (entry.role) {
      case ColumnRole::kNumeric: {
        std::vector<double> values(m);
        for (std::size_t i = 0; i < m; ++i) {
          const auto v = csv::parse_real(table.rows[i][src]);
          if (!v) {
            throw Error(ErrorKind::kLoad, "cannot parse numeric value '" + table.rows[i][src] + "' at row " +
                                              std::to_string(i + 1) + ", column '" + entry.name + "'");
          }
          values[i] = *v;
        }
        columns.push_back(AttributeColumn::make_numeric(entry.name, std::move(values)));
        break;
      }
      case ColumnRole::kNominal: {
        std::vector<std::string> cells(m);
        for (std::size_t i = 0; i < m; ++i) cells[i] = table.rows[i][src];
        columns.push_back(AttributeColumn::make_nominal(entry.name, cells));
        break;
      }
      case ColumnRole::kTarget: {
        std::vector<ClassCode> codes(m);
        for (std::size_t i = 0; i < m; ++i) codes[i] = labels.intern(table.rows[i][src]);
        truth = std::move(codes);
        target_name = entry.name;
        break;
      }
      case ColumnRole::kIgnore:
        break;
    }
  }
  return Dataset(m, std::move(columns), std::move(truth), std::move(labels), std::move(target_name));
}

inline Dataset load_dataset_files(const std::string& data_path, const std::string& schema_path) {
  const auto schema = Schema::parse(csv::read_file(schema_path, "schema"));
  return load_dataset(csv::read_file(data_path, "data"), schema);
}

// Builds the prediction matrix. When the dataset carries a truth column its
// dictionary fixes the class set; otherwise labels are interned row by row,
// left to right.
inline PredictionMatrix load_predictions(std::string_view csv_text, const Dataset& ds) {
  auto table = csv::to_table(csv::parse_records(csv_text), "predictions");
  const std::size_t n = table.header.size();
  if (table.rows.size() != ds.cases()) {
    throw Error(ErrorKind::kDimension, "prediction file has " + std::to_string(table.rows.size()) +
                                           " rows but dataset has " + std::to_string(ds.cases()));
  }
  LabelDictionary labels = ds.labels();
  const bool fixed = ds.has_truth();
  std::vector<ClassCode> entries;
  entries.reserve(ds.cases() * n);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto& cell = table.rows[i][j];
      if (cell.empty()) {
        throw Error(ErrorKind::kLoad, "matrix must be full: empty prediction at row " + std::to_string(i + 1) +
                                          ", classifier '" + table.header[j] + "'");
      }
      if (fixed) {
        const auto code = labels.find(cell);
        if (!code) {
          throw Error(ErrorKind::kLabel, "prediction label '" + cell + "' at row " + std::to_string(i + 1) +
                                             " is not a class of the target column");
        }
        entries.push_back(*code);
      } else {
        entries.push_back(labels.intern(cell));
      }
    }
  }
  LabelMatrix matrix(ds.cases(), n, labels.size(), std::move(entries));
  return PredictionMatrix(std::move(matrix), std::move(table.header), std::move(labels));
}

inline PredictionMatrix load_predictions_file(const std::string& path, const Dataset& ds) {
  return load_predictions(csv::read_file(path, "predictions"), ds);
}

// ---------------------------------------------------------------------------
// Writing

inline Schema schema_of(const Dataset& ds) {
  Schema schema;
  for (const auto& col : ds.columns()) {
    schema.columns.push_back({col.name, col.nominal() ? ColumnRole::kNominal : ColumnRole::kNumeric});
  }
  if (ds.has_truth()) schema.columns.push_back({ds.target_name(), ColumnRole::kTarget});
  return schema;
}

inline void write_dataset_csv(const Dataset& ds, std::ostream& os) {
  csv::Record header;
  for (const auto& col : ds.columns()) header.push_back(col.name);
  if (ds.has_truth()) header.push_back(ds.target_name());
  csv::write_record(os, header);
  csv::Record rec;
  for (std::size_t i = 0; i < ds.cases(); ++i) {
    rec.clear();
    for (const auto& col : ds.columns()) {
      rec.push_back(col.nominal() ? col.dictionary.label(col.codes[i]) : csv::format_exact(col.values[i]));
    }
    if (ds.has_truth()) rec.push_back(ds.labels().label(ds.truth()[i]));
    csv::write_record(os, rec);
  }
}

inline void write_predictions_csv(const PredictionMatrix& pm, std::ostream& os) {
  csv::write_record(os, pm.classifier_names());
  csv::Record rec(pm.cols());
  for (std::size_t i = 0; i < pm.rows(); ++i) {
    for (std::size_t j = 0; j < pm.cols(); ++j) rec[j] = pm.labels().label(pm.entries().at(i, j));
    csv::write_record(os, rec);
  }
}

}  // namespace controversy
