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

// controversy: mine regions of exceptional classifier (dis)agreement.
//
//   controversy mine --data d.csv --schema s.json --predictions p.csv --measure row
//   controversy baseline --data d.csv --schema s.json --predictions p.csv [--measure ccl ...]
//   controversy export-matrix --data d.csv --schema s.json --predictions p.csv --out m.ppm

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "controversy/controversy.hpp"

namespace {

using namespace controversy;

struct Inputs {
  std::string data;
  std::string schema;
  std::string predictions;
};

void add_input_flags(CLI::App& cmd, Inputs& in) {
  cmd.add_option("--data", in.data, "Dataset CSV")->required();
  cmd.add_option("--schema", in.schema, "Schema JSON assigning column roles")->required();
  cmd.add_option("--predictions", in.predictions, "Prediction CSV, one column per classifier")->required();
}

struct Loaded {
  Dataset ds;
  PredictionMatrix pm;
  std::vector<InputFingerprint> fingerprints;
};

Loaded load(const Inputs& in) {
  const auto schema_text = csv::read_file(in.schema, "schema");
  const auto data_text = csv::read_file(in.data, "data");
  const auto pred_text = csv::read_file(in.predictions, "predictions");
  const auto schema = Schema::parse(schema_text);
  auto ds = load_dataset(data_text, schema);
  auto pm = load_predictions(pred_text, ds);
  std::vector<InputFingerprint> fp{
      {"data", ds.cases(), ds.num_columns() + (ds.has_truth() ? 1 : 0), content_hash(data_text)},
      {"schema", schema.columns.size(), 2, content_hash(schema_text)},
      {"predictions", pm.rows(), pm.cols(), content_hash(pred_text)}};
  return {std::move(ds), std::move(pm), std::move(fp)};
}

std::optional<ClassCode> resolve_positive(const std::string& label, const PredictionMatrix& pm) {
  if (label.empty()) return std::nullopt;
  const auto code = pm.labels().find(label);
  if (!code) throw Error(ErrorKind::kConfig, "positive label '" + label + "' is not a class");
  return code;
}

Measure resolve_measure(const std::string& text) {
  const auto m = parse_measure(text);
  if (!m) throw Error(ErrorKind::kConfig, "unknown measure '" + text + "' (row|ccl|cac|cco|gt-yac|gt-yac2|rasl)");
  return *m;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write output file '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorKind::kIo, "failed writing output file '" + path + "'");
}

struct MineArgs {
  Inputs in;
  std::string measure = "row";
  std::string direction = "max";
  std::size_t beam_width = 25;
  std::size_t depth = 3;
  double min_support = 0.04;
  std::size_t bins = 7;
  std::string binning = "equal-width";
  std::size_t top = 10;
  std::string out;
  std::string format = "table";
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  std::string positive;
  bool ascii = false;
};

int run_mine(const MineArgs& a) {
  SearchConfig cfg;
  cfg.measure = resolve_measure(a.measure);
  if (a.direction == "max") cfg.direction = Direction::kMaximize;
  else if (a.direction == "min") cfg.direction = Direction::kMinimize;
  else throw Error(ErrorKind::kConfig, "direction must be max or min");
  if (a.binning == "equal-width") cfg.binning = Binning::kEqualWidth;
  else if (a.binning == "equal-frequency") cfg.binning = Binning::kEqualFrequency;
  else throw Error(ErrorKind::kConfig, "binning must be equal-width or equal-frequency");
  cfg.beam_width = a.beam_width;
  cfg.depth = a.depth;
  cfg.min_support = a.min_support;
  cfg.bins = a.bins;
  cfg.top_q = a.top;
  cfg.threads = a.threads;
  cfg.validate();

  auto loaded = load(a.in);
  cfg.positive = resolve_positive(a.positive, loaded.pm);

  const auto start = std::chrono::steady_clock::now();
  RunReport report{cfg, beam_search(loaded.ds, loaded.pm, cfg), 0.0, loaded.fingerprints};
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const auto style = a.ascii ? RenderStyle::kAscii : RenderStyle::kUnicode;
  const std::string table = render_table(report.results, loaded.ds, style);
  std::string formatted;
  if (a.format == "table") formatted = table;
  else if (a.format == "csv") formatted = render_csv(report.results, loaded.ds, style);
  else if (a.format == "json") formatted = render_json(report, loaded.ds, style);
  else throw Error(ErrorKind::kConfig, "format must be table, csv or json");

  if (a.out.empty()) {
    std::cout << formatted;
  } else {
    write_text(a.out, formatted);
    std::cout << table;
  }
  std::fprintf(stderr, "searched %zu x %zu dataset in %.3f s\n", loaded.ds.cases(), loaded.ds.num_columns(),
               report.seconds);
  return 0;
}

struct BaselineArgs {
  Inputs in;
  std::vector<std::string> measures;
  std::string positive;
  bool full_precision = false;
};

int run_baseline(const BaselineArgs& a) {
  const auto loaded = load(a.in);
  const auto positive = resolve_positive(a.positive, loaded.pm);
  std::vector<Measure> requested;
  for (const auto& m : a.measures) requested.push_back(resolve_measure(m));
  const bool all = requested.empty();
  if (all) requested.assign(std::begin(kAllMeasures), std::end(kAllMeasures));
  for (const auto m : requested) {
    try {
      const double v = measure_baseline(m, loaded.ds, loaded.pm, positive);
      std::cout << token(m) << "(DS)=" << (a.full_precision ? csv::format_exact(v) : csv::format_fixed(v, 3)) << '\n';
    } catch (const Error& e) {
      if (!all) throw;
      std::cout << token(m) << "(DS)=n/a (" << e.what() << ")\n";
    }
  }
  return 0;
}

struct ExportArgs {
  Inputs in;
  std::string description;
  std::string out = "matrix.ppm";
  std::string ordering;
};

int run_export(const ExportArgs& a) {
  const auto loaded = load(a.in);
  std::optional<RowSet> members;
  if (!a.description.empty()) members = evaluate(parse_description(a.description, loaded.ds), loaded.ds);
  const auto order = lexicographic_row_order(loaded.pm.entries());

  std::string ordering = a.ordering;
  if (ordering.empty()) ordering = std::filesystem::path(a.out).replace_extension(".csv").string();

  std::ostringstream img;
  write_ppm(img, loaded.pm, loaded.ds, order, members);
  write_text(a.out, img.str());
  std::ostringstream csv_out;
  write_ordering_csv(csv_out, loaded.pm, loaded.ds, order, members);
  write_text(ordering, csv_out.str());

  const auto layout = raster_layout(loaded.pm, loaded.ds, members.has_value());
  std::cout << "wrote " << a.out << " (" << layout.width << "x" << layout.height << ") and " << ordering;
  if (members) std::cout << "; " << members->count() << " highlighted rows";
  std::cout << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Find dataset regions where a set of classifiers is in exceptional (dis)agreement"};
  app.require_subcommand(1);

  MineArgs mine;
  auto* mine_cmd = app.add_subcommand("mine", "Beam search for controversial subgroups");
  add_input_flags(*mine_cmd, mine.in);
  mine_cmd->add_option("--measure", mine.measure, "row|ccl|cac|cco|gt-yac|gt-yac2|rasl")->capture_default_str();
  mine_cmd->add_option("--direction", mine.direction, "max|min")->capture_default_str();
  mine_cmd->add_option("--beam-width", mine.beam_width)->capture_default_str();
  mine_cmd->add_option("--depth", mine.depth)->capture_default_str();
  mine_cmd->add_option("--min-support", mine.min_support, "Fraction of cases")->capture_default_str();
  mine_cmd->add_option("--bins", mine.bins)->capture_default_str();
  mine_cmd->add_option("--binning", mine.binning, "equal-width|equal-frequency")->capture_default_str();
  mine_cmd->add_option("--top", mine.top)->capture_default_str();
  mine_cmd->add_option("--out", mine.out, "Write the report in --format to this path");
  mine_cmd->add_option("--format", mine.format, "table|csv|json")->capture_default_str();
  mine_cmd->add_option("--seed", mine.seed, "Reserved; the search is deterministic");
  mine_cmd->add_option("--threads", mine.threads, "Scoring threads, 0 = all cores")->capture_default_str();
  mine_cmd->add_option("--positive", mine.positive, "Positive class label for rasl");
  mine_cmd->add_flag("--ascii", mine.ascii, "Render descriptions with AND, !=, <=");

  BaselineArgs baseline;
  auto* base_cmd = app.add_subcommand("baseline", "Print measure(DS) for whole-dataset baselines");
  add_input_flags(*base_cmd, baseline.in);
  base_cmd->add_option("--measure", baseline.measures, "Measures to report (default: all)");
  base_cmd->add_option("--positive", baseline.positive, "Positive class label for rasl");
  base_cmd->add_flag("--full-precision", baseline.full_precision);

  ExportArgs exp;
  auto* exp_cmd = app.add_subcommand("export-matrix", "Write the row-ordered prediction matrix as PPM + CSV");
  add_input_flags(*exp_cmd, exp.in);
  exp_cmd->add_option("--description", exp.description, "Subgroup to highlight");
  exp_cmd->add_option("--out", exp.out, "Image path")->capture_default_str();
  exp_cmd->add_option("--ordering", exp.ordering, "Ordering CSV path (default: image path with .csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*mine_cmd) return run_mine(mine);
    if (*base_cmd) return run_baseline(baseline);
    if (*exp_cmd) return run_export(exp);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
