/*
 * Copyright 2026 The btp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "btp/report.hpp"

#include <array>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "btp/error.hpp"
#include "btp/features.hpp"
#include "btp/linear_model.hpp"

namespace btp {

namespace {

using ojson = nlohmann::ordered_json;

constexpr double kPMeanTolerance = 1e-9;

std::string canonical_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string canonical_meteor(const MeteorParams& p, CorpusAggregation aggregation) {
  std::string s = "alpha=" + canonical_double(p.alpha) + ";beta=" + canonical_double(p.beta) +
                  ";gamma=" + canonical_double(p.gamma) + ";stages=";
  for (std::size_t i = 0; i < p.stages.size(); ++i) s += (i ? "," : "") + std::string(to_string(p.stages[i]));
  s += ";beam_width=" + std::to_string(p.beam_width);
  s += ";exhaustive_limit=" + std::to_string(p.exhaustive_limit);
  s += ";synonyms=" + (p.synonym_lexicon ? p.synonym_lexicon->string() : std::string("none"));
  s += ";aggregation=";
  s += aggregation == CorpusAggregation::MacroAverage ? "macro-average" : "pooled";
  return s;
}

void record_classifier(ReportProvenance& prov, const std::string& role, const ClassifierBackend& c) {
  prov.backends[role] = c.describe();
  if (const auto* linear = dynamic_cast<const LinearModelClassifier*>(&c)) {
    prov.seeds[role + "_model"] = linear->model().seed();
    std::ostringstream bytes;
    linear->model().save(bytes);
    prov.hashes[role + "_model"] = hex_digest(bytes.str());
  }
}

std::vector<std::string> classify_texts(const ClassifierBackend& c, std::span<const std::string> texts,
                                        std::string_view task) {
  Classification out;
  try {
    out = c.classify_batch(texts, task);
  } catch (const BackendError&) {
    throw;
  } catch (const Error& e) {
    throw BackendError(std::string(task) + " classifier failed: " + e.what());
  }
  check_classification(out, texts.size());
  return std::move(out.labels);
}

ojson class_scores_to_json(const std::vector<ClassScore>& scores) {
  auto arr = ojson::array();
  for (const auto& s : scores) {
    ojson o;
    o["label"] = s.label;
    o["precision"] = s.precision;
    o["recall"] = s.recall;
    o["f1"] = s.f1;
    o["support"] = s.support;
    arr.push_back(std::move(o));
  }
  return arr;
}

std::vector<ClassScore> class_scores_from_json(const ojson& arr) {
  std::vector<ClassScore> out;
  for (const auto& o : arr) {
    ClassScore s;
    s.label = o.at("label").get<std::string>();
    s.precision = o.at("precision").get<double>();
    s.recall = o.at("recall").get<double>();
    s.f1 = o.at("f1").get<double>();
    s.support = o.at("support").get<std::uint64_t>();
    out.push_back(std::move(s));
  }
  return out;
}

ojson report_json(const EvaluationReport& r) {
  ojson o;
  o["method"] = r.method;
  o["attr_f1"] = r.attr_f1;
  o["util_f1"] = r.util_f1;
  o["meteor"] = r.meteor;
  o["gar"] = r.gar;
  o["p_mean"] = r.p_mean;
  o["original_row"] = r.original_row;
  o["records"] = r.records;
  o["f1_averaging"] = r.f1_averaging;
  o["meteor_aggregation"] = r.meteor_aggregation;
  o["attr_per_class"] = class_scores_to_json(r.attr_per_class);
  o["util_per_class"] = class_scores_to_json(r.util_per_class);
  ojson prov;
  prov["pivot_chain"] = r.provenance.pivot_chain ? ojson(*r.provenance.pivot_chain) : ojson(nullptr);
  prov["backends"] = r.provenance.backends;
  prov["seeds"] = r.provenance.seeds;
  prov["parameters"] = r.provenance.parameters;
  prov["hashes"] = r.provenance.hashes;
  o["provenance"] = std::move(prov);
  return o;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string markdown_cell(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += (c == '\n' || c == '\r') ? ' ' : c;
  }
  return out;
}

}  // namespace

double p_mean(double attr, double util, double meteor, double gar) {
  const std::pair<const char*, double> inputs[] = {
      {"attribute F1", attr}, {"utility F1", util}, {"METEOR", meteor}, {"GAR", gar}};
  for (const auto& [name, v] : inputs) {
    if (!(v >= 0.0 && v <= 100.0))
      throw DataError(std::string(name) + " value " + canonical_double(v) + " outside [0, 100]");
  }
  return (100.0 - attr + util + meteor + gar) / 4.0;
}

std::string hex_digest(std::string_view data) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, stable_hash(data));
  return buf;
}

EvaluationReport evaluate(const Corpus& original_test, const Corpus& transformed_test,
                          const ClassifierBackend& attribute_classifier,
                          const ClassifierBackend& utility_classifier,
                          const AcceptabilityBackend& acceptability,
                          const EvaluateOptions& options) {
  options.gar.validate();
  MeteorScorer scorer(options.meteor);

  for (const auto& r : original_test.records) {
    if (!r.attribute || !r.utility)
      throw DataError("test record \"" + r.id + "\" must carry both attribute and utility labels");
  }
  const auto pairs = align_pairs(original_test, transformed_test);

  std::vector<std::string> texts, attr_truth, util_truth;
  std::vector<std::pair<std::string, std::string>> text_pairs;
  texts.reserve(pairs.size());
  for (const auto& [orig, trans] : pairs) {
    texts.push_back(trans.text);
    attr_truth.push_back(*orig.attribute);
    util_truth.push_back(*orig.utility);
    text_pairs.emplace_back(orig.text, trans.text);
  }

  EvaluationReport report;
  report.method = options.method;
  report.original_row = options.original_row;
  report.records = pairs.size();
  report.meteor_aggregation =
      options.meteor_aggregation == CorpusAggregation::MacroAverage ? "macro-average" : "pooled";

  auto attr = f1_score(attr_truth, classify_texts(attribute_classifier, texts, "attribute"));
  auto util = f1_score(util_truth, classify_texts(utility_classifier, texts, "utility"));
  report.attr_f1 = attr.macro_f1;
  report.util_f1 = util.macro_f1;
  report.attr_per_class = std::move(attr.per_class);
  report.util_per_class = std::move(util.per_class);
  report.meteor = options.original_row ? 100.0 : scorer.corpus(text_pairs, options.meteor_aggregation);
  report.gar = gar(texts, acceptability, options.gar);
  report.p_mean = p_mean(report.attr_f1, report.util_f1, report.meteor, report.gar);

  auto& prov = report.provenance;
  prov = options.provenance;
  record_classifier(prov, "attribute", attribute_classifier);
  record_classifier(prov, "utility", utility_classifier);
  prov.backends["acceptability"] = acceptability.describe();
  prov.parameters["meteor"] = canonical_meteor(options.meteor, options.meteor_aggregation);
  prov.parameters["gar_threshold"] = canonical_double(options.gar.threshold);
  prov.hashes["meteor"] = hex_digest(prov.parameters["meteor"]);
  prov.hashes["gar"] = hex_digest(prov.parameters["gar_threshold"]);
  return report;
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "markdown" || name == "md") return ReportFormat::Markdown;
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  throw UsageError("unknown report format \"" + std::string(name) + "\"");
}

std::string format_fixed2(double value) {
  if (!std::isfinite(value)) throw DataError("cannot format non-finite value");
  // Round on the 9-digit decimal expansion so that values such as 58.685
  // (stored as 58.68499999...) round the way they read.
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", std::fabs(value));
  std::string s = buf;
  auto dot = s.find('.');
  std::int64_t nanos = std::stoll(s.substr(0, dot)) * 1'000'000'000 + std::stoll(s.substr(dot + 1));
  std::int64_t cents = (nanos + 5'000'000) / 10'000'000;
  std::snprintf(buf, sizeof buf, "%s%" PRId64 ".%02" PRId64, (value < 0 && cents != 0) ? "-" : "",
                cents / 100, cents % 100);
  return buf;
}

std::string render(std::span<const EvaluationReport> reports, ReportFormat format) {
  if (reports.empty()) throw UsageError("nothing to render: no reports given");

  if (format == ReportFormat::Json) {
    auto arr = ojson::array();
    for (const auto& r : reports) arr.push_back(report_json(r));
    return arr.dump(2) + "\n";
  }

  auto columns = [](const EvaluationReport& r) {
    return std::array<double, 5>{r.attr_f1, r.util_f1, r.meteor, r.gar, r.p_mean};
  };

  std::ostringstream out;
  if (format == ReportFormat::Csv) {
    out << "method,attr_f1,util_f1,meteor,gar,p_mean\n";
    for (const auto& r : reports) {
      out << csv_field(r.method);
      for (double v : columns(r)) out << ',' << format_fixed2(v);
      out << '\n';
    }
    return out.str();
  }

  // Best displayed value per column among transformation rows; Attr.F1 is
  // better when lower.
  std::array<std::optional<std::string>, 5> best;
  std::array<double, 5> best_value{};
  for (const auto& r : reports) {
    if (r.original_row) continue;
    auto values = columns(r);
    for (std::size_t c = 0; c < 5; ++c) {
      double rounded = std::stod(format_fixed2(values[c]));
      bool wins = !best[c] || (c == 0 ? rounded < best_value[c] : rounded > best_value[c]);
      if (wins) {
        best[c] = format_fixed2(values[c]);
        best_value[c] = rounded;
      }
    }
  }

  out << "| Method | Attr.F1↓ | Util.F1↑ | METEOR↑ | GAR↑ | P_Mean↑ |\n";
  out << "|---|---:|---:|---:|---:|---:|\n";
  for (const auto& r : reports) {
    out << "| " << markdown_cell(r.method);
    auto values = columns(r);
    for (std::size_t c = 0; c < 5; ++c) {
      auto cell = format_fixed2(values[c]);
      if (!r.original_row && best[c] && cell == *best[c]) cell = "**" + cell + "**";
      out << " | " << cell;
    }
    out << " |\n";
  }
  return out.str();
}

std::vector<EvaluationReport> parse_csv_report(std::string_view csv) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, was_quoted = false;
  for (std::size_t i = 0; i < csv.size(); ++i) {
    const char c = csv[i];
    if (quoted) {
      if (c != '"') {
        field += c;
      } else if (i + 1 < csv.size() && csv[i + 1] == '"') {
        field += '"';
        ++i;
      } else {
        quoted = false;
      }
    } else if (c == '"' && field.empty() && !was_quoted) {
      quoted = was_quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < csv.size() && csv[i + 1] == '\n') ++i;
      row.push_back(std::move(field));
      rows.push_back(std::move(row));
      field.clear();
      row.clear();
      was_quoted = false;
    } else {
      field += c;
    }
  }
  if (quoted) throw DataError("CSV report ends inside a quoted field");
  if (!field.empty() || !row.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }

  static const std::vector<std::string> header{"method", "attr_f1", "util_f1", "meteor", "gar", "p_mean"};
  if (rows.empty() || rows.front() != header) throw DataError("CSV report header must be " + [] {
    std::string h;
    for (const auto& c : header) h += (h.empty() ? "" : ",") + c;
    return h;
  }());
  std::vector<EvaluationReport> reports;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& cells = rows[r];
    if (cells.size() != header.size())
      throw DataError("CSV report line " + std::to_string(r + 1) + " has " + std::to_string(cells.size()) + " fields");
    EvaluationReport report;
    report.method = cells[0];
    double* targets[] = {&report.attr_f1, &report.util_f1, &report.meteor, &report.gar, &report.p_mean};
    for (std::size_t c = 1; c < cells.size(); ++c) {
      std::size_t used = 0;
      try {
        *targets[c - 1] = std::stod(cells[c], &used);
      } catch (const std::exception&) {
        used = std::string::npos;
      }
      if (used != cells[c].size())
        throw DataError("CSV report line " + std::to_string(r + 1) + ": bad " + header[c] + " \"" + cells[c] + "\"");
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

std::string report_to_json(const EvaluationReport& report) { return report_json(report).dump(2) + "\n"; }

EvaluationReport report_from_json(std::string_view text) {
  EvaluationReport r;
  try {
    auto o = ojson::parse(text);
    r.method = o.at("method").get<std::string>();
    r.attr_f1 = o.at("attr_f1").get<double>();
    r.util_f1 = o.at("util_f1").get<double>();
    r.meteor = o.at("meteor").get<double>();
    r.gar = o.at("gar").get<double>();
    r.p_mean = o.at("p_mean").get<double>();
    r.original_row = o.value("original_row", false);
    r.records = o.value("records", std::size_t{0});
    r.f1_averaging = o.value("f1_averaging", std::string("macro"));
    r.meteor_aggregation = o.value("meteor_aggregation", std::string("macro-average"));
    if (o.contains("attr_per_class")) r.attr_per_class = class_scores_from_json(o["attr_per_class"]);
    if (o.contains("util_per_class")) r.util_per_class = class_scores_from_json(o["util_per_class"]);
    if (o.contains("provenance")) {
      const auto& p = o["provenance"];
      if (p.contains("pivot_chain") && !p["pivot_chain"].is_null())
        r.provenance.pivot_chain = p["pivot_chain"].get<std::string>();
      if (p.contains("backends")) r.provenance.backends = p["backends"].get<std::map<std::string, std::string>>();
      if (p.contains("seeds")) r.provenance.seeds = p["seeds"].get<std::map<std::string, std::uint64_t>>();
      if (p.contains("parameters"))
        r.provenance.parameters = p["parameters"].get<std::map<std::string, std::string>>();
      if (p.contains("hashes")) r.provenance.hashes = p["hashes"].get<std::map<std::string, std::string>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  }
  double expected = p_mean(r.attr_f1, r.util_f1, r.meteor, r.gar);
  if (std::fabs(expected - r.p_mean) > kPMeanTolerance) {
    throw DataError("report \"" + r.method + "\" has p_mean " + canonical_double(r.p_mean) +
                    " but its metrics give " + canonical_double(expected));
  }
  return r;
}

void save_report(const EvaluationReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  out << report_to_json(report);
  out.flush();
  if (!out) throw DataError("write failure on " + path.string());
}

EvaluationReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open report " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return report_from_json(buffer.str());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace btp
