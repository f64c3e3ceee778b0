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

#ifndef BTP_REPORT_HPP
#define BTP_REPORT_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "btp/backend.hpp"
#include "btp/corpus.hpp"
#include "btp/f1.hpp"
#include "btp/fluency.hpp"
#include "btp/meteor.hpp"

namespace btp {

/// Everything needed to audit how a report was produced.
struct ReportProvenance {
  std::optional<std::string> pivot_chain;
  /// Role ("translation", "attribute", "utility", "acceptability") -> backend identity.
  std::map<std::string, std::string> backends;
  std::map<std::string, std::uint64_t> seeds;
  /// Canonical parameter strings, e.g. "meteor" -> "alpha=0.9;...".
  std::map<std::string, std::string> parameters;
  /// 64-bit hex digests of parameters and model files.
  std::map<std::string, std::string> hashes;

  bool operator==(const ReportProvenance&) const = default;
};

struct EvaluationReport {
  std::string method;
  double attr_f1 = 0;
  double util_f1 = 0;
  double meteor = 0;
  double gar = 0;
  double p_mean = 0;
  /// Untransformed reference row; excluded from best-value highlighting.
  bool original_row = false;
  std::size_t records = 0;
  std::string f1_averaging = "macro";
  std::string meteor_aggregation = "macro-average";
  std::vector<ClassScore> attr_per_class;
  std::vector<ClassScore> util_per_class;
  ReportProvenance provenance;
};

/// (100 - attr + util + meteor + gar) / 4. Throws DataError unless every
/// input lies in [0, 100].
double p_mean(double attr, double util, double meteor, double gar);

struct EvaluateOptions {
  std::string method;
  MeteorParams meteor;
  CorpusAggregation meteor_aggregation = CorpusAggregation::MacroAverage;
  GarConfig gar;
  /// Score the untransformed corpus against itself: METEOR is fixed at 100.
  bool original_row = false;
  /// Caller-known provenance (pivot chain, translation backend, seeds);
  /// evaluate adds the rest.
  ReportProvenance provenance;
};

/// Applies classifiers trained on original text to the transformed test set
/// and computes attribute F1, utility F1, METEOR (original as reference),
/// GAR and P_Mean. The original test set must carry both label kinds.
EvaluationReport evaluate(const Corpus& original_test, const Corpus& transformed_test,
                          const ClassifierBackend& attribute_classifier,
                          const ClassifierBackend& utility_classifier,
                          const AcceptabilityBackend& acceptability,
                          const EvaluateOptions& options);

enum class ReportFormat { Markdown, Csv, Json };

ReportFormat parse_report_format(std::string_view name);

/// Two decimals, rounding halves away from zero on the decimal value
/// (58.685 -> "58.69").
std::string format_fixed2(double value);

/// Tables with columns Method | Attr.F1 | Util.F1 | METEOR | GAR | P_Mean.
/// Markdown bolds the best value per column (lowest Attr.F1, highest
/// elsewhere) among non-original rows. Throws UsageError for an empty list.
std::string render(std::span<const EvaluationReport> reports, ReportFormat format);

/// Reads the CSV produced by render(): method and the five rounded scores.
/// Other fields are left at their defaults. Throws DataError.
std::vector<EvaluationReport> parse_csv_report(std::string_view csv);

std::string report_to_json(const EvaluationReport& report);
/// Throws DataError on malformed input or when p_mean does not recompute
/// from the four metrics.
EvaluationReport report_from_json(std::string_view json);

void save_report(const EvaluationReport& report, const std::filesystem::path& path);
EvaluationReport load_report(const std::filesystem::path& path);

/// 16 lowercase hex digits of stable_hash(data).
std::string hex_digest(std::string_view data);

}  // namespace btp

#endif  // BTP_REPORT_HPP
