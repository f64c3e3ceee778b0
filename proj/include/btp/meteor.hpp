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

#ifndef BTP_METEOR_HPP
#define BTP_METEOR_HPP

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "btp/text.hpp"

namespace btp {

enum class MatchStage { Exact, Stem, Synonym };

std::string_view to_string(MatchStage stage);
MatchStage parse_match_stage(std::string_view name);

/// Synonym sets, one per line of whitespace-separated lowercase lemmas.
class SynonymLexicon {
 public:
  static SynonymLexicon parse(std::istream& in);
  static SynonymLexicon load(const std::filesystem::path& path);

  void add_synset(std::vector<std::string> lemmas);
  /// True when some synset contains both words.
  bool synonyms(std::string_view a, std::string_view b) const;
  std::size_t synset_count() const { return synsets_; }

 private:
  std::map<std::string, std::vector<std::size_t>, std::less<>> membership_;
  std::size_t synsets_ = 0;
};

struct MeteorParams {
  double alpha = 0.9;
  double beta = 3.0;
  double gamma = 0.5;
  std::vector<MatchStage> stages{MatchStage::Exact, MatchStage::Stem};
  std::optional<std::filesystem::path> synonym_lexicon;
  std::size_t beam_width = 40;
  /// Stages with at most this many unmatched tokens on each side are
  /// searched exhaustively; larger ones use beam search.
  std::size_t exhaustive_limit = 8;

  /// Throws UsageError on out-of-range values or repeated stages.
  void validate() const;
};

struct AlignedPair {
  std::size_t hyp;
  std::size_t ref;
  MatchStage stage;

  bool operator==(const AlignedPair&) const = default;
};

struct Alignment {
  /// Sorted by hypothesis index.
  std::vector<AlignedPair> matches;
  std::size_t chunks = 0;

  std::size_t size() const { return matches.size(); }
};

enum class SearchMode { Auto, Exhaustive, Beam };

enum class CorpusAggregation {
  /// 100 x mean of sentence scores.
  MacroAverage,
  /// One score from match, length and chunk totals pooled over the corpus.
  Pooled,
};

/// Number of maximal runs of matches that are consecutive in both the
/// hypothesis and the reference.
std::size_t count_chunks(std::span<const AlignedPair> matches_by_hyp);

/// METEOR with staged unigram matching. Within each stage a maximum
/// cardinality matching over still-unmatched tokens is chosen; among those,
/// the one with the fewest chunks wins, then the smallest total
/// |hyp - ref| offset, then the lexicographically smallest assignment.
class MeteorScorer {
 public:
  explicit MeteorScorer(MeteorParams params = {});
  MeteorScorer(MeteorParams params, SynonymLexicon synonyms);

  Alignment align(std::span<const std::string> hyp, std::span<const std::string> ref,
                  SearchMode mode = SearchMode::Auto) const;

  /// Score in [0, 1]; 0 when nothing matches or either side is empty.
  double sentence(std::string_view hyp, std::string_view ref) const;
  double sentence_tokens(std::span<const std::string> hyp, std::span<const std::string> ref) const;

  /// Pairs are (original, transformed); the original is the reference.
  /// Returns a value in [0, 100]. Throws DataError for an empty list.
  double corpus(std::span<const std::pair<std::string, std::string>> pairs,
                CorpusAggregation aggregation = CorpusAggregation::MacroAverage) const;

  const MeteorParams& params() const { return params_; }

 private:
  MeteorParams params_;
  std::shared_ptr<const SynonymLexicon> synonyms_;
};

Alignment align(std::span<const std::string> hyp, std::span<const std::string> ref,
                const MeteorParams& params = {});
double meteor_sentence(std::string_view hyp, std::string_view ref, const MeteorParams& params = {});
double meteor_corpus(std::span<const std::pair<std::string, std::string>> pairs,
                     const MeteorParams& params = {},
                     CorpusAggregation aggregation = CorpusAggregation::MacroAverage);

}  // namespace btp

#endif  // BTP_METEOR_HPP
