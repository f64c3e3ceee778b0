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

#ifndef BTP_BACK_TRANSLATION_HPP
#define BTP_BACK_TRANSLATION_HPP

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "btp/backend.hpp"
#include "btp/corpus.hpp"
#include "btp/language.hpp"

namespace btp {

/// Ordered pivot languages. A chain [L] is the round trip en→L→en; longer
/// chains return to English between hops: en→L1→en→L2→en.
class PivotChain {
 public:
  /// Throws UsageError for an empty chain or an English hop.
  explicit PivotChain(std::vector<LanguageCode> hops);

  /// Parses a comma-separated list such as "zh" or "zh,fr".
  static PivotChain parse(std::string_view spec, const LanguageRegistry& registry);

  const std::vector<LanguageCode>& hops() const { return hops_; }
  std::size_t steps() const { return 2 * hops_.size(); }
  std::string to_string() const;

  bool operator==(const PivotChain&) const = default;

 private:
  std::vector<LanguageCode> hops_;
};

struct TranslationStep {
  LanguageCode source;
  LanguageCode target;
  std::string text;
};

struct TransformResult {
  std::string id;
  std::string original;
  /// Final English text; equals `original` when `degenerate`.
  std::string transformed;
  PivotChain chain;
  /// One entry per translation performed, in order; the last one holds
  /// `transformed` unless the result is degenerate.
  std::vector<TranslationStep> steps;
  /// A step produced blank output for non-blank input; later steps were
  /// skipped for this text.
  bool degenerate = false;
};

/// Round-trips each text through the pivot chain, one batched backend call
/// per step. Results carry ids "0", "1", ... in input order. Backend
/// failures are rethrown as BackendError naming the failing step.
std::vector<TransformResult> back_translate(std::span<const std::string> texts,
                                            const PivotChain& pivot,
                                            const TranslationBackend& backend);

struct TransformedCorpus {
  Corpus corpus;
  std::vector<TransformResult> provenance;
};

/// Replaces every record's text with its back-translation; ids and labels
/// are untouched. Throws DataError listing the ids of degenerate results.
TransformedCorpus transform_corpus(const Corpus& corpus, const PivotChain& pivot,
                                   const TranslationBackend& backend);

/// JSONL sidecar: {"id":...,"chain":["zh"],"steps":[{"src":"en","tgt":"zh","text":...},...]}
void write_provenance(std::span<const TransformResult> results, std::ostream& out);
void write_provenance(std::span<const TransformResult> results, const std::filesystem::path& path);

}  // namespace btp

#endif  // BTP_BACK_TRANSLATION_HPP
