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

#ifndef BTP_CORPUS_HPP
#define BTP_CORPUS_HPP

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace btp {

/// One utterance with its optional sensitive-attribute and utility labels.
/// Labels are opaque strings; the label sets are open (race, gender,
/// sentiment, dialog acts, ...).
struct TextRecord {
  std::string id;
  std::string text;
  std::optional<std::string> attribute;
  std::optional<std::string> utility;

  bool operator==(const TextRecord&) const = default;
};

enum class SplitRole { AttributeTrain, UtilityTrain, StyleTrain, Dev, Test };

std::string_view to_string(SplitRole role);
SplitRole parse_split_role(std::string_view name);

enum class CorpusFormat { Jsonl, Tsv };

std::string_view to_string(CorpusFormat format);
CorpusFormat parse_corpus_format(std::string_view name);
/// Picks TSV for `.tsv` files and JSONL for everything else.
CorpusFormat format_from_extension(const std::filesystem::path& path);

enum class LabelField { Attribute, Utility };

std::string_view to_string(LabelField field);
LabelField parse_label_field(std::string_view name);
const std::optional<std::string>& label_of(const TextRecord& record, LabelField field);

/// An ordered, validated list of records. Immutable after construction
/// through `load_corpus` / `make_corpus`.
struct Corpus {
  std::string name;
  std::optional<SplitRole> role;
  std::vector<TextRecord> records;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
  bool operator==(const Corpus&) const = default;
};

/// Checks every record invariant (non-empty unique ids, non-blank text,
/// non-empty labels) plus the test-role rule that both label kinds are
/// present. Throws DataError naming the first offending record.
void validate_corpus(const Corpus& corpus);

Corpus make_corpus(std::vector<TextRecord> records, std::string name = {},
                   std::optional<SplitRole> role = std::nullopt);

Corpus read_corpus(std::istream& in, CorpusFormat format, std::string name = {},
                   std::optional<SplitRole> role = std::nullopt);
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                   std::optional<SplitRole> role = std::nullopt);

void write_corpus(const Corpus& corpus, std::ostream& out, CorpusFormat format);
void write_corpus(const Corpus& corpus, const std::filesystem::path& path,
                  CorpusFormat format);

using RecordPair = std::pair<TextRecord, TextRecord>;

/// Pairs original and transformed records by id, in the order of
/// `original`. The transformed side inherits the original's labels.
std::vector<RecordPair> align_pairs(const Corpus& original, const Corpus& transformed);

/// Role → corpus file, one entry per split role of the evaluation protocol.
struct SplitManifest {
  std::map<SplitRole, std::filesystem::path> files;

  const std::filesystem::path& path_for(SplitRole role) const;
};

/// Reads a JSON object {"attribute-train": "...", "utility-train": "...",
/// "style-train": "...", "dev": "...", "test": "..."}. Relative paths are
/// resolved against the manifest's directory.
SplitManifest load_split_manifest(const std::filesystem::path& path);

/// Loads the corpus for `role`, enforcing role-specific invariants.
Corpus load_split(const SplitManifest& manifest, SplitRole role);

}  // namespace btp

#endif  // BTP_CORPUS_HPP
