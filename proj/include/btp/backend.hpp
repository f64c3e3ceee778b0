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

#ifndef BTP_BACKEND_HPP
#define BTP_BACKEND_HPP

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "btp/language.hpp"

namespace btp {

// Every batch operation preserves length and order: output i belongs to
// input i. Implementations must be safe to call from several threads.

class TranslationBackend {
 public:
  virtual ~TranslationBackend() = default;

  virtual std::vector<std::string> translate_batch(std::span<const std::string> texts,
                                                   const LanguageCode& source,
                                                   const LanguageCode& target) const = 0;
  /// Short identity recorded in provenance, e.g. "identity" or a URL.
  virtual std::string describe() const = 0;
};

struct Classification {
  std::vector<std::string> labels;
  /// One row per text; each row sums to 1.
  std::vector<std::vector<double>> probabilities;
};

class ClassifierBackend {
 public:
  virtual ~ClassifierBackend() = default;

  virtual Classification classify_batch(std::span<const std::string> texts,
                                        std::string_view task) const = 0;
  virtual std::string describe() const = 0;
};

class AcceptabilityBackend {
 public:
  virtual ~AcceptabilityBackend() = default;

  /// Probability in [0, 1] that each text is grammatically acceptable.
  virtual std::vector<double> score_batch(std::span<const std::string> texts) const = 0;
  virtual std::string describe() const = 0;
};

// Contract checks shared by every backend consumer; throw BackendError.
void check_translation(const std::vector<std::string>& output, std::size_t expected);
void check_classification(const Classification& output, std::size_t expected);
void check_acceptability(const std::vector<double>& output, std::size_t expected);

/// Returns its input verbatim for any language pair.
std::shared_ptr<const TranslationBackend> identity_backend();

/// Token-level substitution table keyed by (source, target, token).
class Lexicon {
 public:
  void add(const LanguageCode& source, const LanguageCode& target, std::string from,
           std::string to);
  std::optional<std::string_view> lookup(const LanguageCode& source, const LanguageCode& target,
                                         std::string_view token) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Reads `source<TAB>target<TAB>from<TAB>to` lines ('#' starts a comment
  /// line). Language codes found in the file are added to `registry`.
  static Lexicon load(const std::filesystem::path& path, LanguageRegistry& registry);

 private:
  std::map<std::tuple<std::string, std::string, std::string>, std::string, std::less<>> entries_;
};

/// Whitespace-tokenizes, substitutes mapped tokens, and joins with single
/// spaces. Unmapped tokens pass through unchanged.
std::shared_ptr<const TranslationBackend> dictionary_backend(Lexicon lexicon);

/// Scores every text with the same probability.
std::shared_ptr<const AcceptabilityBackend> constant_acceptability(double probability);

/// Returns `scores[i]` for the i-th text of each call; a call with more
/// texts than scripted scores fails.
std::shared_ptr<const AcceptabilityBackend> scripted_acceptability(std::vector<double> scores);

/// One probability per line.
std::shared_ptr<const AcceptabilityBackend> load_scripted_acceptability(
    const std::filesystem::path& path);

}  // namespace btp

#endif  // BTP_BACKEND_HPP
