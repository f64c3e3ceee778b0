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

#ifndef BTP_FEATURES_HPP
#define BTP_FEATURES_HPP

#include <cstdint>
#include <string_view>
#include <vector>

namespace btp {

struct NgramRange {
  int min = 1;
  int max = 1;

  bool operator==(const NgramRange&) const = default;
};

struct FeatureSpec {
  NgramRange word_ngrams{1, 2};
  /// Character n-grams are taken per token, padded as "<token>".
  NgramRange char_ngrams{3, 5};
  int hash_bits = 18;

  std::size_t dimension() const { return std::size_t{1} << hash_bits; }
  /// Throws UsageError unless 1 <= min <= max for both ranges and
  /// hash_bits lies in [10, 26].
  void validate() const;

  bool operator==(const FeatureSpec&) const = default;
};

struct SparseFeature {
  std::uint32_t index;
  double value;

  bool operator==(const SparseFeature&) const = default;
};

/// Hashed n-gram counts, sorted by index.
using FeatureVector = std::vector<SparseFeature>;

/// FNV-1a (64-bit) over `data`, started from a fixed seed and finished with
/// the splitmix64 mixer. Stable across platforms and runs.
std::uint64_t stable_hash(std::string_view data);

FeatureVector extract_features(std::string_view text, const FeatureSpec& spec);

}  // namespace btp

#endif  // BTP_FEATURES_HPP
