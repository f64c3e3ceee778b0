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

#include "btp/features.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "btp/error.hpp"
#include "btp/text.hpp"

namespace btp {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;
constexpr std::uint64_t kHashSeed = 0x6274706861736831ULL;  // "btphash1"

constexpr char kWordTag = 'w';
constexpr char kCharTag = 'c';
constexpr char kSeparator = '\x1f';

void check_range(const NgramRange& r, const char* what) {
  if (r.min < 1 || r.max < r.min)
    throw UsageError(std::string(what) + " n-gram range must satisfy 1 <= min <= max");
}

}  // namespace

void FeatureSpec::validate() const {
  check_range(word_ngrams, "word");
  check_range(char_ngrams, "character");
  if (hash_bits < 10 || hash_bits > 26) throw UsageError("hash_bits must lie in [10, 26]");
}

std::uint64_t stable_hash(std::string_view data) {
  std::uint64_t h = kFnvOffset ^ kHashSeed;
  for (unsigned char c : data) {
    h ^= c;
    h *= kFnvPrime;
  }
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 27;
  h *= 0x94d049bb133111ebULL;
  h ^= h >> 31;
  return h;
}

FeatureVector extract_features(std::string_view text, const FeatureSpec& spec) {
  const std::uint64_t mask = spec.dimension() - 1;
  std::map<std::uint32_t, double> counts;
  auto add = [&](const std::string& key) { counts[static_cast<std::uint32_t>(stable_hash(key) & mask)] += 1.0; };

  const auto tokens = tokenize(text);
  const int ntok = static_cast<int>(tokens.size());
  for (int n = spec.word_ngrams.min; n <= spec.word_ngrams.max; ++n) {
    for (int i = 0; i + n <= ntok; ++i) {
      std::string key(1, kWordTag);
      for (int j = i; j < i + n; ++j) {
        if (j > i) key += kSeparator;
        key += tokens[j];
      }
      add(key);
    }
  }
  for (const auto& token : tokens) {
    auto cps = code_points("<" + token + ">");
    const int len = static_cast<int>(cps.size());
    for (int n = spec.char_ngrams.min; n <= spec.char_ngrams.max; ++n) {
      for (int i = 0; i + n <= len; ++i) {
        std::string key(1, kCharTag);
        for (int j = i; j < i + n; ++j) key += cps[j];
        add(key);
      }
    }
  }

  FeatureVector out;
  out.reserve(counts.size());
  for (const auto& [index, value] : counts) out.push_back({index, value});
  return out;
}

}  // namespace btp
