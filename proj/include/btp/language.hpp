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

#ifndef BTP_LANGUAGE_HPP
#define BTP_LANGUAGE_HPP

#include <compare>
#include <set>
#include <string>
#include <string_view>

namespace btp {

/// A language tag such as "en" or "zh". Construct through a
/// LanguageRegistry so that unknown codes are rejected early.
class LanguageCode {
 public:
  const std::string& str() const { return code_; }
  bool is_english() const { return code_ == "en"; }

  auto operator<=>(const LanguageCode&) const = default;

  static LanguageCode english() { return LanguageCode("en"); }

 private:
  friend class LanguageRegistry;
  explicit LanguageCode(std::string code) : code_(std::move(code)) {}

  std::string code_;
};

/// The set of language codes a run may use. English is always present.
class LanguageRegistry {
 public:
  /// en plus the six pivots de, es, fr, ja, ru, zh.
  static LanguageRegistry with_defaults();

  LanguageRegistry();

  /// Registers `code` (lowercase ASCII letters, digits, '-' or '_').
  void add(std::string_view code);
  bool contains(std::string_view code) const;
  LanguageCode parse(std::string_view code) const;
  const std::set<std::string>& codes() const { return codes_; }

 private:
  std::set<std::string> codes_;
};

}  // namespace btp

#endif  // BTP_LANGUAGE_HPP
