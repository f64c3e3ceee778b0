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

#include "btp/language.hpp"

#include <algorithm>

#include "btp/error.hpp"

namespace btp {

LanguageRegistry::LanguageRegistry() { codes_.insert("en"); }

LanguageRegistry LanguageRegistry::with_defaults() {
  LanguageRegistry registry;
  for (auto code : {"de", "es", "fr", "ja", "ru", "zh"}) registry.add(code);
  return registry;
}

void LanguageRegistry::add(std::string_view code) {
  bool well_formed = !code.empty() && std::all_of(code.begin(), code.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
  });
  if (!well_formed) throw UsageError("malformed language code \"" + std::string(code) + "\"");
  codes_.emplace(code);
}

bool LanguageRegistry::contains(std::string_view code) const {
  return codes_.find(std::string(code)) != codes_.end();
}

LanguageCode LanguageRegistry::parse(std::string_view code) const {
  if (!contains(code)) throw UsageError("unknown language code \"" + std::string(code) + "\"");
  return LanguageCode(std::string(code));
}

}  // namespace btp
