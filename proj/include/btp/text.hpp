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

#ifndef BTP_TEXT_HPP
#define BTP_TEXT_HPP

#include <string>
#include <string_view>
#include <vector>

namespace btp {

/// Lowercases `text` (Unicode simple case mapping). Invalid UTF-8 bytes are
/// replaced by U+FFFD.
std::string to_lower(std::string_view text);

/// Lowercases, splits on whitespace, and emits every Unicode punctuation
/// character (general category P*) as its own token.
///
///   "Thank you, daddy!"  ->  thank | you | , | daddy | !
std::vector<std::string> tokenize(std::string_view text);

/// UTF-8 code points of `text`, each as its own string.
std::vector<std::string> code_points(std::string_view text);

}  // namespace btp

#endif  // BTP_TEXT_HPP
