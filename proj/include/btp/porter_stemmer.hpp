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

#ifndef BTP_PORTER_STEMMER_HPP
#define BTP_PORTER_STEMMER_HPP

#include <string>
#include <string_view>

namespace btp {

/// Porter's suffix-stripping stemmer, original 1980 rule set (step 2 uses
/// ABLI -> ABLE and has no LOGI rule). Expects a lowercase word; words that
/// are not pure ASCII a-z, or shorter than three letters, come back
/// unchanged.
std::string porter_stem(std::string_view word);

}  // namespace btp

#endif  // BTP_PORTER_STEMMER_HPP
