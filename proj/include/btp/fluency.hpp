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

#ifndef BTP_FLUENCY_HPP
#define BTP_FLUENCY_HPP

#include <span>
#include <string>

#include "btp/backend.hpp"

namespace btp {

struct GarConfig {
  /// A text counts as grammatical when its score is >= threshold.
  double threshold = 0.5;

  /// Throws UsageError unless 0 < threshold < 1.
  void validate() const;
};

/// Grammaticality acceptance rate: percentage of texts the acceptability
/// backend scores at or above the threshold, in [0, 100].
double gar(std::span<const std::string> texts, const AcceptabilityBackend& backend,
           const GarConfig& config = {});

}  // namespace btp

#endif  // BTP_FLUENCY_HPP
