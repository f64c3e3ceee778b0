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

#include "btp/fluency.hpp"

#include <algorithm>

#include "btp/error.hpp"

namespace btp {

void GarConfig::validate() const {
  if (!(threshold > 0.0 && threshold < 1.0)) throw UsageError("GAR threshold must lie strictly inside (0, 1)");
}

double gar(std::span<const std::string> texts, const AcceptabilityBackend& backend,
           const GarConfig& config) {
  config.validate();
  if (texts.empty()) throw DataError("GAR needs at least one text");
  std::vector<double> scores;
  try {
    scores = backend.score_batch(texts);
  } catch (const BackendError&) {
    throw;
  } catch (const Error& e) {
    throw BackendError(std::string("acceptability backend failed: ") + e.what());
  }
  check_acceptability(scores, texts.size());
  const auto accepted = std::count_if(scores.begin(), scores.end(),
                                      [&](double p) { return p >= config.threshold; });
  return 100.0 * static_cast<double>(accepted) / static_cast<double>(texts.size());
}

}  // namespace btp
