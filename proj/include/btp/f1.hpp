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

#ifndef BTP_F1_HPP
#define BTP_F1_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace btp {

/// counts[true][predicted] over the sorted union of observed labels.
class ConfusionMatrix {
 public:
  /// Throws DataError when the lengths differ.
  static ConfusionMatrix from_labels(std::span<const std::string> truth,
                                     std::span<const std::string> predicted);

  const std::vector<std::string>& labels() const { return labels_; }
  std::uint64_t count(std::size_t truth, std::size_t predicted) const;
  std::uint64_t row_total(std::size_t truth) const;
  std::uint64_t column_total(std::size_t predicted) const;
  std::uint64_t total() const { return total_; }

 private:
  std::vector<std::string> labels_;
  std::vector<std::uint64_t> counts_;  // row-major
  std::uint64_t total_ = 0;
};

struct ClassScore {
  std::string label;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  /// Occurrences in the truth labels.
  std::uint64_t support = 0;
};

struct F1Report {
  /// Mean of per-class F1 over classes present in the truth, x 100.
  double macro_f1 = 0;
  /// Every label seen on either side, sorted.
  std::vector<ClassScore> per_class;
};

/// Macro-averaged F1 in [0, 100]. A class with P + R = 0 scores 0. Throws
/// DataError for mismatched lengths or empty input.
F1Report f1_score(std::span<const std::string> truth, std::span<const std::string> predicted);

}  // namespace btp

#endif  // BTP_F1_HPP
