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

#include "btp/f1.hpp"

#include <algorithm>
#include <set>

#include "btp/error.hpp"

namespace btp {

ConfusionMatrix ConfusionMatrix::from_labels(std::span<const std::string> truth,
                                             std::span<const std::string> predicted) {
  if (truth.size() != predicted.size()) {
    throw DataError("label length mismatch: " + std::to_string(truth.size()) + " true vs " +
                    std::to_string(predicted.size()) + " predicted");
  }
  std::set<std::string> vocab(truth.begin(), truth.end());
  vocab.insert(predicted.begin(), predicted.end());

  ConfusionMatrix m;
  m.labels_.assign(vocab.begin(), vocab.end());
  const std::size_t n = m.labels_.size();
  m.counts_.assign(n * n, 0);
  auto index = [&m](const std::string& label) {
    return static_cast<std::size_t>(std::lower_bound(m.labels_.begin(), m.labels_.end(), label) -
                                    m.labels_.begin());
  };
  for (std::size_t i = 0; i < truth.size(); ++i) ++m.counts_[index(truth[i]) * n + index(predicted[i])];
  m.total_ = truth.size();
  return m;
}

std::uint64_t ConfusionMatrix::count(std::size_t truth, std::size_t predicted) const {
  return counts_.at(truth * labels_.size() + predicted);
}

std::uint64_t ConfusionMatrix::row_total(std::size_t truth) const {
  std::uint64_t total = 0;
  for (std::size_t p = 0; p < labels_.size(); ++p) total += count(truth, p);
  return total;
}

std::uint64_t ConfusionMatrix::column_total(std::size_t predicted) const {
  std::uint64_t total = 0;
  for (std::size_t t = 0; t < labels_.size(); ++t) total += count(t, predicted);
  return total;
}

F1Report f1_score(std::span<const std::string> truth, std::span<const std::string> predicted) {
  auto m = ConfusionMatrix::from_labels(truth, predicted);
  if (m.total() == 0) throw DataError("F1 is undefined for an empty label list");

  F1Report report;
  double macro = 0.0;
  std::size_t present = 0;
  for (std::size_t c = 0; c < m.labels().size(); ++c) {
    ClassScore s;
    s.label = m.labels()[c];
    const auto tp = static_cast<double>(m.count(c, c));
    const auto predicted_c = static_cast<double>(m.column_total(c));
    s.support = m.row_total(c);
    s.precision = predicted_c > 0 ? tp / predicted_c : 0.0;
    s.recall = s.support > 0 ? tp / static_cast<double>(s.support) : 0.0;
    s.f1 = s.precision + s.recall > 0 ? 2 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
    if (s.support > 0) {
      macro += s.f1;
      ++present;
    }
    report.per_class.push_back(std::move(s));
  }
  report.macro_f1 = 100.0 * macro / static_cast<double>(present);
  return report;
}

}  // namespace btp
