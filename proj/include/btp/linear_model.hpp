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

#ifndef BTP_LINEAR_MODEL_HPP
#define BTP_LINEAR_MODEL_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "btp/backend.hpp"
#include "btp/corpus.hpp"
#include "btp/features.hpp"

namespace btp {

struct TrainOptions {
  std::uint64_t seed = 0;
  int epochs = 5;
  /// Step size at update t is learning_rate / sqrt(t).
  double learning_rate = 0.1;
  double l2 = 1e-6;
};

/// One-vs-rest logistic regression over hashed n-gram features. Weights are
/// the running average of the SGD iterates.
class LinearTextModel {
 public:
  LinearTextModel(FeatureSpec spec, std::vector<std::string> labels,
                  std::vector<std::vector<float>> weights, std::vector<float> biases,
                  std::uint64_t seed, int epochs);

  const FeatureSpec& spec() const { return spec_; }
  /// Sorted, one per weight vector.
  const std::vector<std::string>& labels() const { return labels_; }
  std::span<const float> weights(std::size_t label) const { return weights_.at(label); }
  float bias(std::size_t label) const { return biases_.at(label); }
  std::uint64_t seed() const { return seed_; }
  int epochs() const { return epochs_; }

  /// Raw per-label scores w·x + b.
  std::vector<double> scores(std::string_view text) const;

  /// Argmax labels and per-label sigmoid scores normalized to sum to 1.
  Classification predict(std::span<const std::string> texts) const;

  /// Binary container: "BTLM", u32 version, feature spec, seed, epochs,
  /// label vocabulary, then per label a f32 bias and 2^hash_bits f32
  /// weights. All integers and floats little-endian.
  void save(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;
  static LinearTextModel load(std::istream& in);
  static LinearTextModel load(const std::filesystem::path& path);

 private:
  FeatureSpec spec_;
  std::vector<std::string> labels_;
  std::vector<std::vector<float>> weights_;
  std::vector<float> biases_;
  std::uint64_t seed_;
  int epochs_;
};

/// Index of the largest score; the first one wins ties.
std::size_t argmax(std::span<const double> scores);

/// Trains on every record of `corpus`, which must all carry `field` and
/// span at least two labels. Deterministic in (corpus, spec, options).
LinearTextModel train(const Corpus& corpus, LabelField field, const FeatureSpec& spec,
                      const TrainOptions& options = {});

Classification predict(const LinearTextModel& model, std::span<const std::string> texts);

/// Exposes a trained model through the classifier capability. The task id
/// is recorded but not interpreted.
class LinearModelClassifier final : public ClassifierBackend {
 public:
  explicit LinearModelClassifier(std::shared_ptr<const LinearTextModel> model, std::string name = "linear");

  Classification classify_batch(std::span<const std::string> texts,
                                std::string_view task) const override;
  std::string describe() const override { return name_; }
  const LinearTextModel& model() const { return *model_; }

 private:
  std::shared_ptr<const LinearTextModel> model_;
  std::string name_;
};

}  // namespace btp

#endif  // BTP_LINEAR_MODEL_HPP
